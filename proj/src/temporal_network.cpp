#include "mntd/temporal_network.hpp"

#include <cmath>
#include <fstream>
#include <istream>
#include <limits>
#include <ostream>
#include <sstream>
#include <stdexcept>

#include "format_util.hpp"

namespace mntd {

namespace {

constexpr long long max_slice_count = 1'000'000;

std::vector<std::string_view> split_tabs(std::string_view line) {
    std::vector<std::string_view> fields;
    std::size_t start = 0;
    while (true) {
        const std::size_t tab = line.find('\t', start);
        if (tab == std::string_view::npos) {
            fields.push_back(line.substr(start));
            return fields;
        }
        fields.push_back(line.substr(start, tab - start));
        start = tab + 1;
    }
}

[[noreturn]] void parse_fail(long long line_no, const std::string& what) {
    throw std::runtime_error("parse error at line " + std::to_string(line_no) + ": " + what);
}

}  // namespace

std::vector<EdgeEvent> load_edge_events(std::istream& in) {
    std::vector<EdgeEvent> events;
    std::string line;
    long long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 3 && fields.size() != 4)
            parse_fail(line_no, "expected 3 or 4 tab-separated fields, got " +
                                    std::to_string(fields.size()));
        EdgeEvent event;
        if (!detail::parse_double(fields[0], event.time) || !std::isfinite(event.time))
            parse_fail(line_no, "bad timestamp '" + std::string(fields[0]) + "'");
        if (event.time < 0) parse_fail(line_no, "negative timestamp");
        event.u = std::string(fields[1]);
        event.v = std::string(fields[2]);
        if (event.u.empty() || event.v.empty()) parse_fail(line_no, "empty node identifier");
        if (fields.size() == 4) {
            if (!detail::parse_double(fields[3], event.weight) || !std::isfinite(event.weight))
                parse_fail(line_no, "bad weight '" + std::string(fields[3]) + "'");
            if (event.weight < 0) parse_fail(line_no, "negative weight");
        }
        events.push_back(std::move(event));
    }
    return events;
}

std::vector<EdgeEvent> load_edge_events_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open event file: " + path);
    return load_edge_events(in);
}

TemporalNetwork slice_events(const std::vector<EdgeEvent>& events,
                             const SlicingSpec& spec, Weighting weighting) {
    if (events.empty())
        throw std::invalid_argument("no events: zero slices would result");
    if (spec.mode == SliceMode::window && !(spec.window > 0))
        throw std::invalid_argument("window must be positive in window mode");

    TemporalNetwork net;
    auto index_of = [&net](const std::string& id) {
        auto [it, inserted] = net.node_index.try_emplace(id, net.node_count());
        if (inserted) net.node_ids.push_back(id);
        return it->second;
    };

    std::vector<long long> slice_of(events.size());
    long long max_slice = 0;
    for (std::size_t e = 0; e < events.size(); ++e) {
        const EdgeEvent& event = events[e];
        long long slice = 0;
        if (spec.mode == SliceMode::prelabeled) {
            if (std::floor(event.time) != event.time)
                throw std::invalid_argument("pre-labeled mode needs integer slice labels, got " +
                                            detail::fmt_g17(event.time));
            slice = static_cast<long long>(event.time);
        } else {
            if (event.time < spec.origin)
                throw std::invalid_argument("timestamp " + detail::fmt_g17(event.time) +
                                            " precedes origin " + detail::fmt_g17(spec.origin));
            slice = static_cast<long long>(std::floor((event.time - spec.origin) / spec.window));
        }
        if (slice >= max_slice_count)
            throw std::invalid_argument("slice index " + std::to_string(slice) +
                                        " exceeds the supported slice count");
        slice_of[e] = slice;
        max_slice = std::max(max_slice, slice);
        // Self-loop endpoints still join the node universe.
        index_of(event.u);
        index_of(event.v);
    }

    net.slices.resize(static_cast<std::size_t>(max_slice) + 1);
    for (std::size_t e = 0; e < events.size(); ++e) {
        const EdgeEvent& event = events[e];
        if (event.u == event.v) continue;  // self-loops carry no adjacency
        int a = net.node_index.at(event.u);
        int b = net.node_index.at(event.v);
        if (a > b) std::swap(a, b);
        SliceEdges& edges = net.slices[static_cast<std::size_t>(slice_of[e])];
        if (weighting == Weighting::binary)
            edges[{a, b}] = 1.0;
        else
            edges[{a, b}] += event.weight;
    }
    return net;
}

AdjacencyTensor build_adjacency_tensor(const TemporalNetwork& net,
                                       std::size_t memory_budget_bytes) {
    const auto n = static_cast<std::size_t>(net.node_count());
    const auto t = static_cast<std::size_t>(net.slice_count());
    const double bytes = static_cast<double>(n) * n * t * sizeof(double);
    if (bytes > static_cast<double>(memory_budget_bytes))
        throw std::runtime_error("adjacency tensor needs " + detail::fmt_g17(bytes) +
                                 " bytes, over the budget of " +
                                 std::to_string(memory_budget_bytes));

    AdjacencyTensor tensor;
    tensor.slices.reserve(t);
    for (const SliceEdges& edges : net.slices) {
        Eigen::MatrixXd w = Eigen::MatrixXd::Zero(net.node_count(), net.node_count());
        for (const auto& [pair, weight] : edges) {
            w(pair.first, pair.second) = weight;
            w(pair.second, pair.first) = weight;
        }
        tensor.slices.push_back(std::move(w));
    }
    return tensor;
}

PresenceMask presence_mask(const AdjacencyTensor& tensor) {
    const int n = tensor.node_count();
    const int t = tensor.slice_count();
    PresenceMask mask(n, t);
    for (int slice = 0; slice < t; ++slice) {
        const Eigen::MatrixXd& w = tensor.slices[slice];
        for (int i = 0; i < n; ++i)
            mask.set(i, slice, w.row(i).maxCoeff() > 0.0);
    }
    return mask;
}

void save_events(const TemporalNetwork& net, std::ostream& out) {
    for (int t = 0; t < net.slice_count(); ++t)
        for (const auto& [pair, weight] : net.slices[t])
            out << t << '\t' << net.node_ids[pair.first] << '\t'
                << net.node_ids[pair.second] << '\t' << detail::fmt_g17(weight) << '\n';
}

TruthSequence load_ground_truth(std::istream& in) {
    TruthSequence truth;
    std::string line;
    long long line_no = 0;
    while (std::getline(in, line)) {
        ++line_no;
        if (!line.empty() && line.back() == '\r') line.pop_back();
        if (line.empty() || line.front() == '#') continue;
        const auto fields = split_tabs(line);
        if (fields.size() != 3)
            parse_fail(line_no, "expected 3 tab-separated fields");
        long long slice = 0;
        long long community = 0;
        if (!detail::parse_ll(fields[0], slice) || slice < 0)
            parse_fail(line_no, "bad slice id '" + std::string(fields[0]) + "'");
        if (slice >= max_slice_count)
            parse_fail(line_no, "slice id exceeds the supported slice count");
        if (fields[1].empty()) parse_fail(line_no, "empty node identifier");
        if (!detail::parse_ll(fields[2], community))
            parse_fail(line_no, "bad community label '" + std::string(fields[2]) + "'");
        if (truth.size() <= static_cast<std::size_t>(slice))
            truth.resize(static_cast<std::size_t>(slice) + 1);
        truth[static_cast<std::size_t>(slice)][std::string(fields[1])] =
            static_cast<int>(community);
    }
    return truth;
}

TruthSequence load_ground_truth_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::runtime_error("cannot open ground-truth file: " + path);
    return load_ground_truth(in);
}

void save_ground_truth(const TruthSequence& truth, std::ostream& out) {
    for (std::size_t t = 0; t < truth.size(); ++t)
        for (const auto& [node, community] : truth[t])
            out << t << '\t' << node << '\t' << community << '\n';
}

}  // namespace mntd
