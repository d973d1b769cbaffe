#include "mntd/community.hpp"

#include <ostream>
#include <stdexcept>
#include <string>

#include "format_util.hpp"

namespace mntd {

IndicatorSet indicator_matrices(const DecompositionState& state) {
    IndicatorSet indicators;
    indicators.B.reserve(state.R.size());
    for (const Eigen::MatrixXd& r : state.R) indicators.B.push_back(state.A * r);
    return indicators;
}

PartitionSequence assign_partition(const IndicatorSet& indicators,
                                   const PresenceMask& mask,
                                   const AssignOptions& options) {
    if (static_cast<int>(indicators.B.size()) != mask.slice_count())
        throw std::invalid_argument("indicator slice count does not match presence mask");
    if (!indicators.B.empty() && indicators.B.front().rows() != mask.node_count())
        throw std::invalid_argument("indicator node count does not match presence mask");

    PartitionSequence parts;
    parts.assignments.resize(indicators.B.size());
    for (std::size_t t = 0; t < indicators.B.size(); ++t) {
        const Eigen::MatrixXd& b = indicators.B[t];
        const int k = static_cast<int>(b.cols());
        for (int i = 0; i < mask.node_count(); ++i) {
            if (!mask(i, static_cast<int>(t))) continue;
            int best = 0;
            double best_value = b(i, 0);
            for (int j = 1; j < k; ++j)  // strict > keeps the lowest index on ties
                if (b(i, j) > best_value) {
                    best_value = b(i, j);
                    best = j;
                }
            if (best_value == 0.0 && k > 1) {
                if (!options.zero_row_to_community_zero)
                    throw std::runtime_error("node " + std::to_string(i) + " at slice " +
                                             std::to_string(t) +
                                             " has an all-zero indicator row");
                best = 0;
            }
            parts.assignments[t][i] = best;
        }
    }
    parts.labels_are_canonical = false;
    return parts;
}

PartitionSequence canonicalize(const PartitionSequence& parts) {
    PartitionSequence out;
    out.assignments.resize(parts.assignments.size());
    for (std::size_t t = 0; t < parts.assignments.size(); ++t) {
        std::map<int, int> relabel;
        for (const auto& [node, label] : parts.assignments[t]) {
            const auto [it, inserted] =
                relabel.try_emplace(label, static_cast<int>(relabel.size()));
            out.assignments[t][node] = it->second;
        }
    }
    out.labels_are_canonical = true;
    return out;
}

void save_memberships_csv(const IndicatorSet& indicators, const PresenceMask& mask,
                          const std::vector<std::string>& node_ids, std::ostream& out) {
    const int k = indicators.B.empty() ? 0 : static_cast<int>(indicators.B.front().cols());
    out << "t,node";
    for (int j = 0; j < k; ++j) out << ",c" << j;
    out << '\n';
    for (std::size_t t = 0; t < indicators.B.size(); ++t)
        for (int i = 0; i < mask.node_count(); ++i) {
            if (!mask(i, static_cast<int>(t))) continue;
            out << t << ',' << node_ids[i];
            for (int j = 0; j < k; ++j)
                out << ',' << detail::fmt_g17(indicators.B[t](i, j));
            out << '\n';
        }
}

}  // namespace mntd
