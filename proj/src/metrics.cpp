#include "mntd/metrics.hpp"

#include <cmath>
#include <ostream>
#include <stdexcept>

#include "format_util.hpp"

namespace mntd {

double modularity(const SliceGraph& g, const Partition& partition, bool* degenerate) {
    if (static_cast<int>(partition.size()) != g.n)
        throw std::invalid_argument("partition does not cover all nodes");
    if (degenerate != nullptr) *degenerate = g.two_l <= 0.0;
    if (g.two_l <= 0.0) return 0.0;  // defined-zero for edgeless graphs

    std::map<int, int> dense_of_label;
    for (int label : partition) dense_of_label.emplace(label, 0);
    int next = 0;
    for (auto& [label, dense] : dense_of_label) dense = next++;

    std::vector<double> intra(next, 0.0);   // sum of w_ij over ordered pairs, i = j included
    std::vector<double> total(next, 0.0);   // sum of degrees
    for (int i = 0; i < g.n; ++i) {
        const int c = dense_of_label.at(partition[i]);
        total[c] += g.degree[i];
        for (int j = 0; j < g.n; ++j)
            if (partition[j] == partition[i]) intra[c] += g.adjacency(i, j);
    }

    double q = 0.0;
    for (int c = 0; c < next; ++c)
        q += intra[c] / g.two_l - (total[c] / g.two_l) * (total[c] / g.two_l);
    return q;
}

ConfusionTable build_confusion(const std::map<int, int>& truth,
                               const std::map<int, int>& detected) {
    std::map<int, int> row_of;  // truth label -> row
    std::map<int, int> col_of;  // detected label -> column
    for (const auto& [node, label] : truth)
        if (detected.count(node)) row_of.emplace(label, 0);
    for (const auto& [node, label] : detected)
        if (truth.count(node)) col_of.emplace(label, 0);
    int next = 0;
    for (auto& [label, row] : row_of) row = next++;
    next = 0;
    for (auto& [label, col] : col_of) col = next++;

    ConfusionTable table;
    table.counts.assign(row_of.size(), std::vector<long long>(col_of.size(), 0));
    table.row_sums.assign(row_of.size(), 0);
    table.col_sums.assign(col_of.size(), 0);
    for (const auto& [node, label] : truth) {
        const auto it = detected.find(node);
        if (it == detected.end()) continue;
        const int row = row_of.at(label);
        const int col = col_of.at(it->second);
        ++table.counts[row][col];
        ++table.row_sums[row];
        ++table.col_sums[col];
        ++table.total;
    }
    return table;
}

double nmi(const std::map<int, int>& truth, const std::map<int, int>& detected) {
    const ConfusionTable table = build_confusion(truth, detected);
    if (table.total == 0)
        throw std::invalid_argument("partitions share no nodes");

    const bool truth_trivial = table.row_sums.size() == 1;
    const bool detected_trivial = table.col_sums.size() == 1;
    if (truth_trivial && detected_trivial) return 1.0;  // identical trivial partitions
    if (truth_trivial || detected_trivial) return 0.0;  // numerator vanishes

    const double n = static_cast<double>(table.total);
    double numerator = 0.0;
    for (std::size_t i = 0; i < table.counts.size(); ++i)
        for (std::size_t j = 0; j < table.counts[i].size(); ++j) {
            const double nij = static_cast<double>(table.counts[i][j]);
            if (nij == 0.0) continue;  // 0 log 0 := 0
            numerator += nij * std::log(nij * n /
                                        (static_cast<double>(table.row_sums[i]) *
                                         static_cast<double>(table.col_sums[j])));
        }
    numerator *= -2.0;

    double denominator = 0.0;
    for (const long long ni : table.row_sums)
        denominator += static_cast<double>(ni) * std::log(static_cast<double>(ni) / n);
    for (const long long nj : table.col_sums)
        denominator += static_cast<double>(nj) * std::log(static_cast<double>(nj) / n);

    const double value = numerator / denominator;
    if (value <= 0.0) return 0.0;  // also normalizes -0.0
    if (value >= 1.0) return 1.0;
    return value;
}

ScoreSeries score_series(const std::vector<std::pair<int, double>>& values) {
    if (values.empty()) throw std::invalid_argument("empty score series");
    ScoreSeries series;
    series.per_slice = values;
    double sum = 0.0;
    for (const auto& [t, v] : values) sum += v;
    series.mean = sum / static_cast<double>(values.size());
    double var = 0.0;
    for (const auto& [t, v] : values) var += (v - series.mean) * (v - series.mean);
    series.std = std::sqrt(var / static_cast<double>(values.size()));
    return series;
}

namespace {

const double* nmi_at(const ScoreSeries* nmi_series, int slice) {
    if (nmi_series == nullptr) return nullptr;
    for (const auto& [t, v] : nmi_series->per_slice)
        if (t == slice) return &v;
    return nullptr;
}

}  // namespace

void write_metrics_csv(const ScoreSeries& q, const ScoreSeries* nmi_series,
                       std::ostream& out) {
    out << "slice,modularity,nmi\n";
    for (const auto& [t, v] : q.per_slice) {
        out << t << ',' << detail::fmt_g17(v) << ',';
        if (const double* score = nmi_at(nmi_series, t)) out << detail::fmt_g17(*score);
        out << '\n';
    }
    out << "mean," << detail::fmt_g17(q.mean) << ',';
    if (nmi_series != nullptr) out << detail::fmt_g17(nmi_series->mean);
    out << '\n';
    out << "std," << detail::fmt_g17(q.std) << ',';
    if (nmi_series != nullptr) out << detail::fmt_g17(nmi_series->std);
    out << '\n';
}

void write_metrics_json(const ScoreSeries& q, const ScoreSeries* nmi_series,
                        std::ostream& out) {
    out << "{\n  \"per_slice\": [\n";
    for (std::size_t idx = 0; idx < q.per_slice.size(); ++idx) {
        const auto& [t, v] = q.per_slice[idx];
        out << "    {\"slice\": " << t << ", \"modularity\": " << detail::fmt_g17(v)
            << ", \"nmi\": ";
        if (const double* score = nmi_at(nmi_series, t))
            out << detail::fmt_g17(*score);
        else
            out << "null";
        out << '}' << (idx + 1 < q.per_slice.size() ? "," : "") << '\n';
    }
    out << "  ],\n  \"summary\": {\n    \"modularity\": {\"mean\": "
        << detail::fmt_g17(q.mean) << ", \"std\": " << detail::fmt_g17(q.std) << "},\n"
        << "    \"nmi\": ";
    if (nmi_series != nullptr)
        out << "{\"mean\": " << detail::fmt_g17(nmi_series->mean)
            << ", \"std\": " << detail::fmt_g17(nmi_series->std) << "}";
    else
        out << "null";
    out << "\n  }\n}\n";
}

}  // namespace mntd
