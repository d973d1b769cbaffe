#pragma once

#include <iosfwd>
#include <map>
#include <optional>
#include <utility>
#include <vector>

#include "mntd/slice_graph.hpp"

namespace mntd {

// Q = (1/2L) * sum_ij [w_ij - d_i d_j / 2L] * delta(c_i, c_j) over ordered
// pairs including i = j. An edgeless graph scores a defined 0 and sets the
// degeneracy flag.
double modularity(const SliceGraph& g, const Partition& partition,
                  bool* degenerate = nullptr);

// Contingency counts over the node intersection of two partitions.
struct ConfusionTable {
    std::vector<std::vector<long long>> counts;  // N_ij
    std::vector<long long> row_sums;             // N_i
    std::vector<long long> col_sums;             // N_j
    long long total = 0;                         // N
};

ConfusionTable build_confusion(const std::map<int, int>& truth,
                               const std::map<int, int>& detected);

// NMI with natural logs:
//   -2 * sum_ij N_ij log(N_ij N / (N_i N_j))
//   / (sum_i N_i log(N_i / N) + sum_j N_j log(N_j / N))
// computed over the node intersection. Two trivial one-community partitions
// score 1; exactly one trivial partition scores 0. Empty intersection is an
// error.
double nmi(const std::map<int, int>& truth, const std::map<int, int>& detected);

struct ScoreSeries {
    std::vector<std::pair<int, double>> per_slice;  // (t, value)
    double mean = 0.0;
    double std = 0.0;  // population std across slices
};

ScoreSeries score_series(const std::vector<std::pair<int, double>>& values);

// CSV `slice,modularity,nmi` plus summary rows `mean,...` and `std,...`; the
// nmi column is blank when no ground truth was scored.
void write_metrics_csv(const ScoreSeries& q, const ScoreSeries* nmi_series,
                       std::ostream& out);

// JSON mirror of the CSV fields.
void write_metrics_json(const ScoreSeries& q, const ScoreSeries* nmi_series,
                        std::ostream& out);

}  // namespace mntd
