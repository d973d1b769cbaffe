#pragma once

#include <iosfwd>
#include <map>
#include <string>
#include <vector>

#include <Eigen/Dense>

#include "mntd/rescal.hpp"
#include "mntd/temporal_network.hpp"

namespace mntd {

// Soft per-slice membership matrices B_t = A * R_t.
struct IndicatorSet {
    std::vector<Eigen::MatrixXd> B;
};

struct PartitionSequence {
    // One map per slice: present node index -> community label. Only present
    // nodes appear.
    std::vector<std::map<int, int>> assignments;
    bool labels_are_canonical = false;
};

struct AssignOptions {
    // A present node whose indicator row is all zeros is an error unless this
    // opts into assigning it to community 0.
    bool zero_row_to_community_zero = false;
};

IndicatorSet indicator_matrices(const DecompositionState& state);

// Row-argmax per present node, ties to the lowest column index. Labels are the
// raw column indices, so the same label refers to the same latent community
// across slices.
PartitionSequence assign_partition(const IndicatorSet& indicators,
                                   const PresenceMask& mask,
                                   const AssignOptions& options = {});

// Relabels each slice to consecutive labels 0..k'-1 in order of first
// appearance over ascending node index.
PartitionSequence canonicalize(const PartitionSequence& parts);

// CSV `t,node,c0,...,c{k-1}` over present nodes.
void save_memberships_csv(const IndicatorSet& indicators, const PresenceMask& mask,
                          const std::vector<std::string>& node_ids, std::ostream& out);

}  // namespace mntd
