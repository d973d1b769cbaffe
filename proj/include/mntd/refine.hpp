#pragma once

#include <cstdint>
#include <utility>
#include <vector>

#include "mntd/community.hpp"
#include "mntd/slice_graph.hpp"

namespace mntd {

struct RefineOptions {
    // Randomized sweep order; off by default (ascending node index).
    bool seeded_shuffle = false;
    std::uint64_t shuffle_seed = 0;
};

struct RefineResult {
    Partition partition;
    double modularity_before = 0.0;
    double modularity_after = 0.0;
    int phases_run = 0;  // local-move phases executed
};

// One Louvain local-move phase on the given partition: sweeps nodes in order,
// moves each to the strictly best positive-gain community among its current
// and neighboring ones (ties: keep current, else lowest label), and repeats
// sweeps until one makes no move. Returns the partition and whether any move
// occurred. sweep_order, when given, must be a permutation of 0..n-1.
std::pair<Partition, bool> local_move_phase(const SliceGraph& g, Partition partition,
                                            const std::vector<int>* sweep_order = nullptr);

// Quotient graph: one super node per community, inter-community weights summed,
// self-loop = intra-community weight counting both orientations (two_l is
// conserved). Super nodes are numbered by ascending original label. Returns the
// graph and the node -> super node map.
std::pair<SliceGraph, std::vector<int>> aggregate(const SliceGraph& g,
                                                  const Partition& partition);

// Seeded modularity maximization. Seed handling first re-clusters from
// singletons with moves confined to each node's seed community (a merged seed
// community splits along the data; adopted only on strict improvement, so a
// clean seed passes through literally). The first local-move phase then runs
// directly on that partition, and local-move + aggregate rounds alternate on
// successively aggregated graphs until a phase stops raising the full-graph
// modularity by > 1e-12. The seed is never discarded: if the result scores
// below the seed, the seed is returned.
RefineResult refine_partition(const SliceGraph& g, const Partition& initial,
                              const RefineOptions& options = {});

// refine_partition applied independently per slice on the present-node
// subgraph. Each slice's input partition must cover exactly the present nodes.
PartitionSequence refine_sequence(const AdjacencyTensor& tensor, const PresenceMask& mask,
                                  const PartitionSequence& parts,
                                  const RefineOptions& options = {}, int workers = 1);

}  // namespace mntd
