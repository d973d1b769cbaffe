#pragma once

#include <utility>
#include <vector>

#include <Eigen/Dense>

#include "mntd/temporal_network.hpp"

namespace mntd {

// One slice as a weighted undirected graph. Self-loop weight is stored once at
// (i, i), counts once in the degree, and appears when a graph has been
// aggregated into super nodes.
struct SliceGraph {
    int n = 0;
    Eigen::MatrixXd adjacency;  // symmetric, nonnegative
    Eigen::VectorXd degree;     // degree[i] = sum_j adjacency(i, j)
    double two_l = 0.0;         // sum of all entries = sum of degrees
};

// Validates symmetry and nonnegativity, fills the derived fields.
SliceGraph make_slice_graph(Eigen::MatrixXd adjacency);

// Subgraph of slice t induced on present nodes, plus the original index of
// each subgraph node.
std::pair<SliceGraph, std::vector<int>> present_subgraph(const AdjacencyTensor& tensor,
                                                         const PresenceMask& mask,
                                                         int slice);

// Community label per node of a SliceGraph.
using Partition = std::vector<int>;

}  // namespace mntd
