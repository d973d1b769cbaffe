#include "mntd/slice_graph.hpp"

#include <stdexcept>

namespace mntd {

SliceGraph make_slice_graph(Eigen::MatrixXd adjacency) {
    if (adjacency.rows() != adjacency.cols())
        throw std::invalid_argument("adjacency must be square");
    if (adjacency.size() > 0 && adjacency.minCoeff() < 0.0)
        throw std::invalid_argument("adjacency weights must be nonnegative");
    if (adjacency != adjacency.transpose())
        throw std::invalid_argument("adjacency must be symmetric");

    SliceGraph g;
    g.n = static_cast<int>(adjacency.rows());
    g.adjacency = std::move(adjacency);
    g.degree = g.adjacency.rowwise().sum();
    g.two_l = g.degree.sum();
    return g;
}

std::pair<SliceGraph, std::vector<int>> present_subgraph(const AdjacencyTensor& tensor,
                                                         const PresenceMask& mask,
                                                         int slice) {
    std::vector<int> nodes;
    for (int i = 0; i < mask.node_count(); ++i)
        if (mask(i, slice)) nodes.push_back(i);

    const int m = static_cast<int>(nodes.size());
    Eigen::MatrixXd sub(m, m);
    for (int a = 0; a < m; ++a)
        for (int b = 0; b < m; ++b) sub(a, b) = tensor.slices[slice](nodes[a], nodes[b]);
    return {make_slice_graph(std::move(sub)), std::move(nodes)};
}

}  // namespace mntd
