#include <doctest.h>

#include <numeric>
#include <stdexcept>
#include <vector>

#include "mntd/metrics.hpp"
#include "mntd/refine.hpp"
#include "mntd/rng.hpp"
#include "oracles.hpp"

using namespace mntd;

namespace {

Eigen::MatrixXd two_triangles() {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(6, 6);
    const int edges[6][2] = {{0, 1}, {0, 2}, {1, 2}, {3, 4}, {3, 5}, {4, 5}};
    for (const auto& e : edges) {
        w(e[0], e[1]) = 1.0;
        w(e[1], e[0]) = 1.0;
    }
    return w;
}

Eigen::MatrixXd triangles_with_bridge() {
    Eigen::MatrixXd w = two_triangles();
    w(2, 3) = 1.0;
    w(3, 2) = 1.0;
    return w;
}

Eigen::MatrixXd random_graph(int n, Rng& rng, double density = 0.4) {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
    for (int i = 0; i < n; ++i)
        for (int j = i + 1; j < n; ++j)
            if (rng.uniform(0.0, 1.0) < density) {
                const double weight = rng.uniform(0.5, 2.0);
                w(i, j) = weight;
                w(j, i) = weight;
            }
    return w;
}

Partition singletons(int n) {
    Partition p(n);
    std::iota(p.begin(), p.end(), 0);
    return p;
}

const Partition triangle_partition{0, 0, 0, 1, 1, 1};

}  // namespace

TEST_SUITE("refine") {

TEST_CASE("make_slice_graph fills degrees and total weight") {
    const auto g = make_slice_graph(triangles_with_bridge());
    CHECK(g.n == 6);
    CHECK(g.two_l == 14.0);
    CHECK(g.degree[2] == 3.0);
    CHECK(g.degree[0] == 2.0);
}

TEST_CASE("make_slice_graph rejects asymmetric and negative weights") {
    Eigen::MatrixXd bad = Eigen::MatrixXd::Zero(2, 2);
    bad(0, 1) = 1.0;
    CHECK_THROWS_AS(make_slice_graph(bad), std::invalid_argument);

    Eigen::MatrixXd negative = Eigen::MatrixXd::Zero(2, 2);
    negative(0, 1) = -1.0;
    negative(1, 0) = -1.0;
    CHECK_THROWS_AS(make_slice_graph(negative), std::invalid_argument);
}

TEST_CASE("local_move_phase leaves a local optimum alone") {
    const auto g = make_slice_graph(two_triangles());
    const auto [partition, improved] = local_move_phase(g, triangle_partition);
    CHECK_FALSE(improved);
    CHECK(partition == triangle_partition);
}

TEST_CASE("local_move_phase cannot break up one all-inclusive community") {
    // Every single-node defection from the all-in-one community has negative
    // gain, so the sweep truthfully reports no move; the split to Q = 0.5 is
    // refine_partition's job (see below).
    const auto g = make_slice_graph(two_triangles());
    const auto [partition, improved] = local_move_phase(g, Partition(6, 0));
    CHECK_FALSE(improved);
    CHECK(partition == Partition(6, 0));
}

TEST_CASE("local_move_phase on a single node makes no move") {
    Eigen::MatrixXd w = Eigen::MatrixXd::Zero(1, 1);
    const auto [partition, improved] = local_move_phase(make_slice_graph(w), {4});
    CHECK_FALSE(improved);
    CHECK(partition == Partition{4});
}

TEST_CASE("local_move_phase merges singleton triangles") {
    const auto g = make_slice_graph(two_triangles());
    const auto [partition, improved] = local_move_phase(g, singletons(6));
    CHECK(improved);
    CHECK(oracle::same_partition(partition, triangle_partition));
    CHECK(modularity(g, partition) == doctest::Approx(0.5).epsilon(1e-12));
}

TEST_CASE("local_move_phase accepts an explicit sweep order") {
    const auto g = make_slice_graph(two_triangles());
    const std::vector<int> order{5, 4, 3, 2, 1, 0};
    const auto [partition, improved] = local_move_phase(g, singletons(6), &order);
    CHECK(improved);
    CHECK(oracle::same_partition(partition, triangle_partition));
}

TEST_CASE("aggregate of the singleton partition is the graph itself") {
    const auto g = make_slice_graph(triangles_with_bridge());
    const auto [quotient, node_map] = aggregate(g, singletons(6));
    CHECK(quotient.adjacency == g.adjacency);
    CHECK(node_map == singletons(6));
}

TEST_CASE("aggregate folds triangles into self-looped super nodes") {
    const auto g = make_slice_graph(triangles_with_bridge());
    const auto [quotient, node_map] = aggregate(g, triangle_partition);
    REQUIRE(quotient.n == 2);
    CHECK(quotient.adjacency(0, 0) == 6.0);  // intra weight counts both orientations
    CHECK(quotient.adjacency(1, 1) == 6.0);
    CHECK(quotient.adjacency(0, 1) == 1.0);
    CHECK(quotient.two_l == 14.0);
    CHECK(node_map == Partition{0, 0, 0, 1, 1, 1});
}

TEST_CASE("aggregate numbers super nodes by ascending original label") {
    const auto g = make_slice_graph(two_triangles());
    const auto [quotient, node_map] = aggregate(g, Partition{9, 9, 9, 2, 2, 2});
    CHECK(node_map == Partition{1, 1, 1, 0, 0, 0});
}

TEST_CASE("quotient modularity under identity equals original modularity") {
    Rng rng(5);
    for (int trial = 0; trial < 20; ++trial) {
        const int n = 3 + static_cast<int>(rng.below(8));
        const auto w = random_graph(n, rng);
        if (w.sum() == 0.0) continue;
        const auto g = make_slice_graph(w);
        Partition partition(n);
        const int k = 1 + static_cast<int>(rng.below(3));
        for (int i = 0; i < n; ++i) partition[i] = static_cast<int>(rng.below(k));

        const auto [quotient, node_map] = aggregate(g, partition);
        CHECK(quotient.two_l == doctest::Approx(g.two_l).epsilon(1e-14));
        Partition identity(quotient.n);
        std::iota(identity.begin(), identity.end(), 0);
        CHECK(modularity(quotient, identity) ==
              doctest::Approx(modularity(g, partition)).epsilon(1e-12));
    }
}

TEST_CASE("refine_partition returns an optimal seed unchanged") {
    const auto g = make_slice_graph(two_triangles());
    const auto result = refine_partition(g, triangle_partition);
    CHECK(result.partition == triangle_partition);
    CHECK(result.modularity_before == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(result.modularity_after == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(result.phases_run == 1);  // a single no-move pass over the seed
}

TEST_CASE("refine_partition lifts singleton seeds to the bridge optimum") {
    const auto g = make_slice_graph(triangles_with_bridge());
    const auto result = refine_partition(g, singletons(6));
    CHECK(result.modularity_after == doctest::Approx(5.0 / 14.0).epsilon(1e-12));
    CHECK(oracle::same_partition(result.partition, triangle_partition));
    CHECK(result.modularity_before < result.modularity_after);
}

TEST_CASE("refine_partition splits a merged seed community") {
    // Node-level moves alone cannot break the all-in-one seed (no single
    // defection gains); the seed reform pass re-clusters inside the merged
    // community and finds the two triangles.
    const auto g = make_slice_graph(two_triangles());
    const auto result = refine_partition(g, Partition(6, 0));
    CHECK(result.modularity_before == doctest::Approx(0.0).epsilon(1e-12));
    CHECK(result.modularity_after == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(oracle::same_partition(result.partition, triangle_partition));
    CHECK(result.phases_run == 1);
}

TEST_CASE("refine_partition on an edgeless graph is a no-op") {
    const auto g = make_slice_graph(Eigen::MatrixXd::Zero(3, 3));
    const auto result = refine_partition(g, Partition{7, 8, 9});
    CHECK(result.partition == Partition{7, 8, 9});
    CHECK(result.modularity_after == 0.0);
    CHECK(result.phases_run == 0);
}

TEST_CASE("refinement never scores below the seed") {
    Rng rng(15);
    for (int trial = 0; trial < 50; ++trial) {
        const int n = 2 + static_cast<int>(rng.below(11));
        const auto w = random_graph(n, rng, 0.35);
        const auto g = make_slice_graph(w);
        Partition seed(n);
        for (int i = 0; i < n; ++i)
            seed[i] = static_cast<int>(rng.below(static_cast<std::uint64_t>(n)));
        const auto result = refine_partition(g, seed);
        CHECK(result.modularity_after >= result.modularity_before - 1e-12);
        CHECK(result.modularity_before ==
              doctest::Approx(modularity(g, seed)).epsilon(1e-12));
        CHECK(modularity(g, result.partition) ==
              doctest::Approx(result.modularity_after).epsilon(1e-12));
    }
}

TEST_CASE("refined Q never exceeds the exhaustive optimum on small graphs") {
    for (int n = 2; n <= 5; ++n) {
        const int pairs = n * (n - 1) / 2;
        for (int bits = 1; bits < (1 << pairs); ++bits) {
            Eigen::MatrixXd w = Eigen::MatrixXd::Zero(n, n);
            int bit = 0;
            for (int i = 0; i < n; ++i)
                for (int j = i + 1; j < n; ++j, ++bit)
                    if (bits & (1 << bit)) {
                        w(i, j) = 1.0;
                        w(j, i) = 1.0;
                    }
            if (!oracle::connected(w)) continue;
            const double q_opt = oracle::max_modularity(w);
            const auto result = refine_partition(make_slice_graph(w), singletons(n));
            CHECK(result.modularity_after <= q_opt + 1e-12);
        }
    }
}

TEST_CASE("refine_partition is deterministic, also under a seeded shuffle") {
    Rng rng(23);
    const auto w = random_graph(10, rng);
    const auto g = make_slice_graph(w);
    const auto seed = singletons(10);

    const auto first = refine_partition(g, seed);
    const auto second = refine_partition(g, seed);
    CHECK(first.partition == second.partition);
    CHECK(first.modularity_after == second.modularity_after);

    RefineOptions shuffled;
    shuffled.seeded_shuffle = true;
    shuffled.shuffle_seed = 99;
    const auto third = refine_partition(g, seed, shuffled);
    const auto fourth = refine_partition(g, seed, shuffled);
    CHECK(third.partition == fourth.partition);
    CHECK(third.modularity_after >= third.modularity_before - 1e-12);
}

TEST_CASE("refine_sequence with one slice reduces to refine_partition") {
    AdjacencyTensor tensor;
    tensor.slices.push_back(triangles_with_bridge());
    const auto mask = presence_mask(tensor);
    PartitionSequence parts;
    parts.assignments.resize(1);
    for (int i = 0; i < 6; ++i) parts.assignments[0][i] = i;

    const auto refined = refine_sequence(tensor, mask, parts);
    const auto direct = refine_partition(make_slice_graph(tensor.slices[0]), singletons(6));
    REQUIRE(refined.assignments[0].size() == 6);
    Partition flattened(6);
    for (const auto& [node, label] : refined.assignments[0]) flattened[node] = label;
    CHECK(flattened == direct.partition);
}

TEST_CASE("refine_sequence leaves all-empty slices unchanged") {
    AdjacencyTensor tensor;
    tensor.slices.assign(2, Eigen::MatrixXd::Zero(3, 3));
    const auto mask = presence_mask(tensor);
    PartitionSequence parts;
    parts.assignments.resize(2);
    const auto refined = refine_sequence(tensor, mask, parts);
    CHECK(refined.assignments == parts.assignments);
}

TEST_CASE("refine_sequence never lowers per-slice modularity") {
    Rng rng(31);
    AdjacencyTensor tensor;
    for (int t = 0; t < 3; ++t) tensor.slices.push_back(random_graph(8, rng));
    const auto mask = presence_mask(tensor);

    PartitionSequence parts;
    parts.assignments.resize(3);
    for (int t = 0; t < 3; ++t)
        for (int i = 0; i < 8; ++i)
            if (mask(i, t)) parts.assignments[t][i] = static_cast<int>(rng.below(3));

    const auto refined = refine_sequence(tensor, mask, parts);
    for (int t = 0; t < 3; ++t) {
        const auto [g, nodes] = present_subgraph(tensor, mask, t);
        Partition before(nodes.size());
        Partition after(nodes.size());
        for (std::size_t a = 0; a < nodes.size(); ++a) {
            before[a] = parts.assignments[t].at(nodes[a]);
            after[a] = refined.assignments[t].at(nodes[a]);
        }
        CHECK(modularity(g, after) >= modularity(g, before) - 1e-12);
    }
}

TEST_CASE("refine_sequence is identical across worker counts") {
    Rng rng(63);
    AdjacencyTensor tensor;
    for (int t = 0; t < 5; ++t) tensor.slices.push_back(random_graph(9, rng));
    const auto mask = presence_mask(tensor);

    PartitionSequence parts;
    parts.assignments.resize(5);
    for (int t = 0; t < 5; ++t)
        for (int i = 0; i < 9; ++i)
            if (mask(i, t)) parts.assignments[t][i] = static_cast<int>(rng.below(3));

    const auto serial = refine_sequence(tensor, mask, parts, {}, 1);
    const auto threaded = refine_sequence(tensor, mask, parts, {}, 4);
    CHECK(serial.assignments == threaded.assignments);
}

TEST_CASE("refine_sequence reports the failing slice") {
    AdjacencyTensor tensor;
    tensor.slices.push_back(two_triangles());
    const auto mask = presence_mask(tensor);
    PartitionSequence parts;
    parts.assignments.resize(1);
    parts.assignments[0][0] = 0;  // misses the other five present nodes
    CHECK_THROWS_WITH_AS(refine_sequence(tensor, mask, parts),
                         doctest::Contains("slice 0"), std::runtime_error);
}

}
