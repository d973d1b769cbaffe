#include <doctest.h>

#include <map>
#include <sstream>
#include <stdexcept>

#include "mntd/community.hpp"

using namespace mntd;

namespace {

IndicatorSet single_slice(Eigen::MatrixXd b) {
    IndicatorSet ind;
    ind.B.push_back(std::move(b));
    return ind;
}

PresenceMask all_present(int nodes, int slices) {
    PresenceMask mask(nodes, slices);
    for (int t = 0; t < slices; ++t)
        for (int i = 0; i < nodes; ++i) mask.set(i, t, true);
    return mask;
}

}  // namespace

TEST_SUITE("community") {

TEST_CASE("indicator matrices are the per-slice products A * R_t") {
    DecompositionState state;
    state.A = Eigen::MatrixXd::Identity(3, 3);
    state.R.push_back(Eigen::MatrixXd::Identity(3, 3));
    state.R.push_back(2.0 * Eigen::MatrixXd::Identity(3, 3));
    const auto ind = indicator_matrices(state);
    REQUIRE(ind.B.size() == 2);
    CHECK(ind.B[0] == Eigen::MatrixXd::Identity(3, 3));
    CHECK(ind.B[1] == (2.0 * Eigen::MatrixXd::Identity(3, 3)).eval());
}

TEST_CASE("scalar continuation: a = 4, r = 0.25 gives B = [1]") {
    DecompositionState state;
    state.A = Eigen::MatrixXd::Constant(1, 1, 4.0);
    state.R.push_back(Eigen::MatrixXd::Constant(1, 1, 0.25));
    const auto ind = indicator_matrices(state);
    CHECK(ind.B[0](0, 0) == 1.0);
}

TEST_CASE("indicators of nonnegative factors are nonnegative") {
    DecompositionState state;
    state.A = Eigen::MatrixXd::Random(4, 2).cwiseAbs();
    state.R.push_back(Eigen::MatrixXd::Random(2, 2).cwiseAbs());
    const auto ind = indicator_matrices(state);
    CHECK(ind.B[0].minCoeff() >= 0.0);
}

TEST_CASE("argmax picks the largest column, ties to the lowest index") {
    Eigen::MatrixXd b(2, 3);
    b << 0.1, 0.7, 0.2,
         0.5, 0.5, 0.0;
    const auto parts = assign_partition(single_slice(b), all_present(2, 1));
    REQUIRE(parts.assignments.size() == 1);
    CHECK(parts.assignments[0].at(0) == 1);
    CHECK(parts.assignments[0].at(1) == 0);
    CHECK_FALSE(parts.labels_are_canonical);
}

TEST_CASE("absent nodes are omitted; coverage equals the present set") {
    Eigen::MatrixXd b(3, 2);
    b << 1.0, 0.0,
         0.0, 1.0,
         1.0, 2.0;
    PresenceMask mask(3, 1);
    mask.set(0, 0, true);
    mask.set(2, 0, true);
    const auto parts = assign_partition(single_slice(b), mask);
    CHECK(parts.assignments[0].size() == 2);
    CHECK(parts.assignments[0].count(1) == 0);
    CHECK(parts.assignments[0].at(0) == 0);
    CHECK(parts.assignments[0].at(2) == 1);
}

TEST_CASE("an all-zero row of a present node is an error by default") {
    Eigen::MatrixXd b = Eigen::MatrixXd::Zero(2, 2);
    b(0, 0) = 1.0;
    CHECK_THROWS_AS(assign_partition(single_slice(b), all_present(2, 1)),
                    std::runtime_error);

    AssignOptions fallback;
    fallback.zero_row_to_community_zero = true;
    const auto parts = assign_partition(single_slice(b), all_present(2, 1), fallback);
    CHECK(parts.assignments[0].at(1) == 0);
}

TEST_CASE("a zero row with k = 1 is not degenerate") {
    const auto parts =
        assign_partition(single_slice(Eigen::MatrixXd::Zero(2, 1)), all_present(2, 1));
    CHECK(parts.assignments[0].at(0) == 0);
    CHECK(parts.assignments[0].at(1) == 0);
}

TEST_CASE("assignment is invariant to positive rescaling of B") {
    Eigen::MatrixXd b(3, 3);
    b << 0.2, 0.9, 0.1,
         0.8, 0.3, 0.4,
         0.1, 0.2, 0.9;
    const auto base = assign_partition(single_slice(b), all_present(3, 1));
    const auto scaled = assign_partition(single_slice((17.5 * b).eval()), all_present(3, 1));
    CHECK(base.assignments == scaled.assignments);
}

TEST_CASE("labels stay raw column indices across slices") {
    Eigen::MatrixXd b0(2, 3);
    b0 << 0.0, 0.0, 1.0,
          1.0, 0.0, 0.0;
    Eigen::MatrixXd b1(2, 3);
    b1 << 0.0, 0.0, 2.0,
          0.0, 3.0, 0.0;
    IndicatorSet ind;
    ind.B = {b0, b1};
    const auto parts = assign_partition(ind, all_present(2, 2));
    CHECK(parts.assignments[0].at(0) == 2);
    CHECK(parts.assignments[1].at(0) == 2);
    CHECK(parts.assignments[0].at(1) == 0);
    CHECK(parts.assignments[1].at(1) == 1);
}

TEST_CASE("canonicalize relabels per slice by first appearance") {
    PartitionSequence parts;
    parts.assignments.resize(2);
    parts.assignments[0] = {{0, 7}, {1, 7}, {2, 3}};
    parts.assignments[1] = {{0, 3}, {2, 9}};
    const auto canon = canonicalize(parts);
    CHECK(canon.labels_are_canonical);
    CHECK(canon.assignments[0].at(0) == 0);
    CHECK(canon.assignments[0].at(1) == 0);
    CHECK(canon.assignments[0].at(2) == 1);
    CHECK(canon.assignments[1].at(0) == 0);
    CHECK(canon.assignments[1].at(2) == 1);
}

TEST_CASE("memberships CSV lists present rows with all column scores") {
    Eigen::MatrixXd b(2, 2);
    b << 1.0, 0.5,
         0.25, 2.0;
    PresenceMask mask(2, 1);
    mask.set(0, 0, true);
    std::ostringstream out;
    save_memberships_csv(single_slice(b), mask, {"a", "b"}, out);
    CHECK(out.str() == "t,node,c0,c1\n0,a,1,0.5\n");
}

}
