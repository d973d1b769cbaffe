#pragma once

#include <cstdint>
#include <iosfwd>
#include <vector>

#include <Eigen/Dense>

#include "mntd/temporal_network.hpp"

namespace mntd {

struct Hyperparams {
    int k = 0;                 // community / rank count
    double lambda_a = 0.2;
    double lambda_r = 0.07;
    int max_iters = 500;
    double tol = 1e-6;         // relative objective change threshold
    double epsilon = 1e-12;    // denominator guard
    std::uint64_t seed = 0;
};

struct DecompositionState {
    Eigen::MatrixXd A;               // n x k, nonnegative
    std::vector<Eigen::MatrixXd> R;  // per slice, k x k, nonnegative
    std::vector<double> objective_history;
    int iterations_run = 0;
    bool converged = false;
};

// Factors drawn i.i.d. from uniform(0.1, 1.0): strictly positive entries so
// multiplicative updates cannot zero-lock at initialization.
DecompositionState init_decomposition(int nodes, const Hyperparams& hyper, int slices);

// 0.5 * sum_t ||X_t - A R_t A^T||_F^2
//   + 0.5 * (lambda_a ||A||_F^2 + lambda_r * sum_t ||R_t||_F^2)
double objective(const DecompositionState& state, const AdjacencyTensor& x,
                 const Hyperparams& hyper);

// One multiplicative update of A; every denominator entry gets + epsilon.
DecompositionState update_A(DecompositionState state, const AdjacencyTensor& x,
                            const Hyperparams& hyper, int workers = 1);

// One multiplicative update of every R_t; A unchanged.
DecompositionState update_R(DecompositionState state, const AdjacencyTensor& x,
                            const Hyperparams& hyper, int workers = 1);

// Alternates update_A then update_R per sweep, recording the objective after
// each sweep (history[0] is the initial objective). Stops when the relative
// change drops below hyper.tol or max_iters sweeps have run.
DecompositionState fit(const AdjacencyTensor& x, const Hyperparams& hyper,
                       int workers = 1);

// Continues fitting from an existing state (checkpoint restart, tests).
DecompositionState fit_from(DecompositionState state, const AdjacencyTensor& x,
                            const Hyperparams& hyper, int workers = 1);

// Text container with a dims header; round-trips exactly (hex float fields).
void save_factors(const DecompositionState& state, std::ostream& out);
DecompositionState load_factors(std::istream& in);

// CSV `iter,objective`, iter 0 being the initial objective.
void save_objective_csv(const std::vector<double>& history, std::ostream& out);

}  // namespace mntd
