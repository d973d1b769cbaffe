#include "mntd/rescal.hpp"

#include <algorithm>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <ostream>
#include <sstream>
#include <stdexcept>
#include <string>

#include "format_util.hpp"
#include "mntd/parallel.hpp"
#include "mntd/rng.hpp"

namespace mntd {

namespace {

void validate_dims(const DecompositionState& state, const AdjacencyTensor& x) {
    if (state.A.rows() != x.node_count() || state.R.size() != x.slices.size())
        throw std::invalid_argument("decomposition state does not match tensor dims");
}

std::string fmt_hex(double value) {
    char buf[48];
    std::snprintf(buf, sizeof buf, "%a", value);
    return buf;
}

}  // namespace

DecompositionState init_decomposition(int nodes, const Hyperparams& hyper, int slices) {
    if (nodes < 1 || slices < 1) throw std::invalid_argument("need nodes >= 1 and slices >= 1");
    if (hyper.k < 1) throw std::invalid_argument("k must be >= 1");
    if (hyper.k > nodes)
        throw std::invalid_argument("rank k = " + std::to_string(hyper.k) +
                                    " exceeds node count " + std::to_string(nodes));
    Rng rng(hyper.seed);
    DecompositionState state;
    state.A.resize(nodes, hyper.k);
    for (int i = 0; i < nodes; ++i)
        for (int j = 0; j < hyper.k; ++j) state.A(i, j) = rng.uniform(0.1, 1.0);
    state.R.resize(slices);
    for (int t = 0; t < slices; ++t) {
        state.R[t].resize(hyper.k, hyper.k);
        for (int i = 0; i < hyper.k; ++i)
            for (int j = 0; j < hyper.k; ++j) state.R[t](i, j) = rng.uniform(0.1, 1.0);
    }
    return state;
}

double objective(const DecompositionState& state, const AdjacencyTensor& x,
                 const Hyperparams& hyper) {
    validate_dims(state, x);
    double residual = 0.0;
    double r_norm = 0.0;
    for (std::size_t t = 0; t < x.slices.size(); ++t) {
        residual += (x.slices[t] - state.A * state.R[t] * state.A.transpose()).squaredNorm();
        r_norm += state.R[t].squaredNorm();
    }
    return 0.5 * residual +
           0.5 * (hyper.lambda_a * state.A.squaredNorm() + hyper.lambda_r * r_norm);
}

DecompositionState update_A(DecompositionState state, const AdjacencyTensor& x,
                            const Hyperparams& hyper, int workers) {
    validate_dims(state, x);
    const auto slices = x.slices.size();
    const Eigen::MatrixXd ata = state.A.transpose() * state.A;

    std::vector<Eigen::MatrixXd> numer_parts(slices);
    std::vector<Eigen::MatrixXd> core_parts(slices);
    parallel_for(slices, workers, [&](std::size_t t) {
        const Eigen::MatrixXd& xt = x.slices[t];
        const Eigen::MatrixXd& rt = state.R[t];
        numer_parts[t] = xt * (state.A * rt.transpose()) + xt.transpose() * (state.A * rt);
        core_parts[t] = rt * ata * rt.transpose() + rt.transpose() * ata * rt;
    });

    Eigen::MatrixXd numer = Eigen::MatrixXd::Zero(state.A.rows(), state.A.cols());
    Eigen::MatrixXd core =
        hyper.lambda_a * Eigen::MatrixXd::Identity(state.A.cols(), state.A.cols());
    for (std::size_t t = 0; t < slices; ++t) {  // fixed order: bit-reproducible
        numer += numer_parts[t];
        core += core_parts[t];
    }

    const Eigen::MatrixXd denom =
        (state.A * core).array() + hyper.epsilon;
    state.A = (state.A.array() * numer.array() / denom.array()).matrix();
    if (!state.A.allFinite())
        throw std::runtime_error("update_A produced a non-finite entry");
    return state;
}

DecompositionState update_R(DecompositionState state, const AdjacencyTensor& x,
                            const Hyperparams& hyper, int workers) {
    validate_dims(state, x);
    const Eigen::MatrixXd ata = state.A.transpose() * state.A;
    std::vector<char> finite(x.slices.size(), 1);  // one slot per task: no shared writes
    parallel_for(x.slices.size(), workers, [&](std::size_t t) {
        const Eigen::MatrixXd numer = state.A.transpose() * x.slices[t] * state.A;
        const Eigen::MatrixXd denom =
            (ata * state.R[t] * ata + hyper.lambda_r * state.R[t]).array() + hyper.epsilon;
        state.R[t] = (state.R[t].array() * numer.array() / denom.array()).matrix();
        if (!state.R[t].allFinite()) finite[t] = 0;
    });
    if (std::find(finite.begin(), finite.end(), 0) != finite.end())
        throw std::runtime_error("update_R produced a non-finite entry");
    return state;
}

DecompositionState fit(const AdjacencyTensor& x, const Hyperparams& hyper, int workers) {
    return fit_from(init_decomposition(x.node_count(), hyper, x.slice_count()), x, hyper,
                    workers);
}

DecompositionState fit_from(DecompositionState state, const AdjacencyTensor& x,
                            const Hyperparams& hyper, int workers) {
    validate_dims(state, x);
    state.objective_history.clear();
    state.iterations_run = 0;
    state.converged = false;

    double previous = objective(state, x, hyper);
    state.objective_history.push_back(previous);
    for (int iter = 1; iter <= hyper.max_iters; ++iter) {
        try {
            state = update_A(std::move(state), x, hyper, workers);
            state = update_R(std::move(state), x, hyper, workers);
        } catch (const std::exception& e) {
            throw std::runtime_error("iteration " + std::to_string(iter) + ": " + e.what());
        }
        const double current = objective(state, x, hyper);
        state.objective_history.push_back(current);
        state.iterations_run = iter;
        if (std::abs(current - previous) / (1.0 + previous) < hyper.tol) {
            state.converged = true;
            break;
        }
        previous = current;
    }
    return state;
}

void save_factors(const DecompositionState& state, std::ostream& out) {
    out << "mntd-factors 1\n"
        << state.A.rows() << ' ' << state.A.cols() << ' ' << state.R.size() << '\n';
    for (Eigen::Index i = 0; i < state.A.rows(); ++i) {
        for (Eigen::Index j = 0; j < state.A.cols(); ++j)
            out << (j ? " " : "") << fmt_hex(state.A(i, j));
        out << '\n';
    }
    for (const Eigen::MatrixXd& r : state.R)
        for (Eigen::Index i = 0; i < r.rows(); ++i) {
            for (Eigen::Index j = 0; j < r.cols(); ++j) out << (j ? " " : "") << fmt_hex(r(i, j));
            out << '\n';
        }
}

DecompositionState load_factors(std::istream& in) {
    std::string magic;
    int version = 0;
    in >> magic >> version;
    if (magic != "mntd-factors" || version != 1)
        throw std::runtime_error("not a factors container");
    Eigen::Index n = 0, k = 0;
    std::size_t slices = 0;
    in >> n >> k >> slices;
    if (!in || n < 1 || k < 1 || slices < 1)
        throw std::runtime_error("bad factors header");
    // Values are hex floats; iostream double extraction does not accept them,
    // strtod does.
    std::string token;
    auto next_value = [&in, &token]() {
        if (!(in >> token)) throw std::runtime_error("truncated factors container");
        char* end = nullptr;
        const double value = std::strtod(token.c_str(), &end);
        if (end != token.c_str() + token.size())
            throw std::runtime_error("bad factor value '" + token + "'");
        return value;
    };
    DecompositionState state;
    state.A.resize(n, k);
    for (Eigen::Index i = 0; i < n; ++i)
        for (Eigen::Index j = 0; j < k; ++j) state.A(i, j) = next_value();
    state.R.assign(slices, Eigen::MatrixXd(k, k));
    for (std::size_t t = 0; t < slices; ++t)
        for (Eigen::Index i = 0; i < k; ++i)
            for (Eigen::Index j = 0; j < k; ++j) state.R[t](i, j) = next_value();
    return state;
}

void save_objective_csv(const std::vector<double>& history, std::ostream& out) {
    out << "iter,objective\n";
    for (std::size_t i = 0; i < history.size(); ++i)
        out << i << ',' << detail::fmt_g17(history[i]) << '\n';
}

}  // namespace mntd
