#include "mntd/refine.hpp"

#include <algorithm>
#include <map>
#include <numeric>
#include <stdexcept>
#include <string>

#include "mntd/metrics.hpp"
#include "mntd/parallel.hpp"
#include "mntd/rng.hpp"

namespace mntd {

namespace {

constexpr double gain_threshold = 1e-12;

// Louvain local-move sweeps. Labels may be arbitrary ints; they are remapped to
// dense indices ascending by label value, which preserves the lowest-label tie
// rule. When node_tags is non-null a node may only enter communities whose tag
// matches its own; communities stay tag-homogeneous because every join is
// filtered on it, so the restricted sweep can never mix two seed communities.
std::pair<Partition, bool> move_sweeps(const SliceGraph& g, Partition labels,
                                       const Partition* node_tags,
                                       const std::vector<int>* sweep_order) {
    const int n = g.n;
    if (static_cast<int>(labels.size()) != n)
        throw std::invalid_argument("partition does not cover all nodes");
    if (n == 0 || g.two_l <= 0.0) return {std::move(labels), false};

    // Dense community ids, ordered like the original labels.
    std::map<int, int> dense_of_label;
    for (int label : labels) dense_of_label.emplace(label, 0);
    int next = 0;
    for (auto& [label, dense] : dense_of_label) dense = next++;
    const int communities = next;

    Partition community(n);
    for (int i = 0; i < n; ++i) community[i] = dense_of_label.at(labels[i]);

    std::vector<double> sum_tot(communities, 0.0);
    for (int i = 0; i < n; ++i) sum_tot[community[i]] += g.degree[i];

    std::vector<int> tag_of_community(communities, 0);
    if (node_tags != nullptr)
        for (int i = 0; i < n; ++i) tag_of_community[community[i]] = (*node_tags)[i];

    const double two_l = g.two_l;
    std::vector<double> weight_to(communities, 0.0);
    std::vector<int> touched;
    touched.reserve(communities);

    bool any_move = false;
    bool moved = true;
    while (moved) {
        moved = false;
        for (int step = 0; step < n; ++step) {
            const int i = sweep_order ? (*sweep_order)[step] : step;
            const int current = community[i];
            sum_tot[current] -= g.degree[i];

            touched.clear();
            for (int j = 0; j < n; ++j) {
                if (j == i) continue;
                const double w = g.adjacency(i, j);
                if (w <= 0.0) continue;
                const int c = community[j];
                if (weight_to[c] == 0.0) touched.push_back(c);
                weight_to[c] += w;
            }
            if (weight_to[current] == 0.0) touched.push_back(current);
            std::sort(touched.begin(), touched.end());

            int best = current;
            double best_gain = 2.0 * weight_to[current] / two_l -
                               2.0 * g.degree[i] * sum_tot[current] / (two_l * two_l);
            for (const int c : touched) {
                if (c == current) continue;
                if (node_tags != nullptr && tag_of_community[c] != (*node_tags)[i]) continue;
                const double gain = 2.0 * weight_to[c] / two_l -
                                    2.0 * g.degree[i] * sum_tot[c] / (two_l * two_l);
                if (gain > best_gain + gain_threshold) {  // strict: ties keep the
                    best_gain = gain;                     // lowest label / current
                    best = c;
                }
            }
            for (const int c : touched) weight_to[c] = 0.0;

            if (best != current) {
                community[i] = best;
                moved = true;
                any_move = true;
            }
            sum_tot[community[i]] += g.degree[i];
        }
    }

    std::vector<int> label_of_dense(communities);
    for (const auto& [label, dense] : dense_of_label) label_of_dense[dense] = label;
    for (int i = 0; i < n; ++i) labels[i] = label_of_dense[community[i]];
    return {std::move(labels), any_move};
}

std::vector<int> shuffled_order(int n, Rng& rng) {
    std::vector<int> order(n);
    std::iota(order.begin(), order.end(), 0);
    for (int i = n - 1; i > 0; --i)
        std::swap(order[i], order[static_cast<int>(rng.below(static_cast<std::uint64_t>(i) + 1))]);
    return order;
}

}  // namespace

std::pair<Partition, bool> local_move_phase(const SliceGraph& g, Partition partition,
                                            const std::vector<int>* sweep_order) {
    return move_sweeps(g, std::move(partition), nullptr, sweep_order);
}

std::pair<SliceGraph, std::vector<int>> aggregate(const SliceGraph& g,
                                                  const Partition& partition) {
    if (static_cast<int>(partition.size()) != g.n)
        throw std::invalid_argument("partition does not cover all nodes");

    std::map<int, int> super_of_label;  // super nodes ordered by original label
    for (int label : partition) super_of_label.emplace(label, 0);
    int next = 0;
    for (auto& [label, super] : super_of_label) super = next++;

    std::vector<int> node_to_super(g.n);
    for (int i = 0; i < g.n; ++i) node_to_super[i] = super_of_label.at(partition[i]);

    // Accumulate one orientation per super pair and mirror it afterwards:
    // summing both orientations independently would break exact symmetry
    // (different addition orders round differently).
    Eigen::MatrixXd quotient = Eigen::MatrixXd::Zero(next, next);
    for (int i = 0; i < g.n; ++i)
        for (int j = 0; j < g.n; ++j) {
            const double w = g.adjacency(i, j);
            if (w == 0.0) continue;
            const int a = node_to_super[i];
            const int b = node_to_super[j];
            if (a <= b) quotient(a, b) += w;  // diagonal keeps both orientations
        }
    for (int a = 0; a < next; ++a)
        for (int b = a + 1; b < next; ++b) quotient(b, a) = quotient(a, b);

    return {make_slice_graph(std::move(quotient)), std::move(node_to_super)};
}

RefineResult refine_partition(const SliceGraph& g, const Partition& initial,
                              const RefineOptions& options) {
    if (static_cast<int>(initial.size()) != g.n)
        throw std::invalid_argument("initial partition does not cover all nodes");

    RefineResult result;
    result.partition = initial;
    if (g.two_l <= 0.0) {  // edgeless: Q defined as 0, refinement is a no-op
        result.modularity_before = 0.0;
        result.modularity_after = 0.0;
        result.phases_run = 0;
        return result;
    }

    const double q_seed = modularity(g, initial);
    Rng shuffle_rng(options.shuffle_seed);
    auto order_for = [&](int count) -> std::vector<int> {
        if (!options.seeded_shuffle) return {};
        return shuffled_order(count, shuffle_rng);
    };

    // Seed reform: re-cluster from singletons with moves confined to each
    // node's seed community. A seed that merged two groups splits along the
    // data; the result is adopted only on strict improvement, so a clean seed
    // passes through literally.
    Partition labels = initial;
    double q_labels = q_seed;
    {
        Partition atoms(g.n);
        std::iota(atoms.begin(), atoms.end(), 0);
        const std::vector<int> order = order_for(g.n);
        Partition reformed = move_sweeps(g, std::move(atoms), &initial,
                                         order.empty() ? nullptr : &order)
                                 .first;
        const double q_reformed = modularity(g, reformed);
        if (q_reformed > q_seed + gain_threshold) {
            labels = std::move(reformed);
            q_labels = q_reformed;
        }
    }

    // The first local-move phase operates directly on the (reformed) seed
    // partition; the standard Louvain alternation then continues on
    // successively aggregated graphs until a phase stops raising the
    // full-graph modularity.
    Partition best = labels;
    double q_best = q_labels;
    int phases = 0;

    SliceGraph work = g;
    std::vector<int> to_original(g.n);
    std::iota(to_original.begin(), to_original.end(), 0);
    Partition current = std::move(labels);

    while (true) {
        const std::vector<int> order = order_for(work.n);
        auto [moved, improved] = local_move_phase(work, std::move(current),
                                                  order.empty() ? nullptr : &order);
        ++phases;

        Partition projected(g.n);
        for (int i = 0; i < g.n; ++i) projected[i] = moved[to_original[i]];
        const double q_new = modularity(g, projected);

        const bool gained = q_new > q_best + gain_threshold;
        if (gained) {
            q_best = q_new;
            best = std::move(projected);
        }
        if (!improved || !gained) break;

        auto [next_work, next_map] = aggregate(work, moved);
        for (int i = 0; i < g.n; ++i) to_original[i] = next_map[to_original[i]];
        work = std::move(next_work);
        current.resize(work.n);
        std::iota(current.begin(), current.end(), 0);
    }

    // The seed is never discarded.
    if (q_best < q_seed - gain_threshold) {
        best = initial;
        q_best = q_seed;
    }
    result.partition = std::move(best);
    result.modularity_before = q_seed;
    result.modularity_after = q_best;
    result.phases_run = phases;
    return result;
}

PartitionSequence refine_sequence(const AdjacencyTensor& tensor, const PresenceMask& mask,
                                  const PartitionSequence& parts,
                                  const RefineOptions& options, int workers) {
    if (static_cast<int>(parts.assignments.size()) != tensor.slice_count())
        throw std::invalid_argument("partition sequence does not match tensor slices");

    PartitionSequence out;
    out.assignments.resize(parts.assignments.size());
    out.labels_are_canonical = false;

    parallel_for(parts.assignments.size(), workers, [&](std::size_t t) {
        try {
            auto [g, nodes] = present_subgraph(tensor, mask, static_cast<int>(t));
            const std::map<int, int>& seed_map = parts.assignments[t];
            if (seed_map.size() != nodes.size())
                throw std::invalid_argument("partition does not cover exactly the present nodes");
            Partition seed(nodes.size());
            for (std::size_t a = 0; a < nodes.size(); ++a) {
                const auto it = seed_map.find(nodes[a]);
                if (it == seed_map.end())
                    throw std::invalid_argument("present node " + std::to_string(nodes[a]) +
                                                " missing from partition");
                seed[a] = it->second;
            }
            const RefineResult refined = refine_partition(g, seed, options);
            for (std::size_t a = 0; a < nodes.size(); ++a)
                out.assignments[t][nodes[a]] = refined.partition[a];
        } catch (const std::exception& e) {
            throw std::runtime_error("slice " + std::to_string(t) + ": " + e.what());
        }
    });
    return out;
}

}  // namespace mntd
