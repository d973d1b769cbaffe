#include "mntd/harness.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numeric>
#include <set>
#include <sstream>

#include <Eigen/Core>
#include <json.hpp>

#include "format_util.hpp"
#include "mntd/parallel.hpp"
#include "mntd/rng.hpp"
#include "mntd/slice_graph.hpp"

namespace mntd {

namespace fs = std::filesystem;

namespace {

constexpr const char* artifact_version = "1.0.0";

const char* variant_name(Variant variant) {
    switch (variant) {
        case Variant::mntd: return "mntd";
        case Variant::nrd: return "nrd";
        case Variant::merandom: return "merandom";
    }
    return "?";
}

std::ofstream open_out(const fs::path& path) {
    std::ofstream out(path);
    if (!out) throw std::runtime_error("cannot write " + path.string());
    return out;
}

// Ground truth keyed by dense node index; ids the network never saw cannot
// intersect a detected partition and are dropped.
std::vector<std::map<int, int>> truth_by_index(const TruthSequence& truth,
                                               const TemporalNetwork& net) {
    std::vector<std::map<int, int>> indexed(truth.size());
    for (std::size_t t = 0; t < truth.size(); ++t)
        for (const auto& [id, community] : truth[t]) {
            const auto it = net.node_index.find(id);
            if (it != net.node_index.end()) indexed[t][it->second] = community;
        }
    return indexed;
}

int distinct_truth_labels(const TruthSequence& truth) {
    std::set<int> labels;
    for (const auto& slice : truth)
        for (const auto& [id, community] : slice) labels.insert(community);
    return static_cast<int>(labels.size());
}

PartitionSequence singleton_partitions(const PresenceMask& mask) {
    PartitionSequence parts;
    parts.assignments.resize(mask.slice_count());
    for (int t = 0; t < mask.slice_count(); ++t)
        for (int i = 0; i < mask.node_count(); ++i)
            if (mask(i, t)) parts.assignments[t][i] = i;
    return parts;
}

ScoreSeries score_modularity(const AdjacencyTensor& tensor, const PresenceMask& mask,
                             const PartitionSequence& parts) {
    std::vector<std::pair<int, double>> values;
    for (int t = 0; t < tensor.slice_count(); ++t) {
        auto [g, nodes] = present_subgraph(tensor, mask, t);
        Partition partition(nodes.size());
        for (std::size_t a = 0; a < nodes.size(); ++a)
            partition[a] = parts.assignments[t].at(nodes[a]);
        values.emplace_back(t, modularity(g, partition));
    }
    return score_series(values);
}

std::optional<ScoreSeries> score_nmi(const std::vector<std::map<int, int>>& truth,
                                     const PartitionSequence& parts) {
    std::vector<std::pair<int, double>> values;
    for (std::size_t t = 0; t < parts.assignments.size(); ++t) {
        if (t >= truth.size()) break;
        const auto& truth_slice = truth[t];
        const auto& detected = parts.assignments[t];
        bool overlap = false;
        for (const auto& [node, label] : detected)
            if (truth_slice.count(node)) {
                overlap = true;
                break;
            }
        if (!overlap) continue;
        values.emplace_back(static_cast<int>(t), nmi(truth_slice, detected));
    }
    if (values.empty()) return std::nullopt;
    return score_series(values);
}

RunResult run_once(const PipelineConfig& config, const AdjacencyTensor& tensor,
                   const PresenceMask& mask,
                   const std::vector<std::map<int, int>>& truth,
                   std::uint64_t run_seed, int workers) {
    RunResult result;
    result.seed = run_seed;

    if (config.variant == Variant::merandom) {
        result.partitions =
            refine_sequence(tensor, mask, singleton_partitions(mask), config.refine, workers);
    } else {
        Hyperparams hyper = config.hyper;
        hyper.seed = run_seed;
        result.decomposition = fit(tensor, hyper, workers);
        result.objective_history = result.decomposition.objective_history;
        result.iterations_run = result.decomposition.iterations_run;
        result.converged = result.decomposition.converged;
        result.indicators = indicator_matrices(result.decomposition);
        PartitionSequence assigned = assign_partition(result.indicators, mask, config.assign);
        result.partitions =
            config.variant == Variant::mntd
                ? refine_sequence(tensor, mask, assigned, config.refine, workers)
                : std::move(assigned);
    }

    result.modularity = score_modularity(tensor, mask, result.partitions);
    result.nmi = score_nmi(truth, result.partitions);
    return result;
}

ScoreSeries average_series(const std::vector<const ScoreSeries*>& series) {
    std::vector<std::pair<int, double>> averaged;
    for (std::size_t idx = 0; idx < series.front()->per_slice.size(); ++idx) {
        const int t = series.front()->per_slice[idx].first;
        double sum = 0.0;
        for (const ScoreSeries* s : series) sum += s->per_slice[idx].second;
        averaged.emplace_back(t, sum / static_cast<double>(series.size()));
    }
    return score_series(averaged);
}

}  // namespace

SbmData synth_dynamic_sbm(const SbmParams& params) {
    if (params.n_nodes < 1 || params.n_communities < 1 || params.slices < 1)
        throw std::invalid_argument("SBM sizes must be positive");
    if (!(params.p_out >= 0.0 && params.p_out < params.p_in && params.p_in <= 1.0))
        throw std::invalid_argument("need 0 <= p_out < p_in <= 1");
    if (!(params.migrate_fraction >= 0.0 && params.migrate_fraction < 1.0))
        throw std::invalid_argument("need 0 <= migrate_fraction < 1");

    const int n = params.n_nodes;
    const int k = params.n_communities;
    Rng rng(params.seed);

    SbmData data;
    data.truth.resize(params.slices);
    std::vector<int> community(n);
    for (int i = 0; i < n; ++i) community[i] = i % k;  // slice 0: round-robin

    std::vector<int> pool(n);
    for (int t = 0; t < params.slices; ++t) {
        if (t > 0 && k > 1) {
            const int movers =
                static_cast<int>(std::ceil(params.migrate_fraction * static_cast<double>(n)));
            std::iota(pool.begin(), pool.end(), 0);
            for (int step = 0; step < movers; ++step) {  // distinct uniform nodes
                const int pick =
                    step + static_cast<int>(rng.below(static_cast<std::uint64_t>(n - step)));
                std::swap(pool[step], pool[pick]);
                const int node = pool[step];
                int target = static_cast<int>(rng.below(static_cast<std::uint64_t>(k - 1)));
                if (target >= community[node]) ++target;
                community[node] = target;
            }
        }
        for (int i = 0; i < n; ++i) data.truth[t][std::to_string(i)] = community[i];
        for (int i = 0; i < n; ++i)
            for (int j = i + 1; j < n; ++j) {
                const double p = community[i] == community[j] ? params.p_in : params.p_out;
                if (rng.uniform(0.0, 1.0) < p)
                    data.events.push_back({static_cast<double>(t), std::to_string(i),
                                           std::to_string(j), 1.0});
            }
    }
    return data;
}

void generate_dynamic_sbm(const SbmParams& params, const std::string& events_path,
                          const std::string& truth_path) {
    const SbmData data = synth_dynamic_sbm(params);
    std::ofstream events_out = open_out(events_path);
    for (const EdgeEvent& event : data.events)
        events_out << static_cast<long long>(event.time) << '\t' << event.u << '\t'
                   << event.v << '\t' << detail::fmt_g17(event.weight) << '\n';
    std::ofstream truth_out = open_out(truth_path);
    save_ground_truth(data.truth, truth_out);
}

PipelineReport run_pipeline(const PipelineConfig& config) {
    if (config.runs < 1) throw ConfigError("runs must be >= 1");
    if (config.input_path.empty()) throw ConfigError("input path is required");
    if (!std::ifstream(config.input_path))
        throw ConfigError("cannot read input: " + config.input_path);
    if (!config.truth_path.empty() && !std::ifstream(config.truth_path))
        throw ConfigError("cannot read ground truth: " + config.truth_path);

    // Malformed user files are input errors, not internal failures.
    std::vector<EdgeEvent> events;
    try {
        events = load_edge_events_file(config.input_path);
    } catch (const std::runtime_error& e) {
        throw ConfigError(e.what());
    }
    const TemporalNetwork net = slice_events(events, config.slicing, config.weighting);
    const AdjacencyTensor tensor = build_adjacency_tensor(net, config.memory_budget);
    const PresenceMask mask = presence_mask(tensor);

    std::vector<std::map<int, int>> truth;
    if (!config.truth_path.empty()) {
        try {
            truth = truth_by_index(load_ground_truth_file(config.truth_path), net);
        } catch (const std::runtime_error& e) {
            throw ConfigError(e.what());
        }
    }

    PipelineConfig resolved = config;
    if (resolved.variant != Variant::merandom) {
        if (resolved.hyper.k == 0) {
            if (config.truth_path.empty())
                throw ConfigError("k is required when no ground truth is supplied");
            resolved.hyper.k = distinct_truth_labels(load_ground_truth_file(config.truth_path));
        }
        if (resolved.hyper.k < 1) throw ConfigError("k must be >= 1");
        if (resolved.hyper.k > net.node_count())
            throw ConfigError("k = " + std::to_string(resolved.hyper.k) +
                              " exceeds the node count " + std::to_string(net.node_count()));
        if (resolved.hyper.max_iters < 1) throw ConfigError("max-iters must be >= 1");
    }

    PipelineReport report;
    report.config = resolved;
    report.node_ids = net.node_ids;
    report.runs.resize(static_cast<std::size_t>(resolved.runs));

    const bool parallel_runs = resolved.workers > 1 && resolved.runs > 1;
    const int inner_workers = parallel_runs ? 1 : resolved.workers;
    parallel_for(report.runs.size(), parallel_runs ? resolved.workers : 1,
                 [&](std::size_t r) {
                     report.runs[r] = run_once(resolved, tensor, mask, truth,
                                               resolved.seed + r, inner_workers);
                 });

    std::vector<const ScoreSeries*> q_series;
    std::vector<const ScoreSeries*> nmi_series;
    for (const RunResult& run : report.runs) {
        q_series.push_back(&run.modularity);
        if (run.nmi) nmi_series.push_back(&*run.nmi);
    }
    report.aggregate_modularity = average_series(q_series);
    if (nmi_series.size() == report.runs.size())
        report.aggregate_nmi = average_series(nmi_series);

    if (!resolved.out_dir.empty()) emit_report(report, resolved.out_dir);
    return report;
}

void emit_report(const PipelineReport& report, const std::string& out_dir) {
    const fs::path root(out_dir);
    fs::create_directories(root / "runs");

    for (std::size_t r = 0; r < report.runs.size(); ++r) {
        const RunResult& run = report.runs[r];
        char name[32];
        std::snprintf(name, sizeof name, "run_%03zu", r);
        const fs::path run_dir = root / "runs" / name;
        fs::create_directories(run_dir);

        {
            std::ofstream out = open_out(run_dir / "partitions.csv");
            out << "t,node,community\n";
            for (std::size_t t = 0; t < run.partitions.assignments.size(); ++t)
                for (const auto& [node, label] : run.partitions.assignments[t])
                    out << t << ',' << report.node_ids[node] << ',' << label << '\n';
        }
        {
            std::ofstream out = open_out(run_dir / "metrics.csv");
            write_metrics_csv(run.modularity, run.nmi ? &*run.nmi : nullptr, out);
        }
        {
            std::ofstream out = open_out(run_dir / "metrics.json");
            write_metrics_json(run.modularity, run.nmi ? &*run.nmi : nullptr, out);
        }
        if (report.config.variant != Variant::merandom) {
            {
                std::ofstream out = open_out(run_dir / "objective.csv");
                save_objective_csv(run.objective_history, out);
            }
            {
                std::ofstream out = open_out(run_dir / "factors.txt");
                save_factors(run.decomposition, out);
            }
            PresenceMask mask(static_cast<int>(report.node_ids.size()),
                              static_cast<int>(run.partitions.assignments.size()));
            for (std::size_t t = 0; t < run.partitions.assignments.size(); ++t)
                for (const auto& [node, label] : run.partitions.assignments[t])
                    mask.set(node, static_cast<int>(t), true);
            std::ofstream out = open_out(run_dir / "memberships.csv");
            save_memberships_csv(run.indicators, mask, report.node_ids, out);
        }
    }

    {
        std::ofstream out = open_out(root / "metrics.csv");
        write_metrics_csv(report.aggregate_modularity,
                          report.aggregate_nmi ? &*report.aggregate_nmi : nullptr, out);
    }
    {
        std::ofstream out = open_out(root / "metrics.json");
        write_metrics_json(report.aggregate_modularity,
                           report.aggregate_nmi ? &*report.aggregate_nmi : nullptr, out);
    }
    {
        std::ofstream out = open_out(root / "summary.csv");
        out << "variant,metric,mean,std\n";
        out << variant_name(report.config.variant) << ",modularity,"
            << detail::fmt_g17(report.aggregate_modularity.mean) << ','
            << detail::fmt_g17(report.aggregate_modularity.std) << '\n';
        if (report.aggregate_nmi)
            out << variant_name(report.config.variant) << ",nmi,"
                << detail::fmt_g17(report.aggregate_nmi->mean) << ','
                << detail::fmt_g17(report.aggregate_nmi->std) << '\n';
    }

    nlohmann::json manifest;
    manifest["artifact"] = "mntd";
    manifest["version"] = artifact_version;
    manifest["eigen"] = std::to_string(EIGEN_WORLD_VERSION) + "." +
                        std::to_string(EIGEN_MAJOR_VERSION) + "." +
                        std::to_string(EIGEN_MINOR_VERSION);
    const PipelineConfig& c = report.config;
    nlohmann::json cfg;
    cfg["input"] = c.input_path;
    cfg["slice_mode"] = c.slicing.mode == SliceMode::prelabeled ? "prelabeled" : "window";
    cfg["window"] = c.slicing.window;
    cfg["origin"] = c.slicing.origin;
    cfg["weighting"] = c.weighting == Weighting::binary ? "binary" : "count";
    cfg["variant"] = variant_name(c.variant);
    cfg["k"] = c.hyper.k;
    cfg["lambda_a"] = c.hyper.lambda_a;
    cfg["lambda_r"] = c.hyper.lambda_r;
    cfg["max_iters"] = c.hyper.max_iters;
    cfg["tol"] = c.hyper.tol;
    cfg["epsilon"] = c.hyper.epsilon;
    cfg["seed"] = c.seed;
    cfg["runs"] = c.runs;
    cfg["truth"] = c.truth_path;
    cfg["out"] = c.out_dir;
    cfg["workers"] = c.workers;
    cfg["memory_budget_bytes"] = c.memory_budget;
    cfg["seeded_shuffle"] = c.refine.seeded_shuffle;
    cfg["shuffle_seed"] = c.refine.shuffle_seed;
    cfg["zero_row_to_community_zero"] = c.assign.zero_row_to_community_zero;
    manifest["config"] = cfg;
    nlohmann::json seeds = nlohmann::json::array();
    for (const RunResult& run : report.runs) seeds.push_back(run.seed);
    manifest["run_seeds"] = seeds;

    std::ofstream out = open_out(root / "manifest.json");
    out << manifest.dump(2) << '\n';
}

}  // namespace mntd
