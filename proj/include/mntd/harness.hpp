#pragma once

#include <cstdint>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "mntd/community.hpp"
#include "mntd/metrics.hpp"
#include "mntd/refine.hpp"
#include "mntd/rescal.hpp"
#include "mntd/temporal_network.hpp"

namespace mntd {

// Invalid configuration (bad flags, unreadable input, missing k). The CLI maps
// this to exit code 1; other failures exit 2.
struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

enum class Variant { mntd, nrd, merandom };

struct PipelineConfig {
    std::string input_path;
    SlicingSpec slicing;
    Weighting weighting = Weighting::binary;
    Hyperparams hyper;  // hyper.k == 0 means "derive from ground truth"
    Variant variant = Variant::mntd;
    std::string truth_path;  // optional
    std::string out_dir;     // empty: compute only, write nothing
    int runs = 20;
    std::uint64_t seed = 0;  // run r uses seed + r
    AssignOptions assign;
    RefineOptions refine;
    std::size_t memory_budget = default_memory_budget;
    int workers = 1;
};

struct RunResult {
    std::uint64_t seed = 0;
    PartitionSequence partitions;
    ScoreSeries modularity;
    std::optional<ScoreSeries> nmi;
    std::vector<double> objective_history;  // empty for merandom
    int iterations_run = 0;
    bool converged = false;
    IndicatorSet indicators;                // empty for merandom
    DecompositionState decomposition;       // empty for merandom
};

struct PipelineReport {
    PipelineConfig config;
    std::vector<std::string> node_ids;
    std::vector<RunResult> runs;
    // Per-slice values averaged over runs, then mean +- std across slices.
    ScoreSeries aggregate_modularity;
    std::optional<ScoreSeries> aggregate_nmi;
};

// Full pipeline for one variant: load -> slice -> tensor -> fit -> indicators
// -> assign -> refine -> score (nrd skips refine; merandom skips the
// decomposition and refines all-singleton seeds). Writes artifacts to
// config.out_dir when set.
PipelineReport run_pipeline(const PipelineConfig& config);

struct SbmParams {
    int n_nodes = 120;
    int n_communities = 4;
    int slices = 5;
    double p_in = 0.3;
    double p_out = 0.02;
    double migrate_fraction = 0.05;  // fraction of nodes reassigned per slice
    std::uint64_t seed = 0;
};

struct SbmData {
    std::vector<EdgeEvent> events;
    TruthSequence truth;
};

// Slice 0 assigns communities round-robin; each later slice moves
// ceil(migrate_fraction * n) distinct nodes to uniformly chosen other
// communities; edges are sampled per pair per slice (p_in within, p_out
// across). Deterministic per seed.
SbmData synth_dynamic_sbm(const SbmParams& params);

// Writes the events and ground-truth files in the documented formats.
void generate_dynamic_sbm(const SbmParams& params, const std::string& events_path,
                          const std::string& truth_path);

// Writes manifest.json, summary.csv, aggregate metrics.csv/json, and per-run
// partitions/metrics/objective/memberships/factors under out_dir. Output is
// byte-deterministic for a fixed report (no timestamps, %.17g floats).
void emit_report(const PipelineReport& report, const std::string& out_dir);

}  // namespace mntd
