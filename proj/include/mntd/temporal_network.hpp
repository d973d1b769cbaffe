#pragma once

#include <cstddef>
#include <iosfwd>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include <Eigen/Dense>

namespace mntd {

struct EdgeEvent {
    double time = 0.0;
    std::string u;
    std::string v;
    double weight = 1.0;
};

enum class SliceMode { prelabeled, window };

struct SlicingSpec {
    SliceMode mode = SliceMode::prelabeled;
    double window = 0.0;  // window mode only, must be > 0
    double origin = 0.0;  // window mode only
};

enum class Weighting { binary, count_sum };

// Upper-triangle weights of one slice, keyed by (u, v) with u < v.
using SliceEdges = std::map<std::pair<int, int>, double>;

struct TemporalNetwork {
    std::vector<std::string> node_ids;      // dense index -> identifier
    std::map<std::string, int> node_index;  // identifier -> dense index
    std::vector<SliceEdges> slices;

    int node_count() const { return static_cast<int>(node_ids.size()); }
    int slice_count() const { return static_cast<int>(slices.size()); }
};

// Dense symmetric nonnegative adjacency matrices, one per slice.
struct AdjacencyTensor {
    std::vector<Eigen::MatrixXd> slices;

    int node_count() const {
        return slices.empty() ? 0 : static_cast<int>(slices.front().rows());
    }
    int slice_count() const { return static_cast<int>(slices.size()); }
};

// present(i, t) is true iff node i has at least one incident edge in slice t.
class PresenceMask {
public:
    PresenceMask(int nodes, int slices)
        : nodes_(nodes), slices_(slices),
          present_(static_cast<std::size_t>(nodes) * slices, 0) {}

    bool operator()(int node, int slice) const {
        return present_[static_cast<std::size_t>(slice) * nodes_ + node] != 0;
    }
    void set(int node, int slice, bool value) {
        present_[static_cast<std::size_t>(slice) * nodes_ + node] = value ? 1 : 0;
    }
    int node_count() const { return nodes_; }
    int slice_count() const { return slices_; }

private:
    int nodes_ = 0;
    int slices_ = 0;
    std::vector<char> present_;
};

inline constexpr std::size_t default_memory_budget = std::size_t{2} << 30;  // 2 GiB

// Event file: one event per line, `time<TAB>u<TAB>v[<TAB>weight]`; lines
// starting with '#' are comments. Malformed lines raise with their number.
std::vector<EdgeEvent> load_edge_events(std::istream& in);
std::vector<EdgeEvent> load_edge_events_file(const std::string& path);

TemporalNetwork slice_events(const std::vector<EdgeEvent>& events,
                             const SlicingSpec& spec, Weighting weighting);

AdjacencyTensor build_adjacency_tensor(const TemporalNetwork& net,
                                       std::size_t memory_budget_bytes = default_memory_budget);

PresenceMask presence_mask(const AdjacencyTensor& tensor);

// Writes slice indices as times; reloading in pre-labeled mode with count-sum
// weighting reproduces the same tensor.
void save_events(const TemporalNetwork& net, std::ostream& out);

// Ground truth: per-slice community label per node identifier.
// File format: `slice<TAB>node<TAB>community`, '#' comments.
using TruthSequence = std::vector<std::map<std::string, int>>;

TruthSequence load_ground_truth(std::istream& in);
TruthSequence load_ground_truth_file(const std::string& path);
void save_ground_truth(const TruthSequence& truth, std::ostream& out);

}  // namespace mntd
