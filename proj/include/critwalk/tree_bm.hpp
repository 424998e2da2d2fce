#pragma once

#include "critwalk/rng.hpp"
#include "critwalk/skeleton.hpp"
#include "critwalk/spatial_tree.hpp"

#include <vector>

namespace critwalk {

enum class MetricChoice { length, resistance };
enum class MeasureChoice { lebesgue_length, lebesgue_resistance };

// Finite tree with one metric per edge and a measure density per edge;
// adapter for SkeletonTree / ReducedSpatialTree inputs.
struct MetricTree {
    std::vector<std::int32_t> parent;   // -1 at root (vertex 0)
    std::vector<double> metric_len;     // edge to parent in the chosen metric
    std::vector<double> measure_len;    // edge mass before normalization

    std::size_t num_vertices() const { return parent.size(); }
    static MetricTree from_skeleton(const SkeletonTree& t, MetricChoice metric,
                                    MeasureChoice measure);
    static MetricTree from_reduced(const ReducedSpatialTree& t, MetricChoice metric,
                                   MeasureChoice measure);
};

// Subdivided tree: nearest-neighbor walk on the sites realizes the Brownian
// motion on (T, d, nu) with holding time 2 m_i / sum_j c_ij at site i and
// jump probabilities proportional to the piece conductances.
class MetricTreeNet {
public:
    // Requires h < shortest edge metric length, so every edge splits into at
    // least two pieces with piece lengths in (h/2, h].
    MetricTreeNet(const MetricTree& tree, double h);

    std::size_t num_sites() const { return site_orig_.size(); }
    std::size_t num_orig() const { return tree_.num_vertices(); }
    double step() const { return h_; }
    const MetricTree& tree() const { return tree_; }

    std::uint32_t site_of_orig(std::uint32_t v) const { return orig_site_[v]; }
    // UINT32_MAX for subdivision sites.
    std::uint32_t orig_of_site(std::uint32_t s) const { return site_orig_[s]; }
    double site_measure(std::uint32_t s) const { return site_measure_[s]; }
    double holding_time(std::uint32_t s) const { return holding_[s]; }
    std::uint32_t midpoint_site(std::uint32_t orig_v) const { return mid_site_[orig_v]; }

    std::uint32_t neighbor_count(std::uint32_t s) const {
        return nbr_off_[s + 1] - nbr_off_[s];
    }
    std::uint32_t sample_jump(std::uint32_t s, Rng& rng) const;

    // Total metric length and total (unnormalized) measure mass.
    double total_metric() const { return total_metric_; }

private:
    MetricTree tree_;
    double h_;
    double total_metric_ = 0;

    std::vector<std::uint32_t> site_orig_;   // original vertex or UINT32_MAX
    std::vector<std::uint32_t> orig_site_;
    std::vector<std::uint32_t> mid_site_;    // per original vertex: midpoint of edge to parent
    std::vector<double> site_measure_;       // normalized (sums to 1)
    std::vector<double> holding_;

    std::vector<std::uint32_t> nbr_off_;
    std::vector<std::uint32_t> nbr_to_;
    std::vector<double> nbr_cum_;            // cumulative jump probabilities

    friend struct NetAccess;
};

// Simulated path on the net; consecutive sites are adjacent.
struct TreeDiffusionPath {
    std::vector<std::uint32_t> sites;
    std::vector<double> times;  // arrival time at each site
    double t_end = 0;
};

TreeDiffusionPath simulate(const MetricTreeNet& net, double t_max, Rng& rng,
                           std::uint32_t start_site = 0);

// Occupation densities and crossing counts of a path.
struct LocalTimeField {
    double t_total = 0;
    std::vector<double> site_local_time;        // occupied time / site measure
    std::vector<std::uint64_t> cross_total;     // per original edge (indexed by child)
    std::vector<std::uint64_t> cross_right;     // parent -> child
    std::vector<std::uint64_t> cross_left;      // child -> parent
    std::vector<std::uint64_t> vertex_visits;   // per original vertex (trace visits)
};

LocalTimeField local_times(const TreeDiffusionPath& path, const MetricTreeNet& net);

// Streaming simulation when the path itself is not needed.
LocalTimeField run_local_times(const MetricTreeNet& net, double t_max, Rng& rng,
                               std::uint32_t start_site = 0);

// Per-edge estimate d(e) l_t(e) and per-interior-vertex estimate
// 2 R^vert l^vert, compared against the occupation density at the edge
// midpoint / at the vertex.
struct CrossingEstimates {
    std::vector<double> edge_estimate;    // per original edge (child-indexed); 0 at root
    std::vector<double> edge_gap;         // |estimate - L(mid)|
    std::vector<double> vertex_estimate;  // per interior original vertex, -1 elsewhere
    std::vector<double> vertex_gap;
    double sup_edge_gap = 0;
    double sup_vertex_gap = 0;
};

CrossingEstimates crossing_local_time_estimate(const LocalTimeField& field,
                                               const MetricTreeNet& net);

// First hitting of a site set; used by the hitting-probability and
// occupation checks.
struct HitResult {
    std::uint32_t site = 0;
    double time = 0;
    std::uint64_t steps = 0;
};
HitResult simulate_until_hit(const MetricTreeNet& net, std::uint32_t start_site,
                             const std::vector<std::uint32_t>& targets, Rng& rng,
                             std::uint64_t max_steps = UINT64_MAX);

} // namespace critwalk
