#pragma once

#include "critwalk/models.hpp"
#include "critwalk/skeleton.hpp"
#include "critwalk/spatial_tree.hpp"

#include <functional>
#include <map>
#include <string>
#include <vector>

namespace critwalk {

// Replica graph source; lets tests plug degenerate models in as controls.
using GraphFactory = std::function<RootedGraph(std::size_t n, Rng& rng)>;
GraphFactory model_factory(const ModelSpec& spec);

// Distance on graph spatial trees: 1 for different ordered shapes, otherwise
// (sup edge-length difference + sup embedded deviation under the canonical
// edge-affine correspondence) capped at 1.
double tree_distance_D(const ReducedSpatialTree& a, const ReducedSpatialTree& b,
                       std::size_t grid_per_edge = 32);

struct ConditionReport {
    char condition = '?';
    struct Row {
        std::size_t n = 0;
        std::size_t K = 0;
        std::string stat;
        double value = 0;
    };
    std::vector<Row> rows;
    std::map<std::string, double> constants;
    std::map<std::string, double> p_values;
    bool verdict = false;
    std::string note;
    std::uint64_t seed = 0;
};

// Skeleton approximation quality: probability of a non-tree-like selection,
// and tail probabilities of the rescaled sausage extents.
ConditionReport check_S(const GraphFactory& factory, MarkLaw mark_law,
                        const std::vector<std::size_t>& n_grid,
                        const std::vector<std::size_t>& K_grid, std::size_t replicas,
                        double eps, std::uint64_t master_seed, int workers);

// Shape/length/embedding functionals of the rescaled reduced skeletons
// against the matched continuum tree sampler.
ConditionReport check_G(const GraphFactory& factory, MarkLaw mark_law,
                        const std::vector<std::size_t>& n_grid, std::size_t K,
                        std::size_t replicas, std::uint64_t master_seed, int workers,
                        std::size_t crt_steps = 4096, double p_floor = 0.01);

// Self-normalized volume discrepancy of one skeleton:
// sup_x | nu_hat lambda(desc x) - mu(desc x) | with nu_hat the total measure
// mass over n, lambda the normalized length measure, mu the projected volume
// over n. Evaluated at vertices and at upper edge ends.
struct VolumeDiscrepancy {
    bool valid = false;
    double sup_disc = 0;
    double nu_hat = 0;
};
VolumeDiscrepancy skeleton_volume_discrepancy(const SkeletonTree& tree, std::size_t n);

// Uniform volume distribution over the skeleton.
ConditionReport check_V(const GraphFactory& factory, MarkLaw mark_law,
                        const std::vector<std::size_t>& n_grid,
                        const std::vector<std::size_t>& K_grid, std::size_t replicas,
                        std::uint64_t master_seed, int workers);

// Resistance-to-distance ratio between the root and the first mark.
ConditionReport check_R(const GraphFactory& factory, MarkLaw mark_law,
                        const std::vector<std::size_t>& n_grid, std::size_t replicas,
                        std::uint64_t master_seed, int workers);

// Covering check: the projections of the first K' marks touch every edge of
// the reduced K-skeleton, and neighboring projections have representatives
// within `delta` in the K'-skeleton metric (same units as the tree metric).
bool check_delta_dense(const RootedGraph& g, const CutDecomposition& cuts,
                       const SkeletonTree& tree_K, const std::vector<Vertex>& marks_K,
                       const std::vector<Vertex>& marks_Kprime, double delta);

} // namespace critwalk
