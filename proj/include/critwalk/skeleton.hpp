#pragma once

#include "critwalk/cuts.hpp"
#include "critwalk/graph.hpp"
#include "critwalk/spatial_tree.hpp"

#include <string>
#include <vector>

namespace critwalk {

struct SkeletonError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

// Cut-points on the root->mark paths with the bubble-induced adjacency.
struct SelectedSkeletonGraph {
    std::vector<Vertex> vertices;  // selected cut-points, sorted
    Vertex root_star = 0;
    std::vector<Vertex> marks;     // deduplicated, order kept

    // Local indices into `vertices`.
    std::vector<std::vector<std::uint32_t>> adjacency;
    std::vector<std::uint32_t> parent_local;  // self-index at root*

    // Sibling groups: children of one vertex connected through one bubble.
    struct Group {
        std::uint32_t parent_local;
        std::vector<std::uint32_t> members;  // local indices
        std::uint32_t bubble_id;
    };
    std::vector<Group> groups;

    // False when some selected vertex is not bubble-adjacent to its parent
    // cut-point (triangles sharing an edge, or a mark reachable only through
    // non-separating cut-points). Such selections cannot be expanded into a
    // tree and count as not tree-like.
    bool parents_adjacent = true;

    std::uint32_t local_index(Vertex v) const;
};

SelectedSkeletonGraph build_selected_skeleton(const RootedGraph& g,
                                              const CutDecomposition& cuts,
                                              const std::vector<Vertex>& marks);

// True iff every bubble clique has size <= 3 (segments and triangles only).
bool is_asymptotically_tree_like(const SelectedSkeletonGraph& sk);

// The skeleton tree: cut-points plus one star center per triangle, with the
// graph-distance metric, the conserved resistance metric, the lattice
// embedding and the projected volume measure.
struct SkeletonTree {
    // Tree vertex 0 is root*. Vertices [0, n_vstar) are cut-points, the rest
    // star centers.
    std::size_t n_vstar = 0;
    std::vector<Vertex> graph_vertex;           // per tree vertex; star centers UINT32_MAX
    std::vector<std::int32_t> parent;           // -1 at root
    std::vector<double> len_to_parent;          // graph-distance units
    std::vector<double> res_to_parent;          // ohms
    std::vector<std::uint8_t> estar;            // edge to parent has both ends in V*
    std::vector<std::vector<std::uint32_t>> children;

    int dim = 1;
    std::vector<double> embedding;              // num_vertices * dim

    std::vector<double> measure;                // v(x); zero on star centers

    // Projection of every graph vertex onto V* (tree indices); root bubble
    // maps to the root.
    std::vector<std::uint32_t> pi_tree;
    // Tree index of a cut-point's graph vertex; UINT32_MAX when unselected.
    std::vector<std::uint32_t> tree_index_of;

    // Edges of the graph with at least one endpoint projecting to x (and
    // different from x): the sausage edge count used by the commute-time
    // accounting. Indexed by tree vertex; 0 on star centers.
    std::vector<std::int64_t> sausage_edges;

    std::size_t num_vertices() const { return parent.size(); }
    bool is_vstar(std::uint32_t t) const { return t < n_vstar; }
    double depth_len(std::uint32_t t) const;
    double depth_res(std::uint32_t t) const;
    double total_res_length() const;  // over all edges, arms included

    const double* point(std::uint32_t t) const { return embedding.data() + std::size_t(t) * dim; }
};

// Star-triangle expansion of a tree-like selected skeleton. Computes edge
// lengths (graph distances; Gromov-product arm lengths at triangles), edge
// resistances (exact two-point resistances; triangle arms via the
// star-triangle formulas), the embedding (cut-points at their locations,
// star centers at triangle barycenters) and the projected measure.
SkeletonTree expand_star_triangle(const RootedGraph& g, const CutDecomposition& cuts,
                                  const SelectedSkeletonGraph& sk);

// v(x) = number of directed edge incidences (y,z) of g with pi(y) = x, y != x.
std::vector<double> project_measure(const RootedGraph& g, const CutDecomposition& cuts,
                                    const SkeletonTree& tree);

// Reduced tree spanned by root*, the marks, and the branch points they
// induce; edge lengths/resistances are path sums, the embedding is the
// restriction (polylines through the dropped vertices).
ReducedSpatialTree reduce_skeleton(const SkeletonTree& tree, const std::vector<Vertex>& marks);

struct SausageDiameters {
    std::int64_t delta_zd = 0;
    std::int32_t delta_intrinsic = 0;
};
// Maximal sausage extents: lattice (l1, exact) and intrinsic (exact on
// sausages of at most `exact_cap` vertices, double-sweep BFS beyond -- exact
// on trees either way).
SausageDiameters sausage_diameters(const RootedGraph& g, const SkeletonTree& tree,
                                   std::size_t exact_cap = 64);

// Convenience: full pipeline marks -> skeleton tree.
SkeletonTree build_skeleton_tree(const RootedGraph& g, const CutDecomposition& cuts,
                                 const std::vector<Vertex>& marks);

std::string skeleton_to_json(const SkeletonTree& tree);

} // namespace critwalk
