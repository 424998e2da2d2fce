#pragma once

#include "critwalk/cuts.hpp"
#include "critwalk/graph.hpp"
#include "critwalk/rng.hpp"

#include <string>

namespace critwalk {

enum class OffspringLaw { geometric_half, poisson_one, binary_half };
enum class MarkLaw { uniform_cut_points, uniform_vertices_projected };
enum class ModelFamily { gw_tree, brw_trace };

struct ModelSpec {
    ModelFamily family = ModelFamily::gw_tree;
    std::size_t n = 1000;
    OffspringLaw offspring = OffspringLaw::geometric_half;
    int dim = 1;
    MarkLaw marks = MarkLaw::uniform_cut_points;

    // Offspring variance (the laws are critical by construction).
    double offspring_variance() const;
};

ModelSpec parse_model_spec(const std::string& family, std::size_t n,
                           const std::string& offspring, int dim, const std::string& marks);

// Conditioned critical Galton-Watson plane tree with exactly n vertices
// (cycle-lemma rotation of an exactly-conditioned increment sequence).
// Locations are a lattice embedding of the tree by unit steps along edges
// (dimension `dim`), so intrinsic and spatial statistics are both available.
RootedGraph gen_gw_tree(std::size_t n, OffspringLaw law, Rng& rng, int dim = 1);

// Trace of the tree's lattice embedding: vertices are the distinct lattice
// points visited, edges the lattice edges traversed, root at the origin.
RootedGraph gen_brw_trace(const RootedGraph& tree, int dim, Rng& rng);

// Model entry point: the augmented graph of the chosen family.
RootedGraph sample_model_graph(const ModelSpec& spec, Rng& rng);

// I.i.d. marks supported on cut-points: uniform over cut-points, or uniform
// over vertices projected to the last separating cut-point.
std::vector<Vertex> sample_marks(const RootedGraph& g, const CutDecomposition& cuts,
                                 std::size_t count, MarkLaw law, Rng& rng);

// Corpus generators for sweeps and tests.

// Random recursive tree plus extra random edges; connected and simple.
RootedGraph random_connected_graph(std::size_t n, std::size_t extra_edges, Rng& rng);

// Tree of small bubbles: a random tree whose edges are independently
// inflated into short cycles and whose junctions occasionally become
// triangle bubbles. Rich in cut-points; selections are usually tree-like.
RootedGraph random_bubbly_graph(std::size_t n_tree, double bubble_prob, Rng& rng);

} // namespace critwalk
