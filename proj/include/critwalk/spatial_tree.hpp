#pragma once

#include <cstdint>
#include <string>
#include <vector>

namespace critwalk {

// Finite rooted tree with ordered shape, per-edge lengths, optional per-edge
// resistances and a piecewise-linear embedding. Common currency for reduced
// skeletons and for reduced continuum trees with Gaussian embeddings.
//
// Vertex 0 is the root. Each non-root vertex stores the edge to its parent.
// The embedding of that edge is a polyline from the parent end (arclength 0)
// to the vertex end (arclength == length).
struct ReducedSpatialTree {
    int dim = 0;  // 0: no embedding

    std::vector<std::int32_t> parent;   // -1 at root
    std::vector<double> length;         // 0 at root
    std::vector<double> resistance;     // -1 when absent, 0 at root
    std::vector<std::vector<std::int32_t>> labels;  // mark indices per vertex
    std::vector<std::vector<std::uint32_t>> children;

    std::vector<std::vector<double>> poly_s;    // ascending arclengths
    std::vector<std::vector<double>> poly_pts;  // dim doubles per arclength

    std::size_t num_vertices() const { return parent.size(); }

    bool has_embedding() const { return dim > 0; }

    // Embedded point of a vertex (last polyline point).
    const double* point(std::uint32_t v) const {
        return poly_pts[v].data() + poly_pts[v].size() - dim;
    }

    // Embedded point at arclength s along the edge into v (linear between
    // polyline knots).
    void point_on_edge(std::uint32_t v, double s, double* out) const;

    double total_length() const;
    double depth(std::uint32_t v) const;  // length distance root -> v
    // Length distance between two vertices (path through the tree).
    double distance(std::uint32_t a, std::uint32_t b) const;

    std::size_t num_leaves() const;
    std::size_t degree(std::uint32_t v) const {
        return children[v].size() + (parent[v] >= 0 ? 1 : 0);
    }

    // Orders children canonically: by lexicographically smallest embedded
    // leaf point in the subtree when embedded, otherwise by smallest label,
    // with deterministic fallbacks. Comparisons across trees assume both are
    // canonicalized.
    void canonicalize();

    // Ordered shape plus labels, no lengths. Equal signatures == equal shape.
    std::string shape_signature() const;

    // Newick-like serialization with length/resistance annotations plus a
    // coordinate table (one line per vertex) appended after the tree line.
    std::string to_newick() const;

    // JSON document in the same tree schema the skeleton uses (vertices with
    // parent/len/res/kind/pos), plus labels.
    std::string to_json() const;
};

} // namespace critwalk
