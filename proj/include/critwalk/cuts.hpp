#pragma once

#include "critwalk/graph.hpp"

#include <vector>

namespace critwalk {

// Cut-bond / bubble decomposition of a rooted graph. A cut-bond is a bridge;
// its cut-point is the endpoint on the root side. Bubbles are the connected
// components left after removing every cut-bond.
//
// Also carries the block-cut structure: `anc[v]` is the nearest vertex (other
// than v) lying on every root->v path, i.e. the nearest strict separator.
// Iterating anc enumerates all of them down from the root. anc[root] = root.
struct CutDecomposition {
    // Per bridge: index into g.edges() and the root-side endpoint.
    std::vector<std::uint32_t> bridge_edges;
    std::vector<Vertex> bridge_cut_point;

    std::vector<std::uint8_t> is_cut_point;  // per vertex
    std::vector<Vertex> cut_points;          // sorted

    std::vector<std::uint32_t> bubble_of;    // per vertex
    std::size_t num_bubbles = 0;
    std::uint32_t root_bubble = 0;

    std::vector<Vertex> anc;                 // nearest strict separator

    bool empty() const { return bridge_edges.empty(); }
};

CutDecomposition find_cut_decomposition(const RootedGraph& g);

// Last selected cut-point crossed strictly before reaching each vertex from
// the root. `in_set` flags the selected cut-points; vertices with no selected
// separator (the root bubble, in particular) map to `fallback`.
std::vector<Vertex> project_last_cut(const RootedGraph& g, const CutDecomposition& cuts,
                                     const std::vector<std::uint8_t>& in_set,
                                     Vertex fallback);

// Cut-points separating `target` from the root, ordered from the root;
// `target` itself is appended when it is a cut-point.
std::vector<Vertex> separating_cut_points(const RootedGraph& g,
                                          const CutDecomposition& cuts, Vertex target);

} // namespace critwalk
