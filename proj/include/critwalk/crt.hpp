#pragma once

#include "critwalk/excursion.hpp"
#include "critwalk/spatial_tree.hpp"

namespace critwalk {

// Reduced subtree of the real tree coded by `exc`, spanned by the root and
// the points coded by `marks`. Shape and lengths only (no embedding);
// resistances are set equal to lengths. Marks whose tree points coincide
// (within `merge_tol` in the coded metric) share a vertex.
ReducedSpatialTree reduce_crt(const Excursion& exc, const std::vector<double>& marks,
                              double merge_tol = 1e-12);

} // namespace critwalk
