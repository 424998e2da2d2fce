#pragma once

#include "critwalk/crt.hpp"
#include "critwalk/rng.hpp"
#include "critwalk/spatial_tree.hpp"

namespace critwalk {

// Brownian embedding of a finite tree with edge lengths: the root goes to the
// origin and each coordinate evolves as an independent standard Brownian
// motion in the length parameter, children sharing the parent value at
// branch points. Sampled on a grid of about `grid_per_unit` points per unit
// length (edge endpoints always exact).
ReducedSpatialTree embed_gaussian(const ReducedSpatialTree& shape, int dim, Rng& rng,
                                  double grid_per_unit = 64.0);

// Excursion -> K uniform marks -> reduced tree -> Gaussian embedding.
ReducedSpatialTree sample_kise(std::size_t K, std::size_t n_steps, int dim, Rng& rng,
                               double grid_per_unit = 64.0);

} // namespace critwalk
