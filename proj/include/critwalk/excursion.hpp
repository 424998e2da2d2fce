#pragma once

#include "critwalk/rng.hpp"

#include <cstddef>
#include <stdexcept>
#include <vector>

namespace critwalk {

// Nonnegative piecewise-linear path on the uniform grid of [0,1] with zero
// endpoints; codes a real tree through d(s,t) = g(s)+g(t)-2 min_[s,t] g.
struct Excursion {
    std::vector<double> heights;  // n+1 values

    std::size_t steps() const { return heights.size() - 1; }

    double value(double t) const;
    // Minimum over [a,b] (linear interpolation between grid points).
    double min_on(double a, double b) const;
};

// Discrete approximation of the normalized Brownian excursion: simple
// random walk bridge conditioned nonnegative by rotation at the first
// minimum, heights rescaled by 1/sqrt(n_steps). n_steps must be even, >= 2.
Excursion sample_normalized_excursion(std::size_t n_steps, Rng& rng);

// d_g(s,t); throws if s or t is outside [0,1].
double tree_distance(const Excursion& exc, double s, double t);

// Depth of the most recent common ancestor of the points coded by s and t.
double mrca_depth(const Excursion& exc, double s, double t);

} // namespace critwalk
