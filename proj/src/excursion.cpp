#include "critwalk/excursion.hpp"

#include <algorithm>
#include <cmath>

namespace critwalk {

double Excursion::value(double t) const {
    const std::size_t n = steps();
    if (t < 0.0 || t > 1.0) throw std::out_of_range("excursion time outside [0,1]");
    double x = t * double(n);
    std::size_t k = std::min(std::size_t(x), n - 1);
    double frac = x - double(k);
    return (1.0 - frac) * heights[k] + frac * heights[k + 1];
}

double Excursion::min_on(double a, double b) const {
    if (a > b) std::swap(a, b);
    const std::size_t n = steps();
    double m = std::min(value(a), value(b));
    std::size_t lo = std::size_t(std::ceil(a * double(n)));
    std::size_t hi = std::size_t(std::floor(b * double(n)));
    for (std::size_t k = lo; k <= hi && k <= n; ++k) m = std::min(m, heights[k]);
    return m;
}

Excursion sample_normalized_excursion(std::size_t n_steps, Rng& rng) {
    if (n_steps < 2 || n_steps % 2 != 0)
        throw std::invalid_argument("n_steps must be even and >= 2");
    std::vector<std::int8_t> inc(n_steps);
    for (std::size_t i = 0; i < n_steps; ++i) inc[i] = (i < n_steps / 2) ? 1 : -1;
    std::shuffle(inc.begin(), inc.end(), rng);

    std::vector<std::int32_t> w(n_steps + 1, 0);
    for (std::size_t i = 0; i < n_steps; ++i) w[i + 1] = w[i] + inc[i];

    std::size_t argmin = 0;
    for (std::size_t i = 1; i < n_steps; ++i)
        if (w[i] < w[argmin]) argmin = i;

    Excursion exc;
    exc.heights.resize(n_steps + 1);
    const double scale = 1.0 / std::sqrt(double(n_steps));
    for (std::size_t k = 0; k <= n_steps; ++k) {
        std::size_t idx = (argmin + k) % n_steps;
        exc.heights[k] = double(w[idx] - w[argmin]) * scale;
    }
    exc.heights[n_steps] = 0.0;
    return exc;
}

double tree_distance(const Excursion& exc, double s, double t) {
    return exc.value(s) + exc.value(t) - 2.0 * exc.min_on(s, t);
}

double mrca_depth(const Excursion& exc, double s, double t) {
    return exc.min_on(s, t);
}

} // namespace critwalk
