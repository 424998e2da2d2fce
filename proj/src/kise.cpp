#include "critwalk/kise.hpp"

#include <cmath>
#include <stdexcept>

namespace critwalk {

ReducedSpatialTree embed_gaussian(const ReducedSpatialTree& shape, int dim, Rng& rng,
                                  double grid_per_unit) {
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    ReducedSpatialTree out = shape;
    out.dim = dim;
    const std::size_t m = out.num_vertices();
    out.poly_s.assign(m, {});
    out.poly_pts.assign(m, {});

    out.poly_s[0] = {0.0};
    out.poly_pts[0].assign(std::size_t(dim), 0.0);

    // Parents first (vertex order from the builders already satisfies this,
    // but derive an explicit order to be safe).
    std::vector<std::uint32_t> order = {0};
    for (std::size_t h = 0; h < order.size(); ++h)
        for (auto c : shape.children[order[h]]) order.push_back(c);

    for (std::uint32_t v : order) {
        if (shape.parent[v] < 0) continue;
        const double len = shape.length[v];
        const double* start = out.point(std::uint32_t(shape.parent[v]));
        std::vector<double> base(start, start + dim);

        std::size_t pieces = std::max<std::size_t>(1, std::size_t(std::ceil(len * grid_per_unit)));
        double dt = len / double(pieces);
        double sd = std::sqrt(std::max(dt, 0.0));
        auto& ss = out.poly_s[v];
        auto& pp = out.poly_pts[v];
        ss.resize(pieces + 1);
        pp.resize((pieces + 1) * std::size_t(dim));
        for (int i = 0; i < dim; ++i) pp[std::size_t(i)] = base[std::size_t(i)];
        ss[0] = 0.0;
        for (std::size_t k = 1; k <= pieces; ++k) {
            ss[k] = double(k) * dt;
            for (int i = 0; i < dim; ++i)
                pp[k * std::size_t(dim) + std::size_t(i)] =
                    pp[(k - 1) * std::size_t(dim) + std::size_t(i)] + sd * normal01(rng);
        }
        ss[pieces] = len;
    }

    out.canonicalize();
    return out;
}

ReducedSpatialTree sample_kise(std::size_t K, std::size_t n_steps, int dim, Rng& rng,
                               double grid_per_unit) {
    if (K < 1) throw std::invalid_argument("K must be >= 1");
    Excursion exc = sample_normalized_excursion(n_steps, rng);
    std::vector<double> marks(K);
    for (auto& s : marks) s = uniform01(rng);
    ReducedSpatialTree shape = reduce_crt(exc, marks);
    return embed_gaussian(shape, dim, rng, grid_per_unit);
}

} // namespace critwalk
