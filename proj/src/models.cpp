#include "critwalk/models.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>
#include <unordered_map>

namespace critwalk {

double ModelSpec::offspring_variance() const {
    switch (offspring) {
        case OffspringLaw::geometric_half: return 2.0;
        case OffspringLaw::poisson_one: return 1.0;
        case OffspringLaw::binary_half: return 1.0;
    }
    return 0.0;
}

ModelSpec parse_model_spec(const std::string& family, std::size_t n,
                           const std::string& offspring, int dim, const std::string& marks) {
    ModelSpec spec;
    if (family == "gw_tree")
        spec.family = ModelFamily::gw_tree;
    else if (family == "brw_trace")
        spec.family = ModelFamily::brw_trace;
    else
        throw std::invalid_argument("unknown model family: " + family);
    spec.n = n;
    if (offspring == "geometric")
        spec.offspring = OffspringLaw::geometric_half;
    else if (offspring == "poisson")
        spec.offspring = OffspringLaw::poisson_one;
    else if (offspring == "binary")
        spec.offspring = OffspringLaw::binary_half;
    else
        throw std::invalid_argument("unknown offspring law: " + offspring);
    if (dim < 1) throw std::invalid_argument("dimension must be >= 1");
    spec.dim = dim;
    if (marks == "uniform_cut_points")
        spec.marks = MarkLaw::uniform_cut_points;
    else if (marks == "uniform_vertices_projected")
        spec.marks = MarkLaw::uniform_vertices_projected;
    else
        throw std::invalid_argument("unknown mark law: " + marks);
    return spec;
}

namespace {

// Offspring counts conditioned on total n-1; exact per law.
std::vector<std::uint32_t> conditioned_offspring(std::size_t n, OffspringLaw law, Rng& rng) {
    const std::size_t m = n - 1;
    std::vector<std::uint32_t> xi(n, 0);
    switch (law) {
        case OffspringLaw::geometric_half: {
            // Conditioned sequence is uniform over weak compositions of m
            // into n parts: shuffle m stars among m + n - 1 slots.
            std::vector<std::uint8_t> slots(m + n - 1, 0);
            for (std::size_t i = 0; i < m; ++i) slots[i] = 1;
            std::shuffle(slots.begin(), slots.end(), rng);
            std::size_t part = 0;
            for (auto s : slots) {
                if (s)
                    ++xi[part];
                else
                    ++part;
            }
            break;
        }
        case OffspringLaw::poisson_one: {
            // Multinomial: m balls into n boxes.
            for (std::size_t i = 0; i < m; ++i) ++xi[uniform_below(rng, n)];
            break;
        }
        case OffspringLaw::binary_half: {
            if (m % 2 != 0)
                throw std::invalid_argument(
                    "binary offspring supports odd vertex counts only");
            std::vector<std::uint8_t> two(n, 0);
            for (std::size_t i = 0; i < m / 2; ++i) two[i] = 1;
            std::shuffle(two.begin(), two.end(), rng);
            for (std::size_t i = 0; i < n; ++i) xi[i] = two[i] ? 2 : 0;
            break;
        }
    }
    return xi;
}

} // namespace

RootedGraph gen_gw_tree(std::size_t n, OffspringLaw law, Rng& rng, int dim) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    if (dim < 1) throw std::invalid_argument("dim must be >= 1");
    if (n == 1)
        return RootedGraph(1, {}, 0, dim, std::vector<std::int64_t>(std::size_t(dim), 0));

    auto xi = conditioned_offspring(n, law, rng);

    // Cycle-lemma rotation at the first minimum of the walk sum(xi_i - 1).
    std::size_t argmin = 0;
    {
        std::int64_t w = 0, best = 1;
        for (std::size_t k = 0; k < n; ++k) {
            w += std::int64_t(xi[k]) - 1;
            if (w < best) {
                best = w;
                argmin = k + 1;  // start after the minimum
            }
        }
    }
    std::vector<std::uint32_t> cnt(n);
    for (std::size_t i = 0; i < n; ++i) cnt[i] = xi[(argmin + i) % n];

    // Plane tree from the preorder offspring counts.
    std::vector<std::pair<Vertex, Vertex>> edges;
    edges.reserve(n - 1);
    std::vector<std::uint32_t> remaining(n);
    std::vector<Vertex> stack = {0};
    remaining[0] = cnt[0];
    for (Vertex v = 1; v < n; ++v) {
        while (remaining[stack.back()] == 0) stack.pop_back();
        Vertex p = stack.back();
        edges.emplace_back(p, v);
        --remaining[p];
        remaining[v] = cnt[v];
        stack.push_back(v);
    }

    // Lattice embedding: unit uniform steps along edges from the origin.
    std::vector<std::int64_t> loc(n * std::size_t(dim), 0);
    // Edges were produced parent-before-child in preorder, so one pass works.
    for (const auto& [p, v] : edges) {
        std::size_t axis = uniform_below(rng, std::size_t(dim));
        std::int64_t sign = (rng() & 1ULL) ? 1 : -1;
        for (int i = 0; i < dim; ++i)
            loc[std::size_t(v) * dim + i] = loc[std::size_t(p) * dim + i];
        loc[std::size_t(v) * dim + std::ptrdiff_t(axis)] += sign;
    }

    return RootedGraph(n, std::move(edges), 0, dim, std::move(loc));
}

RootedGraph gen_brw_trace(const RootedGraph& tree, int dim, Rng& rng) {
    if (dim < 1) throw std::invalid_argument("dim must be >= 1");
    const std::size_t n = tree.num_vertices();

    // Fresh walk increments along the tree edges.
    std::vector<std::int64_t> loc(n * std::size_t(dim), 0);
    for (const auto& [p, v] : tree.edges()) {
        // Tree edges from gen_gw_tree are parent-before-child.
        std::size_t axis = uniform_below(rng, std::size_t(dim));
        std::int64_t sign = (rng() & 1ULL) ? 1 : -1;
        for (int i = 0; i < dim; ++i)
            loc[std::size_t(v) * dim + i] = loc[std::size_t(p) * dim + i];
        loc[std::size_t(v) * dim + std::ptrdiff_t(axis)] += sign;
    }

    // Collapse coincident lattice points.
    struct VecHash {
        std::size_t operator()(const std::vector<std::int64_t>& v) const {
            std::size_t h = 1469598103934665603ULL;
            for (auto x : v) {
                h ^= std::size_t(x) + 0x9e3779b97f4a7c15ULL + (h << 6) + (h >> 2);
            }
            return h;
        }
    };
    std::unordered_map<std::vector<std::int64_t>, Vertex, VecHash> point_id;
    point_id.reserve(n * 2);
    std::vector<Vertex> id_of(n);
    std::vector<std::int64_t> trace_loc;
    for (std::size_t v = 0; v < n; ++v) {
        std::vector<std::int64_t> key(loc.begin() + std::ptrdiff_t(v * dim),
                                      loc.begin() + std::ptrdiff_t((v + 1) * dim));
        auto [it, inserted] = point_id.try_emplace(key, Vertex(point_id.size()));
        if (inserted) trace_loc.insert(trace_loc.end(), key.begin(), key.end());
        id_of[v] = it->second;
    }

    std::vector<std::pair<Vertex, Vertex>> edges;
    edges.reserve(tree.num_edges());
    for (const auto& [p, v] : tree.edges()) {
        Vertex a = id_of[p], b = id_of[v];
        if (a == b) continue;  // cannot happen for unit steps, kept as a guard
        if (a > b) std::swap(a, b);
        edges.emplace_back(a, b);
    }
    std::sort(edges.begin(), edges.end());
    edges.erase(std::unique(edges.begin(), edges.end()), edges.end());

    return RootedGraph(point_id.size(), std::move(edges), id_of[tree.root()], dim,
                       std::move(trace_loc));
}

RootedGraph sample_model_graph(const ModelSpec& spec, Rng& rng) {
    if (spec.family == ModelFamily::gw_tree)
        return gen_gw_tree(spec.n, spec.offspring, rng, spec.dim);
    RootedGraph tree = gen_gw_tree(spec.n, spec.offspring, rng, spec.dim);
    return gen_brw_trace(tree, spec.dim, rng);
}

std::vector<Vertex> sample_marks(const RootedGraph& g, const CutDecomposition& cuts,
                                 std::size_t count, MarkLaw law, Rng& rng) {
    if (cuts.cut_points.empty()) throw GraphError("graph has no cut-points");
    std::vector<Vertex> marks(count);
    if (law == MarkLaw::uniform_cut_points) {
        for (auto& m : marks)
            m = cuts.cut_points[uniform_below(rng, cuts.cut_points.size())];
        return marks;
    }
    // Uniform vertex projected to its last separating cut-point; vertices in
    // the root bubble have none and are resampled.
    const Vertex sentinel = Vertex(g.num_vertices());
    auto pi = project_last_cut(g, cuts, cuts.is_cut_point, sentinel);
    for (auto& m : marks) {
        Vertex p = sentinel;
        while (p == sentinel) {
            Vertex u = Vertex(uniform_below(rng, g.num_vertices()));
            p = pi[u];
        }
        m = p;
    }
    return marks;
}

RootedGraph random_connected_graph(std::size_t n, std::size_t extra_edges, Rng& rng) {
    if (n < 1) throw std::invalid_argument("n must be >= 1");
    std::vector<std::pair<Vertex, Vertex>> edges;
    for (Vertex v = 1; v < n; ++v)
        edges.emplace_back(Vertex(uniform_below(rng, v)), v);
    std::size_t added = 0, attempts = 0;
    std::vector<std::pair<Vertex, Vertex>> sorted = edges;
    for (auto& [u, v] : sorted)
        if (u > v) std::swap(u, v);
    std::sort(sorted.begin(), sorted.end());
    while (n > 2 && added < extra_edges && attempts < 20 * extra_edges + 100) {
        ++attempts;
        Vertex u = Vertex(uniform_below(rng, n));
        Vertex v = Vertex(uniform_below(rng, n));
        if (u == v) continue;
        if (u > v) std::swap(u, v);
        if (std::binary_search(sorted.begin(), sorted.end(), std::make_pair(u, v))) continue;
        sorted.insert(std::lower_bound(sorted.begin(), sorted.end(), std::make_pair(u, v)),
                      {u, v});
        edges.emplace_back(u, v);
        ++added;
    }
    return RootedGraph(n, std::move(edges), 0);
}

RootedGraph random_bubbly_graph(std::size_t n_tree, double bubble_prob, Rng& rng) {
    if (n_tree < 2) throw std::invalid_argument("n_tree must be >= 2");
    // Random recursive tree.
    std::vector<Vertex> parent(n_tree, 0);
    for (Vertex v = 1; v < n_tree; ++v) parent[v] = Vertex(uniform_below(rng, v));

    std::vector<std::vector<Vertex>> kids(n_tree);
    for (Vertex v = 1; v < n_tree; ++v) kids[parent[v]].push_back(v);

    std::vector<std::pair<Vertex, Vertex>> edges;
    Vertex next = Vertex(n_tree);
    std::vector<std::uint8_t> junction(n_tree, 0);

    // Junction triangles: a branch vertex hands two of its children to the
    // corners of a small triangle bubble.
    for (Vertex v = 0; v < n_tree; ++v) {
        if (kids[v].size() >= 2 && uniform01(rng) < bubble_prob) {
            junction[v] = 1;
            Vertex a = next++, b = next++;
            edges.emplace_back(v, a);
            edges.emplace_back(a, b);
            edges.emplace_back(b, v);
            edges.emplace_back(a, kids[v][0]);
            edges.emplace_back(b, kids[v][1]);
            for (std::size_t k = 2; k < kids[v].size(); ++k)
                edges.emplace_back(v, kids[v][k]);
        } else {
            for (Vertex c : kids[v]) edges.emplace_back(v, c);
        }
    }

    // Inflate some remaining plain edges into short cycles.
    std::vector<std::pair<Vertex, Vertex>> out_edges;
    for (auto [u, v] : edges) {
        bool plain = u < n_tree && v < n_tree && parent[std::max(u, v)] == std::min(u, v);
        if (plain && !junction[std::min(u, v)] && uniform01(rng) < bubble_prob) {
            Vertex a = next++;
            out_edges.emplace_back(u, a);
            out_edges.emplace_back(a, v);
            if (uniform01(rng) < 0.5) {
                out_edges.emplace_back(u, v);  // triangle
            } else {
                Vertex b = next++;
                out_edges.emplace_back(u, b);  // four-cycle
                out_edges.emplace_back(b, v);
            }
        } else {
            out_edges.emplace_back(u, v);
        }
    }
    return RootedGraph(next, std::move(out_edges), 0);
}

} // namespace critwalk
