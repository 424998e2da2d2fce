#include "critwalk/cuts.hpp"

#include <algorithm>

namespace critwalk {

namespace {

struct EdgeAdj {
    std::vector<std::uint32_t> off;
    std::vector<Vertex> to;
    std::vector<std::uint32_t> eid;
};

EdgeAdj build_edge_adj(const RootedGraph& g) {
    EdgeAdj a;
    const auto& edges = g.edges();
    a.off.assign(g.num_vertices() + 1, 0);
    for (const auto& [u, v] : edges) {
        ++a.off[u + 1];
        ++a.off[v + 1];
    }
    for (std::size_t i = 1; i < a.off.size(); ++i) a.off[i] += a.off[i - 1];
    a.to.resize(2 * edges.size());
    a.eid.resize(2 * edges.size());
    std::vector<std::uint32_t> fill(a.off.begin(), a.off.end() - 1);
    for (std::uint32_t e = 0; e < std::uint32_t(edges.size()); ++e) {
        auto [u, v] = edges[e];
        a.to[fill[u]] = v;
        a.eid[fill[u]++] = e;
        a.to[fill[v]] = u;
        a.eid[fill[v]++] = e;
    }
    return a;
}

} // namespace

CutDecomposition find_cut_decomposition(const RootedGraph& g) {
    const std::size_t n = g.num_vertices();
    const Vertex root = g.root();
    CutDecomposition out;
    out.is_cut_point.assign(n, 0);
    out.anc.assign(n, root);

    EdgeAdj adj = build_edge_adj(g);

    // Iterative DFS with an edge stack: each biconnected block pops as one
    // batch whose attach point is the shallowest vertex; single-edge blocks
    // are the bridges. anc[v] = attach point of v's entry block, i.e. the
    // nearest strict separator of v from the root.
    std::vector<std::int32_t> disc(n, -1), low(n, 0);
    std::vector<std::uint32_t> it(n, 0), parent_edge(n, UINT32_MAX);
    std::vector<Vertex> stack;
    std::vector<std::uint32_t> edge_stack;
    std::vector<std::uint8_t> is_bridge(g.num_edges(), 0);
    std::int32_t timer = 0;

    stack.push_back(root);
    disc[root] = low[root] = timer++;
    it[root] = adj.off[root];
    while (!stack.empty()) {
        Vertex u = stack.back();
        if (it[u] < adj.off[u + 1]) {
            std::uint32_t k = it[u]++;
            Vertex w = adj.to[k];
            std::uint32_t e = adj.eid[k];
            if (e == parent_edge[u]) continue;
            if (disc[w] < 0) {
                edge_stack.push_back(e);
                disc[w] = low[w] = timer++;
                parent_edge[w] = e;
                it[w] = adj.off[w];
                stack.push_back(w);
            } else if (disc[w] < disc[u]) {
                edge_stack.push_back(e);
                low[u] = std::min(low[u], disc[w]);
            }
        } else {
            stack.pop_back();
            if (stack.empty()) break;
            Vertex p = stack.back();
            low[p] = std::min(low[p], low[u]);
            if (low[u] >= disc[p]) {
                // Pop the block ending at tree edge (p, u); attach point p.
                std::uint32_t entry = parent_edge[u];
                std::size_t count = 0;
                while (true) {
                    std::uint32_t f = edge_stack.back();
                    edge_stack.pop_back();
                    ++count;
                    auto [a, b] = g.edges()[f];
                    if (parent_edge[a] == f) out.anc[a] = p;
                    if (parent_edge[b] == f) out.anc[b] = p;
                    if (f == entry) break;
                }
                if (count == 1 && low[u] > disc[p]) {
                    is_bridge[entry] = 1;
                    out.is_cut_point[p] = 1;
                }
            }
        }
    }

    for (std::uint32_t e = 0; e < std::uint32_t(g.num_edges()); ++e) {
        if (!is_bridge[e]) continue;
        auto [u, v] = g.edges()[e];
        out.bridge_edges.push_back(e);
        out.bridge_cut_point.push_back(disc[u] < disc[v] ? u : v);
    }
    for (Vertex v = 0; v < n; ++v)
        if (out.is_cut_point[v]) out.cut_points.push_back(v);

    // Bubbles: components after removing bridges.
    out.bubble_of.assign(n, UINT32_MAX);
    std::vector<Vertex> queue;
    std::uint32_t nb = 0;
    for (Vertex s = 0; s < n; ++s) {
        if (out.bubble_of[s] != UINT32_MAX) continue;
        out.bubble_of[s] = nb;
        queue.assign(1, s);
        while (!queue.empty()) {
            Vertex u = queue.back();
            queue.pop_back();
            for (std::uint32_t k = adj.off[u]; k < adj.off[u + 1]; ++k) {
                if (is_bridge[adj.eid[k]]) continue;
                Vertex w = adj.to[k];
                if (out.bubble_of[w] == UINT32_MAX) {
                    out.bubble_of[w] = nb;
                    queue.push_back(w);
                }
            }
        }
        ++nb;
    }
    out.num_bubbles = nb;
    out.root_bubble = out.bubble_of[root];
    return out;
}

std::vector<Vertex> project_last_cut(const RootedGraph& g, const CutDecomposition& cuts,
                                     const std::vector<std::uint8_t>& in_set,
                                     Vertex fallback) {
    const std::size_t n = g.num_vertices();
    const Vertex root = g.root();
    // f(v): first selected vertex at or above v along the separator chain.
    const Vertex kUnset = Vertex(n);
    std::vector<Vertex> f(n, kUnset);
    std::vector<Vertex> path;
    for (Vertex v0 = 0; v0 < n; ++v0) {
        if (f[v0] != kUnset) continue;
        Vertex v = v0;
        path.clear();
        while (f[v] == kUnset) {
            if (in_set[v]) {
                f[v] = v;
                break;
            }
            if (v == root) {
                f[v] = fallback;
                break;
            }
            path.push_back(v);
            v = cuts.anc[v];
        }
        Vertex val = f[v];
        for (Vertex u : path) f[u] = val;
    }

    std::vector<Vertex> pi(n);
    for (Vertex v = 0; v < n; ++v)
        pi[v] = (v == root) ? fallback : f[cuts.anc[v]];
    return pi;
}

std::vector<Vertex> separating_cut_points(const RootedGraph& g,
                                          const CutDecomposition& cuts, Vertex target) {
    std::vector<Vertex> rev;
    Vertex v = target;
    while (v != g.root()) {
        v = cuts.anc[v];
        if (cuts.is_cut_point[v]) rev.push_back(v);
    }
    std::reverse(rev.begin(), rev.end());
    if (cuts.is_cut_point[target]) rev.push_back(target);
    return rev;
}

} // namespace critwalk
