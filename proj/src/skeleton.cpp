#include "critwalk/skeleton.hpp"
#include "critwalk/linsolve.hpp"
#include "critwalk/resistance.hpp"

#include <json.hpp>

#include <algorithm>
#include <cmath>
#include <functional>
#include <limits>
#include <map>
#include <sstream>

namespace critwalk {

// ---------------------------------------------------------------------------
// ReducedSpatialTree

void ReducedSpatialTree::point_on_edge(std::uint32_t v, double s, double* out) const {
    const auto& ss = poly_s[v];
    const auto& pp = poly_pts[v];
    if (ss.size() == 1 || s <= ss.front()) {
        for (int i = 0; i < dim; ++i) out[i] = pp[i];
        return;
    }
    if (s >= ss.back()) {
        const double* last = pp.data() + pp.size() - dim;
        for (int i = 0; i < dim; ++i) out[i] = last[i];
        return;
    }
    auto it = std::upper_bound(ss.begin(), ss.end(), s);
    std::size_t hi = std::size_t(it - ss.begin());
    std::size_t lo = hi - 1;
    double t = (ss[hi] > ss[lo]) ? (s - ss[lo]) / (ss[hi] - ss[lo]) : 0.0;
    for (int i = 0; i < dim; ++i)
        out[i] = (1.0 - t) * pp[lo * dim + i] + t * pp[hi * dim + i];
}

double ReducedSpatialTree::total_length() const {
    double acc = 0;
    for (double l : length) acc += l;
    return acc;
}

double ReducedSpatialTree::depth(std::uint32_t v) const {
    double acc = 0;
    while (parent[v] >= 0) {
        acc += length[v];
        v = std::uint32_t(parent[v]);
    }
    return acc;
}

double ReducedSpatialTree::distance(std::uint32_t a, std::uint32_t b) const {
    std::vector<std::uint32_t> pa;
    for (std::uint32_t v = a;; v = std::uint32_t(parent[v])) {
        pa.push_back(v);
        if (parent[v] < 0) break;
    }
    std::vector<std::uint8_t> on_path(num_vertices(), 0);
    for (auto v : pa) on_path[v] = 1;
    double db = 0;
    std::uint32_t v = b;
    while (!on_path[v]) {
        db += length[v];
        v = std::uint32_t(parent[v]);
    }
    double da = 0;
    for (std::uint32_t u = a; u != v; u = std::uint32_t(parent[u])) da += length[u];
    return da + db;
}

std::size_t ReducedSpatialTree::num_leaves() const {
    std::size_t k = 0;
    for (const auto& c : children) k += c.empty();
    return k;
}

namespace {

struct SortKey {
    std::vector<double> coord;  // min embedded leaf point, empty if none
    std::int32_t label = std::numeric_limits<std::int32_t>::max();
    std::uint32_t index = 0;

    bool operator<(const SortKey& o) const {
        if (coord != o.coord) return coord < o.coord;
        if (label != o.label) return label < o.label;
        return index < o.index;
    }
};

} // namespace

void ReducedSpatialTree::canonicalize() {
    const std::size_t m = num_vertices();
    std::vector<SortKey> key(m);

    // Post-order: children before parents.
    std::vector<std::uint32_t> order;
    order.reserve(m);
    {
        std::vector<std::uint32_t> stack = {0};
        while (!stack.empty()) {
            std::uint32_t v = stack.back();
            stack.pop_back();
            order.push_back(v);
            for (auto c : children[v]) stack.push_back(c);
        }
        std::reverse(order.begin(), order.end());
    }

    for (std::uint32_t v : order) {
        SortKey k;
        k.index = v;
        for (auto l : labels[v]) k.label = std::min(k.label, l);
        if (has_embedding() && children[v].empty()) {
            k.coord.assign(point(v), point(v) + dim);
        }
        for (auto c : children[v]) {
            const auto& ck = key[c];
            if (!ck.coord.empty() && (k.coord.empty() || ck.coord < k.coord))
                k.coord = ck.coord;
            k.label = std::min(k.label, ck.label);
            k.index = std::min(k.index, ck.index);
        }
        key[v] = std::move(k);
    }
    for (auto& cs : children)
        std::sort(cs.begin(), cs.end(),
                  [&](std::uint32_t a, std::uint32_t b) { return key[a] < key[b]; });
}

std::string ReducedSpatialTree::shape_signature() const {
    std::string out;
    std::function<void(std::uint32_t)> rec = [&](std::uint32_t v) {
        if (!children[v].empty()) {
            out += '(';
            bool first = true;
            for (auto c : children[v]) {
                if (!first) out += ',';
                first = false;
                rec(c);
            }
            out += ')';
        }
        auto ls = labels[v];
        std::sort(ls.begin(), ls.end());
        if (!ls.empty()) {
            out += 'L';
            for (std::size_t i = 0; i < ls.size(); ++i) {
                if (i) out += '+';
                out += std::to_string(ls[i]);
            }
        } else {
            out += '.';
        }
    };
    rec(0);
    return out;
}

std::string ReducedSpatialTree::to_newick() const {
    std::ostringstream os;
    os.precision(17);
    std::function<void(std::uint32_t)> rec = [&](std::uint32_t v) {
        if (!children[v].empty()) {
            os << '(';
            bool first = true;
            for (auto c : children[v]) {
                if (!first) os << ',';
                first = false;
                rec(c);
            }
            os << ')';
        }
        os << 'v' << v;
        auto ls = labels[v];
        std::sort(ls.begin(), ls.end());
        for (auto l : ls) os << '|' << l;
        if (parent[v] >= 0) {
            os << ':' << length[v];
            if (resistance[v] >= 0) os << "[r=" << resistance[v] << ']';
        }
    };
    rec(0);
    os << ";\n";
    if (has_embedding()) {
        for (std::uint32_t v = 0; v < num_vertices(); ++v) {
            os << "# coord " << v;
            const double* p = point(v);
            for (int i = 0; i < dim; ++i) os << ' ' << p[i];
            os << "\n";
        }
    }
    return os.str();
}

std::string ReducedSpatialTree::to_json() const {
    nlohmann::json j;
    j["dim"] = dim;
    j["root"] = 0;
    nlohmann::json verts = nlohmann::json::array();
    for (std::uint32_t v = 0; v < num_vertices(); ++v) {
        nlohmann::json jv;
        jv["id"] = v;
        jv["kind"] = labels[v].empty() ? (children[v].empty() ? "leaf" : "branch") : "mark";
        jv["labels"] = labels[v];
        if (parent[v] >= 0) {
            jv["parent"] = parent[v];
            jv["len"] = length[v];
            if (resistance[v] >= 0) jv["res"] = resistance[v];
        }
        if (has_embedding()) {
            nlohmann::json pos = nlohmann::json::array();
            for (int i = 0; i < dim; ++i) pos.push_back(point(v)[i]);
            jv["pos"] = pos;
        }
        verts.push_back(jv);
    }
    j["vertices"] = verts;
    return j.dump(2);
}

// ---------------------------------------------------------------------------
// Selected skeleton graph

std::uint32_t SelectedSkeletonGraph::local_index(Vertex v) const {
    auto it = std::lower_bound(vertices.begin(), vertices.end(), v);
    if (it == vertices.end() || *it != v) throw SkeletonError("vertex is not selected");
    return std::uint32_t(it - vertices.begin());
}

SelectedSkeletonGraph build_selected_skeleton(const RootedGraph& g,
                                              const CutDecomposition& cuts,
                                              const std::vector<Vertex>& marks_in) {
    if (marks_in.empty()) throw SkeletonError("empty mark set");
    SelectedSkeletonGraph sk;
    {
        std::vector<std::uint8_t> seen(g.num_vertices(), 0);
        for (Vertex m : marks_in) {
            if (m >= g.num_vertices() || !cuts.is_cut_point[m])
                throw SkeletonError("mark is not a cut-point");
            if (!seen[m]) {
                seen[m] = 1;
                sk.marks.push_back(m);
            }
        }
    }

    std::vector<std::uint8_t> selected(g.num_vertices(), 0);
    for (Vertex m : sk.marks)
        for (Vertex c : separating_cut_points(g, cuts, m)) selected[c] = 1;
    sk.root_star = separating_cut_points(g, cuts, sk.marks[0]).front();

    for (Vertex v = 0; v < g.num_vertices(); ++v)
        if (selected[v]) sk.vertices.push_back(v);
    const std::size_t ns = sk.vertices.size();

    // Adjacency: s ~ t iff some path joins them through non-cut vertices.
    sk.adjacency.assign(ns, {});
    {
        std::vector<std::uint32_t> epoch(g.num_vertices(), 0);
        std::uint32_t cur = 0;
        std::vector<Vertex> queue, touched;
        for (std::size_t i = 0; i < ns; ++i) {
            Vertex s = sk.vertices[i];
            ++cur;
            queue.assign(1, s);
            epoch[s] = cur;
            touched.clear();
            while (!queue.empty()) {
                Vertex u = queue.back();
                queue.pop_back();
                for (Vertex w : g.neighbors(u)) {
                    if (epoch[w] == cur) continue;
                    epoch[w] = cur;
                    if (cuts.is_cut_point[w])
                        touched.push_back(w);
                    else
                        queue.push_back(w);
                }
            }
            for (Vertex w : touched)
                if (selected[w] && w != s) sk.adjacency[i].push_back(sk.local_index(w));
            std::sort(sk.adjacency[i].begin(), sk.adjacency[i].end());
        }
    }

    // Parent in the cut-point tree: last selected cut-point strictly before.
    auto pi = project_last_cut(g, cuts, selected, sk.root_star);
    sk.parent_local.assign(ns, 0);
    std::uint32_t root_local = sk.local_index(sk.root_star);
    for (std::size_t i = 0; i < ns; ++i) {
        Vertex v = sk.vertices[i];
        if (v == sk.root_star) {
            sk.parent_local[i] = std::uint32_t(i);
            continue;
        }
        std::uint32_t p = sk.local_index(pi[v]);
        sk.parent_local[i] = p;
        if (!std::binary_search(sk.adjacency[i].begin(), sk.adjacency[i].end(), p))
            sk.parents_adjacent = false;
    }
    (void)root_local;

    // Sibling groups: children of one vertex joined through one bubble.
    {
        std::vector<std::vector<std::uint32_t>> kids(ns);
        for (std::size_t i = 0; i < ns; ++i)
            if (sk.parent_local[i] != i) kids[sk.parent_local[i]].push_back(std::uint32_t(i));
        std::vector<std::uint32_t> uf(ns);
        std::function<std::uint32_t(std::uint32_t)> find = [&](std::uint32_t a) {
            while (uf[a] != a) a = uf[a] = uf[uf[a]];
            return a;
        };
        for (std::size_t p = 0; p < ns; ++p) {
            auto& c = kids[p];
            if (c.empty()) continue;
            for (auto a : c) uf[a] = a;
            for (std::size_t ia = 0; ia < c.size(); ++ia)
                for (std::size_t ib = ia + 1; ib < c.size(); ++ib)
                    if (std::binary_search(sk.adjacency[c[ia]].begin(),
                                           sk.adjacency[c[ia]].end(), c[ib]))
                        uf[find(c[ia])] = find(c[ib]);
            std::map<std::uint32_t, std::vector<std::uint32_t>> comp;
            for (auto a : c) comp[find(a)].push_back(a);
            for (auto& [r, members] : comp) {
                SelectedSkeletonGraph::Group gr;
                gr.parent_local = std::uint32_t(p);
                gr.members = members;
                std::sort(gr.members.begin(), gr.members.end());
                gr.bubble_id = cuts.bubble_of[sk.vertices[gr.members[0]]];
                sk.groups.push_back(std::move(gr));
            }
        }
        std::sort(sk.groups.begin(), sk.groups.end(),
                  [](const auto& a, const auto& b) {
                      if (a.parent_local != b.parent_local) return a.parent_local < b.parent_local;
                      return a.members < b.members;
                  });
    }
    return sk;
}

bool is_asymptotically_tree_like(const SelectedSkeletonGraph& sk) {
    if (!sk.parents_adjacent) return false;
    for (const auto& gr : sk.groups)
        if (gr.members.size() > 2) return false;
    return true;
}

// ---------------------------------------------------------------------------
// Star-triangle expansion

namespace {

// Induced subgraph on the sausage below x (vertices projecting to x) plus x.
struct Region {
    RootedGraph graph;
    std::vector<Vertex> to_global;
    std::vector<std::int32_t> to_local;  // sized like g, -1 outside

    Region(const RootedGraph& g, const std::vector<Vertex>& members, Vertex x)
        : to_local(g.num_vertices(), -1) {
        to_global.push_back(x);
        for (Vertex u : members)
            if (u != x) to_global.push_back(u);
        std::sort(to_global.begin(), to_global.end());
        to_global.erase(std::unique(to_global.begin(), to_global.end()), to_global.end());
        for (std::size_t i = 0; i < to_global.size(); ++i)
            to_local[to_global[i]] = std::int32_t(i);
        std::vector<std::pair<Vertex, Vertex>> edges;
        for (Vertex u : to_global)
            for (Vertex w : g.neighbors(u))
                if (w > u && to_local[w] >= 0)
                    edges.emplace_back(Vertex(to_local[u]), Vertex(to_local[w]));
        graph = RootedGraph(to_global.size(), std::move(edges), Vertex(to_local[x]));
    }
};

} // namespace

SkeletonTree expand_star_triangle(const RootedGraph& g, const CutDecomposition& cuts,
                                  const SelectedSkeletonGraph& sk) {
    if (!is_asymptotically_tree_like(sk))
        throw SkeletonError("selected skeleton is not asymptotically tree-like");

    const std::size_t ns = sk.vertices.size();
    SkeletonTree t;
    t.n_vstar = ns;
    t.dim = g.dim();

    // Tree ids: 0 = root*, then the other selected vertices in ascending
    // graph order, then star centers in group order.
    std::uint32_t root_local = sk.local_index(sk.root_star);
    std::vector<std::uint32_t> tree_of_local(ns);
    t.graph_vertex.reserve(ns);
    t.graph_vertex.push_back(sk.root_star);
    tree_of_local[root_local] = 0;
    for (std::uint32_t i = 0, next = 1; i < ns; ++i) {
        if (i == root_local) continue;
        tree_of_local[i] = next++;
        t.graph_vertex.push_back(sk.vertices[i]);
    }

    const std::size_t n_stars = [&] {
        std::size_t k = 0;
        for (const auto& gr : sk.groups) k += gr.members.size() == 2;
        return k;
    }();
    const std::size_t nt = ns + n_stars;
    t.parent.assign(nt, -1);
    t.len_to_parent.assign(nt, 0.0);
    t.res_to_parent.assign(nt, 0.0);
    t.estar.assign(nt, 0);
    t.children.assign(nt, {});
    t.embedding.assign(nt * std::size_t(t.dim), 0.0);
    t.graph_vertex.resize(nt, UINT32_MAX);

    t.tree_index_of.assign(g.num_vertices(), UINT32_MAX);
    for (std::uint32_t i = 0; i < ns; ++i)
        t.tree_index_of[sk.vertices[i]] = tree_of_local[i];

    if (g.has_locations()) {
        for (std::uint32_t tv = 0; tv < ns; ++tv) {
            auto loc = g.location(t.graph_vertex[tv]);
            for (int d = 0; d < t.dim; ++d)
                t.embedding[std::size_t(tv) * t.dim + d] = double(loc[d]);
        }
    }

    // Graph-level projection onto the selected set.
    std::vector<std::uint8_t> selected(g.num_vertices(), 0);
    for (Vertex v : sk.vertices) selected[v] = 1;
    auto pi_sel = project_last_cut(g, cuts, selected, sk.root_star);

    t.pi_tree.assign(g.num_vertices(), 0);
    for (Vertex v = 0; v < g.num_vertices(); ++v)
        t.pi_tree[v] = t.tree_index_of[pi_sel[v]];

    // Sausage members per selected vertex (projecting strictly below it).
    std::vector<std::vector<Vertex>> below(ns);
    for (Vertex v = 0; v < g.num_vertices(); ++v)
        if (pi_sel[v] != v) below[sk.local_index(pi_sel[v])].push_back(v);

    // Group groups by parent so each region is built and factored once.
    std::uint32_t next_star = std::uint32_t(ns);
    std::size_t gi = 0;
    while (gi < sk.groups.size()) {
        std::size_t gj = gi;
        while (gj < sk.groups.size() &&
               sk.groups[gj].parent_local == sk.groups[gi].parent_local)
            ++gj;
        std::uint32_t pl = sk.groups[gi].parent_local;
        Vertex px = sk.vertices[pl];
        std::uint32_t pt = tree_of_local[pl];

        Region region(g, below[pl], px);
        const Vertex rx = Vertex(region.to_local[px]);
        ResistanceSolver rsolve(region.graph);

        for (std::size_t k = gi; k < gj; ++k) {
            const auto& gr = sk.groups[k];
            if (gr.members.size() == 1) {
                std::uint32_t yl = gr.members[0];
                Vertex gy = sk.vertices[yl];
                Vertex ry = Vertex(region.to_local[gy]);
                std::uint32_t yt = tree_of_local[yl];
                t.parent[yt] = std::int32_t(pt);
                t.len_to_parent[yt] = double(region.graph.distance(rx, ry));
                t.res_to_parent[yt] = rsolve.resistance(rx, ry);
                t.estar[yt] = 1;
            } else {
                std::uint32_t yl = gr.members[0], zl = gr.members[1];
                Vertex gy = sk.vertices[yl], gz = sk.vertices[zl];
                Vertex ry = Vertex(region.to_local[gy]), rz = Vertex(region.to_local[gz]);
                std::uint32_t yt = tree_of_local[yl], zt = tree_of_local[zl];

                auto dy = region.graph.bfs_distances(ry);
                double dxy = dy[rx], dyz = dy[rz];
                double dxz = double(region.graph.distance(rx, rz));

                double arm_x = (dxy + dxz - dyz) / 2.0;
                double arm_y = (dxy + dyz - dxz) / 2.0;
                double arm_z = (dxz + dyz - dxy) / 2.0;
                if (arm_x < 0 || arm_y < 0 || arm_z < 0)
                    throw SkeletonError("negative corner length in triangle expansion");

                auto cond = triangle_arm_conductances(region.graph, rx, ry, rz);
                double R_xy = 1.0 / cond.c_xy, R_yz = 1.0 / cond.c_yz, R_zx = 1.0 / cond.c_zx;
                double denom = R_xy + R_yz + R_zx;
                double res_x = R_xy * R_zx / denom;
                double res_y = R_xy * R_yz / denom;
                double res_z = R_zx * R_yz / denom;

                std::uint32_t st = next_star++;
                t.parent[st] = std::int32_t(pt);
                t.len_to_parent[st] = arm_x;
                t.res_to_parent[st] = res_x;
                t.parent[yt] = std::int32_t(st);
                t.len_to_parent[yt] = arm_y;
                t.res_to_parent[yt] = res_y;
                t.parent[zt] = std::int32_t(st);
                t.len_to_parent[zt] = arm_z;
                t.res_to_parent[zt] = res_z;

                for (int d = 0; d < t.dim; ++d)
                    t.embedding[std::size_t(st) * t.dim + d] =
                        (t.embedding[std::size_t(pt) * t.dim + d] +
                         t.embedding[std::size_t(yt) * t.dim + d] +
                         t.embedding[std::size_t(zt) * t.dim + d]) / 3.0;
            }
        }
        gi = gj;
    }

    for (std::uint32_t v = 0; v < nt; ++v)
        if (t.parent[v] >= 0) t.children[std::uint32_t(t.parent[v])].push_back(v);
    for (auto& c : t.children) std::sort(c.begin(), c.end());

    t.measure = project_measure(g, cuts, t);

    // Sausage edge counts, each graph edge attributed once: to the deeper of
    // the two endpoint projections (a V* endpoint projects strictly above
    // itself, so its own-subtree edges land below it). Sums to |E(g)|.
    t.sausage_edges.assign(nt, 0);
    {
        std::vector<std::uint32_t> depth(nt, 0);
        std::vector<std::uint32_t> order = {0};
        for (std::size_t h = 0; h < order.size(); ++h)
            for (auto c : t.children[order[h]]) {
                depth[c] = depth[order[h]] + 1;
                order.push_back(c);
            }
        for (const auto& [u, v] : g.edges()) {
            std::uint32_t xu = t.pi_tree[u], xv = t.pi_tree[v];
            ++t.sausage_edges[depth[xu] >= depth[xv] ? xu : xv];
        }
    }
    return t;
}

std::vector<double> project_measure(const RootedGraph& g, const CutDecomposition& cuts,
                                    const SkeletonTree& tree) {
    (void)cuts;
    std::vector<double> v(tree.num_vertices(), 0.0);
    for (Vertex u = 0; u < g.num_vertices(); ++u) {
        std::uint32_t x = tree.pi_tree[u];
        // v(x) counts directed incidences (u, w) with pi(u) = x and u != x.
        if (tree.graph_vertex[x] == u) continue;
        v[x] += double(g.degree(u));
    }
    return v;
}

double SkeletonTree::depth_len(std::uint32_t t) const {
    double acc = 0;
    while (parent[t] >= 0) {
        acc += len_to_parent[t];
        t = std::uint32_t(parent[t]);
    }
    return acc;
}

double SkeletonTree::depth_res(std::uint32_t t) const {
    double acc = 0;
    while (parent[t] >= 0) {
        acc += res_to_parent[t];
        t = std::uint32_t(parent[t]);
    }
    return acc;
}

double SkeletonTree::total_res_length() const {
    double acc = 0;
    for (std::size_t v = 0; v < num_vertices(); ++v)
        if (parent[v] >= 0) acc += res_to_parent[v];
    return acc;
}

// ---------------------------------------------------------------------------
// Reduction

ReducedSpatialTree reduce_skeleton(const SkeletonTree& tree, const std::vector<Vertex>& marks) {
    const std::size_t nt = tree.num_vertices();
    std::vector<std::uint32_t> mark_tv;
    std::vector<std::vector<std::int32_t>> mark_labels(nt);
    {
        std::vector<std::uint8_t> seen(nt, 0);
        for (std::size_t i = 0; i < marks.size(); ++i) {
            std::uint32_t tv = tree.tree_index_of[marks[i]];
            if (tv == UINT32_MAX) throw SkeletonError("mark is not a skeleton vertex");
            mark_labels[tv].push_back(std::int32_t(i));
            if (!seen[tv]) {
                seen[tv] = 1;
                mark_tv.push_back(tv);
            }
        }
    }

    std::vector<std::uint32_t> passes(nt, 0);
    for (std::uint32_t m : mark_tv) {
        std::uint32_t v = m;
        while (true) {
            ++passes[v];
            if (tree.parent[v] < 0) break;
            v = std::uint32_t(tree.parent[v]);
        }
    }
    std::vector<std::uint32_t> marked_children(nt, 0);
    for (std::uint32_t v = 0; v < nt; ++v)
        if (tree.parent[v] >= 0 && passes[v] > 0)
            ++marked_children[std::uint32_t(tree.parent[v])];

    std::vector<std::uint8_t> keep(nt, 0);
    keep[0] = 1;
    for (std::uint32_t m : mark_tv) keep[m] = 1;
    for (std::uint32_t v = 0; v < nt; ++v)
        if (marked_children[v] >= 2) keep[v] = 1;
    // Only vertices on root->mark paths matter.
    for (std::uint32_t v = 0; v < nt; ++v)
        if (keep[v] && passes[v] == 0 && v != 0) keep[v] = 0;

    ReducedSpatialTree out;
    out.dim = tree.dim;
    std::vector<std::int32_t> new_id(nt, -1);
    for (std::uint32_t v = 0; v < nt; ++v) {
        if (!keep[v]) continue;
        new_id[v] = std::int32_t(out.parent.size());
        out.parent.push_back(-1);
        out.length.push_back(0.0);
        out.resistance.push_back(0.0);
        out.labels.push_back(mark_labels[v]);
        out.poly_s.push_back({0.0});
        out.poly_pts.push_back(std::vector<double>(tree.point(v), tree.point(v) + tree.dim));
    }
    out.children.assign(out.parent.size(), {});

    for (std::uint32_t v = 0; v < nt; ++v) {
        if (!keep[v] || v == 0) continue;
        // Climb to the nearest kept ancestor, accumulating geometry.
        std::vector<std::uint32_t> path = {v};
        std::uint32_t a = v;
        double len = 0, res = 0;
        do {
            len += tree.len_to_parent[a];
            res += tree.res_to_parent[a];
            a = std::uint32_t(tree.parent[a]);
            path.push_back(a);
        } while (!keep[a]);

        std::uint32_t rv = std::uint32_t(new_id[v]), ra = std::uint32_t(new_id[a]);
        out.parent[rv] = std::int32_t(ra);
        out.length[rv] = len;
        out.resistance[rv] = res;
        out.children[ra].push_back(rv);

        // Polyline from the ancestor end through the dropped vertices.
        std::reverse(path.begin(), path.end());
        std::vector<double> ss, pts;
        double s = 0;
        for (std::size_t i = 0; i < path.size(); ++i) {
            if (i) s += tree.len_to_parent[path[i]];
            ss.push_back(s);
            const double* p = tree.point(path[i]);
            pts.insert(pts.end(), p, p + tree.dim);
        }
        out.poly_s[rv] = std::move(ss);
        out.poly_pts[rv] = std::move(pts);
    }

    out.canonicalize();
    return out;
}

// ---------------------------------------------------------------------------
// Sausage diameters

SausageDiameters sausage_diameters(const RootedGraph& g, const SkeletonTree& tree,
                                   std::size_t exact_cap) {
    SausageDiameters out;
    const std::size_t nt = tree.num_vertices();
    std::vector<std::vector<Vertex>> members(nt);
    for (Vertex u = 0; u < g.num_vertices(); ++u) members[tree.pi_tree[u]].push_back(u);
    for (std::uint32_t x = 0; x < tree.n_vstar; ++x) {
        Vertex anchor = tree.graph_vertex[x];
        auto& mem = members[x];
        if (std::find(mem.begin(), mem.end(), anchor) == mem.end()) mem.push_back(anchor);
    }

    const int d = g.dim();
    const int patterns = 1 << (d - 1);
    std::vector<std::uint8_t> allowed(g.num_vertices(), 0);

    for (std::uint32_t x = 0; x < tree.n_vstar; ++x) {
        const auto& mem = members[x];
        if (mem.size() < 2) continue;

        if (g.has_locations()) {
            for (int p = 0; p < patterns; ++p) {
                std::int64_t mn = std::numeric_limits<std::int64_t>::max();
                std::int64_t mx = std::numeric_limits<std::int64_t>::min();
                for (Vertex u : mem) {
                    auto loc = g.location(u);
                    std::int64_t s = loc[0];
                    for (int i = 1; i < d; ++i)
                        s += ((p >> (i - 1)) & 1) ? -loc[i] : loc[i];
                    mn = std::min(mn, s);
                    mx = std::max(mx, s);
                }
                out.delta_zd = std::max(out.delta_zd, mx - mn);
            }
        }

        for (Vertex u : mem) allowed[u] = 1;
        auto far_from = [&](Vertex s) -> std::pair<Vertex, std::int32_t> {
            auto dist = g.bfs_distances_within(s, allowed);
            Vertex best = s;
            std::int32_t bd = 0;
            for (Vertex u : mem)
                if (dist[u] > bd) {
                    bd = dist[u];
                    best = u;
                }
            return {best, bd};
        };
        if (mem.size() <= exact_cap) {
            for (Vertex u : mem) {
                auto dist = g.bfs_distances_within(u, allowed);
                for (Vertex w : mem)
                    out.delta_intrinsic = std::max(out.delta_intrinsic, dist[w]);
            }
        } else {
            auto [a, d1] = far_from(mem[0]);
            auto [b, d2] = far_from(a);
            (void)b;
            out.delta_intrinsic = std::max(out.delta_intrinsic, std::max(d1, d2));
        }
        for (Vertex u : mem) allowed[u] = 0;
    }
    return out;
}

SkeletonTree build_skeleton_tree(const RootedGraph& g, const CutDecomposition& cuts,
                                 const std::vector<Vertex>& marks) {
    return expand_star_triangle(g, cuts, build_selected_skeleton(g, cuts, marks));
}

std::string skeleton_to_json(const SkeletonTree& tree) {
    nlohmann::json j;
    j["n_vstar"] = tree.n_vstar;
    j["dim"] = tree.dim;
    j["root"] = 0;
    nlohmann::json verts = nlohmann::json::array();
    for (std::uint32_t v = 0; v < tree.num_vertices(); ++v) {
        nlohmann::json jv;
        jv["id"] = v;
        jv["kind"] = tree.is_vstar(v) ? "cut" : "star";
        if (tree.is_vstar(v)) jv["graph_vertex"] = tree.graph_vertex[v];
        if (tree.parent[v] >= 0) {
            jv["parent"] = tree.parent[v];
            jv["len"] = tree.len_to_parent[v];
            jv["res"] = tree.res_to_parent[v];
            jv["estar"] = bool(tree.estar[v]);
        }
        jv["measure"] = tree.measure.empty() ? 0.0 : tree.measure[v];
        nlohmann::json pos = nlohmann::json::array();
        for (int d = 0; d < tree.dim; ++d) pos.push_back(tree.point(v)[d]);
        jv["pos"] = pos;
        verts.push_back(jv);
    }
    j["vertices"] = verts;
    return j.dump(2);
}

} // namespace critwalk
