#include "critwalk/crt.hpp"

#include <algorithm>
#include <numeric>
#include <stdexcept>

namespace critwalk {

namespace {

struct Node {
    double depth = 0;
    std::vector<std::int32_t> labels;
    std::vector<std::size_t> kids;  // indices into the node pool
};

struct Builder {
    std::vector<Node> pool;
    double tol;

    std::size_t leaf(double depth, std::int32_t label) {
        pool.push_back({depth, {label}, {}});
        return pool.size() - 1;
    }

    // Join two subtrees at a branch of the given depth; subtrees whose root
    // sits at the branch depth are absorbed into the branch vertex.
    std::size_t join(double depth, std::size_t a, std::size_t b) {
        pool.push_back({depth, {}, {}});
        std::size_t j = pool.size() - 1;
        absorb(j, a);
        absorb(j, b);
        return j;
    }

    void absorb(std::size_t parent, std::size_t child) {
        if (pool[child].depth <= pool[parent].depth + tol) {
            auto labs = pool[child].labels;
            auto kids = pool[child].kids;
            for (auto l : labs) pool[parent].labels.push_back(l);
            for (auto k : kids) pool[parent].kids.push_back(k);
        } else {
            pool[parent].kids.push_back(child);
        }
    }

    // Range [lo,hi] of time-sorted marks with depths h and valleys v
    // (v[i] = min of the excursion between marks i and i+1).
    std::size_t build(const std::vector<double>& h, const std::vector<double>& v,
                      const std::vector<std::int32_t>& lab, std::size_t lo, std::size_t hi) {
        if (lo == hi) return leaf(h[lo], lab[lo]);
        std::size_t m = lo;
        for (std::size_t i = lo + 1; i < hi; ++i)
            if (v[i] < v[m]) m = i;
        std::size_t left = build(h, v, lab, lo, m);
        std::size_t right = build(h, v, lab, m + 1, hi);
        return join(v[m], left, right);
    }
};

} // namespace

ReducedSpatialTree reduce_crt(const Excursion& exc, const std::vector<double>& marks,
                              double merge_tol) {
    if (marks.empty()) throw std::invalid_argument("reduce_crt: no marks");
    for (double s : marks)
        if (s < 0.0 || s > 1.0) throw std::out_of_range("mark outside [0,1]");

    std::vector<std::size_t> order(marks.size());
    std::iota(order.begin(), order.end(), 0);
    std::sort(order.begin(), order.end(),
              [&](std::size_t a, std::size_t b) { return marks[a] < marks[b]; });

    const std::size_t K = marks.size();
    std::vector<double> h(K), valley(K, 0.0);
    std::vector<std::int32_t> lab(K);
    for (std::size_t i = 0; i < K; ++i) {
        h[i] = exc.value(marks[order[i]]);
        lab[i] = std::int32_t(order[i]);
    }
    for (std::size_t i = 0; i + 1 < K; ++i)
        valley[i + 1] = exc.min_on(marks[order[i]], marks[order[i + 1]]);
    // valley[i] guards the join between i-1 and i; shift the layout used by
    // Builder::build which expects v[i] between marks i and i+1.
    std::vector<double> v(K, 0.0);
    for (std::size_t i = 0; i + 1 < K; ++i) v[i] = valley[i + 1];

    Builder b;
    b.tol = merge_tol;
    std::size_t top = b.build(h, v, lab, 0, K - 1);

    // Attach the root at depth 0.
    b.pool.push_back({0.0, {}, {}});
    std::size_t root = b.pool.size() - 1;
    b.absorb(root, top);

    // Flatten the pool into a ReducedSpatialTree (root first, then DFS).
    ReducedSpatialTree out;
    out.dim = 0;
    std::vector<double> depth_of;
    std::vector<std::pair<std::size_t, std::int32_t>> stack = {{root, -1}};
    while (!stack.empty()) {
        auto [node, parent_id] = stack.back();
        stack.pop_back();
        std::int32_t id = std::int32_t(out.parent.size());
        const Node& nd = b.pool[node];
        out.parent.push_back(parent_id);
        out.length.push_back(0.0);
        out.resistance.push_back(0.0);
        out.labels.push_back(nd.labels);
        out.poly_s.push_back({});
        out.poly_pts.push_back({});
        out.children.push_back({});
        depth_of.push_back(nd.depth);
        if (parent_id >= 0) {
            out.children[std::size_t(parent_id)].push_back(std::uint32_t(id));
            double len = nd.depth - depth_of[std::size_t(parent_id)];
            out.length[std::size_t(id)] = len;
            out.resistance[std::size_t(id)] = len;
        }
        for (auto it = nd.kids.rbegin(); it != nd.kids.rend(); ++it)
            stack.emplace_back(*it, id);
    }

    out.canonicalize();
    return out;
}

} // namespace critwalk
