#include "critwalk/tree_bm.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

namespace critwalk {

MetricTree MetricTree::from_skeleton(const SkeletonTree& t, MetricChoice metric,
                                     MeasureChoice measure) {
    MetricTree out;
    out.parent.assign(t.parent.begin(), t.parent.end());
    out.metric_len.resize(t.num_vertices(), 0.0);
    out.measure_len.resize(t.num_vertices(), 0.0);
    for (std::size_t v = 0; v < t.num_vertices(); ++v) {
        if (t.parent[v] < 0) continue;
        out.metric_len[v] =
            metric == MetricChoice::length ? t.len_to_parent[v] : t.res_to_parent[v];
        out.measure_len[v] =
            measure == MeasureChoice::lebesgue_length ? t.len_to_parent[v] : t.res_to_parent[v];
    }
    return out;
}

MetricTree MetricTree::from_reduced(const ReducedSpatialTree& t, MetricChoice metric,
                                    MeasureChoice measure) {
    MetricTree out;
    out.parent.assign(t.parent.begin(), t.parent.end());
    out.metric_len.resize(t.num_vertices(), 0.0);
    out.measure_len.resize(t.num_vertices(), 0.0);
    for (std::size_t v = 0; v < t.num_vertices(); ++v) {
        if (t.parent[v] < 0) continue;
        double res = t.resistance[v] >= 0 ? t.resistance[v] : t.length[v];
        out.metric_len[v] = metric == MetricChoice::length ? t.length[v] : res;
        out.measure_len[v] = measure == MeasureChoice::lebesgue_length ? t.length[v] : res;
    }
    return out;
}

MetricTreeNet::MetricTreeNet(const MetricTree& tree, double h) : tree_(tree), h_(h) {
    const std::size_t n = tree.num_vertices();
    if (h <= 0) throw std::invalid_argument("h must be positive");
    for (std::size_t v = 0; v < n; ++v) {
        if (tree.parent[v] < 0) continue;
        if (tree.metric_len[v] <= 0)
            throw std::invalid_argument("zero-length edge in metric tree");
        if (h >= tree.metric_len[v])
            throw std::invalid_argument("h too large for the shortest edge");
        total_metric_ += tree.metric_len[v];
    }

    orig_site_.resize(n);
    mid_site_.assign(n, UINT32_MAX);
    for (std::uint32_t v = 0; v < n; ++v) {
        orig_site_[v] = std::uint32_t(site_orig_.size());
        site_orig_.push_back(v);
    }

    // Subdivide each edge; gather links (site a, site b, conductance,
    // measure of the piece).
    struct Link {
        std::uint32_t a, b;
        double cond, mass;
    };
    std::vector<Link> links;
    double total_mass = 0;
    for (std::uint32_t v = 0; v < n; ++v) {
        if (tree.parent[v] < 0) continue;
        std::uint32_t p = std::uint32_t(tree.parent[v]);
        double len = tree.metric_len[v];
        std::size_t pieces = std::size_t(std::ceil(len / h));
        double plen = len / double(pieces);
        double pmass = tree.measure_len[v] / double(pieces);
        total_mass += tree.measure_len[v];

        std::uint32_t prev = orig_site_[p];
        std::uint32_t mid_index = std::uint32_t(pieces / 2);
        for (std::size_t k = 1; k <= pieces; ++k) {
            std::uint32_t cur;
            if (k == pieces) {
                cur = orig_site_[v];
            } else {
                cur = std::uint32_t(site_orig_.size());
                site_orig_.push_back(UINT32_MAX);
            }
            links.push_back({prev, cur, 1.0 / plen, pmass});
            if (k == mid_index || (pieces == 1 && k == 1)) mid_site_[v] = cur;
            prev = cur;
        }
        if (mid_site_[v] == UINT32_MAX) mid_site_[v] = orig_site_[v];
    }

    const std::size_t S = site_orig_.size();
    site_measure_.assign(S, 0.0);
    std::vector<double> cond_sum(S, 0.0);
    std::vector<std::uint32_t> deg(S, 0);
    for (const auto& l : links) {
        site_measure_[l.a] += 0.5 * l.mass;
        site_measure_[l.b] += 0.5 * l.mass;
        cond_sum[l.a] += l.cond;
        cond_sum[l.b] += l.cond;
        ++deg[l.a];
        ++deg[l.b];
    }
    for (auto& m : site_measure_) m /= total_mass;

    holding_.resize(S);
    for (std::size_t s = 0; s < S; ++s)
        holding_[s] = 2.0 * site_measure_[s] / cond_sum[s];

    nbr_off_.assign(S + 1, 0);
    for (std::size_t s = 0; s < S; ++s) nbr_off_[s + 1] = nbr_off_[s] + deg[s];
    nbr_to_.resize(2 * links.size());
    nbr_cum_.resize(2 * links.size());
    std::vector<std::uint32_t> fill(nbr_off_.begin(), nbr_off_.end() - 1);
    std::vector<double> w(2 * links.size());
    for (const auto& l : links) {
        nbr_to_[fill[l.a]] = l.b;
        w[fill[l.a]++] = l.cond;
        nbr_to_[fill[l.b]] = l.a;
        w[fill[l.b]++] = l.cond;
    }
    for (std::size_t s = 0; s < S; ++s) {
        double acc = 0;
        for (std::uint32_t k = nbr_off_[s]; k < nbr_off_[s + 1]; ++k) {
            acc += w[k] / cond_sum[s];
            nbr_cum_[k] = acc;
        }
        if (nbr_off_[s + 1] > nbr_off_[s]) nbr_cum_[nbr_off_[s + 1] - 1] = 1.0;
    }
}

std::uint32_t MetricTreeNet::sample_jump(std::uint32_t s, Rng& rng) const {
    double u = uniform01(rng);
    std::uint32_t lo = nbr_off_[s], hi = nbr_off_[s + 1];
    // Degrees are tiny; linear scan.
    for (std::uint32_t k = lo; k < hi; ++k)
        if (u <= nbr_cum_[k]) return nbr_to_[k];
    return nbr_to_[hi - 1];
}

TreeDiffusionPath simulate(const MetricTreeNet& net, double t_max, Rng& rng,
                           std::uint32_t start_site) {
    TreeDiffusionPath path;
    std::uint32_t s = start_site;
    double t = 0;
    path.sites.push_back(s);
    path.times.push_back(0.0);
    while (t < t_max) {
        t += net.holding_time(s);
        s = net.sample_jump(s, rng);
        path.sites.push_back(s);
        path.times.push_back(t);
    }
    path.t_end = t;
    return path;
}

namespace {

struct CrossingTracker {
    const MetricTreeNet& net;
    std::uint32_t last_orig = UINT32_MAX;
    LocalTimeField& f;

    void visit(std::uint32_t site) {
        std::uint32_t ov = net.orig_of_site(site);
        if (ov == UINT32_MAX) return;
        if (ov != last_orig) {
            if (last_orig != UINT32_MAX) {
                const auto& tree = net.tree();
                if (tree.parent[ov] == std::int32_t(last_orig)) {
                    ++f.cross_right[ov];
                    ++f.cross_total[ov];
                } else if (tree.parent[last_orig] == std::int32_t(ov)) {
                    ++f.cross_left[last_orig];
                    ++f.cross_total[last_orig];
                }
            }
            ++f.vertex_visits[ov];
            last_orig = ov;
        }
    }
};

} // namespace

LocalTimeField local_times(const TreeDiffusionPath& path, const MetricTreeNet& net) {
    LocalTimeField f;
    const std::size_t S = net.num_sites(), n = net.num_orig();
    f.site_local_time.assign(S, 0.0);
    f.cross_total.assign(n, 0);
    f.cross_right.assign(n, 0);
    f.cross_left.assign(n, 0);
    f.vertex_visits.assign(n, 0);

    CrossingTracker tracker{net, UINT32_MAX, f};
    std::vector<double> occ(S, 0.0);
    for (std::size_t k = 0; k < path.sites.size(); ++k) {
        std::uint32_t s = path.sites[k];
        // Occupied time at the site (the last visit has no recorded holding).
        if (k + 1 < path.times.size()) occ[s] += path.times[k + 1] - path.times[k];
        tracker.visit(s);
    }
    f.t_total = path.t_end;
    for (std::size_t s = 0; s < S; ++s)
        f.site_local_time[s] = occ[s] / net.site_measure(s);
    return f;
}

LocalTimeField run_local_times(const MetricTreeNet& net, double t_max, Rng& rng,
                               std::uint32_t start_site) {
    LocalTimeField f;
    const std::size_t S = net.num_sites(), n = net.num_orig();
    f.site_local_time.assign(S, 0.0);
    f.cross_total.assign(n, 0);
    f.cross_right.assign(n, 0);
    f.cross_left.assign(n, 0);
    f.vertex_visits.assign(n, 0);

    CrossingTracker tracker{net, UINT32_MAX, f};
    std::vector<double> occ(S, 0.0);
    std::uint32_t s = start_site;
    double t = 0;
    while (t < t_max) {
        tracker.visit(s);
        occ[s] += net.holding_time(s);
        t += net.holding_time(s);
        s = net.sample_jump(s, rng);
    }
    f.t_total = t;
    for (std::size_t i = 0; i < S; ++i) f.site_local_time[i] = occ[i] / net.site_measure(i);
    return f;
}

CrossingEstimates crossing_local_time_estimate(const LocalTimeField& field,
                                               const MetricTreeNet& net) {
    CrossingEstimates out;
    const auto& tree = net.tree();
    const std::size_t n = net.num_orig();
    out.edge_estimate.assign(n, 0.0);
    out.edge_gap.assign(n, 0.0);
    out.vertex_estimate.assign(n, -1.0);
    out.vertex_gap.assign(n, 0.0);

    std::vector<std::uint32_t> child_count(n, 0);
    for (std::size_t v = 0; v < n; ++v)
        if (tree.parent[v] >= 0) ++child_count[std::size_t(tree.parent[v])];

    for (std::uint32_t v = 0; v < n; ++v) {
        if (tree.parent[v] < 0) continue;
        double est = tree.metric_len[v] * double(field.cross_total[v]);
        out.edge_estimate[v] = est;
        double mid = field.site_local_time[net.midpoint_site(v)];
        out.edge_gap[v] = std::abs(est - mid);
        out.sup_edge_gap = std::max(out.sup_edge_gap, out.edge_gap[v]);
    }

    for (std::uint32_t v = 0; v < n; ++v) {
        // Interior vertex: exactly one child and a parent.
        if (tree.parent[v] < 0 || child_count[v] != 1) continue;
        std::uint32_t c = UINT32_MAX;
        for (std::uint32_t w = 0; w < n; ++w)
            if (tree.parent[w] == std::int32_t(v)) { c = w; break; }
        double r_minus = tree.metric_len[v], r_plus = tree.metric_len[c];
        double r_vert = r_minus * r_plus / (r_minus + r_plus);
        double est = 2.0 * r_vert * double(field.vertex_visits[v]);
        out.vertex_estimate[v] = est;
        double at_v = field.site_local_time[net.site_of_orig(v)];
        out.vertex_gap[v] = std::abs(est - at_v);
        out.sup_vertex_gap = std::max(out.sup_vertex_gap, out.vertex_gap[v]);
    }
    return out;
}

HitResult simulate_until_hit(const MetricTreeNet& net, std::uint32_t start_site,
                             const std::vector<std::uint32_t>& targets, Rng& rng,
                             std::uint64_t max_steps) {
    std::vector<std::uint8_t> is_target(net.num_sites(), 0);
    for (auto t : targets) is_target[t] = 1;
    HitResult r;
    std::uint32_t s = start_site;
    double t = 0;
    std::uint64_t k = 0;
    while (!is_target[s] && k < max_steps) {
        t += net.holding_time(s);
        s = net.sample_jump(s, rng);
        ++k;
    }
    r.site = s;
    r.time = t;
    r.steps = k;
    return r;
}

} // namespace critwalk
