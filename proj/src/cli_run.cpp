#include "critwalk/cli.hpp"
#include "critwalk/conditions.hpp"
#include "critwalk/ensemble.hpp"
#include "critwalk/hitting.hpp"
#include "critwalk/kise.hpp"
#include "critwalk/report.hpp"
#include "critwalk/resistance.hpp"
#include "critwalk/stats.hpp"
#include "critwalk/tree_bm.hpp"
#include "critwalk/walks.hpp"

#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>

namespace critwalk::cli {

namespace {

using nlohmann::json;

struct ConfigError : std::runtime_error {
    using std::runtime_error::runtime_error;
};

void require_keys(const json& cfg, const std::set<std::string>& allowed) {
    for (auto it = cfg.begin(); it != cfg.end(); ++it)
        if (!allowed.count(it.key()))
            throw ConfigError("unknown config key: " + it.key());
}

template <class T>
T get_or(const json& cfg, const std::string& key, T def) {
    if (!cfg.contains(key)) return def;
    return cfg.at(key).get<T>();
}

std::vector<std::size_t> get_grid(const json& cfg, const std::string& key,
                                  std::vector<std::size_t> def) {
    if (!cfg.contains(key)) return def;
    return cfg.at(key).get<std::vector<std::size_t>>();
}

struct Ctx {
    json cfg;
    std::string out;
    std::uint64_t seed = 0;
    int workers = 1;
    std::string hash;

    std::string path(const std::string& name) const { return out + "/" + name; }

    json meta() const {
        json m;
        m["config_hash"] = hash;
        m["seed"] = seed;
        m["workers"] = workers;
        m["tool_version"] = "critwalk 0.1";
        return m;
    }
};

ModelSpec model_from(const json& cfg) {
    return parse_model_spec(get_or<std::string>(cfg, "family", "gw_tree"),
                            get_or<std::size_t>(cfg, "n", 1000),
                            get_or<std::string>(cfg, "offspring", "geometric"),
                            get_or<int>(cfg, "dim", 1),
                            get_or<std::string>(cfg, "marks", "uniform_cut_points"));
}

void append_report_rows(CsvTable& t, const ConditionReport& rep) {
    for (const auto& r : rep.rows)
        t.add_row({std::string(1, rep.condition), std::to_string(r.n), std::to_string(r.K),
                   r.stat, format_double(r.value)});
}

json report_summary(const ConditionReport& rep) {
    json j;
    j["condition"] = std::string(1, rep.condition);
    j["verdict"] = rep.verdict;
    j["constants"] = rep.constants;
    j["p_values"] = rep.p_values;
    j["note"] = rep.note;
    return j;
}

// ---------------------------------------------------------------------------

int cmd_generate(const Ctx& ctx) {
    require_keys(ctx.cfg, {"family", "n", "offspring", "dim", "marks", "count"});
    ModelSpec spec = model_from(ctx.cfg);
    std::size_t count = get_or<std::size_t>(ctx.cfg, "count", 1);

    json files = json::array();
    for (std::size_t i = 0; i < count; ++i) {
        Rng rng = make_rng(replica_seed(ctx.seed, i));
        RootedGraph g = sample_model_graph(spec, rng);
        char name[64];
        std::snprintf(name, sizeof(name), "graph_%03zu.edg", i);
        save_edge_list(ctx.path(name), g);
        json f;
        f["file"] = name;
        f["vertices"] = g.num_vertices();
        f["edges"] = g.num_edges();
        files.push_back(f);
    }
    json summary = ctx.meta();
    summary["graphs"] = files;
    write_text_file(ctx.path("generate_summary.json"), summary.dump(2) + "\n");
    return 0;
}

int cmd_skeleton(const Ctx& ctx) {
    require_keys(ctx.cfg, {"family", "n", "offspring", "dim", "marks", "K", "input"});
    std::size_t K = get_or<std::size_t>(ctx.cfg, "K", 4);

    Rng rng = make_rng(replica_seed(ctx.seed, 0));
    RootedGraph g = ctx.cfg.contains("input")
                        ? load_edge_list(ctx.cfg.at("input").get<std::string>())
                        : sample_model_graph(model_from(ctx.cfg), rng);

    auto cuts = find_cut_decomposition(g);
    json summary = ctx.meta();
    summary["vertices"] = g.num_vertices();
    summary["edges"] = g.num_edges();
    summary["cut_points"] = cuts.cut_points.size();
    if (cuts.cut_points.empty()) {
        summary["tree_like"] = false;
        summary["note"] = "no cut-points; skeleton undefined";
        write_text_file(ctx.path("skeleton_summary.json"), summary.dump(2) + "\n");
        return 0;
    }
    auto marks = sample_marks(g, cuts, K,
                              model_from(ctx.cfg).marks, rng);
    auto sk = build_selected_skeleton(g, cuts, marks);
    summary["tree_like"] = is_asymptotically_tree_like(sk);
    if (!is_asymptotically_tree_like(sk)) {
        write_text_file(ctx.path("skeleton_summary.json"), summary.dump(2) + "\n");
        return 0;
    }
    auto tree = expand_star_triangle(g, cuts, sk);
    auto reduced = reduce_skeleton(tree, sk.marks);
    write_text_file(ctx.path("skeleton.json"), skeleton_to_json(tree));
    write_text_file(ctx.path("reduced.newick"), reduced.to_newick());
    summary["skeleton_vertices"] = tree.num_vertices();
    summary["vstar"] = tree.n_vstar;
    summary["reduced_vertices"] = reduced.num_vertices();
    write_text_file(ctx.path("skeleton_summary.json"), summary.dump(2) + "\n");
    return 0;
}

int cmd_conditions(const Ctx& ctx) {
    require_keys(ctx.cfg, {"which", "family", "offspring", "dim", "marks", "n_grid",
                           "K_grid", "K", "replicas", "eps", "crt_steps", "p_floor"});
    std::string which = get_or<std::string>(ctx.cfg, "which", "all");
    ModelSpec spec = model_from(ctx.cfg);
    auto factory = model_factory(spec);
    auto n_grid = get_grid(ctx.cfg, "n_grid", {300, 1000, 3000});
    auto K_grid = get_grid(ctx.cfg, "K_grid", {2, 5, 10});
    std::size_t K = get_or<std::size_t>(ctx.cfg, "K", 2);
    std::size_t replicas = get_or<std::size_t>(ctx.cfg, "replicas", 50);
    double eps = get_or<double>(ctx.cfg, "eps", 0.5);
    std::size_t crt_steps = get_or<std::size_t>(ctx.cfg, "crt_steps", 4096);
    double p_floor = get_or<double>(ctx.cfg, "p_floor", 0.01);

    json summary = ctx.meta();
    CsvTable table;
    table.header = {"condition", "n", "K", "stat", "value"};
    bool ran = false;
    auto emit = [&](const ConditionReport& rep) {
        append_report_rows(table, rep);
        summary["report_" + std::string(1, rep.condition)] = report_summary(rep);
        ran = true;
    };
    bool all = which == "all";
    if (all || which == "S")
        emit(check_S(factory, spec.marks, n_grid, K_grid, replicas, eps, ctx.seed, ctx.workers));
    if (all || which == "G")
        emit(check_G(factory, spec.marks, n_grid, K, replicas, ctx.seed, ctx.workers,
                     crt_steps, p_floor));
    if (all || which == "V")
        emit(check_V(factory, spec.marks, n_grid, K_grid, replicas, ctx.seed, ctx.workers));
    if (all || which == "R")
        emit(check_R(factory, spec.marks, n_grid, replicas, ctx.seed, ctx.workers));
    if (!ran) throw ConfigError("unknown condition: " + which);

    write_text_file(ctx.path("conditions.csv"), table.to_string());
    write_text_file(ctx.path("conditions_summary.json"), summary.dump(2) + "\n");
    return 0;
}

int cmd_exponents(const Ctx& ctx) {
    require_keys(ctx.cfg, {"family", "n", "offspring", "dim", "marks", "replicas",
                           "m_min", "m_max", "grid_points", "fit_lo", "fit_hi",
                           "ret_lo", "ret_hi", "bootstrap", "with_return"});
    ModelSpec spec = model_from(ctx.cfg);
    auto factory = model_factory(spec);
    std::size_t replicas = get_or<std::size_t>(ctx.cfg, "replicas", 20);
    std::uint64_t m_min = get_or<std::uint64_t>(ctx.cfg, "m_min", 64);
    std::uint64_t m_max = get_or<std::uint64_t>(ctx.cfg, "m_max", 1 << 16);
    std::size_t points = get_or<std::size_t>(ctx.cfg, "grid_points", 24);
    bool with_return = get_or<bool>(ctx.cfg, "with_return", true);
    double fit_lo = get_or<double>(ctx.cfg, "fit_lo", double(m_min) * 4);
    double fit_hi = get_or<double>(ctx.cfg, "fit_hi", double(m_max));
    double ret_lo = get_or<double>(ctx.cfg, "ret_lo", double(m_min) * 4);
    double ret_hi = get_or<double>(ctx.cfg, "ret_hi", double(m_max) / 4);
    std::size_t boot = get_or<std::size_t>(ctx.cfg, "bootstrap", 100);

    std::vector<std::uint64_t> m_grid;
    for (std::size_t i = 0; i < points; ++i) {
        double f = double(i) / double(points - 1);
        m_grid.push_back(std::uint64_t(
            std::llround(std::pow(double(m_max) / double(m_min), f) * double(m_min))));
    }
    m_grid.erase(std::unique(m_grid.begin(), m_grid.end()), m_grid.end());

    std::vector<DisplacementProfile> disp(replicas);
    std::vector<std::vector<double>> rets(replicas);
    run_replicas(replicas, ctx.seed, ctx.workers, [&](std::size_t i, Rng& rng) {
        RootedGraph g = factory(spec.n, rng);
        disp[i] = displacement_profile(g, m_grid, rng);
        rets[i] = with_return ? return_probability_profile(g, m_grid, rng)
                              : std::vector<double>(m_grid.size(), 0.0);
    });

    Rng boot_rng = make_rng(replica_seed(ctx.seed, 0xB007));
    auto stats = exponent_summary(disp, rets, m_grid, fit_lo, fit_hi, ret_lo, ret_hi,
                                  boot, boot_rng);

    CsvTable t;
    t.header = {"m", "mean_intrinsic", "mean_euclidean", "ret_m", "mean_return"};
    for (std::size_t i = 0; i < m_grid.size(); ++i)
        t.add_row({format_double(stats.m_values[i]), format_double(stats.mean_intrinsic[i]),
                   format_double(stats.mean_euclidean[i]),
                   format_double(i < stats.ret_m_values.size() ? stats.ret_m_values[i] : 0),
                   format_double(i < stats.mean_return.size() ? stats.mean_return[i] : 0)});
    write_text_file(ctx.path("exponents.csv"), t.to_string());

    CsvTable fits;
    fits.header = {"stat", "slope", "boot_se", "ci_lo", "ci_hi"};
    auto fit_row = [&](const char* name, double slope, double se) {
        fits.add_row({name, format_double(slope), format_double(se),
                      format_double(slope - 1.96 * se), format_double(slope + 1.96 * se)});
    };
    fit_row("intrinsic", stats.intrinsic_slope, stats.intrinsic_se);
    fit_row("euclidean", stats.euclidean_slope, stats.euclidean_se);
    if (with_return) fit_row("return", stats.return_slope, stats.return_se);
    write_text_file(ctx.path("exponent_fits.csv"), fits.to_string());

    json summary = ctx.meta();
    summary["intrinsic_slope"] = stats.intrinsic_slope;
    summary["intrinsic_se"] = stats.intrinsic_se;
    summary["euclidean_slope"] = stats.euclidean_slope;
    summary["euclidean_se"] = stats.euclidean_se;
    summary["return_slope"] = stats.return_slope;
    summary["return_se"] = stats.return_se;
    summary["replicas"] = replicas;
    write_text_file(ctx.path("exponents_summary.json"), summary.dump(2) + "\n");

    std::vector<SvgSeries> series;
    series.push_back({"intrinsic", stats.m_values, stats.mean_intrinsic});
    if (spec.dim > 1 || spec.family == ModelFamily::brw_trace)
        series.push_back({"euclidean", stats.m_values, stats.mean_euclidean});
    if (with_return) series.push_back({"return", stats.ret_m_values, stats.mean_return});
    write_text_file(ctx.path("exponents_loglog.svg"),
                    svg_loglog_plot(series, "displacement and return exponents"));
    return 0;
}

MetricTree builtin_tree(const std::string& shape, const json& cfg, Rng& rng) {
    if (shape == "segment") {
        MetricTree t;
        double len = get_or<double>(cfg, "length", 1.0);
        t.parent = {-1, 0};
        t.metric_len = {0.0, len};
        t.measure_len = t.metric_len;
        return t;
    }
    if (shape == "ystar") {
        std::vector<double> arms = cfg.contains("arms")
                                       ? cfg.at("arms").get<std::vector<double>>()
                                       : std::vector<double>{1.0, 1.0, 2.0};
        MetricTree t;
        t.parent = {-1, 0, 1, 1};
        t.metric_len = {0.0, arms[0], arms[1], arms[2]};
        t.measure_len = t.metric_len;
        return t;
    }
    if (shape == "kise") {
        std::size_t K = get_or<std::size_t>(cfg, "K", 3);
        std::size_t steps = get_or<std::size_t>(cfg, "crt_steps", 2048);
        int dim = get_or<int>(cfg, "dim", 8);
        auto sample = sample_kise(K, steps, dim, rng);
        return MetricTree::from_reduced(sample, MetricChoice::length,
                                        MeasureChoice::lebesgue_length);
    }
    throw ConfigError("unknown tree shape: " + shape);
}

int cmd_tree_bm(const Ctx& ctx) {
    require_keys(ctx.cfg, {"shape", "length", "arms", "K", "crt_steps", "dim", "h",
                           "t_max", "start"});
    Rng rng = make_rng(replica_seed(ctx.seed, 0));
    std::string shape = get_or<std::string>(ctx.cfg, "shape", "ystar");
    if (shape == "kise") {
        // Also emit the sampled continuum tree in the shared JSON schema.
        Rng peek = make_rng(replica_seed(ctx.seed, 0));
        auto sample = sample_kise(get_or<std::size_t>(ctx.cfg, "K", 3),
                                  get_or<std::size_t>(ctx.cfg, "crt_steps", 2048),
                                  get_or<int>(ctx.cfg, "dim", 8), peek);
        write_text_file(ctx.path("kise.json"), sample.to_json());
    }
    MetricTree tree = builtin_tree(shape, ctx.cfg, rng);
    double min_edge = 1e300;
    for (std::size_t v = 0; v < tree.num_vertices(); ++v)
        if (tree.parent[v] >= 0) min_edge = std::min(min_edge, tree.metric_len[v]);
    double h = get_or<double>(ctx.cfg, "h", min_edge / 8.0);
    double t_max = get_or<double>(ctx.cfg, "t_max", 10.0);

    MetricTreeNet net(tree, h);
    std::uint32_t start = net.site_of_orig(get_or<std::uint32_t>(ctx.cfg, "start", 0));
    auto path = simulate(net, t_max, rng, start);
    auto field = local_times(path, net);
    auto est = crossing_local_time_estimate(field, net);

    {
        CsvTable t;
        t.header = {"time", "site", "orig_vertex"};
        for (std::size_t k = 0; k < path.sites.size(); ++k) {
            std::uint32_t ov = net.orig_of_site(path.sites[k]);
            t.add_row({format_double(path.times[k]), std::to_string(path.sites[k]),
                       ov == UINT32_MAX ? "-1" : std::to_string(ov)});
        }
        write_text_file(ctx.path("tree_bm_path.csv"), t.to_string());
    }
    {
        CsvTable t;
        t.header = {"site", "measure", "local_time"};
        for (std::size_t s = 0; s < net.num_sites(); ++s)
            t.add_row({std::to_string(s), format_double(net.site_measure(std::uint32_t(s))),
                       format_double(field.site_local_time[s])});
        write_text_file(ctx.path("tree_bm_field.csv"), t.to_string());
    }
    {
        CsvTable t;
        t.header = {"edge_child", "metric_len", "crossings", "right", "left",
                    "estimate", "gap"};
        for (std::size_t v = 0; v < net.num_orig(); ++v) {
            if (tree.parent[v] < 0) continue;
            t.add_row({std::to_string(v), format_double(tree.metric_len[v]),
                       std::to_string(field.cross_total[v]),
                       std::to_string(field.cross_right[v]),
                       std::to_string(field.cross_left[v]),
                       format_double(est.edge_estimate[v]), format_double(est.edge_gap[v])});
        }
        write_text_file(ctx.path("tree_bm_crossings.csv"), t.to_string());
    }
    json summary = ctx.meta();
    summary["t_end"] = path.t_end;
    summary["steps"] = path.sites.size() - 1;
    summary["sites"] = net.num_sites();
    summary["sup_edge_gap"] = est.sup_edge_gap;
    // Bookkeeping identity: integral of L dnu equals elapsed time.
    double integral = 0;
    for (std::size_t s = 0; s < net.num_sites(); ++s)
        integral += field.site_local_time[s] * net.site_measure(std::uint32_t(s));
    summary["local_time_integral"] = integral;
    write_text_file(ctx.path("tree_bm_summary.json"), summary.dump(2) + "\n");
    return 0;
}

int cmd_time_change(const Ctx& ctx) {
    require_keys(ctx.cfg, {"family", "n", "offspring", "dim", "marks", "K", "replicas",
                           "t_lo", "t_hi", "t_points", "max_steps"});
    ModelSpec spec = model_from(ctx.cfg);
    auto factory = model_factory(spec);
    std::size_t K = get_or<std::size_t>(ctx.cfg, "K", 6);
    std::size_t replicas = get_or<std::size_t>(ctx.cfg, "replicas", 4);
    double t_lo = get_or<double>(ctx.cfg, "t_lo", 0.02);
    double t_hi = get_or<double>(ctx.cfg, "t_hi", 0.4);
    std::size_t t_points = get_or<std::size_t>(ctx.cfg, "t_points", 20);
    std::uint64_t max_steps = get_or<std::uint64_t>(ctx.cfg, "max_steps", 200'000'000ULL);

    std::vector<double> grid(t_points);
    for (std::size_t i = 0; i < t_points; ++i)
        grid[i] = t_lo + (t_hi - t_lo) * double(i) / double(t_points - 1);

    std::vector<TimeChangeProfile> profiles(replicas);
    std::vector<std::uint8_t> ok(replicas, 0);
    run_replicas(replicas, ctx.seed, ctx.workers, [&](std::size_t i, Rng& rng) {
        for (int attempt = 0; attempt < 8; ++attempt) {
            RootedGraph g = factory(spec.n, rng);
            auto cuts = find_cut_decomposition(g);
            if (cuts.cut_points.empty()) continue;
            auto marks = sample_marks(g, cuts, K, spec.marks, rng);
            auto sk = build_selected_skeleton(g, cuts, marks);
            if (!is_asymptotically_tree_like(sk)) continue;
            auto tree = expand_star_triangle(g, cuts, sk);
            auto tau = expected_sojourns(g, tree);
            profiles[i] = time_change_profiles(g, tree, tau, grid, rng, max_steps);
            ok[i] = 1;
            return;
        }
    });

    CsvTable t;
    t.header = {"replica", "t", "raw", "a_hat", "a_tilde"};
    std::vector<double> nus, cvs, mid_ratio;
    for (std::size_t i = 0; i < replicas; ++i) {
        if (!ok[i]) continue;
        const auto& p = profiles[i];
        for (std::size_t k = 0; k < p.t_grid.size(); ++k)
            t.add_row({std::to_string(i), format_double(p.t_grid[k]),
                       format_double(p.raw[k]), format_double(p.a_hat[k]),
                       format_double(p.a_tilde[k])});
        nus.push_back(p.nu_hat);
        cvs.push_back(p.nu_cv);
        std::size_t mid = p.t_grid.size() / 2;
        if (mid < p.raw.size() && p.raw[mid] > 0)
            mid_ratio.push_back(p.a_tilde[mid] / p.raw[mid]);
    }
    write_text_file(ctx.path("time_change.csv"), t.to_string());

    json summary = ctx.meta();
    summary["replicas_used"] = nus.size();
    summary["nu_hat_median"] = nus.empty() ? 0.0 : quantile(nus, 0.5);
    summary["nu_cv_median"] = cvs.empty() ? 0.0 : quantile(cvs, 0.5);
    summary["tilde_over_raw_mid_median"] =
        mid_ratio.empty() ? 0.0 : quantile(mid_ratio, 0.5);
    write_text_file(ctx.path("time_change_summary.json"), summary.dump(2) + "\n");
    return 0;
}

int cmd_inequalities(const Ctx& ctx) {
    require_keys(ctx.cfg, {"graphs", "max_vertices", "extra_edges", "trials",
                           "fixed_n", "geom_p", "geom_cap"});
    std::size_t graphs = get_or<std::size_t>(ctx.cfg, "graphs", 200);
    std::size_t maxv = get_or<std::size_t>(ctx.cfg, "max_vertices", 40);
    std::size_t extra = get_or<std::size_t>(ctx.cfg, "extra_edges", 6);
    std::uint64_t trials = get_or<std::uint64_t>(ctx.cfg, "trials", 200000);
    std::uint64_t fixed_n = get_or<std::uint64_t>(ctx.cfg, "fixed_n", 50);
    double geom_p = get_or<double>(ctx.cfg, "geom_p", 0.5);
    std::uint64_t geom_cap = get_or<std::uint64_t>(ctx.cfg, "geom_cap", 100);

    std::size_t violations = 0, commute_failures = 0;
    std::vector<std::uint8_t> viol(graphs, 0), comm(graphs, 0);
    run_replicas(graphs, ctx.seed, ctx.workers, [&](std::size_t i, Rng& rng) {
        std::size_t n = 4 + uniform_below(rng, maxv - 3);
        RootedGraph g = random_connected_graph(n, uniform_below(rng, extra + 1), rng);
        Vertex x = Vertex(uniform_below(rng, n)), y = x;
        while (y == x) y = Vertex(uniform_below(rng, n));
        auto vb = verify_variance_bound(g, x, y);
        if (!vb.holds) viol[i] = 1;
        auto mx = hitting_time_moments(g, x, y, 1);
        auto my = hitting_time_moments(g, y, x, 1);
        double commute = mx.moments[0] + my.moments[0];
        double expected = 2.0 * double(g.num_edges()) * effective_resistance(g, x, y);
        if (std::abs(commute - expected) > 1e-9 * std::max(1.0, expected)) comm[i] = 1;
    });
    for (std::size_t i = 0; i < graphs; ++i) {
        violations += viol[i];
        commute_failures += comm[i];
    }

    Rng rng = make_rng(replica_seed(ctx.seed, 0xFEED));
    IncrementLaw rad{IncrementLaw::Kind::rademacher, 1.0};
    StoppingRule fixed{StoppingRule::Kind::fixed, fixed_n, 0, 0};
    StoppingRule geom{StoppingRule::Kind::geometric_capped, 0, geom_p, geom_cap};
    auto f1 = verify_fourth_moment_bound(rad, fixed, trials, rng);
    auto f2 = verify_fourth_moment_bound(rad, geom, trials, rng);

    CsvTable t;
    t.header = {"check", "value"};
    t.add_row({"graphs", std::to_string(graphs)});
    t.add_row({"variance_bound_violations", std::to_string(violations)});
    t.add_row({"commute_identity_failures", std::to_string(commute_failures)});
    t.add_row({"fourth_moment_fixed_lhs", format_double(f1.lhs_estimate)});
    t.add_row({"fourth_moment_fixed_rhs", format_double(f1.rhs)});
    t.add_row({"fourth_moment_geom_lhs", format_double(f2.lhs_estimate)});
    t.add_row({"fourth_moment_geom_rhs", format_double(f2.rhs)});
    write_text_file(ctx.path("inequalities.csv"), t.to_string());

    json summary = ctx.meta();
    summary["violations"] =
        violations + commute_failures + (f1.holds ? 0 : 1) + (f2.holds ? 0 : 1);
    summary["fourth_moment_constant"] = f1.c_used;
    write_text_file(ctx.path("inequalities_summary.json"), summary.dump(2) + "\n");
    return 0;
}

} // namespace

int run_command(const std::string& subcommand, const std::string& config_json,
                const std::string& out_dir, std::uint64_t seed, int workers) {
    Ctx ctx;
    try {
        ctx.cfg = config_json.empty() ? json::object() : json::parse(config_json);
        if (!ctx.cfg.is_object()) throw ConfigError("config must be a JSON object");
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    }
    ctx.out = out_dir.empty() ? "." : out_dir;
    ctx.seed = seed;
    ctx.workers = workers < 1 ? 1 : workers;
    ctx.hash = std::to_string(fnv1a(subcommand + "|" + ctx.cfg.dump() + "|" +
                                    std::to_string(seed)));

    try {
        // Validate before creating any output.
        std::error_code ec;
        std::filesystem::create_directories(ctx.out, ec);
        if (ec) {
            std::cerr << "cannot create output directory: " << ctx.out << "\n";
            return 1;
        }
        if (subcommand == "generate") return cmd_generate(ctx);
        if (subcommand == "skeleton") return cmd_skeleton(ctx);
        if (subcommand == "conditions") return cmd_conditions(ctx);
        if (subcommand == "exponents") return cmd_exponents(ctx);
        if (subcommand == "tree-bm") return cmd_tree_bm(ctx);
        if (subcommand == "time-change") return cmd_time_change(ctx);
        if (subcommand == "inequalities") return cmd_inequalities(ctx);
        std::cerr << "unknown subcommand: " << subcommand << "\n";
        return 2;
    } catch (const ConfigError& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const json::exception& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::invalid_argument& e) {
        std::cerr << "config error: " << e.what() << "\n";
        return 2;
    } catch (const std::exception& e) {
        std::cerr << "error: " << e.what() << "\n";
        return 1;
    }
}

int run(int argc, const char* const* argv) {
    CLI::App app{"skeletons, tree diffusions and walk scaling on critical random graphs"};
    app.require_subcommand(1);

    std::string config_path, out_dir = ".";
    std::uint64_t seed = 1;
    int workers = 1;
    auto add_common = [&](CLI::App* a) {
        a->add_option("--config", config_path, "JSON config file");
        a->add_option("--seed", seed, "master seed");
        a->add_option("--workers", workers, "worker threads");
        a->add_option("--out", out_dir, "output directory");
    };
    add_common(&app);

    static const char* subs[] = {"generate", "skeleton", "conditions", "exponents",
                                 "tree-bm", "time-change", "inequalities"};
    for (const char* s : subs) add_common(app.add_subcommand(s));

    try {
        app.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
        int code = app.exit(e);
        return code == 0 ? 0 : 2;
    }

    std::string config_json;
    if (!config_path.empty()) {
        std::ifstream f(config_path);
        if (!f) {
            std::cerr << "cannot read config: " << config_path << "\n";
            return 2;
        }
        config_json.assign(std::istreambuf_iterator<char>(f),
                           std::istreambuf_iterator<char>());
    }

    std::string sub = app.get_subcommands().front()->get_name();
    return run_command(sub, config_json, out_dir, seed, workers);
}

} // namespace critwalk::cli
