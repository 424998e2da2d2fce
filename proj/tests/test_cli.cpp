#include <doctest.h>

#include "critwalk/cli.hpp"

#include <json.hpp>

#include <filesystem>
#include <fstream>
#include <sstream>

namespace fs = std::filesystem;

namespace {

std::string slurp(const fs::path& p) {
    std::ifstream f(p, std::ios::binary);
    std::ostringstream os;
    os << f.rdbuf();
    return os.str();
}

struct TmpDir {
    fs::path path;
    explicit TmpDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("critwalk_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TmpDir() { fs::remove_all(path); }
};

} // namespace

TEST_CASE("generate is deterministic for a fixed seed") {
    TmpDir d1("gen1"), d2("gen2");
    std::string cfg = R"({"family":"gw_tree","n":100,"count":2})";
    CHECK(critwalk::cli::run_command("generate", cfg, d1.path.string(), 7, 1) == 0);
    CHECK(critwalk::cli::run_command("generate", cfg, d2.path.string(), 7, 1) == 0);
    CHECK(slurp(d1.path / "graph_000.edg") == slurp(d2.path / "graph_000.edg"));
    CHECK(slurp(d1.path / "graph_001.edg") == slurp(d2.path / "graph_001.edg"));
    CHECK(!slurp(d1.path / "graph_000.edg").empty());
}

TEST_CASE("malformed configs exit with code 2 and write nothing") {
    TmpDir d("bad");
    CHECK(critwalk::cli::run_command("conditions", R"({"bogus_key":1})",
                                     d.path.string(), 1, 1) == 2);
    CHECK(critwalk::cli::run_command("generate", "{not json", d.path.string(), 1, 1) == 2);
    CHECK(critwalk::cli::run_command("frobnicate", "", d.path.string(), 1, 1) == 2);
    std::size_t files = 0;
    for (auto& e : fs::directory_iterator(d.path)) {
        (void)e;
        ++files;
    }
    CHECK(files == 0);
}

TEST_CASE("inequalities subcommand reports zero violations") {
    TmpDir d("ineq");
    std::string cfg = R"({"graphs":60,"max_vertices":30,"trials":30000})";
    CHECK(critwalk::cli::run_command("inequalities", cfg, d.path.string(), 5, 1) == 0);
    auto summary = nlohmann::json::parse(slurp(d.path / "inequalities_summary.json"));
    CHECK(summary["violations"] == 0);
}

TEST_CASE("tree-bm subcommand writes consistent reports") {
    TmpDir d("tbm");
    std::string cfg = R"({"shape":"ystar","arms":[1.0,1.0,2.0],"h":0.125,"t_max":5.0})";
    CHECK(critwalk::cli::run_command("tree-bm", cfg, d.path.string(), 3, 1) == 0);
    auto summary = nlohmann::json::parse(slurp(d.path / "tree_bm_summary.json"));
    double integral = summary["local_time_integral"];
    double t_end = summary["t_end"];
    CHECK(integral == doctest::Approx(t_end).epsilon(1e-9));
    CHECK(!slurp(d.path / "tree_bm_path.csv").empty());
    CHECK(!slurp(d.path / "tree_bm_field.csv").empty());
    CHECK(!slurp(d.path / "tree_bm_crossings.csv").empty());
}

TEST_CASE("skeleton subcommand emits skeleton files") {
    TmpDir d("skel");
    std::string cfg = R"({"family":"gw_tree","n":400,"K":4})";
    CHECK(critwalk::cli::run_command("skeleton", cfg, d.path.string(), 11, 1) == 0);
    auto summary = nlohmann::json::parse(slurp(d.path / "skeleton_summary.json"));
    CHECK(summary["tree_like"] == true);
    CHECK(!slurp(d.path / "skeleton.json").empty());
    CHECK(!slurp(d.path / "reduced.newick").empty());
}

TEST_CASE("exponents subcommand emits csv, json and svg") {
    TmpDir d("exp");
    std::string cfg = R"({"family":"gw_tree","n":2000,"replicas":6,"m_min":16,)"
                      R"("m_max":2048,"grid_points":8,"bootstrap":10})";
    CHECK(critwalk::cli::run_command("exponents", cfg, d.path.string(), 2, 1) == 0);
    CHECK(!slurp(d.path / "exponents.csv").empty());
    CHECK(!slurp(d.path / "exponents_summary.json").empty());
    auto svg = slurp(d.path / "exponents_loglog.svg");
    CHECK(svg.find("<svg") != std::string::npos);
}

TEST_CASE("reports are byte-identical across worker counts") {
    TmpDir d1("w1"), d4("w4"), d16("w16");
    std::string cfg = R"({"which":"V","family":"gw_tree","n_grid":[200,500],)"
                      R"("K_grid":[3],"replicas":12})";
    CHECK(critwalk::cli::run_command("conditions", cfg, d1.path.string(), 99, 1) == 0);
    CHECK(critwalk::cli::run_command("conditions", cfg, d4.path.string(), 99, 4) == 0);
    CHECK(critwalk::cli::run_command("conditions", cfg, d16.path.string(), 99, 16) == 0);
    CHECK(slurp(d1.path / "conditions.csv") == slurp(d4.path / "conditions.csv"));
    CHECK(slurp(d1.path / "conditions.csv") == slurp(d16.path / "conditions.csv"));
    auto s1 = slurp(d1.path / "conditions_summary.json");
    auto s4 = slurp(d4.path / "conditions_summary.json");
    auto s16 = slurp(d16.path / "conditions_summary.json");
    // Summaries embed the worker count; compare everything else.
    auto strip = [](std::string s) {
        auto j = nlohmann::json::parse(s);
        j.erase("workers");
        return j.dump();
    };
    CHECK(strip(s1) == strip(s4));
    CHECK(strip(s1) == strip(s16));
}

TEST_CASE("time-change subcommand produces profiles") {
    TmpDir d("tc");
    std::string cfg = R"({"family":"gw_tree","n":2000,"K":4,"replicas":2,)"
                      R"("t_lo":0.05,"t_hi":0.2,"t_points":6,"max_steps":30000000})";
    CHECK(critwalk::cli::run_command("time-change", cfg, d.path.string(), 21, 1) == 0);
    auto summary = nlohmann::json::parse(slurp(d.path / "time_change_summary.json"));
    CHECK(summary["replicas_used"] >= 1);
    CHECK(!slurp(d.path / "time_change.csv").empty());
}
