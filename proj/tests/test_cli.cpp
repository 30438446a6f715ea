#include "doctest.h"

#include <filesystem>
#include <sstream>

#include "swarmlab/cli.hpp"

using namespace swarmlab;
namespace fs = std::filesystem;

namespace {

struct CliResult {
    int code;
    std::string out;
    std::string err;
};

CliResult run_cli(const std::vector<std::string>& args) {
    std::ostringstream out, err;
    const int code = cli::run(args, out, err);
    return {code, out.str(), err.str()};
}

fs::path fresh_dir(const std::string& name) {
    const fs::path dir = fs::temp_directory_path() / ("swarmlab_test_" + name);
    fs::remove_all(dir);
    fs::create_directories(dir);
    return dir;
}

// A tiny, fast configuration used across the CLI tests.
std::string tiny_config(const fs::path& outdir, const std::string& extra = "") {
    std::string cfg = R"({
      "seed": 4242,
      "region": {"kind": "ball", "radius": 1.0},
      "dynamics": {"dt": 0.01, "t_end": 0.1, "record_every": 5},
      "initial": {"kind": "uniform_box_gauss", "n": 12,
                  "box_half": [1.5, 1.5, 1.5], "sigma_v": 0.5, "rv0": 1.0},
      "study": {"n_list": [8, 16], "n_ref": 64, "times": [0.0, 0.05, 0.1],
                "n_samples": 20000,
                "eps_grid": [0.05, 0.1, 0.2], "v_norms": [0.25, 1.5],
                "probes": 32, "probe_box": 1.5},
      "output": {"dir": ")" + outdir.string() + R"("})" +
                      extra + "}";
    return cfg;
}

fs::path write_config(const fs::path& dir, const std::string& content) {
    const fs::path p = dir / "config.json";
    write_text_file(p, content);
    return p;
}

} // namespace

TEST_CASE("cli: schema subcommand documents every key") {
    auto res = run_cli({"schema"});
    CHECK(res.code == 0);
    CHECK(res.out.find("dynamics.dt") != std::string::npos);
    CHECK(res.out.find("region.kind") != std::string::npos);
    CHECK(res.out.find("output files") != std::string::npos);
}

TEST_CASE("cli: usage and unknown subcommands exit 2 with error JSON") {
    CHECK(run_cli({}).code == 2);
    auto res = run_cli({"frobnicate"});
    CHECK(res.code == 2);
    CHECK(res.err.find("\"error\"") != std::string::npos);
}

TEST_CASE("cli: simulate writes trajectory, measure, and manifest") {
    const auto dir = fresh_dir("simulate");
    const auto cfgp = write_config(dir, tiny_config(dir / "out"));
    auto res = run_cli({"simulate", cfgp.string()});
    CHECK(res.code == 0);
    CHECK(fs::exists(dir / "out" / "trajectory.csv"));
    CHECK(fs::exists(dir / "out" / "final_measure.csv"));
    CHECK(fs::exists(dir / "out" / "manifest.json"));

    // Config round trip: the manifest echo re-parses to an identical config.
    const json manifest = json::parse(read_text_file(dir / "out" / "manifest.json"));
    const json echoed = manifest["config"];
    const json reparsed = parse_config(echoed.dump());
    CHECK(echoed == reparsed);
    CHECK(manifest["version"] == kVersion);
}

TEST_CASE("cli: N=1 simulate free-streams") {
    const auto dir = fresh_dir("freestream");
    std::string cfg = R"({
      "seed": 7,
      "region": {"kind": "ball", "radius": 1.0},
      "force": {"psi": {"kind": "constant", "value": 0.0}},
      "dynamics": {"dt": 0.1, "t_end": 0.2, "record_every": 1},
      "initial": {"kind": "custom", "n": 1,
                  "samples": [[0.0, 0.0, 1.0, 0.5]]},
      "output": {"dir": ")" + (dir / "out").string() + R"("}})";
    auto res = run_cli({"simulate", write_config(dir, cfg).string()});
    CHECK(res.code == 0);
    const std::string traj = read_text_file(dir / "out" / "trajectory.csv");
    // Final row: t=0.2, position = (0.2, 0.1), velocity unchanged.
    CHECK(traj.find("0.20000000000000001,0,0.20000000000000001,0.10000000000000001,1,0.5,1")
          != std::string::npos);
}

TEST_CASE("cli: strict schema rejects unknown keys and bad enums (exit 2)") {
    const auto dir = fresh_dir("schema_strict");
    auto bad1 = write_config(dir, R"({"unknown_section": {}})");
    CHECK(run_cli({"simulate", bad1.string()}).code == 2);
    auto bad2 = write_config(dir, R"({"region": {"kind": "pyramid"}})");
    CHECK(run_cli({"simulate", bad2.string()}).code == 2);
    auto bad3 = write_config(dir, R"({"dynamics": {"dt": "fast"}})");
    CHECK(run_cli({"simulate", bad3.string()}).code == 2);
    auto bad4 = write_config(dir, R"({"region": {"radius": -1}})");
    CHECK(run_cli({"simulate", bad4.string()}).code == 2);
}

TEST_CASE("cli: dotted-path overrides reach nested keys") {
    const auto dir = fresh_dir("overrides");
    const auto cfgp = write_config(dir, tiny_config(dir / "out"));
    auto res = run_cli({"simulate", cfgp.string(), "dynamics.t_end=0.05",
                        "initial.n=3", "seed=99"});
    CHECK(res.code == 0);
    const json manifest = json::parse(read_text_file(dir / "out" / "manifest.json"));
    CHECK(manifest["config"]["dynamics"]["t_end"] == 0.05);
    CHECK(manifest["config"]["initial"]["n"] == 3);
    CHECK(manifest["config"]["seed"] == 99);
    CHECK(run_cli({"simulate", cfgp.string(), "notakey=1"}).code == 2);
}

TEST_CASE("cli: w1 on identical files prints zero") {
    const auto dir = fresh_dir("w1");
    DiscreteMeasure mu;
    mu.dim = 4;
    mu.points = {0, 0, 0, 0, 1, 1, 0.5, -0.5};
    mu.weights = {0.5, 0.5};
    const fs::path a = dir / "a.csv";
    write_text_file(a, measure_to_csv(mu));
    auto res = run_cli({"w1", a.string(), a.string()});
    CHECK(res.code == 0);
    CHECK(parse_double(res.out.substr(0, res.out.size() - 1)) == 0.0);

    // Distance between shifted copies, plus plan export.
    DiscreteMeasure nu = mu;
    for (std::size_t i = 0; i < nu.size(); ++i) nu.point(i)[0] += 3.0;
    const fs::path b = dir / "b.csv";
    write_text_file(b, measure_to_csv(nu));
    const fs::path plan = dir / "plan.csv";
    auto res2 = run_cli({"w1", a.string(), b.string(), "--plan", plan.string()});
    CHECK(res2.code == 0);
    CHECK(parse_double(res2.out.substr(0, res2.out.size() - 1)) == doctest::Approx(3.0));
    CHECK(read_text_file(plan).rfind("i,j,mass\n", 0) == 0);

    // Dimension mismatch is a config error (exit 2).
    DiscreteMeasure flat;
    flat.dim = 2;
    flat.points = {0, 0};
    flat.weights = {1.0};
    const fs::path c = dir / "c.csv";
    write_text_file(c, measure_to_csv(flat));
    CHECK(run_cli({"w1", a.string(), c.string()}).code == 2);
    CHECK(run_cli({"w1", a.string()}).code == 2);
}

TEST_CASE("cli: converge rerun is byte-identical") {
    const auto dir = fresh_dir("converge");
    const auto cfgp = write_config(dir, tiny_config(dir / "out"));
    auto res = run_cli({"converge", cfgp.string()});
    CHECK(res.code == 0);
    const std::string table1 = read_text_file(dir / "out" / "converge_table.csv");
    const std::string summary1 = read_text_file(dir / "out" / "converge_summary.json");
    const std::string manifest1 = read_text_file(dir / "out" / "manifest.json");
    auto res2 = run_cli({"converge", cfgp.string()});
    CHECK(res2.code == 0);
    CHECK(read_text_file(dir / "out" / "converge_table.csv") == table1);
    CHECK(read_text_file(dir / "out" / "converge_summary.json") == summary1);
    CHECK(read_text_file(dir / "out" / "manifest.json") == manifest1);
    CHECK(table1.rfind("study,N,t,d1,ratio\n", 0) == 0);
}

TEST_CASE("cli: stability short-circuit and two-spec run") {
    const auto dir = fresh_dir("stability");
    const auto cfgp = write_config(dir, tiny_config(dir / "out"));
    auto res = run_cli({"stability", cfgp.string(), "study.n_ref=24"});
    CHECK(res.code == 0);
    json summary = json::parse(read_text_file(dir / "out" / "stability_summary.json"));
    CHECK(summary["identical_inputs"] == true);

    auto res2 = run_cli({"stability", cfgp.string(), "study.n_ref=24",
                         "initial_b.kind=uniform_box_gauss", "initial_b.sigma_v=0.25",
                         "initial_b.rv0=1.0", "initial_b.box_half=[1.5,1.5,1.5]"});
    CHECK(res2.code == 0);
    summary = json::parse(read_text_file(dir / "out" / "stability_summary.json"));
    CHECK(summary["identical_inputs"] == false);
    CHECK(summary["d1"].size() == 3);
}

TEST_CASE("cli: hypcheck emits fits and pass flag") {
    const auto dir = fresh_dir("hypcheck");
    const auto cfgp = write_config(dir, tiny_config(dir / "out"));
    auto res = run_cli({"hypcheck", cfgp.string(), "study.n_samples=20000"});
    CHECK(res.code == 0);
    const json summary = json::parse(read_text_file(dir / "out" / "hypcheck_summary.json"));
    CHECK(summary["pass"] == true); // ball region: constants collapse to zero
    const std::string fits = read_text_file(dir / "out" / "hypcheck_fits.csv");
    CHECK(fits.rfind("v_norm,slope,r2\n", 0) == 0);
}

TEST_CASE("cli: lipschitz diagnostic summary") {
    const auto dir = fresh_dir("lipschitz");
    const auto cfgp = write_config(dir, tiny_config(dir / "out"));
    auto res = run_cli({"lipschitz", cfgp.string(), "study.n_ref=64",
                        "dynamics.mode=mollified", "dynamics.quad_nodes=3"});
    CHECK(res.code == 0);
    const json summary = json::parse(read_text_file(dir / "out" / "lipschitz_summary.json"));
    CHECK(summary["finite"] == true);
    CHECK(summary["growth_constant"].get<double>() > 0.0);
}

TEST_CASE("cli: numerical blow-up aborts with exit 3") {
    const auto dir = fresh_dir("blowup");
    std::string cfg = R"({
      "seed": 1,
      "region": {"kind": "ball", "radius": 3.0},
      "force": {"kind": "attractive_repulsive",
                "grad_phi": {"attract_amp": 1e308, "attract_len": 0.5,
                              "repulse_amp": 0.0, "repulse_len": 1.0}},
      "dynamics": {"dt": 1.0, "t_end": 5.0, "record_every": 1},
      "initial": {"kind": "uniform_box_gauss", "n": 8,
                  "box_half": [2.0, 2.0, 2.0], "sigma_v": 0.5, "rv0": 1.0},
      "output": {"dir": ")" + (dir / "out").string() + R"("}})";
    auto res = run_cli({"simulate", write_config(dir, cfg).string()});
    CHECK(res.code == 3);
    CHECK(res.err.find("numeric") != std::string::npos);
}

TEST_CASE("cli: three-dimensional runs dispatch correctly") {
    const auto dir = fresh_dir("threed");
    std::string cfg = R"({
      "seed": 5,
      "dimension": 3,
      "region": {"kind": "ball", "radius": 1.0},
      "dynamics": {"dt": 0.01, "t_end": 0.05, "record_every": 5},
      "initial": {"kind": "uniform_box_gauss", "n": 10,
                  "box_half": [1.0, 1.0, 1.0], "sigma_v": 0.3, "rv0": 1.0},
      "output": {"dir": ")" + (dir / "out").string() + R"("}})";
    auto res = run_cli({"simulate", write_config(dir, cfg).string()});
    CHECK(res.code == 0);
    const std::string traj = read_text_file(dir / "out" / "trajectory.csv");
    CHECK(traj.rfind("t,id,x0,x1,x2,v0,v1,v2,m\n", 0) == 0);
    // The exported final measure is a valid 6-dimensional phase-space cloud.
    const auto mu = measure_from_csv(read_text_file(dir / "out" / "final_measure.csv"));
    CHECK(mu.dim == 6);
    CHECK(mu.size() == 10);
}

TEST_CASE("cli: transport size cap exits 4") {
    const auto dir = fresh_dir("sizecap");
    DiscreteMeasure big;
    big.dim = 4;
    const std::size_t n = kTransportSizeCap + 1;
    big.weights.assign(n, 1.0 / static_cast<double>(n));
    big.points.assign(n * 4, 0.0);
    // Exact weight normalization for validate().
    double s = 0.0;
    for (std::size_t i = 0; i + 1 < n; ++i) s += big.weights[i];
    big.weights[n - 1] = 1.0 - s;
    const fs::path a = dir / "big.csv";
    write_text_file(a, measure_to_csv(big));
    auto res = run_cli({"w1", a.string(), a.string()});
    CHECK(res.code == 4);
    CHECK(res.err.find("size_cap") != std::string::npos);
    CHECK(res.err.find("subsample") != std::string::npos);
}

TEST_CASE("cli: environment variable overrides the output directory") {
    const auto dir = fresh_dir("envdir");
    const auto cfgp = write_config(dir, tiny_config(dir / "ignored"));
    const fs::path envdir = dir / "env_out";
    setenv("SWARMLAB_OUTPUT_DIR", envdir.string().c_str(), 1);
    auto res = run_cli({"simulate", cfgp.string(), "dynamics.t_end=0.02"});
    unsetenv("SWARMLAB_OUTPUT_DIR");
    CHECK(res.code == 0);
    CHECK(fs::exists(envdir / "manifest.json"));
    CHECK_FALSE(fs::exists(dir / "ignored" / "manifest.json"));
}

TEST_CASE("cli: negative counts are rejected, not wrapped") {
    const auto dir = fresh_dir("negcount");
    const auto cfgp = write_config(dir, tiny_config(dir / "out"));
    CHECK(run_cli({"simulate", cfgp.string(), "initial.n=-5"}).code == 2);
    CHECK(run_cli({"converge", cfgp.string(), "study.n_ref=0"}).code == 2);
    CHECK(run_cli({"simulate", cfgp.string(), "dynamics.record_every=-1"}).code == 2);
}
