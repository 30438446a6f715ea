#pragma once

// Command-line front end. Subcommands: simulate, converge, stability,
// hypcheck, w1, lipschitz, schema. Exit codes: 0 success, 2 configuration or
// schema violation, 3 numerical abort, 4 size-cap rejection, 1 anything else.
// Failures also emit a machine-readable error JSON on stderr.

#include <cstdlib>
#include <filesystem>
#include <iostream>
#include <string>
#include <vector>

#include "swarmlab/config.hpp"
#include "swarmlab/version.hpp"

namespace swarmlab::cli {

namespace detail {

inline std::filesystem::path resolve_output_dir(const json& cfg) {
    if (const char* env = std::getenv("SWARMLAB_OUTPUT_DIR"); env && *env)
        return std::filesystem::path(env);
    return std::filesystem::path(cfg["output"]["dir"].get<std::string>());
}

inline json base_manifest(const std::string& command, const json& cfg) {
    json m;
    m["version"] = kVersion;
    m["command"] = command;
    m["workers"] = cfg["workers"];
    m["config"] = cfg;
    return m;
}

inline void write_manifest(const std::filesystem::path& dir, const json& manifest) {
    write_text_file(dir / "manifest.json", manifest.dump(2) + "\n");
}

template <std::size_t D>
std::vector<Vec<D>> hypcheck_velocities(const std::vector<double>& norms) {
    // Deterministic directions: successive golden-angle rotations in the
    // (e1,e2) plane, with a mild e3 tilt in 3D.
    std::vector<Vec<D>> out;
    const double golden = 2.399963229728653;
    for (std::size_t k = 0; k < norms.size(); ++k) {
        const double a = golden * static_cast<double>(k);
        Vec<D> dir{};
        dir[0] = std::cos(a);
        dir[1] = std::sin(a);
        if constexpr (D == 3) {
            dir[2] = 0.4 * std::sin(a * 0.5);
            dir = normalized(dir);
        }
        out.push_back(norms[k] * dir);
    }
    return out;
}

inline std::string study_table_csv(const std::string& study,
                                   const std::vector<ConvergencePoint>& rows) {
    std::string out = "study,N,t,d1,ratio\n";
    for (const auto& p : rows) {
        out += study + "," + std::to_string(p.n) + "," + fmt17(p.t) + "," + fmt17(p.d1) +
               "," + fmt17(p.ratio) + "\n";
    }
    return out;
}

template <std::size_t D>
int run_simulate(const json& cfg, const std::filesystem::path& dir, std::ostream& out) {
    const auto sim = sim_config_from_config<D>(cfg);
    const auto spec = initial_from_config<D>(cfg["initial"], cfg["initial"]);
    const auto seed = cfg["seed"].get<std::uint64_t>();
    const auto sample_seed = derive_seed(seed, "simulate");
    const auto state =
        sample_initial(spec, positive_count(cfg["initial"]["n"], "initial.n"), sample_seed);
    const auto traj = simulate(state, sim);

    json manifest = base_manifest("simulate", cfg);
    manifest["sample_seed"] = sample_seed;
    manifest["steps"] = traj.diagnostics.size() - 1;
    manifest["snapshots"] = traj.snapshots.size();
    json diag;
    diag["max_speed_initial"] = traj.diagnostics.front().max_speed;
    diag["max_speed_final"] = traj.diagnostics.back().max_speed;
    diag["kinetic_initial"] = traj.diagnostics.front().kinetic;
    diag["kinetic_final"] = traj.diagnostics.back().kinetic;
    diag["momentum_drift"] =
        norm(traj.diagnostics.back().momentum - traj.diagnostics.front().momentum);
    manifest["diagnostics"] = diag;

    if (cfg["output"]["write_trajectory"].get<bool>())
        write_text_file(dir / "trajectory.csv", trajectory_to_csv(traj));
    write_text_file(dir / "final_measure.csv", measure_to_csv(to_measure(traj.snapshots.back())));
    write_manifest(dir, manifest);
    out << "simulate: N=" << state.size() << " steps=" << traj.diagnostics.size() - 1
        << " outputs in " << dir.string() << "\n";
    return 0;
}

template <std::size_t D>
int run_converge(const json& cfg, const std::filesystem::path& dir, std::ostream& out) {
    const auto sim = sim_config_from_config<D>(cfg);
    const auto spec = initial_from_config<D>(cfg["initial"], cfg["initial"]);
    std::vector<std::size_t> n_list;
    for (const auto& n : cfg["study"]["n_list"])
        n_list.push_back(positive_count(n, "study.n_list"));
    std::vector<double> times;
    for (const auto& t : cfg["study"]["times"]) times.push_back(t.get<double>());
    const auto rep = convergence_study(spec, sim, n_list,
                                       positive_count(cfg["study"]["n_ref"], "study.n_ref"),
                                       times, cfg["seed"].get<std::uint64_t>(),
                                       cfg["study"]["slack"].get<double>());

    write_text_file(dir / "converge_table.csv", study_table_csv("converge", rep.table));
    json summary;
    summary["c_hat"] = rep.c_hat;
    summary["c_hat_half"] = rep.c_hat_half;
    summary["gronwall_consistent"] = rep.gronwall_consistent;
    summary["monotone_final"] = rep.monotone_final;
    summary["slack"] = rep.slack;
    summary["final_d1"] = rep.final_d1;
    summary["pass"] = rep.monotone_final && rep.gronwall_consistent;
    summary["reference_note"] =
        "distances are measured against a mollified N_ref-particle ensemble standing in "
        "for the continuum solution; observed sampling rates are reported, not asserted";
    write_text_file(dir / "converge_summary.json", summary.dump(2) + "\n");

    json manifest = base_manifest("converge", cfg);
    manifest["reference_seed"] = rep.reference_seed;
    manifest["study_seeds"] = rep.study_seeds;
    write_manifest(dir, manifest);
    out << "converge: c_hat=" << fmt17(rep.c_hat)
        << " monotone=" << (rep.monotone_final ? "yes" : "no") << " outputs in "
        << dir.string() << "\n";
    return 0;
}

template <std::size_t D>
int run_stability(const json& cfg, const std::filesystem::path& dir, std::ostream& out) {
    const auto sim = sim_config_from_config<D>(cfg);
    const auto spec_a = initial_from_config<D>(cfg["initial"], cfg["initial"]);
    const auto spec_b = initial_from_config<D>(cfg["initial_b"], cfg["initial"]);
    std::vector<double> times;
    for (const auto& t : cfg["study"]["times"]) times.push_back(t.get<double>());
    const auto n = positive_count(cfg["study"]["n_ref"], "study.n_ref");
    const auto rep =
        stability_study(spec_a, spec_b, sim, n, times, cfg["seed"].get<std::uint64_t>());

    std::vector<ConvergencePoint> rows;
    for (std::size_t k = 0; k < rep.times.size(); ++k)
        rows.push_back({n, rep.times[k], rep.identical_inputs ? 0.0 : rep.d1[k],
                        rep.identical_inputs ? 1.0 : rep.ratio[k]});
    write_text_file(dir / "stability_table.csv", study_table_csv("stability", rows));
    json summary;
    summary["identical_inputs"] = rep.identical_inputs;
    summary["c_hat"] = rep.c_hat;
    summary["d1"] = rep.d1;
    summary["ratio"] = rep.ratio;
    write_text_file(dir / "stability_summary.json", summary.dump(2) + "\n");

    json manifest = base_manifest("stability", cfg);
    manifest["seed_used"] = rep.seed_used;
    write_manifest(dir, manifest);
    out << "stability: " << (rep.identical_inputs ? "identical inputs" : fmt17(rep.c_hat))
        << " outputs in " << dir.string() << "\n";
    return 0;
}

template <std::size_t D>
int run_hypcheck(const json& cfg, const std::filesystem::path& dir, std::ostream& out) {
    const auto region = region_from_config<D>(cfg["region"]);
    std::vector<double> norms;
    for (const auto& v : cfg["study"]["v_norms"]) norms.push_back(v.get<double>());
    std::vector<double> eps_grid;
    for (const auto& e : cfg["study"]["eps_grid"]) eps_grid.push_back(e.get<double>());
    const auto vs = hypcheck_velocities<D>(norms);
    const auto rep = hypothesis_check(region, vs, eps_grid,
                                      positive_count(cfg["study"]["n_samples"], "study.n_samples"),
                                      derive_seed(cfg["seed"].get<std::uint64_t>(), "hypcheck"),
                                      cfg["workers"].get<int>());

    std::string fits = "v_norm,slope,r2\n";
    for (const auto& f : rep.measure_fits)
        fits += fmt17(f.v_norm) + "," + fmt17(f.slope) + "," + fmt17(f.r2) + "\n";
    write_text_file(dir / "hypcheck_fits.csv", fits);
    json summary;
    summary["pass"] = rep.pass;
    summary["min_r2"] = rep.min_r2;
    summary["c3_fitted"] = rep.c3_fitted;
    summary["c4_fitted"] = rep.c4_fitted;
    summary["violations_iii"] = rep.violations_iii;
    summary["violations_iv"] = rep.violations_iv;
    summary["margin"] = rep.margin;
    write_text_file(dir / "hypcheck_summary.json", summary.dump(2) + "\n");
    write_manifest(dir, base_manifest("hypcheck", cfg));
    out << "hypcheck: " << (rep.pass ? "PASS" : "FAIL") << " min_r2=" << fmt17(rep.min_r2)
        << " outputs in " << dir.string() << "\n";
    return 0;
}

template <std::size_t D>
int run_lipschitz(const json& cfg, const std::filesystem::path& dir, std::ostream& out) {
    auto sim = sim_config_from_config<D>(cfg);
    const auto spec = initial_from_config<D>(cfg["initial"], cfg["initial"]);
    const auto seed = cfg["seed"].get<std::uint64_t>();
    const std::vector<double> times{0.0, sim.t_end};
    const auto traj = reference_solution(spec, sim,
                                         positive_count(cfg["study"]["n_ref"], "study.n_ref"),
                                         sim.mollifier, times, derive_seed(seed, "reference"));
    const auto rep = lipschitz_diagnostic(
        sim.force, traj.snapshots.back(), sim.mollifier,
        positive_count(cfg["study"]["probes"], "study.probes"),
        cfg["study"]["probe_box"].get<double>(),
        spec.velocity_support_radius(), derive_seed(seed, "lipschitz"));

    json summary;
    summary["max_ratio"] = rep.max_ratio;
    summary["max_ratio_refined"] = rep.max_ratio_refined;
    summary["growth_constant"] = rep.growth_constant;
    summary["stable"] = rep.stable;
    summary["finite"] = rep.finite;
    write_text_file(dir / "lipschitz_summary.json", summary.dump(2) + "\n");
    write_manifest(dir, base_manifest("lipschitz", cfg));
    out << "lipschitz: max_ratio=" << fmt17(rep.max_ratio)
        << " growth=" << fmt17(rep.growth_constant) << " outputs in " << dir.string() << "\n";
    return 0;
}

inline int run_w1(const std::vector<std::string>& args, std::ostream& out) {
    std::vector<std::string> files;
    std::string plan_path;
    for (std::size_t k = 1; k < args.size(); ++k) {
        if (args[k] == "--plan") {
            if (k + 1 >= args.size()) throw config_error("w1: --plan needs a file path");
            plan_path = args[++k];
        } else {
            files.push_back(args[k]);
        }
    }
    if (files.size() != 2) throw config_error("usage: w1 <a.csv> <b.csv> [--plan out.csv]");
    const auto mu = measure_from_csv(read_text_file(files[0]));
    const auto nu = measure_from_csv(read_text_file(files[1]));
    const auto res = w1(mu, nu);
    if (!plan_path.empty()) write_text_file(plan_path, plan_to_csv(res.plan));
    out << fmt17(res.distance) << "\n";
    return 0;
}

} // namespace detail

inline int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
    try {
        if (args.empty())
            throw config_error("usage: swarmlab <simulate|converge|stability|hypcheck|w1|"
                               "lipschitz|schema> ...");
        const std::string& cmd = args[0];
        if (cmd == "schema") {
            out << schema_reference();
            return 0;
        }
        if (cmd == "w1") return detail::run_w1(args, out);

        if (args.size() < 2)
            throw config_error("usage: swarmlab " + cmd + " <config.json> [path=value ...]");
        const std::vector<std::string> overrides(args.begin() + 2, args.end());
        const json cfg = parse_config(read_text_file(args[1]), overrides);
        const auto dir = detail::resolve_output_dir(cfg);
        std::filesystem::create_directories(dir);
        const int dim = cfg["dimension"].get<int>();

        auto dispatch = [&](auto run2, auto run3) {
            return dim == 2 ? run2(cfg, dir, out) : run3(cfg, dir, out);
        };
        if (cmd == "simulate")
            return dispatch(detail::run_simulate<2>, detail::run_simulate<3>);
        if (cmd == "converge")
            return dispatch(detail::run_converge<2>, detail::run_converge<3>);
        if (cmd == "stability")
            return dispatch(detail::run_stability<2>, detail::run_stability<3>);
        if (cmd == "hypcheck")
            return dispatch(detail::run_hypcheck<2>, detail::run_hypcheck<3>);
        if (cmd == "lipschitz")
            return dispatch(detail::run_lipschitz<2>, detail::run_lipschitz<3>);
        throw config_error("unknown subcommand '" + cmd + "'");
    } catch (const config_error& e) {
        err << json{{"error", {{"type", "config"}, {"message", e.what()}}}}.dump() << "\n";
        return 2;
    } catch (const numeric_error& e) {
        err << json{{"error", {{"type", "numeric"}, {"message", e.what()}}}}.dump() << "\n";
        return 3;
    } catch (const size_cap_error& e) {
        err << json{{"error", {{"type", "size_cap"}, {"message", e.what()}}}}.dump() << "\n";
        return 4;
    } catch (const std::exception& e) {
        err << json{{"error", {{"type", "internal"}, {"message", e.what()}}}}.dump() << "\n";
        return 1;
    }
}

inline int run(int argc, char** argv) {
    std::vector<std::string> args(argv + 1, argv + argc);
    return run(args, std::cout, std::cerr);
}

} // namespace swarmlab::cli
