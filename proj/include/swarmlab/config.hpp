#pragma once

// Run configuration: a strict JSON document with sections [region], [force],
// [dynamics], [initial], [study], [output]. Unknown keys are errors; every
// omitted key takes a documented default, and the fully-defaulted echo that
// appears in run manifests re-parses to an identical configuration. Overrides
// use dotted paths ("dynamics.dt=0.0005").

#include <functional>
#include <string>
#include <vector>

#include "json.hpp"

#include "swarmlab/dynamics.hpp"
#include "swarmlab/harness.hpp"
#include "swarmlab/io.hpp"

namespace swarmlab {

struct SchemaField {
    enum class Type { Number, Integer, Boolean, String, Array, Object };
    std::string key;
    Type type = Type::Number;
    json def;
    std::string doc;
    std::vector<std::string> choices;      // enum strings, when non-empty
    std::vector<SchemaField> children;     // for Object
};

inline const SchemaField& config_schema() {
    using T = SchemaField::Type;
    static const SchemaField root{
        "", T::Object, json::object(), "run configuration", {},
        {
            {"seed", T::Integer, 12345, "global seed; all run streams derive from it", {}, {}},
            {"dimension", T::Integer, 2, "spatial dimension d (2 or 3)", {}, {}},
            {"workers", T::Integer, 1,
             "worker threads; 1 reproduces byte-identically, more keeps trajectories "
             "bit-identical but MC estimators only statistically so", {}, {}},
            {"region", T::Object, json::object(), "sensitivity region family K(v)", {},
             {
                 {"kind", T::String, "vision_cone", "region family",
                  {"ball", "speed_ball", "vision_cone"}, {}},
                 {"radius", T::Number, 1.0, "ball / cone radius r", {}, {}},
                 {"theta_star", T::Number, kPi / 3.0,
                  "cone: limiting half-angle theta* in (0,pi)", {}, {}},
                 {"shape_k", T::Number, 1.0, "cone: angle profile decay rate k > 0", {}, {}},
                 {"base", T::Number, 1.0, "speed_ball: radius at speed 0", {}, {}},
                 {"slope", T::Number, 1.0, "speed_ball: radius slope per unit speed", {}, {}},
                 {"min_radius", T::Number, 1.0, "speed_ball: radius floor", {}, {}},
                 {"max_radius", T::Number, 2.0, "speed_ball: radius cap (global radius)", {}, {}},
             }},
            {"force", T::Object, json::object(), "interaction model", {},
             {
                 {"kind", T::String, "cucker_smale", "force model class",
                  {"cucker_smale", "attractive_repulsive", "first_order"}, {}},
                 {"psi", T::Object, json::object(), "communication weight", {},
                  {
                      {"kind", T::String, "constant", "kernel type",
                       {"constant", "rational_decay"}, {}},
                      {"value", T::Number, 1.0, "constant level", {}, {}},
                      {"gamma", T::Number, 1.0, "rational decay exponent", {}, {}},
                  }},
                 {"coupling", T::Object, json::object(), "velocity coupling h", {},
                  {
                      {"kind", T::String, "identity", "coupling type",
                       {"identity", "clipped_linear"}, {}},
                      {"vmax", T::Number, 1.0, "clipped_linear magnitude cap", {}, {}},
                  }},
                 {"grad_phi", T::Object, json::object(),
                  "attractive-repulsive pair gradient (smooth Gaussian pair)", {},
                  {
                      {"attract_amp", T::Number, 1.0, "attraction amplitude", {}, {}},
                      {"attract_len", T::Number, 1.0, "attraction length scale", {}, {}},
                      {"repulse_amp", T::Number, 0.5, "repulsion amplitude", {}, {}},
                      {"repulse_len", T::Number, 0.5, "repulsion length scale", {}, {}},
                  }},
                 {"w_field", T::Object, json::object(), "first-order orientational field", {},
                  {
                      {"kind", T::String, "constant", "field type",
                       {"constant", "tanh_swirl"}, {}},
                      {"direction", T::Array, json::array({1.0, 0.0, 0.0}),
                       "constant field direction (first d entries used)", {}, {}},
                      {"angle", T::Number, 1.0, "tanh_swirl heading amplitude", {}, {}},
                      {"scale", T::Number, 1.0, "tanh_swirl ramp length", {}, {}},
                  }},
             }},
            {"dynamics", T::Object, json::object(), "time integration", {},
             {
                 {"dt", T::Number, 1e-3, "Euler step", {}, {}},
                 {"t_end", T::Number, 1.0, "final time", {}, {}},
                 {"record_every", T::Integer, 250, "snapshot stride in steps", {}, {}},
                 {"mode", T::String, "sharp", "indicator mode", {"sharp", "mollified"}, {}},
                 {"selection", T::String, "midpoint",
                  "Filippov selection at boundary pairs",
                  {"midpoint", "lower", "upper", "seeded_random"}, {}},
                 {"tol_b", T::Number, 1e-7, "boundary detection tolerance", {}, {}},
                 {"eps", T::Number, 0.05, "mollifier spatial width", {}, {}},
                 {"eta", T::Number, 0.05, "mollifier velocity width", {}, {}},
                 {"quad_nodes", T::Integer, 8, "quadrature nodes per axis", {}, {}},
                 {"use_grid", T::Boolean, true,
                  "uniform-grid neighbor list (bit-identical to all-pairs)", {}, {}},
                 {"check_max_speed", T::Boolean, false,
                  "assert per-step max-speed monotonicity (CS, h = id only)", {}, {}},
             }},
            {"initial", T::Object, json::object(), "initial density f0", {},
             {
                 {"kind", T::String, "uniform_box_gauss", "density family",
                  {"uniform_box_gauss", "two_cluster", "custom"}, {}},
                 {"n", T::Integer, 200, "particle count for `simulate`", {}, {}},
                 {"box_half", T::Array, json::array({8.0, 8.0, 8.0}),
                  "box half-extents (first d entries used)", {}, {}},
                 {"sigma_v", T::Number, 1.0, "velocity standard deviation", {}, {}},
                 {"rv0", T::Number, 2.5, "velocity support radius (rejection cutoff)", {}, {}},
                 {"center_a", T::Array, json::array({-3.0, 0.0, 0.0}), "cluster a center", {}, {}},
                 {"center_b", T::Array, json::array({3.0, 0.0, 0.0}), "cluster b center", {}, {}},
                 {"cluster_spread", T::Number, 1.0, "cluster position radius", {}, {}},
                 {"mean_velocity_a", T::Array, json::array({0.5, 0.0, 0.0}),
                  "cluster a mean velocity", {}, {}},
                 {"mean_velocity_b", T::Array, json::array({-0.5, 0.0, 0.0}),
                  "cluster b mean velocity", {}, {}},
                 {"velocity_jitter", T::Number, 0.2, "cluster velocity deviation", {}, {}},
                 {"samples", T::Array, json::array(),
                  "custom atoms, each [x..., v...] of length 2d", {}, {}},
             }},
            {"initial_b", T::Object, json::object(),
             "second initial density for `stability`; empty = same as [initial]", {},
             {
                 {"kind", T::String, "", "density family (empty inherits [initial])",
                  {"", "uniform_box_gauss", "two_cluster", "custom"}, {}},
                 {"n", T::Integer, 200, "unused (stability uses study.n_ref)", {}, {}},
                 {"box_half", T::Array, json::array({8.0, 8.0, 8.0}), "as in [initial]", {}, {}},
                 {"sigma_v", T::Number, 1.0, "as in [initial]", {}, {}},
                 {"rv0", T::Number, 2.5, "as in [initial]", {}, {}},
                 {"center_a", T::Array, json::array({-3.0, 0.0, 0.0}), "as in [initial]", {}, {}},
                 {"center_b", T::Array, json::array({3.0, 0.0, 0.0}), "as in [initial]", {}, {}},
                 {"cluster_spread", T::Number, 1.0, "as in [initial]", {}, {}},
                 {"mean_velocity_a", T::Array, json::array({0.5, 0.0, 0.0}), "as in [initial]",
                  {}, {}},
                 {"mean_velocity_b", T::Array, json::array({-0.5, 0.0, 0.0}), "as in [initial]",
                  {}, {}},
                 {"velocity_jitter", T::Number, 0.2, "as in [initial]", {}, {}},
                 {"samples", T::Array, json::array(), "as in [initial]", {}, {}},
             }},
            {"study", T::Object, json::object(), "study parameters", {},
             {
                 {"n_list", T::Array, json::array({100, 200, 400, 800, 1600}),
                  "convergence study particle counts (ascending)", {}, {}},
                 {"n_ref", T::Integer, 6400, "reference ensemble size", {}, {}},
                 {"times", T::Array, json::array({0.0, 0.25, 0.5, 0.75, 1.0}),
                  "sample times (multiples of dt, starting at 0)", {}, {}},
                 {"slack", T::Number, 1.15, "monotonicity slack factor", {}, {}},
                 {"eps_grid", T::Array,
                  json::array({0.02, 0.06, 0.1, 0.14, 0.18, 0.22, 0.26, 0.3}),
                  "hypcheck eps grid in (0,1)", {}, {}},
                 {"v_norms", T::Array, json::array({0.25, 0.75, 1.5, 5.0}),
                  "hypcheck velocity magnitudes", {}, {}},
                 {"n_samples", T::Integer, 100000, "MC samples per estimate", {}, {}},
                 {"widths", T::Array, json::array({0.2, 0.1, 0.05}),
                  "mollifier scaling study widths", {}, {}},
                 {"probes", T::Integer, 256, "lipschitz diagnostic probe pairs", {}, {}},
                 {"probe_box", T::Number, 8.0, "lipschitz probe position half-extent", {}, {}},
             }},
            {"output", T::Object, json::object(), "file output", {},
             {
                 {"dir", T::String, "out", "output directory "
                  "(SWARMLAB_OUTPUT_DIR overrides)", {}, {}},
                 {"write_trajectory", T::Boolean, true, "emit trajectory.csv", {}, {}},
                 {"write_plan", T::Boolean, false, "emit plan.csv for `w1`", {}, {}},
             }},
        }};
    return root;
}

namespace detail {

inline const char* type_name(SchemaField::Type t) {
    switch (t) {
    case SchemaField::Type::Number: return "number";
    case SchemaField::Type::Integer: return "integer";
    case SchemaField::Type::Boolean: return "boolean";
    case SchemaField::Type::String: return "string";
    case SchemaField::Type::Array: return "array";
    case SchemaField::Type::Object: return "object";
    }
    return "?";
}

inline void validate_against(json& node, const SchemaField& schema, const std::string& path) {
    if (schema.type != SchemaField::Type::Object) {
        bool ok = false;
        switch (schema.type) {
        case SchemaField::Type::Number: ok = node.is_number(); break;
        case SchemaField::Type::Integer: ok = node.is_number_integer(); break;
        case SchemaField::Type::Boolean: ok = node.is_boolean(); break;
        case SchemaField::Type::String: ok = node.is_string(); break;
        case SchemaField::Type::Array: ok = node.is_array(); break;
        default: break;
        }
        if (!ok)
            throw config_error("config: '" + path + "' must be a " +
                               type_name(schema.type));
        if (!schema.choices.empty()) {
            const std::string v = node.get<std::string>();
            bool found = false;
            for (const auto& c : schema.choices) found = found || c == v;
            if (!found)
                throw config_error("config: '" + path + "' has unknown value '" + v + "'");
        }
        return;
    }
    if (!node.is_object())
        throw config_error("config: '" + path + "' must be an object");
    for (auto it = node.begin(); it != node.end(); ++it) {
        const SchemaField* child = nullptr;
        for (const auto& c : schema.children)
            if (c.key == it.key()) child = &c;
        if (!child)
            throw config_error("config: unknown key '" +
                               (path.empty() ? it.key() : path + "." + it.key()) + "'");
        validate_against(it.value(), *child,
                         path.empty() ? it.key() : path + "." + it.key());
    }
    for (const auto& c : schema.children) {
        if (!node.contains(c.key)) {
            if (c.type == SchemaField::Type::Object) {
                node[c.key] = json::object();
                validate_against(node[c.key], c, path.empty() ? c.key : path + "." + c.key);
            } else {
                node[c.key] = c.def;
            }
        }
    }
}

} // namespace detail

// Parses text, applies dotted-path overrides, validates strictly, and fills
// in every documented default.
inline json parse_config(const std::string& text,
                         const std::vector<std::string>& overrides = {}) {
    json cfg;
    try {
        cfg = json::parse(text);
    } catch (const std::exception& e) {
        throw config_error(std::string("config: JSON parse failure: ") + e.what());
    }
    for (const auto& ov : overrides) {
        const auto eq = ov.find('=');
        if (eq == std::string::npos)
            throw config_error("override '" + ov + "' is not of the form path=value");
        const std::string path = ov.substr(0, eq);
        const std::string value = ov.substr(eq + 1);
        json parsed;
        try {
            parsed = json::parse(value);
        } catch (...) {
            parsed = value; // plain strings need no quotes
        }
        json* node = &cfg;
        std::size_t start = 0;
        for (;;) {
            const auto dot = path.find('.', start);
            const std::string key = path.substr(start, dot - start);
            if (key.empty()) throw config_error("override '" + ov + "' has an empty path step");
            if (dot == std::string::npos) {
                (*node)[key] = parsed;
                break;
            }
            node = &(*node)[key];
            start = dot + 1;
        }
    }
    detail::validate_against(cfg, config_schema(), "");
    const int dim = cfg["dimension"].get<int>();
    if (dim != 2 && dim != 3) throw config_error("config: dimension must be 2 or 3");
    return cfg;
}

inline std::string schema_reference() {
    std::string out = "swarmlab configuration reference (strict: unknown keys are errors)\n\n";
    std::function<void(const SchemaField&, const std::string&)> walk =
        [&](const SchemaField& f, const std::string& path) {
            if (f.type == SchemaField::Type::Object) {
                for (const auto& c : f.children)
                    walk(c, path.empty() ? c.key : path + "." + c.key);
                return;
            }
            out += path + "  (" + detail::type_name(f.type);
            if (!f.choices.empty()) {
                out += ": ";
                for (std::size_t i = 0; i < f.choices.size(); ++i)
                    out += (i ? "|" : "") + f.choices[i];
            }
            out += ", default " + f.def.dump() + ")\n    " + f.doc + "\n";
        };
    walk(config_schema(), "");
    out += "\noutput files\n"
           "    trajectory.csv   t,id,x0..,v0..,m per particle per snapshot\n"
           "    measure csv      x0..,v0..,weight per atom (17 significant digits)\n"
           "    plan.csv         i,j,mass optimal-plan triples\n"
           "    *_table.csv      study,N,t,d1,ratio rows per study point\n"
           "    *_summary.json   fitted constants and PASS/FAIL flags\n"
           "    manifest.json    config echo, derived seeds, diagnostics summary\n";
    return out;
}

// ------------------------------------------------------------------
// Typed builders
// ------------------------------------------------------------------

// json::get<std::size_t> would wrap negative values around; studies then try
// to allocate astronomical particle counts. Route every count through here.
inline std::size_t positive_count(const json& j, const std::string& what) {
    const auto v = j.get<long long>();
    if (v < 1) throw config_error("config: '" + what + "' must be a positive integer");
    return static_cast<std::size_t>(v);
}

template <std::size_t D>
inline Vec<D> vec_from(const json& arr, const std::string& what) {
    if (!arr.is_array() || arr.size() < D)
        throw config_error("config: '" + what + "' needs at least " + std::to_string(D) +
                           " entries");
    Vec<D> v;
    for (std::size_t k = 0; k < D; ++k) v[k] = arr[k].get<double>();
    return v;
}

template <std::size_t D>
inline RegionFamily<D> region_from_config(const json& r) {
    const std::string kind = r["kind"].get<std::string>();
    if (kind == "ball") return RegionFamily<D>::ball(r["radius"].get<double>());
    if (kind == "speed_ball")
        return RegionFamily<D>::speed_ball(r["base"].get<double>(), r["slope"].get<double>(),
                                           r["min_radius"].get<double>(),
                                           r["max_radius"].get<double>());
    AngleProfile p{r["theta_star"].get<double>(), r["shape_k"].get<double>()};
    return RegionFamily<D>::vision_cone(r["radius"].get<double>(), p);
}

template <std::size_t D>
inline ForceModel<D> force_from_config(const json& cfg) {
    const json& f = cfg["force"];
    ForceModel<D> model;
    model.region = region_from_config<D>(cfg["region"]);
    const std::string kind = f["kind"].get<std::string>();
    model.kind = kind == "cucker_smale"          ? ForceKind::CuckerSmale
                 : kind == "attractive_repulsive" ? ForceKind::AttractiveRepulsive
                                                  : ForceKind::FirstOrder;
    model.psi.kind = f["psi"]["kind"].get<std::string>() == "constant"
                         ? Kernel::Kind::Constant
                         : Kernel::Kind::RationalDecay;
    model.psi.value = f["psi"]["value"].get<double>();
    model.psi.gamma = f["psi"]["gamma"].get<double>();
    model.coupling.kind = f["coupling"]["kind"].get<std::string>() == "identity"
                              ? VelocityCoupling::Kind::Identity
                              : VelocityCoupling::Kind::ClippedLinear;
    model.coupling.vmax = f["coupling"]["vmax"].get<double>();
    model.grad_phi.attract_amp = f["grad_phi"]["attract_amp"].get<double>();
    model.grad_phi.attract_len = f["grad_phi"]["attract_len"].get<double>();
    model.grad_phi.repulse_amp = f["grad_phi"]["repulse_amp"].get<double>();
    model.grad_phi.repulse_len = f["grad_phi"]["repulse_len"].get<double>();
    model.w_field.kind = f["w_field"]["kind"].get<std::string>() == "constant"
                             ? OrientationField<D>::Kind::Constant
                             : OrientationField<D>::Kind::TanhSwirl;
    model.w_field.direction = vec_from<D>(f["w_field"]["direction"], "force.w_field.direction");
    model.w_field.swirl_angle = f["w_field"]["angle"].get<double>();
    model.w_field.swirl_scale = f["w_field"]["scale"].get<double>();
    model.validate();
    return model;
}

template <std::size_t D>
inline SimConfig<D> sim_config_from_config(const json& cfg) {
    const json& d = cfg["dynamics"];
    SimConfig<D> sim;
    sim.dt = d["dt"].get<double>();
    sim.t_end = d["t_end"].get<double>();
    sim.record_every = positive_count(d["record_every"], "dynamics.record_every");
    sim.mode = d["mode"].get<std::string>() == "sharp" ? ModeKind::Sharp : ModeKind::Mollified;
    const std::string sel = d["selection"].get<std::string>();
    sim.selection.kind = sel == "midpoint" ? SelectionRule::Kind::Midpoint
                         : sel == "lower"  ? SelectionRule::Kind::Lower
                         : sel == "upper"  ? SelectionRule::Kind::Upper
                                           : SelectionRule::Kind::SeededRandom;
    sim.selection.seed = cfg["seed"].get<std::uint64_t>();
    sim.tol_b = d["tol_b"].get<double>();
    sim.mollifier = {d["eps"].get<double>(), d["eta"].get<double>(),
                     static_cast<int>(positive_count(d["quad_nodes"], "dynamics.quad_nodes"))};
    sim.force = force_from_config<D>(cfg);
    sim.use_grid = d["use_grid"].get<bool>();
    sim.workers = cfg["workers"].get<int>();
    sim.check_max_speed = d["check_max_speed"].get<bool>();
    sim.seed = cfg["seed"].get<std::uint64_t>();
    sim.validate();
    return sim;
}

template <std::size_t D>
inline InitialDensitySpec<D> initial_from_config(const json& section, const json& fallback) {
    json src = section;
    if (src["kind"].get<std::string>().empty()) src = fallback;
    InitialDensitySpec<D> spec;
    const std::string kind = src["kind"].get<std::string>();
    spec.kind = kind == "uniform_box_gauss" ? InitialDensitySpec<D>::Kind::UniformBoxGaussianV
                : kind == "two_cluster"     ? InitialDensitySpec<D>::Kind::TwoClusterFlock
                                            : InitialDensitySpec<D>::Kind::Custom;
    spec.box_half = vec_from<D>(src["box_half"], "initial.box_half");
    spec.sigma_v = src["sigma_v"].get<double>();
    spec.rv0 = src["rv0"].get<double>();
    spec.center_a = vec_from<D>(src["center_a"], "initial.center_a");
    spec.center_b = vec_from<D>(src["center_b"], "initial.center_b");
    spec.cluster_spread = src["cluster_spread"].get<double>();
    spec.mean_velocity_a = vec_from<D>(src["mean_velocity_a"], "initial.mean_velocity_a");
    spec.mean_velocity_b = vec_from<D>(src["mean_velocity_b"], "initial.mean_velocity_b");
    spec.velocity_jitter = src["velocity_jitter"].get<double>();
    for (const auto& s : src["samples"]) {
        if (!s.is_array() || s.size() != 2 * D)
            throw config_error("config: initial.samples entries need 2d coordinates");
        std::pair<Vec<D>, Vec<D>> atom;
        for (std::size_t k = 0; k < D; ++k) atom.first[k] = s[k].get<double>();
        for (std::size_t k = 0; k < D; ++k) atom.second[k] = s[D + k].get<double>();
        spec.samples.push_back(atom);
    }
    spec.validate();
    return spec;
}

} // namespace swarmlab
