#include <fstream>
#include <set>
#include <sstream>

#include <json.hpp>

#include "sqg/errors.hpp"
#include "sqg/experiments.hpp"

namespace sqg {

using nlohmann::json;

const char* kind_name(ExperimentKind k) {
    switch (k) {
        case ExperimentKind::Simulate: return "simulate";
        case ExperimentKind::Couple: return "couple";
        case ExperimentKind::Ergodic: return "ergodic";
        case ExperimentKind::Verify: return "verify";
        case ExperimentKind::Spectrum: return "spectrum";
    }
    return "?";
}

CoupledConfig ExperimentSpec::coupled_config() const {
    CoupledConfig c;
    c.base = sim;
    c.K0 = couple.K0;
    c.n_ball = couple.n_ball;
    c.ic_tilde = couple.ic_tilde;
    c.fit_transient = couple.fit_transient;
    c.fit_floor = couple.fit_floor;
    return c;
}

namespace {

[[noreturn]] void bad(const std::string& where, const std::string& what) {
    throw ConfigError("config." + where + ": " + what);
}

void reject_unknown(const json& j, const std::string& where,
                    const std::set<std::string>& allowed) {
    for (auto it = j.begin(); it != j.end(); ++it) {
        if (!allowed.count(it.key()))
            bad(where.empty() ? it.key() : where, "unknown key '" + it.key() + "'");
    }
}

template <typename T>
T get_or(const json& j, const std::string& key, T fallback) {
    if (!j.contains(key)) return fallback;
    try {
        return j.at(key).get<T>();
    } catch (const json::exception&) {
        bad(key, "wrong type");
    }
}

GridSpec parse_grid(const json& j) {
    reject_unknown(j, "grid", {"modes_per_dim", "padding_factor", "quad_points"});
    GridSpec g;
    g.modes_per_dim = get_or(j, "modes_per_dim", 64);
    g.padding_factor = get_or(j, "padding_factor", 1.5);
    g.quad_points = get_or(j, "quad_points", 0);
    g.validate();
    return g;
}

PhysicalParams parse_physics(const json& j) {
    reject_unknown(j, "physics", {"kappa", "alpha"});
    PhysicalParams p;
    p.kappa = get_or(j, "kappa", 1.0);
    p.alpha = get_or(j, "alpha", 0.75);
    if (!(p.alpha > 0.0 && p.alpha < 1.0))
        bad("physics.alpha", "alpha must lie in (0,1)");
    p.validate();
    return p;
}

NoiseConfig parse_noise(const json& j) {
    NoiseConfig n;
    const std::string type = get_or<std::string>(j, "type", "none");
    if (type == "none") {
        reject_unknown(j, "noise", {"type"});
        n.type = NoiseConfig::Type::None;
    } else if (type == "additive_e1") {
        reject_unknown(j, "noise", {"type", "amplitude", "decay", "trace_sigma"});
        n.type = NoiseConfig::Type::AdditiveE1;
        n.e1.amplitude = get_or(j, "amplitude", 1.0);
        n.e1.decay = get_or(j, "decay", 4.0);
        n.e1.trace_sigma = get_or(j, "trace_sigma", 0.25);
    } else if (type == "additive_e3") {
        reject_unknown(j, "noise", {"type", "s_reg", "q0_scale"});
        n.type = NoiseConfig::Type::AdditiveE3;
        n.e3.s_reg = get_or(j, "s_reg", 2.0);
        n.e3.q0_scale = get_or(j, "q0_scale", 1.0);
    } else if (type == "multiplicative") {
        reject_unknown(j, "noise", {"type", "amplitude", "decay", "profile"});
        n.type = NoiseConfig::Type::Multiplicative;
        n.mult_amplitude = get_or(j, "amplitude", 1.0);
        n.mult_decay = get_or(j, "decay", 3.0);
        const std::string prof = get_or<std::string>(j, "profile", "one");
        if (prof == "one")
            n.mult_profile = MultiplicativeDiagNoise::Profile::One;
        else if (prof == "identity")
            n.mult_profile = MultiplicativeDiagNoise::Profile::Identity;
        else if (prof == "smooth_linear")
            n.mult_profile = MultiplicativeDiagNoise::Profile::SmoothLinear;
        else
            bad("noise.profile", "expected one|identity|smooth_linear");
    } else {
        bad("noise.type", "expected none|additive_e1|additive_e3|multiplicative");
    }
    return n;
}

InitialCondition parse_ic(const json& j, const std::string& where) {
    reject_unknown(j, where, {"name", "amplitude", "band", "ic_seed", "path"});
    InitialCondition ic;
    const std::string name = get_or<std::string>(j, "name", "cosx");
    if (name == "zero")
        ic.kind = InitialCondition::Kind::Zero;
    else if (name == "cosx")
        ic.kind = InitialCondition::Kind::CosX;
    else if (name == "siny")
        ic.kind = InitialCondition::Kind::SinY;
    else if (name == "random")
        ic.kind = InitialCondition::Kind::RandomBand;
    else if (name == "snapshot")
        ic.kind = InitialCondition::Kind::Snapshot;
    else
        bad(where + ".name", "expected zero|cosx|siny|random|snapshot");
    ic.amplitude = get_or(j, "amplitude", 1.0);
    ic.band = get_or(j, "band", 4);
    ic.ic_seed = get_or<std::uint64_t>(j, "ic_seed", 1);
    ic.snapshot_path = get_or<std::string>(j, "path", "");
    if (ic.kind == InitialCondition::Kind::Snapshot && ic.snapshot_path.empty())
        bad(where, "snapshot initial condition needs 'path'");
    return ic;
}

Scheme parse_scheme(const std::string& s) {
    if (s == "deterministic-rk4") return Scheme::DeterministicRk4;
    if (s == "exp-euler-additive") return Scheme::ExpEulerAdditive;
    if (s == "euler-maruyama") return Scheme::EulerMaruyama;
    bad("integrator.scheme",
        "expected deterministic-rk4|exp-euler-additive|euler-maruyama");
}

void parse_integrator(const json& j, SimConfig& sim) {
    reject_unknown(j, "integrator",
                   {"scheme", "dt", "t_end", "snapshot_stride",
                    "diagnostic_stride", "delta_mollify", "mollify_noise",
                    "blowup_ceiling", "start_step"});
    sim.scheme =
        parse_scheme(get_or<std::string>(j, "scheme", "deterministic-rk4"));
    sim.dt = get_or(j, "dt", 1e-2);
    sim.t_end = get_or(j, "t_end", 1.0);
    sim.snapshot_stride = get_or(j, "snapshot_stride", 0);
    sim.diagnostic_stride = get_or(j, "diagnostic_stride", 10);
    sim.delta_mollify = get_or(j, "delta_mollify", 0.0);
    sim.mollify_noise = get_or(j, "mollify_noise", false);
    sim.blowup_ceiling = get_or(j, "blowup_ceiling", 1e6);
    sim.start_step = get_or<std::int64_t>(j, "start_step", 0);
}

Observable parse_observable(const std::string& s) {
    if (s == "l2_sq") return Observable::L2Sq;
    if (s == "h_alpha_sq") return Observable::HAlphaSq;
    if (s == "h1_sq") return Observable::H1Sq;
    if (s == "lp_p") return Observable::LpP;
    bad("ergodic.observable", "expected l2_sq|h_alpha_sq|h1_sq|lp_p");
}

ExperimentSpec parse_spec(const json& root, ExperimentKind kind) {
    reject_unknown(root, "",
                   {"kind", "seed", "output_dir", "grid", "physics", "noise",
                    "integrator", "initial_condition", "lp_diagnostic_p",
                    "couple", "ergodic", "spectrum", "verify"});
    ExperimentSpec spec;
    spec.kind = kind;
    if (root.contains("kind")) {
        const std::string k = root.at("kind").get<std::string>();
        if (k != kind_name(kind))
            bad("kind", "file says '" + k + "' but the requested experiment is '" +
                            std::string(kind_name(kind)) + "'");
    }
    spec.sim.seed = get_or<std::uint64_t>(root, "seed", 1);
    spec.out_dir = get_or<std::string>(root, "output_dir", "out");
    if (root.contains("grid")) spec.sim.grid = parse_grid(root.at("grid"));
    if (root.contains("physics"))
        spec.sim.params = parse_physics(root.at("physics"));
    if (root.contains("noise")) spec.sim.noise = parse_noise(root.at("noise"));
    if (root.contains("integrator"))
        parse_integrator(root.at("integrator"), spec.sim);
    if (root.contains("initial_condition"))
        spec.sim.ic = parse_ic(root.at("initial_condition"), "initial_condition");
    spec.sim.lp_diag_p = get_or(root, "lp_diagnostic_p", 4.0);

    if (root.contains("couple")) {
        const json& j = root.at("couple");
        reject_unknown(j, "couple",
                       {"K0", "N", "pairs", "fit_transient", "fit_floor",
                        "initial_condition_tilde", "constants_path"});
        spec.couple.K0 = get_or(j, "K0", -1.0);
        spec.couple.n_ball = get_or(j, "N", 2);
        spec.couple.pairs = get_or(j, "pairs", 8);
        spec.couple.fit_transient = get_or(j, "fit_transient", 2.0);
        spec.couple.fit_floor = get_or(j, "fit_floor", 1e-11);
        spec.couple.constants_path = get_or<std::string>(j, "constants_path", "");
        if (j.contains("initial_condition_tilde"))
            spec.couple.ic_tilde =
                parse_ic(j.at("initial_condition_tilde"), "couple.ic_tilde");
    }
    if (root.contains("ergodic")) {
        const json& j = root.at("ergodic");
        reject_unknown(j, "ergodic", {"observable", "burn_in", "batches"});
        spec.ergodic.observable =
            parse_observable(get_or<std::string>(j, "observable", "l2_sq"));
        spec.ergodic.burn_in = get_or(j, "burn_in", -1.0);
        spec.ergodic.batches = get_or(j, "batches", 32);
    }
    if (root.contains("spectrum")) {
        const json& j = root.at("spectrum");
        reject_unknown(j, "spectrum",
                       {"emit_sigma_csv", "emit_constants", "corpus_samples",
                        "constants_seed", "couple_N"});
        spec.spectrum.emit_sigma_csv = get_or(j, "emit_sigma_csv", true);
        spec.spectrum.emit_constants = get_or(j, "emit_constants", false);
        spec.spectrum.corpus_samples = get_or(j, "corpus_samples", 48);
        spec.spectrum.constants_seed =
            get_or<std::uint64_t>(j, "constants_seed", 7);
        spec.spectrum.couple_n = get_or(j, "couple_N", 2);
    }
    if (root.contains("verify")) {
        const json& j = root.at("verify");
        reject_unknown(j, "verify", {"modes_per_dim", "seed"});
        spec.verify.modes_per_dim = get_or(j, "modes_per_dim", 32);
        spec.verify.seed = get_or<std::uint64_t>(j, "seed", 2024);
    }

    if (spec.kind == ExperimentKind::Simulate ||
        spec.kind == ExperimentKind::Ergodic ||
        spec.kind == ExperimentKind::Couple)
        spec.sim.validate();
    if (spec.kind == ExperimentKind::Couple) spec.coupled_config().validate();
    if (spec.kind == ExperimentKind::Spectrum &&
        spec.sim.noise.type != NoiseConfig::Type::AdditiveE1 &&
        spec.sim.noise.type != NoiseConfig::Type::AdditiveE3)
        bad("noise", "spectrum experiment needs an additive noise block");
    return spec;
}

}  // namespace

ExperimentSpec parse_experiment_file(const std::string& path,
                                     ExperimentKind kind) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open config file: " + path);
    json root;
    try {
        root = json::parse(in, nullptr, true, /*ignore_comments=*/true);
    } catch (const json::parse_error& e) {
        throw ConfigError("parse error in " + path + ": " + e.what());
    }
    if (!root.is_object()) throw ConfigError("config root must be an object");
    // A manifest embeds the resolved config under "config".
    if (root.contains("manifest_version")) {
        if (!root.contains("config"))
            throw ConfigError("manifest without embedded config: " + path);
        root = root.at("config");
    }
    return parse_spec(root, kind);
}

namespace {

json ic_to_json(const InitialCondition& ic) {
    const char* name = "cosx";
    switch (ic.kind) {
        case InitialCondition::Kind::Zero: name = "zero"; break;
        case InitialCondition::Kind::CosX: name = "cosx"; break;
        case InitialCondition::Kind::SinY: name = "siny"; break;
        case InitialCondition::Kind::RandomBand: name = "random"; break;
        case InitialCondition::Kind::Snapshot: name = "snapshot"; break;
    }
    json j{{"name", name},
           {"amplitude", ic.amplitude},
           {"band", ic.band},
           {"ic_seed", ic.ic_seed}};
    if (!ic.snapshot_path.empty()) j["path"] = ic.snapshot_path;
    return j;
}

json noise_to_json(const NoiseConfig& n) {
    switch (n.type) {
        case NoiseConfig::Type::None:
            return json{{"type", "none"}};
        case NoiseConfig::Type::AdditiveE1:
            return json{{"type", "additive_e1"},
                        {"amplitude", n.e1.amplitude},
                        {"decay", n.e1.decay},
                        {"trace_sigma", n.e1.trace_sigma}};
        case NoiseConfig::Type::AdditiveE3:
            return json{{"type", "additive_e3"},
                        {"s_reg", n.e3.s_reg},
                        {"q0_scale", n.e3.q0_scale}};
        case NoiseConfig::Type::Multiplicative: {
            const char* prof =
                n.mult_profile == MultiplicativeDiagNoise::Profile::One
                    ? "one"
                : n.mult_profile == MultiplicativeDiagNoise::Profile::Identity
                    ? "identity"
                    : "smooth_linear";
            return json{{"type", "multiplicative"},
                        {"amplitude", n.mult_amplitude},
                        {"decay", n.mult_decay},
                        {"profile", prof}};
        }
    }
    return json{{"type", "none"}};
}

const char* scheme_name(Scheme s) {
    switch (s) {
        case Scheme::DeterministicRk4: return "deterministic-rk4";
        case Scheme::ExpEulerAdditive: return "exp-euler-additive";
        case Scheme::EulerMaruyama: return "euler-maruyama";
    }
    return "?";
}

const char* observable_name(Observable o) {
    switch (o) {
        case Observable::L2Sq: return "l2_sq";
        case Observable::HAlphaSq: return "h_alpha_sq";
        case Observable::H1Sq: return "h1_sq";
        case Observable::LpP: return "lp_p";
    }
    return "?";
}

}  // namespace

std::string experiment_echo_json(const ExperimentSpec& spec) {
    const SimConfig& s = spec.sim;
    json root{
        {"kind", kind_name(spec.kind)},
        {"seed", s.seed},
        {"output_dir", spec.out_dir},
        {"grid",
         {{"modes_per_dim", s.grid.modes_per_dim},
          {"padding_factor", s.grid.padding_factor},
          {"quad_points", s.grid.quad_points}}},
        {"physics", {{"kappa", s.params.kappa}, {"alpha", s.params.alpha}}},
        {"noise", noise_to_json(s.noise)},
        {"integrator",
         {{"scheme", scheme_name(s.scheme)},
          {"dt", s.dt},
          {"t_end", s.t_end},
          {"snapshot_stride", s.snapshot_stride},
          {"diagnostic_stride", s.diagnostic_stride},
          {"delta_mollify", s.delta_mollify},
          {"mollify_noise", s.mollify_noise},
          {"blowup_ceiling", s.blowup_ceiling},
          {"start_step", s.start_step}}},
        {"initial_condition", ic_to_json(s.ic)},
        {"lp_diagnostic_p", s.lp_diag_p}};
    if (spec.kind == ExperimentKind::Couple) {
        root["couple"] =
            json{{"K0", spec.couple.K0},
                 {"N", spec.couple.n_ball},
                 {"pairs", spec.couple.pairs},
                 {"fit_transient", spec.couple.fit_transient},
                 {"fit_floor", spec.couple.fit_floor},
                 {"initial_condition_tilde", ic_to_json(spec.couple.ic_tilde)}};
        if (!spec.couple.constants_path.empty())
            root["couple"]["constants_path"] = spec.couple.constants_path;
    }
    if (spec.kind == ExperimentKind::Ergodic)
        root["ergodic"] =
            json{{"observable", observable_name(spec.ergodic.observable)},
                 {"burn_in", spec.ergodic.burn_in},
                 {"batches", spec.ergodic.batches}};
    if (spec.kind == ExperimentKind::Spectrum)
        root["spectrum"] = json{{"emit_sigma_csv", spec.spectrum.emit_sigma_csv},
                                {"emit_constants", spec.spectrum.emit_constants},
                                {"corpus_samples", spec.spectrum.corpus_samples},
                                {"constants_seed", spec.spectrum.constants_seed},
                                {"couple_N", spec.spectrum.couple_n}};
    if (spec.kind == ExperimentKind::Verify)
        root["verify"] = json{{"modes_per_dim", spec.verify.modes_per_dim},
                              {"seed", spec.verify.seed}};
    return root.dump(2);
}

std::string fnv1a64_file(const std::string& path) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot hash missing file: " + path);
    std::uint64_t h = 0xcbf29ce484222325ull;
    char buf[65536];
    while (in) {
        in.read(buf, sizeof buf);
        const std::streamsize got = in.gcount();
        for (std::streamsize i = 0; i < got; ++i) {
            h ^= static_cast<unsigned char>(buf[i]);
            h *= 0x100000001b3ull;
        }
    }
    std::ostringstream os;
    os << std::hex << h;
    return os.str();
}

}  // namespace sqg
