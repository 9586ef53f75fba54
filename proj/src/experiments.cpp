#include <chrono>
#include <cmath>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <sstream>

#include <json.hpp>

#include "sqg/corpus.hpp"
#include "sqg/errors.hpp"
#include "sqg/experiments.hpp"
#include "sqg/snapshot.hpp"
#include "sqg/transform.hpp"

namespace sqg {

using nlohmann::json;
namespace fs = std::filesystem;

namespace {

constexpr const char* kToolVersion = "sqg 0.1.0";

void write_text(const std::string& path, const std::string& content) {
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ConfigError("cannot write " + path);
    out << content;
}

std::string csv_num(double v) {
    std::ostringstream os;
    os << std::setprecision(17) << v;
    return os.str();
}

json certificates_json(const AdditiveSpectralNoise& noise) {
    const TraceCertificates& c = noise.certificates();
    return json{{"trace_retained", c.trace_retained},
                {"trace_tail_bound", c.trace_tail},
                {"trace", c.trace()},
                {"e0_sigma", c.e0_sigma},
                {"e0_retained", c.e0_retained},
                {"e0_tail_bound", std::isinf(c.e0_tail) ? -1.0 : c.e0_tail},
                {"e0_divergent", std::isinf(c.e0_tail)},
                {"e1_holds", c.e1_holds},
                {"remark61_holds", c.remark61_holds}};
}

json constants_json(const EmpiricalConstants& c) {
    return json{{"modes_per_dim", c.modes_per_dim}, {"alpha", c.alpha},
                {"p_critical", c.p_critical},       {"sigma_linf", c.sigma_linf},
                {"c_s_linf", c.c_s_linf},           {"c_s_embed", c.c_s_embed},
                {"c_r", c.c_r}};
}

// The standard figures are regenerated from the CSVs; no images are baked
// into the run directory.
constexpr const char* kPlotScript = R"PY(#!/usr/bin/env python3
"""Render the standard figures from the CSVs in this directory."""
import csv
import glob
import math
import os
import sys

import matplotlib
matplotlib.use("Agg")
import matplotlib.pyplot as plt

here = os.path.dirname(os.path.abspath(__file__))

def read_csv(path):
    with open(path) as f:
        rows = list(csv.DictReader(f))
    return {k: [float(r[k]) for r in rows] for k in rows[0]} if rows else {}

def plot_diagnostics():
    path = os.path.join(here, "diagnostics.csv")
    if not os.path.exists(path):
        return
    d = read_csv(path)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for col in ("l2", "h_alpha", "h1", "lp"):
        ax.plot(d["t"], d[col], label=col)
    ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel("norm")
    ax.legend()
    ax.set_title("norm decay")
    fig.tight_layout()
    fig.savefig(os.path.join(here, "norms.png"), dpi=150)

def plot_sync():
    paths = sorted(glob.glob(os.path.join(here, "sync_pair*.csv")))
    if not paths:
        return
    fig, ax = plt.subplots(figsize=(7, 4.5))
    for p in paths:
        d = read_csv(p)
        ax.plot(d["t"], d["d_hminushalf"], alpha=0.8)
    ax.set_yscale("log")
    ax.set_xlabel("t")
    ax.set_ylabel("|rho|_{H^{-1/2}}")
    ax.set_title("synchronization distance")
    fig.tight_layout()
    fig.savefig(os.path.join(here, "sync.png"), dpi=150)

def plot_ergodic():
    path = os.path.join(here, "ergodic.csv")
    if not os.path.exists(path):
        return
    d = read_csv(path)
    fig, ax = plt.subplots(figsize=(7, 4.5))
    ax.plot(d["t"], d["running_average"])
    ax.set_xlabel("t")
    ax.set_ylabel("running average")
    ax.set_title("ergodic time average")
    fig.tight_layout()
    fig.savefig(os.path.join(here, "ergodic.png"), dpi=150)

if __name__ == "__main__":
    plot_diagnostics()
    plot_sync()
    plot_ergodic()
    print("figures written to", here)
)PY";

struct Stopwatch {
    std::chrono::steady_clock::time_point start =
        std::chrono::steady_clock::now();
    double seconds() const {
        return std::chrono::duration<double>(std::chrono::steady_clock::now() -
                                             start)
            .count();
    }
};

void write_manifest(const fs::path& dir, const ExperimentSpec& spec,
                    const json& certificates, double wall, std::int64_t steps,
                    const std::vector<std::string>& outputs) {
    json m;
    m["manifest_version"] = 1;
    m["tool"] = kToolVersion;
    m["kind"] = kind_name(spec.kind);
    m["root_seed"] = spec.sim.seed;
    m["config"] = json::parse(experiment_echo_json(spec));
    m["certificates"] = certificates;
    m["wall_clock_seconds"] = wall;
    m["steps"] = steps;
    json outs = json::array();
    for (const auto& name : outputs) {
        outs.push_back(json{{"path", name},
                            {"bytes", fs::file_size(dir / name)},
                            {"fnv1a64", fnv1a64_file((dir / name).string())}});
    }
    m["outputs"] = outs;
    write_text((dir / "manifest.json").string(), m.dump(2) + "\n");
}

int run_simulate(const ExperimentSpec& spec) {
    Stopwatch watch;
    const fs::path dir(spec.out_dir);
    fs::create_directories(dir);
    std::vector<std::string> outputs;

    fs::path snap_dir = dir / "snapshots";
    SnapshotSink sink;
    if (spec.sim.snapshot_stride > 0) {
        fs::create_directories(snap_dir);
        sink = [&](const TrajectoryState& st) {
            std::ostringstream name;
            name << "snapshots/step_" << std::setw(8) << std::setfill('0')
                 << st.step_index << ".snap";
            write_snapshot((dir / name.str()).string(), st.theta);
            outputs.push_back(name.str());
            if (st.decomposed) {
                const std::string vname = sibling_snapshot(name.str(), 'v');
                const std::string zname = sibling_snapshot(name.str(), 'z');
                write_snapshot((dir / vname).string(), st.v);
                write_snapshot((dir / zname).string(), st.z);
                outputs.push_back(vname);
                outputs.push_back(zname);
            }
        };
    }

    SimResult res = simulate(spec.sim, 0, sink);
    write_diagnostics_csv((dir / "diagnostics.csv").string(), res.diag);
    outputs.push_back("diagnostics.csv");
    write_text((dir / "plot.py").string(), kPlotScript);
    outputs.push_back("plot.py");

    json certs;
    Integrator integ(spec.sim);
    if (integ.additive_noise())
        certs = certificates_json(*integ.additive_noise());
    write_manifest(dir, spec, certs, watch.seconds(), res.steps, outputs);
    return 0;
}

int run_couple(const ExperimentSpec& spec) {
    Stopwatch watch;
    const fs::path dir(spec.out_dir);
    fs::create_directories(dir);
    std::vector<std::string> outputs;

    CoupledConfig cfg = spec.coupled_config();
    cfg.validate();

    EmpiricalConstants constants;
    if (!spec.couple.constants_path.empty()) {
        constants = load_constants(spec.couple.constants_path);
    } else {
        const double sigma_cert = 0.25;  // matches the builder's fallback
        constants = compute_empirical_constants(
            cfg.base.grid, cfg.base.params,
            2.0 - cfg.base.params.alpha + sigma_cert, 32, 7);
    }

    auto records =
        run_synchronization_ensemble(cfg, constants, spec.couple.pairs);

    AdditiveSpectralNoise noise =
        cfg.base.noise.type == NoiseConfig::Type::AdditiveE1
            ? build_additive_noise(cfg.base.params, cfg.base.noise.e1,
                                   cfg.base.grid)
            : build_additive_noise(cfg.base.params, cfg.base.noise.e3,
                                   cfg.base.grid);
    const E2Map e2 = check_hypothesis_E2(noise, cfg.n_ball);
    const Delta0Report d0 = delta0_constant(
        cfg.base.params, noise.certificates().e0(), cfg.n_ball, constants);

    json pairs = json::array();
    std::vector<double> rates;
    for (std::size_t i = 0; i < records.size(); ++i) {
        std::ostringstream name;
        name << "sync_pair" << i << ".csv";
        write_sync_csv((dir / name.str()).string(), records[i]);
        outputs.push_back(name.str());

        std::vector<double> ts, ds, tw, dw;
        for (const auto& row : records[i].rows) {
            ts.push_back(row.t);
            ds.push_back(row.d_hminushalf);
        }
        fit_window(ts, ds, cfg.fit_transient, cfg.fit_floor, tw, dw);
        json entry{{"pair", i}};
        if (tw.size() >= 3) {
            DecayFit fit = fit_decay(tw, dw, DecayModel::Exponential);
            entry["rate"] = fit.rate;
            entry["amplitude"] = fit.amplitude;
            entry["residual_rms"] = fit.residual_rms;
            rates.push_back(fit.rate);
        } else {
            entry["rate"] = nullptr;
        }
        entry["gamma_hat_final"] = records[i].rows.back().gamma_hat;
        entry["control_energy"] = records[i].rows.back().h_sq_cum;
        pairs.push_back(entry);
    }
    std::sort(rates.begin(), rates.end());
    json report{{"pairs", pairs},
                {"lambda_np1", cfg.lambda_np1()},
                {"K0", cfg.k0_effective()},
                {"K0_above_lambda_np1", cfg.k0_effective() > cfg.lambda_np1()},
                {"p_critical", cfg.p_critical()},
                {"e2_op_norm", e2.op_norm},
                {"delta0", {{"value", d0.value},
                            {"positive", d0.positive},
                            {"lambda_np1", d0.lambda_np1},
                            {"drag", d0.drag},
                            {"p", d0.p}}},
                {"constants", constants_json(constants)}};
    if (!rates.empty())
        report["median_rate"] = rates[rates.size() / 2];
    write_text((dir / "couple_report.json").string(), report.dump(2) + "\n");
    outputs.push_back("couple_report.json");
    write_text((dir / "plot.py").string(), kPlotScript);
    outputs.push_back("plot.py");

    write_manifest(dir, spec, certificates_json(noise), watch.seconds(),
                   cfg.base.n_steps(), outputs);
    return 0;
}

int run_ergodic(const ExperimentSpec& spec) {
    Stopwatch watch;
    const fs::path dir(spec.out_dir);
    fs::create_directories(dir);
    std::vector<std::string> outputs;

    SimResult res = simulate(spec.sim, 0);
    const double burn = spec.ergodic.burn_in >= 0.0
                            ? spec.ergodic.burn_in
                            : 20.0 / spec.sim.params.lambda1();
    TimeAverageResult avg = time_average(res.diag, spec.ergodic.observable,
                                         burn, spec.ergodic.batches);

    std::ostringstream csv;
    csv << "t,running_average\n";
    for (std::size_t i = 0; i < avg.t.size(); ++i)
        csv << csv_num(avg.t[i]) << "," << csv_num(avg.running[i]) << "\n";
    write_text((dir / "ergodic.csv").string(), csv.str());
    outputs.push_back("ergodic.csv");
    write_diagnostics_csv((dir / "diagnostics.csv").string(), res.diag);
    outputs.push_back("diagnostics.csv");

    json report{{"mean", avg.mean},
                {"std_error", avg.std_error},
                {"batches", avg.batches},
                {"burn_in", avg.burn_in}};
    write_text((dir / "ergodic_report.json").string(), report.dump(2) + "\n");
    outputs.push_back("ergodic_report.json");
    write_text((dir / "plot.py").string(), kPlotScript);
    outputs.push_back("plot.py");

    json certs;
    Integrator integ(spec.sim);
    if (integ.additive_noise())
        certs = certificates_json(*integ.additive_noise());
    write_manifest(dir, spec, certs, watch.seconds(), res.steps, outputs);
    return 0;
}

int run_spectrum(const ExperimentSpec& spec) {
    Stopwatch watch;
    const fs::path dir(spec.out_dir);
    fs::create_directories(dir);
    std::vector<std::string> outputs;

    AdditiveSpectralNoise noise =
        spec.sim.noise.type == NoiseConfig::Type::AdditiveE1
            ? build_additive_noise(spec.sim.params, spec.sim.noise.e1,
                                   spec.sim.grid)
            : build_additive_noise(spec.sim.params, spec.sim.noise.e3,
                                   spec.sim.grid);

    if (spec.spectrum.emit_sigma_csv) {
        write_sigma_csv((dir / "sigma.csv").string(), noise);
        outputs.push_back("sigma.csv");
    }

    json report{{"certificates", certificates_json(noise)},
                {"lambda1", spec.sim.params.lambda1()},
                {"lambda_np1", spec.sim.params.lambda_ball_exit(
                                   spec.spectrum.couple_n)}};
    try {
        const E2Map e2 = check_hypothesis_E2(noise, spec.spectrum.couple_n);
        report["e2"] = json{{"holds", true}, {"op_norm", e2.op_norm}};
    } catch (const DegenerateModeError& e) {
        report["e2"] = json{{"holds", false},
                            {"offending_mode", {e.k1, e.k2}}};
    }
    if (spec.spectrum.emit_constants) {
        const EmpiricalConstants constants = compute_empirical_constants(
            spec.sim.grid, spec.sim.params,
            2.0 - spec.sim.params.alpha + noise.certificates().e0_sigma,
            spec.spectrum.corpus_samples, spec.spectrum.constants_seed);
        save_constants((dir / "constants.json").string(), constants);
        outputs.push_back("constants.json");
        report["constants"] = constants_json(constants);

        // Corpus record for the inequality regression suites (Lemmas
        // 2.1-2.4 style ratios at fixed parameter tuples).
        const GridSpec& g = spec.sim.grid;
        const int n = spec.spectrum.corpus_samples;
        const std::uint64_t cs = spec.spectrum.constants_seed;
        json corpus{
            {"modes_per_dim", g.modes_per_dim},
            {"samples", n},
            {"seed", cs},
            {"sobolev",
             {{"sigma", 0.5}, {"q", 2.0}, {"p", 4.0},
              {"value", empirical_sobolev_constant(g, 0.5, 2.0, 4.0, n, cs)}}},
            {"riesz",
             {{"s", 0.0}, {"p", 4.0},
              {"value", empirical_riesz_constant(g, 0.0, 4.0, n, cs + 1)}}},
            {"product",
             {{"s", 0.5}, {"p", 2.0}, {"pi", 4.0},
              {"value", empirical_product_constant(g, 0.5, 2.0, 4.0, 4.0, 4.0,
                                                   4.0, n, cs + 2)}}},
            {"commutator",
             {{"s", 1.5}, {"p", 2.0}, {"pi", 4.0},
              {"value", empirical_commutator_constant(g, 1.5, 2.0, 4.0, 4.0,
                                                      4.0, 4.0, n, cs + 3)}}},
            {"interpolation",
             {{"s1", -0.5}, {"s", 0.5}, {"s2", 1.5},
              {"value",
               empirical_interpolation_ratio(g, -0.5, 0.5, 1.5, n, cs + 4)}}}};
        write_text((dir / "corpus_constants.json").string(),
                   corpus.dump(2) + "\n");
        outputs.push_back("corpus_constants.json");
        report["corpus_constants"] = corpus;
        if (spec.sim.params.alpha > 0.5 && noise.certificates().e1_holds) {
            const Delta0Report d0 =
                delta0_constant(spec.sim.params, noise.certificates().e0(),
                                spec.spectrum.couple_n, constants);
            report["delta0"] = json{{"value", d0.value},
                                    {"positive", d0.positive},
                                    {"drag", d0.drag},
                                    {"p", d0.p}};
        }
    }
    write_text((dir / "spectrum_report.json").string(), report.dump(2) + "\n");
    outputs.push_back("spectrum_report.json");

    write_manifest(dir, spec, certificates_json(noise), watch.seconds(), 0,
                   outputs);
    return 0;
}

int run_verify(const ExperimentSpec& spec) {
    Stopwatch watch;
    const fs::path dir(spec.out_dir);
    fs::create_directories(dir);
    std::vector<std::string> outputs;

    auto claims = run_verify_suites(spec.verify);
    json arr = json::array();
    int failed = 0;
    std::ostringstream text;
    for (const auto& c : claims) {
        arr.push_back(json{{"id", c.id},
                           {"description", c.description},
                           {"observed", c.observed},
                           {"bound", c.bound},
                           {"pass", c.pass}});
        text << (c.pass ? "[PASS] " : "[FAIL] ") << c.id << ": "
             << c.description << "  (observed " << c.observed << ", bound "
             << c.bound << ")\n";
        if (!c.pass) ++failed;
    }
    text << claims.size() - failed << "/" << claims.size() << " claims passed\n";
    json report{{"claims", arr},
                {"passed", static_cast<int>(claims.size()) - failed},
                {"failed", failed}};
    write_text((dir / "report.json").string(), report.dump(2) + "\n");
    outputs.push_back("report.json");
    write_text((dir / "report.txt").string(), text.str());
    outputs.push_back("report.txt");
    write_manifest(dir, spec, json{}, watch.seconds(), 0, outputs);
    std::fputs(text.str().c_str(), stdout);
    return failed == 0 ? 0 : 3;
}

}  // namespace

void write_diagnostics_csv(const std::string& path,
                           const DiagnosticsRecord& rec) {
    std::ostringstream os;
    os << "t,l2,h_alpha,h1,lp,tail_frac,diss_cum\n";
    for (const auto& r : rec.rows) {
        os << csv_num(r.t) << "," << csv_num(r.l2) << "," << csv_num(r.h_alpha)
           << "," << csv_num(r.h1) << "," << csv_num(r.lp) << ","
           << csv_num(r.tail_frac) << "," << csv_num(r.diss_cum) << "\n";
    }
    write_text(path, os.str());
}

void write_sync_csv(const std::string& path, const SyncRecord& rec) {
    std::ostringstream os;
    os << "t,d_hminushalf,rho_l2,theta_lp,h_sq_cum,gamma_hat\n";
    for (const auto& r : rec.rows) {
        os << csv_num(r.t) << "," << csv_num(r.d_hminushalf) << ","
           << csv_num(r.rho_l2) << "," << csv_num(r.theta_lp) << ","
           << csv_num(r.h_sq_cum) << "," << csv_num(r.gamma_hat) << "\n";
    }
    write_text(path, os.str());
}

void write_sigma_csv(const std::string& path,
                     const AdditiveSpectralNoise& noise) {
    const int k = noise.grid().max_mode();
    std::ostringstream os;
    os << "kx,ky,sigma\n";
    for (int k1 = -k; k1 <= k; ++k1)
        for (int k2 = -k; k2 <= k; ++k2)
            os << k1 << "," << k2 << "," << csv_num(noise.sigma(k1, k2)) << "\n";
    write_text(path, os.str());
}

int run_experiment(const ExperimentSpec& spec_in) {
    ExperimentSpec spec = spec_in;
    // SQG_OUTPUT_ROOT prefixes relative output directories.
    if (const char* root = std::getenv("SQG_OUTPUT_ROOT");
        root && *root && !fs::path(spec.out_dir).is_absolute())
        spec.out_dir = (fs::path(root) / spec.out_dir).string();
    switch (spec.kind) {
        case ExperimentKind::Simulate: return run_simulate(spec);
        case ExperimentKind::Couple: return run_couple(spec);
        case ExperimentKind::Ergodic: return run_ergodic(spec);
        case ExperimentKind::Verify: return run_verify(spec);
        case ExperimentKind::Spectrum: return run_spectrum(spec);
    }
    return 1;
}

}  // namespace sqg
