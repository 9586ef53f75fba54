#include <doctest.h>

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "sqg/corpus.hpp"
#include "sqg/experiments.hpp"
#include "sqg/snapshot.hpp"

using namespace sqg;
namespace fs = std::filesystem;

namespace {

struct TempDir {
    fs::path path;
    TempDir(const std::string& tag) {
        path = fs::temp_directory_path() / ("sqg_test_" + tag);
        fs::remove_all(path);
        fs::create_directories(path);
    }
    ~TempDir() { fs::remove_all(path); }
};

void write_file(const fs::path& p, const std::string& s) {
    std::ofstream out(p);
    out << s;
}

}  // namespace

TEST_CASE("snapshot round trip") {
    TempDir tmp("snap");
    const GridSpec grid{16, 1.5, 0};
    SpectralField f = random_band_field(grid, 8, 1.0, 5);
    const std::string path = (tmp.path / "f.snap").string();
    write_snapshot(path, f);
    SpectralField g = read_snapshot(path, grid);
    for (std::size_t i = 0; i < f.coeffs().size(); ++i)
        CHECK(f.coeffs()[i] == g.coeffs()[i]);

    // Wrong resolution is rejected; self-described read works.
    CHECK_THROWS_AS(read_snapshot(path, GridSpec{32, 1.5, 0}), ConfigError);
    SpectralField h = read_snapshot(path);
    CHECK(h.grid().modes_per_dim == 16);

    // Corrupt magic.
    write_file(tmp.path / "bad.snap", "not a snapshot");
    CHECK_THROWS_AS(read_snapshot((tmp.path / "bad.snap").string()), ConfigError);
}

TEST_CASE("config parsing: defaults, validation, unknown keys") {
    TempDir tmp("cfg");
    const fs::path p = tmp.path / "c.json";

    // Minimal config with comments; defaults filled.
    write_file(p, R"({
      // minimal run
      "physics": {"kappa": 1.0, "alpha": 0.75},
      "grid": {"modes_per_dim": 16},
      "integrator": {"dt": 1e-2, "t_end": 0.1}
    })");
    ExperimentSpec spec = parse_experiment_file(p.string(), ExperimentKind::Simulate);
    CHECK(spec.sim.grid.modes_per_dim == 16);
    CHECK(spec.sim.diagnostic_stride == 10);  // default
    CHECK(spec.sim.lp_diag_p == 4.0);         // default

    // alpha out of range.
    write_file(p, R"({"physics": {"kappa": 1.0, "alpha": 1.2}})");
    try {
        parse_experiment_file(p.string(), ExperimentKind::Simulate);
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("alpha must lie in (0,1)") !=
              std::string::npos);
    }

    // Unknown keys rejected.
    write_file(p, R"({"physics": {"kappa": 1.0, "alpha": 0.7, "beta": 2}})");
    CHECK_THROWS_AS(parse_experiment_file(p.string(), ExperimentKind::Simulate),
                    ConfigError);

    // Parse errors carry position info.
    write_file(p, "{\"physics\": }");
    try {
        parse_experiment_file(p.string(), ExperimentKind::Simulate);
        CHECK(false);
    } catch (const ConfigError& e) {
        CHECK(std::string(e.what()).find("parse error") != std::string::npos);
    }

    // Kind mismatch between file and subcommand.
    write_file(p, R"({"kind": "couple"})");
    CHECK_THROWS_AS(parse_experiment_file(p.string(), ExperimentKind::Simulate),
                    ConfigError);

    // Divergent-trace noise surfaces as a config-stage error.
    write_file(p, R"({
      "grid": {"modes_per_dim": 16},
      "noise": {"type": "additive_e1", "amplitude": 1.0, "decay": 0.5},
      "integrator": {"scheme": "euler-maruyama", "dt": 1e-2, "t_end": 0.1}
    })");
    ExperimentSpec s2 =
        parse_experiment_file(p.string(), ExperimentKind::Simulate);
    CHECK_THROWS_AS(Integrator(s2.sim), DivergentTraceError);
}

TEST_CASE("simulate experiment writes artifacts and an exact manifest") {
    TempDir tmp("sim");
    ExperimentSpec spec;
    spec.kind = ExperimentKind::Simulate;
    spec.sim.grid = GridSpec{16, 1.5, 0};
    spec.sim.params = PhysicalParams{1.0, 0.75};
    spec.sim.scheme = Scheme::EulerMaruyama;
    spec.sim.noise.type = NoiseConfig::Type::AdditiveE3;
    spec.sim.noise.e3 = NoiseSpecE3{2.0, 0.5};
    spec.sim.dt = 5e-3;
    spec.sim.t_end = 0.1;
    spec.sim.snapshot_stride = 10;
    spec.sim.ic.kind = InitialCondition::Kind::RandomBand;
    spec.out_dir = (tmp.path / "run1").string();
    CHECK(run_experiment(spec) == 0);
    CHECK(fs::exists(tmp.path / "run1" / "diagnostics.csv"));
    CHECK(fs::exists(tmp.path / "run1" / "manifest.json"));
    CHECK(fs::exists(tmp.path / "run1" / "plot.py"));
    CHECK(fs::exists(tmp.path / "run1" / "snapshots"));

    // Rerun from the manifest: byte-identical CSV.
    ExperimentSpec again = parse_experiment_file(
        (tmp.path / "run1" / "manifest.json").string(), ExperimentKind::Simulate);
    again.out_dir = (tmp.path / "run2").string();
    CHECK(run_experiment(again) == 0);
    CHECK(fnv1a64_file((tmp.path / "run1" / "diagnostics.csv").string()) ==
          fnv1a64_file((tmp.path / "run2" / "diagnostics.csv").string()));
}

TEST_CASE("csv row counts follow the stride schedule") {
    TempDir tmp("csv");
    ExperimentSpec spec;
    spec.kind = ExperimentKind::Simulate;
    spec.sim.grid = GridSpec{16, 1.5, 0};
    spec.sim.scheme = Scheme::DeterministicRk4;
    spec.sim.dt = 1e-2;
    spec.sim.t_end = 0.5;  // 50 steps
    spec.sim.diagnostic_stride = 7;
    spec.out_dir = (tmp.path / "run").string();
    CHECK(run_experiment(spec) == 0);
    std::ifstream in(tmp.path / "run" / "diagnostics.csv");
    std::string line;
    int rows = 0;
    while (std::getline(in, line))
        if (!line.empty()) ++rows;
    CHECK(rows == 1 + 9);  // header + rows at 0,7,...,49,50
}

TEST_CASE("verify experiment emits a structured report") {
    TempDir tmp("verify");
    ExperimentSpec spec;
    spec.kind = ExperimentKind::Verify;
    spec.verify.modes_per_dim = 16;
    spec.out_dir = (tmp.path / "v").string();
    CHECK(run_experiment(spec) == 0);
    CHECK(fs::exists(tmp.path / "v" / "report.json"));
    CHECK(fs::exists(tmp.path / "v" / "report.txt"));
}

TEST_CASE("spectrum experiment emits the sigma audit") {
    TempDir tmp("spectrum");
    ExperimentSpec spec;
    spec.kind = ExperimentKind::Spectrum;
    spec.sim.grid = GridSpec{16, 1.5, 0};
    spec.sim.noise.type = NoiseConfig::Type::AdditiveE3;
    spec.sim.noise.e3 = NoiseSpecE3{2.0, 1.0};
    spec.spectrum.emit_constants = true;
    spec.spectrum.corpus_samples = 8;
    spec.out_dir = (tmp.path / "s").string();
    CHECK(run_experiment(spec) == 0);
    CHECK(fs::exists(tmp.path / "s" / "sigma.csv"));
    CHECK(fs::exists(tmp.path / "s" / "constants.json"));
    CHECK(fs::exists(tmp.path / "s" / "spectrum_report.json"));

    // sigma.csv has the documented header.
    std::ifstream in(tmp.path / "s" / "sigma.csv");
    std::string header;
    std::getline(in, header);
    CHECK(header == "kx,ky,sigma");

    // Constants round-trip through their JSON file.
    EmpiricalConstants c =
        load_constants((tmp.path / "s" / "constants.json").string());
    CHECK(c.modes_per_dim == 16);
    CHECK(c.c_r > 0.0);
}

TEST_CASE("ergodic experiment produces running averages") {
    TempDir tmp("ergodic");
    ExperimentSpec spec;
    spec.kind = ExperimentKind::Ergodic;
    spec.sim.grid = GridSpec{16, 1.5, 0};
    spec.sim.scheme = Scheme::EulerMaruyama;
    spec.sim.noise.type = NoiseConfig::Type::AdditiveE3;
    spec.sim.noise.e3 = NoiseSpecE3{2.0, 0.5};
    spec.sim.dt = 0.02;
    spec.sim.t_end = 80.0;
    spec.sim.diagnostic_stride = 5;
    spec.sim.ic.kind = InitialCondition::Kind::Zero;
    spec.ergodic.burn_in = 10.0;
    spec.ergodic.batches = 8;
    spec.out_dir = (tmp.path / "e").string();
    CHECK(run_experiment(spec) == 0);
    CHECK(fs::exists(tmp.path / "e" / "ergodic.csv"));
    CHECK(fs::exists(tmp.path / "e" / "ergodic_report.json"));
}

TEST_CASE("SQG_OUTPUT_ROOT prefixes relative output directories") {
    TempDir tmp("envroot");
    setenv("SQG_OUTPUT_ROOT", tmp.path.c_str(), 1);
    ExperimentSpec spec;
    spec.kind = ExperimentKind::Verify;
    spec.verify.modes_per_dim = 16;
    spec.out_dir = "nested/v";
    const int rc = run_experiment(spec);
    unsetenv("SQG_OUTPUT_ROOT");
    CHECK(rc == 0);
    CHECK(fs::exists(tmp.path / "nested" / "v" / "report.json"));
}
