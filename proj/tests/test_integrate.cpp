#include <doctest.h>

#include <cmath>
#include <filesystem>

#include "sqg/kernels.hpp"
#include "sqg/integrate.hpp"
#include "sqg/snapshot.hpp"

using namespace sqg;

namespace {

SimConfig base_config(int m = 32) {
    SimConfig cfg;
    cfg.grid = GridSpec{m, 1.5, 0};
    cfg.params = PhysicalParams{1.0, 0.75};
    cfg.scheme = Scheme::DeterministicRk4;
    cfg.dt = 2e-3;
    cfg.t_end = 0.5;
    cfg.ic.kind = InitialCondition::Kind::RandomBand;
    cfg.ic.band = 8;
    cfg.ic.amplitude = 1.0;
    return cfg;
}

}  // namespace

TEST_CASE("single mode decays exactly like the semigroup") {
    for (double alpha : {0.6, 0.75}) {
        for (Scheme scheme :
             {Scheme::DeterministicRk4, Scheme::ExpEulerAdditive,
              Scheme::EulerMaruyama}) {
            SimConfig cfg = base_config(16);
            cfg.params.alpha = alpha;
            cfg.scheme = scheme;
            cfg.noise.type = NoiseConfig::Type::None;
            cfg.dt = 1e-3;
            cfg.t_end = 1.0;
            cfg.ic.kind = InitialCondition::Kind::CosX;
            SimResult res = simulate(cfg);
            const double amp = 2.0 * std::abs(res.final_theta.at(1, 0));
            CHECK(std::abs(amp - std::exp(-cfg.params.kappa)) < 1e-10);
            // Nothing leaks into other modes.
            CHECK(std::abs(res.final_theta.at(2, 0)) < 1e-18);
        }
    }
}

TEST_CASE("rk4 self-convergence is fourth order, euler first order") {
    auto run_final = [&](Scheme scheme, double dt) {
        SimConfig cfg = base_config();
        cfg.scheme = scheme;
        cfg.dt = dt;
        cfg.t_end = 0.25;
        return simulate(cfg).final_theta;
    };
    // dt values divide t_end so every run lands on the same final time.
    for (Scheme scheme : {Scheme::DeterministicRk4, Scheme::ExpEulerAdditive}) {
        SpectralField a = run_final(scheme, 5e-3);
        SpectralField b = run_final(scheme, 2.5e-3);
        SpectralField c = run_final(scheme, 1.25e-3);
        const double e1 = sobolev_norm(a - b, 1.0);
        const double e2 = sobolev_norm(b - c, 1.0);
        const double order = std::log2(e1 / e2);
        if (scheme == Scheme::DeterministicRk4)
            CHECK(order > 3.5);
        else
            CHECK(order == doctest::Approx(1.0).epsilon(0.35));
    }
}

TEST_CASE("deterministic runs dissipate L2 monotonically") {
    SimConfig cfg = base_config();
    cfg.diagnostic_stride = 1;
    SimResult res = simulate(cfg);
    for (std::size_t i = 1; i < res.diag.rows.size(); ++i)
        CHECK(res.diag.rows[i].l2 <= res.diag.rows[i - 1].l2 * (1.0 + 1e-14));
}

TEST_CASE("mean stays exactly zero") {
    SimConfig cfg = base_config(16);
    cfg.scheme = Scheme::ExpEulerAdditive;
    cfg.noise.type = NoiseConfig::Type::AdditiveE3;
    cfg.noise.e3 = NoiseSpecE3{2.0, 1.0};
    cfg.t_end = 0.2;
    SimResult res = simulate(cfg);
    CHECK(std::abs(res.final_theta.at(0, 0)) == 0.0);
}

TEST_CASE("deterministic energy law converges with dt") {
    // |theta(t)|^2 - |theta0|^2 + 2 kappa int ||theta||_{H^a}^2 -> 0.
    auto defect = [&](double dt) {
        SimConfig cfg = base_config();
        cfg.scheme = Scheme::ExpEulerAdditive;
        cfg.dt = dt;
        cfg.t_end = 0.25;
        cfg.diagnostic_stride = 1;
        SimResult res = simulate(cfg);
        const auto& first = res.diag.rows.front();
        const auto& last = res.diag.rows.back();
        return std::abs(last.l2 * last.l2 - first.l2 * first.l2 +
                        2.0 * cfg.params.kappa * last.diss_cum);
    };
    const double d1 = defect(4e-3);
    const double d2 = defect(2e-3);
    CHECK(d2 < d1);
    CHECK(d1 / d2 > 1.5);  // observed order >= 1
}

TEST_CASE("same config and seed reproduce bitwise; exec policy irrelevant") {
    SimConfig cfg = base_config(16);
    cfg.scheme = Scheme::EulerMaruyama;
    cfg.noise.type = NoiseConfig::Type::AdditiveE3;
    cfg.noise.e3 = NoiseSpecE3{2.0, 0.5};
    cfg.t_end = 0.1;
    cfg.seed = 77;
    SimResult a = simulate(cfg);
    SimResult b = simulate(cfg);
    CHECK(a.final_theta.coeffs().size() == b.final_theta.coeffs().size());
    for (std::size_t i = 0; i < a.final_theta.coeffs().size(); ++i)
        CHECK(a.final_theta.coeffs()[i] == b.final_theta.coeffs()[i]);

    kernels::set_default_exec(kernels::Exec::Serial);
    SimResult c = simulate(cfg);
    kernels::set_default_exec(kernels::Exec::OpenMP);
    for (std::size_t i = 0; i < a.final_theta.coeffs().size(); ++i)
        CHECK(a.final_theta.coeffs()[i] == c.final_theta.coeffs()[i]);
}

TEST_CASE("decomposed deterministic run equals the direct run") {
    SimConfig cfg = base_config(16);
    cfg.t_end = 0.2;
    cfg.scheme = Scheme::ExpEulerAdditive;  // v-z split, z stays 0
    SimResult split = simulate(cfg);
    cfg.scheme = Scheme::EulerMaruyama;  // same drift update on theta
    SimResult direct = simulate(cfg);
    for (std::size_t i = 0; i < split.final_theta.coeffs().size(); ++i)
        CHECK(split.final_theta.coeffs()[i] == direct.final_theta.coeffs()[i]);
}

TEST_CASE("cross-formulation: v-z split vs direct EM on a shared stream") {
    SimConfig cfg = base_config(16);
    cfg.noise.type = NoiseConfig::Type::AdditiveE3;
    cfg.noise.e3 = NoiseSpecE3{2.0, 0.5};
    cfg.t_end = 0.5;
    cfg.seed = 33;
    cfg.scheme = Scheme::ExpEulerAdditive;
    SimResult split = simulate(cfg);
    cfg.scheme = Scheme::EulerMaruyama;
    SimResult direct = simulate(cfg);
    const double diff = sobolev_norm(split.final_theta - direct.final_theta, 0.0);
    const double scale = sobolev_norm(direct.final_theta, 0.0);
    CHECK(diff / scale < 10.0 * cfg.dt);
}

TEST_CASE("perturbation growth proxy for pathwise uniqueness") {
    SimConfig cfg = base_config(16);
    cfg.scheme = Scheme::EulerMaruyama;
    cfg.noise.type = NoiseConfig::Type::AdditiveE3;
    cfg.noise.e3 = NoiseSpecE3{2.0, 0.5};
    cfg.t_end = 1.0;
    cfg.ic.ic_seed = 5;
    SimResult a = simulate(cfg);
    // Perturb the initial data; same stream.
    SimConfig cfg2 = cfg;
    cfg2.ic.amplitude *= 1.0 + 1e-6;
    SimResult b = simulate(cfg2);
    const double d0 = 1e-6 * 1.0;  // H^1-normalized ICs differ by ~1e-6
    const double dT =
        sobolev_norm(apply_lambda(a.final_theta - b.final_theta, -0.5), 0.0);
    // Growth stays within e^{C t} for a sane C.
    CHECK(dT < d0 * std::exp(20.0));
    CHECK(dT > 0.0);
}

TEST_CASE("blow-up guard trips with a diagnostic") {
    SimConfig cfg = base_config(16);
    cfg.blowup_ceiling = 1e-3;
    CHECK_THROWS_AS(simulate(cfg), BlowUpError);
}

TEST_CASE("config validation catches bad setups") {
    SimConfig cfg = base_config();
    cfg.dt = -1.0;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = base_config();
    cfg.noise.type = NoiseConfig::Type::AdditiveE3;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);  // rk4 with noise
    cfg = base_config();
    cfg.delta_mollify = 4.0 * cfg.dt;  // needs >= 8 dt
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
    cfg = base_config();
    cfg.params.alpha = 1.2;
    CHECK_THROWS_AS(cfg.validate(), ConfigError);
}

TEST_CASE("delayed-velocity scheme runs and stays consistent") {
    SimConfig cfg = base_config(16);
    cfg.scheme = Scheme::EulerMaruyama;
    cfg.dt = 2.5e-3;
    cfg.delta_mollify = 0.1;
    cfg.t_end = 0.5;
    SimResult res = simulate(cfg);
    CHECK(res.final_theta.all_finite());
    // The mollified run tracks the plain run at O(delta).
    SimConfig plain = cfg;
    plain.delta_mollify = 0.0;
    SimResult pres = simulate(plain);
    const double diff =
        sobolev_norm(res.final_theta - pres.final_theta, 0.0);
    CHECK(diff < 0.5 * sobolev_norm(pres.final_theta, 0.0));
}

TEST_CASE("diagnostics rows follow the stride schedule") {
    SimConfig cfg = base_config(16);
    cfg.dt = 1e-2;
    cfg.t_end = 0.5;  // 50 steps
    cfg.diagnostic_stride = 7;
    SimResult res = simulate(cfg);
    // Rows at 0,7,...,49 plus the final step 50.
    CHECK(res.diag.rows.size() == 9);
    CHECK(res.diag.rows.back().t == doctest::Approx(0.5));
}

TEST_CASE("ensembles are independent of scheduling") {
    SimConfig cfg = base_config(16);
    cfg.scheme = Scheme::EulerMaruyama;
    cfg.noise.type = NoiseConfig::Type::AdditiveE3;
    cfg.noise.e3 = NoiseSpecE3{2.0, 0.5};
    cfg.t_end = 0.1;
    auto a = run_ensemble(cfg, 6);
    auto b = run_ensemble(cfg, 6);
    for (int i = 0; i < 6; ++i) {
        CHECK(a[i].rows.size() == b[i].rows.size());
        for (std::size_t r = 0; r < a[i].rows.size(); ++r)
            CHECK(a[i].rows[r].l2 == b[i].rows[r].l2);
    }
    // Different trajectories see different noise.
    CHECK(a[0].rows.back().l2 != a[1].rows.back().l2);
}

TEST_CASE("checkpoint resume is bit-exact") {
    namespace fs = std::filesystem;
    const fs::path tmp = fs::temp_directory_path() / "sqg_resume_test";
    fs::remove_all(tmp);
    fs::create_directories(tmp);

    for (Scheme scheme : {Scheme::EulerMaruyama, Scheme::ExpEulerAdditive}) {
        SimConfig cfg = base_config(16);
        cfg.scheme = scheme;
        cfg.noise.type = NoiseConfig::Type::AdditiveE3;
        cfg.noise.e3 = NoiseSpecE3{2.0, 0.5};
        cfg.dt = 5e-3;
        cfg.t_end = 0.4;  // 80 steps
        cfg.seed = 91;

        // Continuous run, checkpointing at step 40.
        const fs::path snap = tmp / "theta.snap";
        SnapshotSink sink = [&](const TrajectoryState& st) {
            if (st.step_index != 40) return;
            write_snapshot(snap.string(), st.theta);
            if (st.decomposed) {
                write_snapshot(sibling_snapshot(snap.string(), 'v'), st.v);
                write_snapshot(sibling_snapshot(snap.string(), 'z'), st.z);
            }
        };
        SimConfig full = cfg;
        full.snapshot_stride = 40;
        SimResult whole = simulate(full, 0, sink);

        SimConfig resume = cfg;
        resume.start_step = 40;
        resume.ic.kind = InitialCondition::Kind::Snapshot;
        resume.ic.snapshot_path = snap.string();
        SimResult tail = simulate(resume, 0);
        REQUIRE(tail.final_theta.coeffs().size() ==
                whole.final_theta.coeffs().size());
        for (std::size_t i = 0; i < whole.final_theta.coeffs().size(); ++i)
            CHECK(whole.final_theta.coeffs()[i] == tail.final_theta.coeffs()[i]);
    }
    fs::remove_all(tmp);
}

TEST_CASE("stability advisory flags oversized steps") {
    SimConfig cfg = base_config(32);
    cfg.ic.amplitude = 50.0;
    cfg.dt = 5e-2;
    cfg.t_end = 5e-2;
    cfg.blowup_ceiling = 1e12;
    SimResult res = simulate(cfg);
    CHECK(res.stability_advisory);

    SimConfig calm = base_config(16);
    calm.t_end = 0.05;
    CHECK_FALSE(simulate(calm).stability_advisory);
}
