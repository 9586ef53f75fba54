#include <doctest.h>

#include <cmath>
#include <numbers>

#include "sqg/corpus.hpp"
#include "sqg/diagnostics.hpp"

using namespace sqg;

namespace {
const GridSpec grid32{32, 1.5, 0};
const PhysicalParams params{1.0, 0.75};
constexpr double pi = std::numbers::pi;
}  // namespace

TEST_CASE("positivity functional at p = 2 is the quadratic form") {
    SpectralField f = random_band_field(grid32, 12, 1.0, 3);
    const double v = positivity_functional(f, 2.0, params);
    const double ha = sobolev_norm(f, params.alpha);
    const double l2 = sobolev_norm(f, 0.0);
    const double expect = params.kappa * ha * ha - params.lambda1() * l2 * l2;
    CHECK(v == doctest::Approx(expect).epsilon(1e-10));
    CHECK(v >= -1e-12 * l2 * l2);
}

TEST_CASE("positivity functional single-mode analytic value") {
    // theta = cos(x), |k| = 1: value = (kappa - 2 lambda1/p) int |cos x|^p.
    // int_{T^2} |cos x|^3 = 2 pi * 8/3.  |f|^3 is only C^2 at the zeros, so
    // the comparison runs on a high-resolution quadrature grid.
    const GridSpec fine{32, 1.5, 800};
    SpectralField f = make_cos_mode(fine, 1, 0);
    const double p = 3.0;
    const double v = positivity_functional(f, p, params);
    const double expect =
        (params.kappa - 2.0 * params.lambda1() / p) * 2.0 * pi * 8.0 / 3.0;
    CHECK(v == doctest::Approx(expect).epsilon(1e-8));
}

TEST_CASE("positivity holds over a random corpus") {
    for (double alpha : {0.55, 0.75}) {
        PhysicalParams pp{1.0, alpha};
        for (double p : {3.0, 4.0, 6.0}) {
            for (int i = 0; i < 8; ++i) {
                SpectralField f = random_band_field(grid32, 10, 1.0, 100 + i);
                const double v = positivity_functional(f, p, pp);
                const double scale = std::pow(lp_norm(f, p), p);
                CHECK(v >= -1e-9 * scale);
            }
        }
    }
}

TEST_CASE("moment bound curve endpoints and monotonicity") {
    MomentBoundSpec spec;
    spec.p = 4.0;
    spec.x_lp_p = 2.0;
    spec.c_s = 0.5;
    spec.e0 = 0.1;
    spec.lambda1 = 1.0;
    CHECK(spec.bound(0.0) == doctest::Approx(2.0));
    const double level = std::pow(0.5, 4) * std::pow(6.0, 2) *
                         std::pow(1.0, -2) * std::pow(0.1, 2);
    CHECK(spec.bound(1e9) == doctest::Approx(level));
    // Monotone between endpoints.
    double prev = spec.bound(0.0);
    for (int i = 1; i <= 50; ++i) {
        const double b = spec.bound(0.2 * i);
        CHECK(((b <= prev + 1e-15) || (b >= prev - 1e-15)));
        prev = b;
    }
}

TEST_CASE("deterministic run obeys the zero-noise Lp envelope pathwise") {
    SimConfig cfg;
    cfg.grid = GridSpec{16, 1.5, 0};
    cfg.params = params;
    cfg.scheme = Scheme::DeterministicRk4;
    cfg.dt = 2e-3;
    cfg.t_end = 2.0;
    cfg.lp_diag_p = 4.0;
    cfg.ic.kind = InitialCondition::Kind::RandomBand;
    cfg.ic.band = 6;
    SimResult res = simulate(cfg);
    const double x0 = std::pow(res.diag.rows.front().lp, 4.0);
    for (const auto& row : res.diag.rows) {
        const double envelope = x0 * std::exp(-params.lambda1() * row.t);
        CHECK(std::pow(row.lp, 4.0) <= envelope * 1.05);
    }
}

TEST_CASE("lp_moment_check flags bounds correctly") {
    // Synthetic ensemble of flat records below / above a constant bound.
    auto make_rec = [](double lp_value) {
        DiagnosticsRecord rec;
        rec.lp_p = 4.0;
        for (int i = 0; i <= 10; ++i) {
            DiagnosticsRow row;
            row.t = 0.1 * i;
            row.lp = lp_value;
            rec.rows.push_back(row);
        }
        return rec;
    };
    std::vector<DiagnosticsRecord> ens(16, make_rec(0.5));
    MomentBoundSpec spec;
    spec.p = 4.0;
    spec.slack = 1.0;
    spec.x_lp_p = 1.0;
    spec.c_s = 1.0;
    spec.e0 = 1.0;
    spec.lambda1 = 1.0;
    MomentReport rep = lp_moment_check(ens, spec);
    CHECK(rep.pass);
    std::vector<DiagnosticsRecord> bad(16, make_rec(50.0));
    CHECK_FALSE(lp_moment_check(bad, spec).pass);
    std::vector<DiagnosticsRecord> small(4, make_rec(0.5));
    CHECK_THROWS_AS(lp_moment_check(small, spec), ConfigError);
}

TEST_CASE("energy balance for the zero-noise ensemble") {
    SimConfig cfg;
    cfg.grid = GridSpec{16, 1.5, 0};
    cfg.params = params;
    cfg.scheme = Scheme::ExpEulerAdditive;
    cfg.dt = 2e-3;
    cfg.t_end = 0.5;
    cfg.diagnostic_stride = 25;
    cfg.ic.kind = InitialCondition::Kind::RandomBand;
    auto ens = run_ensemble(cfg, 16);
    const SpectralField theta0 =
        make_initial_condition(cfg.ic, cfg.grid);
    auto pts = energy_balance_check(ens, cfg.params, 0.0,
                                    sobolev_norm(theta0, 0.0), cfg.dt);
    for (const auto& pt : pts) {
        CHECK(pt.pass);
        CHECK(pt.rel_discrepancy < 1e-3);
    }
}

TEST_CASE("time averages: constant observable and self-consistency") {
    DiagnosticsRecord rec;
    rec.lp_p = 4.0;
    for (int i = 0; i <= 1000; ++i) {
        DiagnosticsRow row;
        row.t = 0.01 * i;
        row.l2 = 3.0;  // constant observable
        rec.rows.push_back(row);
    }
    TimeAverageResult avg = time_average(rec, Observable::L2Sq, 1.0, 16);
    CHECK(avg.mean == doctest::Approx(9.0).epsilon(1e-14));
    CHECK(avg.std_error == doctest::Approx(0.0).epsilon(1e-12));
    CHECK_THROWS_AS(time_average(rec, Observable::L2Sq, 10.0, 16), ConfigError);
}

TEST_CASE("fit_decay recovers synthetic models") {
    std::vector<double> t, d;
    for (int i = 0; i <= 100; ++i) {
        t.push_back(0.1 * i);
        d.push_back(2.0 * std::exp(-0.3 * 0.1 * i));
    }
    DecayFit e = fit_decay(t, d, DecayModel::Exponential);
    CHECK(e.amplitude == doctest::Approx(2.0).epsilon(0.01));
    CHECK(e.rate == doctest::Approx(0.3).epsilon(0.01));

    std::vector<double> dp;
    for (double tt : t) dp.push_back(5.0 * std::pow(1.0 + tt, -2.0));
    DecayFit q = fit_decay(t, dp, DecayModel::Polynomial);
    CHECK(q.amplitude == doctest::Approx(5.0).epsilon(0.01));
    CHECK(q.rate == doctest::Approx(2.0).epsilon(0.01));

    // Model comparison prefers the generating model.
    CHECK(fit_decay_compare(t, d).second);
    CHECK_FALSE(fit_decay_compare(t, dp).second);

    // Scale equivariance: rate unchanged, amplitude scales.
    std::vector<double> d3;
    for (double v : d) d3.push_back(3.0 * v);
    DecayFit e3 = fit_decay(t, d3, DecayModel::Exponential);
    CHECK(e3.rate == doctest::Approx(e.rate).epsilon(1e-12));
    CHECK(e3.amplitude == doctest::Approx(3.0 * e.amplitude).epsilon(1e-10));

    // Non-positive series throws.
    std::vector<double> bad = d;
    bad[5] = 0.0;
    CHECK_THROWS_AS(fit_decay(t, bad, DecayModel::Exponential), ConfigError);
}

TEST_CASE("two independent runs agree within batch-means errors") {
    SimConfig cfg;
    cfg.grid = GridSpec{16, 1.5, 0};
    cfg.params = params;
    cfg.scheme = Scheme::EulerMaruyama;
    cfg.noise.type = NoiseConfig::Type::AdditiveE3;
    cfg.noise.e3 = NoiseSpecE3{2.0, 0.5};
    cfg.dt = 0.02;
    cfg.t_end = 400.0;
    cfg.diagnostic_stride = 10;
    cfg.ic.kind = InitialCondition::Kind::Zero;
    cfg.seed = 101;
    SimResult a = simulate(cfg);
    cfg.seed = 202;
    SimResult b = simulate(cfg);
    const double burn = 20.0 / params.lambda1();
    TimeAverageResult ta = time_average(a.diag, Observable::L2Sq, burn, 24);
    TimeAverageResult tb = time_average(b.diag, Observable::L2Sq, burn, 24);
    const double comb =
        std::sqrt(ta.std_error * ta.std_error + tb.std_error * tb.std_error);
    CHECK(std::abs(ta.mean - tb.mean) <= 3.0 * comb);
}
