#include <cmath>
#include <limits>
#include <numbers>

#include "sqg/corpus.hpp"
#include "sqg/dynamics.hpp"
#include "sqg/experiments.hpp"

namespace sqg {

namespace {

VerifyClaim claim(const std::string& id, const std::string& desc,
                  double observed, double bound) {
    return VerifyClaim{id, desc, observed, bound, observed <= bound};
}

}  // namespace

// Fast desk-scale realizations of the property suites; the heavyweight
// versions (full field counts, long runs) live in the acceptance binary.
std::vector<VerifyClaim> run_verify_suites(const VerifyOptions& opt) {
    std::vector<VerifyClaim> out;
    const GridSpec grid{opt.modes_per_dim, 1.5, 0};
    grid.validate();
    const int band = grid.max_mode();
    const PhysicalParams params{1.0, 0.75};
    const std::uint64_t seed = opt.seed;

    // Spectral identities.
    {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            SpectralField f = random_band_field(grid, band, 1.0, seed + i);
            SpectralField lhs = apply_lambda(apply_lambda(f, 0.8), -1.4);
            SpectralField rhs = apply_lambda(f, -0.6);
            for (std::size_t j = 0; j < lhs.coeffs().size(); ++j) {
                const double scale = std::abs(rhs.coeffs()[j]);
                if (scale > 0.0)
                    worst = std::max(
                        worst, std::abs(lhs.coeffs()[j] - rhs.coeffs()[j]) / scale);
            }
        }
        out.push_back(claim("spectral.lambda_composition",
                            "Lambda^s Lambda^t = Lambda^{s+t} coefficient-wise",
                            worst, 1e-12));
    }
    {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            SpectralField f = random_band_field(grid, band, 0.8, seed + 40 + i);
            auto [u1, u2] = riesz_perp(f);
            worst = std::max(worst, spectral_divergence_max(u1, u2) /
                                        sobolev_norm(f, 1.0));
        }
        out.push_back(claim("spectral.riesz_divergence_free",
                            "k . u_hat(k) = 0 on the retained band", worst,
                            1e-12));
    }
    {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            SpectralField f = random_band_field(grid, band, 0.8, seed + 80 + i);
            auto [u1, u2] = riesz_perp(f);
            SpectralField psi = apply_lambda(f, -1.0);
            psi *= -1.0;
            SpectralField e1 = derivative(psi, 1);
            e1 *= -1.0;
            SpectralField e2 = derivative(psi, 0);
            const double scale = sobolev_norm(f, 0.0);
            worst = std::max(worst, (sobolev_norm(u1 - e1, 0.0) +
                                     sobolev_norm(u2 - e2, 0.0)) /
                                        scale);
        }
        out.push_back(claim("spectral.riesz_stream_function",
                            "R^perp theta = grad^perp psi, Lambda psi = -theta",
                            worst, 1e-13));
    }
    {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            SpectralField f = random_band_field(grid, band, 1.0, seed + 120 + i);
            const double a = lp_norm(f, 2.0);
            const double b = sobolev_norm(f, 0.0);
            worst = std::max(worst, std::abs(a - b) / b);
        }
        out.push_back(claim("spectral.parseval",
                            "quadrature L2 equals spectral H0", worst, 1e-12));
    }
    {
        const double r =
            empirical_interpolation_ratio(grid, -0.5, 0.25, 1.0, 30, seed + 160);
        out.push_back(claim("spectral.interpolation",
                            "H^s interpolation holds with constant 1",
                            r - 1.0, 1e-12));
    }

    // Nonlinear cancellations.
    {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            SpectralField f = random_band_field(grid, band, 0.8, seed + 200 + i);
            const double ip = std::abs(l2_inner(nonlinear_term(f), f));
            worst = std::max(
                worst, ip / (sobolev_norm(f, 0.0) * sobolev_norm(f, 1.0)));
        }
        out.push_back(claim("dynamics.nonlinear_cancellation",
                            "<u.grad theta, theta> = 0 scaled", worst, 1e-9));
    }
    {
        double worst = 0.0;
        for (int i = 0; i < 20; ++i) {
            SpectralField rho = random_band_field(grid, band, 0.7, seed + 240 + i);
            SpectralField g = random_band_field(grid, band, 0.7, seed + 280 + i);
            auto [u1, u2] = riesz_perp(rho);
            SpectralField adv = dealiased_product(u1, derivative(g, 0));
            adv += dealiased_product(u2, derivative(g, 1));
            const double ip = std::abs(l2_inner(adv, apply_lambda(rho, -1.0)));
            const double scale = sobolev_norm(rho, 0.0) *
                                 sobolev_norm(rho, 0.0) * sobolev_norm(g, 1.0);
            worst = std::max(worst, ip / scale);
        }
        out.push_back(claim("dynamics.resnick",
                            "<u_rho.grad g, Lambda^{-1} rho> = 0 scaled", worst,
                            1e-9));
    }
    {
        CutoffSpec cut{2.0, 1.5};
        double worst = 0.0;
        for (int i = 0; i <= 80; ++i)
            for (int j = 0; j <= 80; ++j) {
                const double a = 1.5 + 0.025 * i;
                const double b = 1.5 + 0.025 * j;
                worst = std::max(worst, std::abs(cut.chi(a) - cut.chi(b)) -
                                            std::abs(a - b));
            }
        out.push_back(claim("dynamics.chi_lipschitz",
                            "|chi(a)-chi(b)| <= |a-b| on a grid", worst, 0.0));
    }

    // Improved positivity.
    {
        double worst = 0.0;  // most negative scaled value
        for (double alpha : {0.55, 0.75}) {
            PhysicalParams pp{1.0, alpha};
            for (double p : {3.0, 4.0, 6.0}) {
                for (int i = 0; i < 8; ++i) {
                    SpectralField f =
                        random_band_field(grid, band / 2, 1.0, seed + 320 + i);
                    const double v = positivity_functional(f, p, pp);
                    const double scale = std::pow(lp_norm(f, p), p);
                    worst = std::max(worst, -v / std::max(scale, 1e-30));
                }
            }
        }
        out.push_back(claim("diagnostics.positivity",
                            "improved positivity functional >= 0 scaled", worst,
                            1e-9));
    }

    // L^p contraction of the linear semigroup.
    {
        double worst = -std::numeric_limits<double>::infinity();
        for (double p : {3.0, 4.0, 6.0}) {
            for (int i = 0; i < 6; ++i) {
                SpectralField f =
                    random_band_field(grid, band, 1.0, seed + 400 + i);
                for (double t : {0.1, 0.5}) {
                    const double lhs =
                        lp_norm(semigroup_apply(f, params.kappa, params.alpha, t),
                                p);
                    const double rhs =
                        std::exp(-2.0 * params.lambda1() * t / p) *
                        lp_norm(f, p);
                    worst = std::max(worst, (lhs - rhs) / lp_norm(f, p));
                }
            }
        }
        out.push_back(claim("diagnostics.lp_semigroup_contraction",
                            "||e^{-tA} f||_p <= e^{-2 lambda1 t/p} ||f||_p",
                            worst, 1e-8));
    }

    // Exact single-mode decay.
    {
        double worst = 0.0;
        for (double alpha : {0.6, 0.75}) {
            SimConfig cfg;
            cfg.grid = GridSpec{16, 1.5, 0};
            cfg.params = PhysicalParams{1.0, alpha};
            cfg.scheme = Scheme::DeterministicRk4;
            cfg.dt = 1e-3;
            cfg.t_end = 1.0;
            cfg.ic.kind = InitialCondition::Kind::CosX;
            SimResult res = simulate(cfg);
            const double amp = 2.0 * std::abs(res.final_theta.at(1, 0));
            worst = std::max(worst, std::abs(amp - std::exp(-1.0)));
        }
        out.push_back(claim("integrate.single_mode_decay",
                            "cos(x) decays exactly like e^{-kappa t}", worst,
                            1e-10));
    }

    // OU one-step variance (Monte Carlo).
    {
        const GridSpec g8{8, 1.5, 0};
        auto noise = build_additive_noise(params, NoiseSpecE3{2.0, 1.0}, g8);
        WienerStream s(seed + 500);
        const double dt = 0.05;
        const int n = 20000;
        double acc = 0.0;
        SpectralField zero(g8);
        for (int i = 0; i < n; ++i) {
            NoiseDraw d = wiener_increment(s, 0, i, dt, 4);
            SpectralField z = ou_exact_step(zero, noise, params, dt, d);
            acc += std::norm(z.at(1, 0));
        }
        const double lam = params.lambda_mode(1, 0);
        const double expect = noise.sigma(1, 0) * noise.sigma(1, 0) *
                              (1.0 - std::exp(-2.0 * lam * dt)) / (2.0 * lam) /
                              (4.0 * std::numbers::pi * std::numbers::pi);
        out.push_back(claim("noise.ou_one_step_variance",
                            "exact OU step variance (MC, 2e4 samples)",
                            std::abs(acc / n / expect - 1.0), 0.05));
    }

    // (E2) identity G g = P_N.
    {
        auto noise = build_additive_noise(params, NoiseSpecE3{2.0, 1.0}, grid);
        const E2Map m = check_hypothesis_E2(noise, 3);
        double worst = 0.0;
        for (int k1 = -3; k1 <= 3; ++k1)
            for (int k2 = -3; k2 <= 3; ++k2) {
                if ((k1 == 0 && k2 == 0) || mode_sq(k1, k2) > 9.0) continue;
                worst = std::max(worst,
                                 std::abs(noise.sigma(k1, k2) *
                                              m.g[grid.index(k1, k2)] -
                                          1.0));
            }
        out.push_back(claim("noise.e2_identity", "G g = P_N on the ball", worst,
                            1e-13));
    }

    // Reproducibility: identical diagnostics from identical config+seed.
    {
        SimConfig cfg;
        cfg.grid = GridSpec{16, 1.5, 0};
        cfg.params = params;
        cfg.scheme = Scheme::ExpEulerAdditive;
        cfg.noise.type = NoiseConfig::Type::AdditiveE3;
        cfg.noise.e3 = NoiseSpecE3{2.0, 0.5};
        cfg.dt = 5e-3;
        cfg.t_end = 0.2;
        cfg.seed = seed + 600;
        cfg.ic.kind = InitialCondition::Kind::RandomBand;
        SimResult a = simulate(cfg);
        SimResult b = simulate(cfg);
        double worst = 0.0;
        for (std::size_t i = 0; i < a.diag.rows.size(); ++i) {
            worst = std::max(worst, std::abs(a.diag.rows[i].l2 -
                                             b.diag.rows[i].l2));
            worst = std::max(worst, std::abs(a.diag.rows[i].lp -
                                             b.diag.rows[i].lp));
        }
        out.push_back(claim("integrate.reproducibility",
                            "same config+seed gives bit-identical diagnostics",
                            worst, 0.0));
    }

    return out;
}

}  // namespace sqg
