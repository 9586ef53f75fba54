#include <cmath>
#include <exception>
#include <limits>

#include "sqg/kernels.hpp"
#include "sqg/coupling.hpp"
#include "sqg/errors.hpp"

namespace sqg {

double CoupledConfig::k0_effective() const {
    return K0 >= 0.0 ? K0 : 2.0 * lambda_np1();
}

double CoupledConfig::p_critical() const {
    const double a = base.params.alpha;
    return (a + 1.0) / (a - 0.5);
}

void CoupledConfig::validate() const {
    base.validate();
    if (base.params.alpha <= 0.5)
        throw ConfigError("coupling requires the subcritical regime alpha > 1/2");
    if (base.noise.type != NoiseConfig::Type::AdditiveE1 &&
        base.noise.type != NoiseConfig::Type::AdditiveE3)
        throw ConfigError("coupling requires additive noise (E1 or E3)");
    if (n_ball < 0) throw ConfigError("couple.N must be >= 0");
    if (fit_transient < 0.0) throw ConfigError("couple.fit_transient must be >= 0");
}

SpectralField rhs_nudged(const SpectralField& theta_tilde,
                         const SpectralField& theta, double K0, int n_ball,
                         const PhysicalParams& params) {
    SpectralField out = rhs_sqg(theta_tilde, params);
    SpectralField nudge = project_ball(theta_tilde - theta, n_ball);
    kernels::axpy(-K0, nudge.coeffs(), out.coeffs());
    return out;
}

ControlShift control_shift(const SpectralField& theta,
                           const SpectralField& theta_tilde, double K0,
                           const E2Map& g_map) {
    SpectralField target = project_ball(theta_tilde - theta, g_map.n_ball);
    ControlShift cs;
    cs.h = SpectralField(theta.grid());
    auto tc = target.coeffs();
    auto hc = cs.h.coeffs();
    for (std::size_t i = 0; i < tc.size(); ++i) hc[i] = -K0 * g_map.g[i] * tc[i];
    cs.h_sq = sobolev_norm(cs.h, 0.0);
    cs.h_sq *= cs.h_sq;
    return cs;
}

namespace {

double lp_pow_trapezoid_update(double acc, double dt_row, double lp_prev,
                               double lp_curr, double p) {
    return acc + 0.5 * dt_row * (std::pow(lp_prev, p) + std::pow(lp_curr, p));
}

}  // namespace

SyncRecord run_synchronization(const CoupledConfig& cfg,
                               const EmpiricalConstants& constants,
                               std::uint64_t pair_id) {
    cfg.validate();
    SimConfig base = cfg.base;
    base.scheme = Scheme::EulerMaruyama;  // lockstep over shared increments
    base.delta_mollify = 0.0;
    base.validate();

    const GridSpec& grid = base.grid;
    const PhysicalParams& params = base.params;
    const double dt = base.dt;
    const double K0 = cfg.k0_effective();
    const double p = cfg.p_critical();
    const double lam_np1 = cfg.lambda_np1();

    AdditiveSpectralNoise noise =
        base.noise.type == NoiseConfig::Type::AdditiveE1
            ? build_additive_noise(params, base.noise.e1, grid)
            : build_additive_noise(params, base.noise.e3, grid);
    // (E2) must hold for this ball; also yields the control map g.
    const E2Map g_map = check_hypothesis_E2(noise, cfg.n_ball);
    const std::vector<double> decay = semigroup_decay_table(grid, params, dt);
    const WienerStream stream(base.seed);

    InitialCondition ic = base.ic;
    InitialCondition ic_tilde = cfg.ic_tilde;
    ic.ic_seed += pair_id;
    ic_tilde.ic_seed += pair_id;
    SpectralField theta = make_initial_condition(ic, grid);
    SpectralField theta_tilde = make_initial_condition(ic_tilde, grid);

    SyncRecord rec;
    rec.p_critical = p;
    rec.lambda_np1 = lam_np1;
    rec.k0 = K0;
    rec.k0_above_lambda = K0 > lam_np1;

    const std::int64_t n = base.n_steps();
    const double c1 = constants.c_s() * constants.c_r;
    const double drag_coef =
        2.0 * std::pow(c1, p) * std::pow(0.5 * params.kappa, 1.0 - p);

    double h_sq_cum = 0.0;
    double lp_int = 0.0;  // int_0^t ||theta||_{L^p}^p
    double lp_prev = lp_norm(theta, p);

    auto emit = [&](double t) {
        SyncRow row;
        row.t = t;
        SpectralField rho = theta_tilde - theta;
        row.d_hminushalf = sobolev_norm(rho, -0.5);
        row.rho_l2 = sobolev_norm(rho, 0.0);
        row.theta_lp = lp_prev;
        row.h_sq_cum = h_sq_cum;
        row.gamma_hat =
            t > 0.0 ? -lam_np1 + drag_coef * lp_int / t : -lam_np1;
        row.tilde_l2 = sobolev_norm(theta_tilde, 0.0);
        rec.rows.push_back(row);
    };
    emit(0.0);

    for (std::int64_t i = 1; i <= n; ++i) {
        const NoiseDraw xi =
            wiener_increment(stream, pair_id, static_cast<std::uint64_t>(i - 1),
                             dt, grid.max_mode());
        const SpectralField gdw = noise_increment_field(noise, xi);

        // Control energy of the shift realizing the nudging through G.
        h_sq_cum += dt * control_shift(theta, theta_tilde, K0, g_map).h_sq;

        SpectralField adv = nonlinear_term(theta);
        SpectralField next = theta;
        kernels::axpy(dt, adv.coeffs(), next.coeffs());
        kernels::scale_real_inplace(next.coeffs(), decay);
        next += gdw;
        next.enforce_realness();

        SpectralField adv_t = nonlinear_term(theta_tilde);
        SpectralField nudge = project_ball(theta_tilde - theta, cfg.n_ball);
        kernels::axpy(-K0, nudge.coeffs(), adv_t.coeffs());
        SpectralField next_t = theta_tilde;
        kernels::axpy(dt, adv_t.coeffs(), next_t.coeffs());
        kernels::scale_real_inplace(next_t.coeffs(), decay);
        next_t += gdw;
        next_t.enforce_realness();

        theta = std::move(next);
        theta_tilde = std::move(next_t);

        if (!theta.all_finite() || !theta_tilde.all_finite())
            throw BlowUpError("non-finite coefficient in coupled pair",
                              static_cast<double>(i) * dt,
                              std::numeric_limits<double>::quiet_NaN());
        const double h1 = sobolev_norm(theta, 1.0);
        const double h1t = sobolev_norm(theta_tilde, 1.0);
        if (h1 > base.blowup_ceiling || h1t > base.blowup_ceiling)
            throw BlowUpError("coupled pair exceeded H^1 ceiling",
                              static_cast<double>(i) * dt, std::max(h1, h1t));

        const double lp_curr = lp_norm(theta, p);
        lp_int = lp_pow_trapezoid_update(lp_int, dt, lp_prev, lp_curr, p);
        lp_prev = lp_curr;

        if (i % base.diagnostic_stride == 0 || i == n)
            emit(static_cast<double>(i) * dt);
    }
    return rec;
}

std::vector<SyncRecord> run_synchronization_ensemble(
    const CoupledConfig& cfg, const EmpiricalConstants& constants, int pairs) {
    if (pairs < 1) throw ConfigError("couple.pairs must be >= 1");
    std::vector<SyncRecord> out(pairs);
    std::exception_ptr first_error;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < pairs; ++i) {
        try {
            out[i] = run_synchronization(cfg, constants,
                                         static_cast<std::uint64_t>(i));
        } catch (...) {
#pragma omp critical
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

std::vector<double> gamma_estimate(const SyncRecord& record,
                                   const CoupledConfig& cfg,
                                   const EmpiricalConstants& constants) {
    const double p = cfg.p_critical();
    const double lam_np1 = cfg.lambda_np1();
    const double c1 = constants.c_s() * constants.c_r;
    const double drag_coef =
        2.0 * std::pow(c1, p) * std::pow(0.5 * cfg.base.params.kappa, 1.0 - p);
    std::vector<double> g;
    g.reserve(record.rows.size());
    double integral = 0.0;
    for (std::size_t i = 0; i < record.rows.size(); ++i) {
        if (i > 0) {
            const double dt_row = record.rows[i].t - record.rows[i - 1].t;
            integral = lp_pow_trapezoid_update(
                integral, dt_row, record.rows[i - 1].theta_lp,
                record.rows[i].theta_lp, p);
        }
        const double t = record.rows[i].t;
        g.push_back(t > 0.0 ? -lam_np1 + drag_coef * integral / t : -lam_np1);
    }
    return g;
}

Delta0Report delta0_constant(const PhysicalParams& params, double e0, int n_ball,
                             const EmpiricalConstants& constants) {
    if (e0 < 0.0) throw ConfigError("delta0: E0 must be >= 0");
    Delta0Report r;
    const double a = params.alpha;
    if (a <= 0.5) throw ConfigError("delta0 defined for alpha > 1/2");
    r.p = (a + 1.0) / (a - 0.5);
    r.lambda_np1 = params.lambda_ball_exit(n_ball);
    const double p = r.p;
    r.drag = std::pow(2.0, 0.5 * p) * std::pow(constants.c_r, p) *
             std::pow(constants.c_s(), 2.0 * p) *
             std::pow(params.kappa, 1.0 - p) *
             std::pow(p * (p - 1.0), 0.5 * p) *
             std::pow(params.lambda1(), -0.5 * p) * std::pow(e0, 0.5 * p);
    r.value = r.lambda_np1 - r.drag;
    r.positive = r.value > 0.0;
    return r;
}

}  // namespace sqg
