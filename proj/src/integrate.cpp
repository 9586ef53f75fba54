#include <cmath>
#include <cstdio>
#include <exception>
#include <filesystem>
#include <limits>
#include <sstream>

#include "sqg/kernels.hpp"
#include "sqg/errors.hpp"
#include "sqg/integrate.hpp"
#include "sqg/snapshot.hpp"

namespace sqg {

SpectralField make_initial_condition(const InitialCondition& ic,
                                     const GridSpec& grid) {
    switch (ic.kind) {
        case InitialCondition::Kind::Zero:
            return SpectralField(grid);
        case InitialCondition::Kind::CosX:
            return make_cos_mode(grid, 1, 0, ic.amplitude);
        case InitialCondition::Kind::SinY:
            return make_sin_mode(grid, 0, 1, ic.amplitude);
        case InitialCondition::Kind::Snapshot:
            return read_snapshot(ic.snapshot_path, grid);
        case InitialCondition::Kind::RandomBand:
            break;
    }
    // Random band-limited field: Gaussian coefficients with a |k|^{-2}
    // roll-off on |k| <= band, rescaled to the requested H^1 norm.
    const int band = std::min(ic.band, grid.max_mode());
    if (band < 1) throw ConfigError("initial_condition.band must be >= 1");
    SpectralField f(grid);
    WienerStream stream(ic.ic_seed);
    const auto& modes = canonical_modes(grid.max_mode());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const auto [k1, k2] = modes[i];
        const double ksq = mode_sq(k1, k2);
        if (ksq > static_cast<double>(band) * band) continue;
        const auto [a, b] = stream.normal_pair(0, 0, static_cast<std::uint32_t>(i));
        const cplx c = (1.0 / ksq) * cplx(a, -b);
        f.at(k1, k2) = c;
        f.at(-k1, -k2) = std::conj(c);
    }
    const double h1 = sobolev_norm(f, 1.0);
    if (h1 > 0.0) f *= ic.amplitude / h1;
    return f;
}

std::int64_t SimConfig::n_steps() const {
    const std::int64_t total =
        static_cast<std::int64_t>(std::ceil(t_end / dt - 1e-9));
    return total - start_step;
}

void SimConfig::validate() const {
    params.validate();
    grid.validate();
    if (!(dt > 0.0)) throw ConfigError("integrator.dt must be > 0");
    if (!(t_end > 0.0)) throw ConfigError("integrator.t_end must be > 0");
    if (dt > t_end) throw ConfigError("integrator.dt must be <= t_end");
    if (diagnostic_stride < 1)
        throw ConfigError("integrator.diagnostic_stride must be >= 1");
    if (snapshot_stride < 0)
        throw ConfigError("integrator.snapshot_stride must be >= 0");
    if (!(blowup_ceiling > 0.0))
        throw ConfigError("integrator.blowup_ceiling must be > 0");
    if (!(lp_diag_p >= 1.0)) throw ConfigError("lp_diagnostic_p must be >= 1");
    if (delta_mollify < 0.0)
        throw ConfigError("integrator.delta_mollify must be >= 0");
    if (delta_mollify > 0.0 && dt > delta_mollify / 8.0)
        throw ConfigError(
            "delayed velocity needs dt <= delta_mollify/8 (snapshot spacing)");
    if (scheme == Scheme::DeterministicRk4 &&
        noise.type != NoiseConfig::Type::None)
        throw ConfigError("deterministic-rk4 runs without noise; pick "
                          "exp-euler-additive or euler-maruyama");
    if (scheme == Scheme::ExpEulerAdditive &&
        noise.type == NoiseConfig::Type::Multiplicative)
        throw ConfigError(
            "exp-euler-additive needs additive noise (or none)");
    if (mollify_noise && delta_mollify <= 0.0)
        throw ConfigError("mollify_noise requires delta_mollify > 0");
    if (start_step < 0) throw ConfigError("integrator.start_step must be >= 0");
    if (start_step > 0 && n_steps() < 1)
        throw ConfigError("integrator.start_step lies at or beyond t_end");
    if (start_step > 0 && delta_mollify > 0.0)
        throw ConfigError(
            "resume is not supported together with the delayed velocity "
            "(the history window cannot be reconstructed from one snapshot)");
}

Integrator::Integrator(const SimConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    switch (cfg_.noise.type) {
        case NoiseConfig::Type::None:
            break;
        case NoiseConfig::Type::AdditiveE1:
            add_noise_ = build_additive_noise(cfg_.params, cfg_.noise.e1, cfg_.grid);
            break;
        case NoiseConfig::Type::AdditiveE3:
            add_noise_ = build_additive_noise(cfg_.params, cfg_.noise.e3, cfg_.grid);
            break;
        case NoiseConfig::Type::Multiplicative:
            mult_noise_ = make_multiplicative_noise(
                cfg_.grid, cfg_.noise.mult_amplitude, cfg_.noise.mult_decay,
                cfg_.noise.mult_profile);
            break;
    }
    decay_full_ = semigroup_decay_table(cfg_.grid, cfg_.params, cfg_.dt);
    decay_half_ = semigroup_decay_table(cfg_.grid, cfg_.params, 0.5 * cfg_.dt);
}

std::vector<double> semigroup_decay_table(const GridSpec& grid,
                                          const PhysicalParams& params,
                                          double t) {
    const int k = grid.max_mode();
    std::vector<double> table(grid.coeff_count(), 0.0);
    for (int k1 = -k; k1 <= k; ++k1) {
        for (int k2 = -k; k2 <= k; ++k2) {
            const double lam =
                (k1 == 0 && k2 == 0) ? 0.0 : params.lambda_mode(k1, k2);
            table[grid.index(k1, k2)] = std::exp(-lam * t);
        }
    }
    return table;
}

TrajectoryState Integrator::initial_state() const {
    TrajectoryState s;
    s.step_index = cfg_.start_step;
    s.t = static_cast<double>(cfg_.start_step) * cfg_.dt;
    s.theta = make_initial_condition(cfg_.ic, cfg_.grid);
    if (cfg_.delta_mollify > 0.0) {
        // The approximation starts from the mollified datum k_delta * theta0.
        s.theta = poisson_filter(s.theta, cfg_.delta_mollify);
        s.history.emplace(cfg_.delta_mollify, cfg_.grid);
        s.history->push(s.t, s.theta);
    }
    if (cfg_.scheme == Scheme::ExpEulerAdditive) {
        s.decomposed = true;
        s.v = s.theta;
        s.z = SpectralField(cfg_.grid);
        // Resuming the decomposed formulation needs the (v, z) pair itself;
        // sibling checkpoints written next to the theta snapshot carry it.
        if (cfg_.start_step > 0 &&
            cfg_.ic.kind == InitialCondition::Kind::Snapshot) {
            const std::string vpath = sibling_snapshot(cfg_.ic.snapshot_path, 'v');
            const std::string zpath = sibling_snapshot(cfg_.ic.snapshot_path, 'z');
            if (std::filesystem::exists(vpath) &&
                std::filesystem::exists(zpath)) {
                s.v = read_snapshot(vpath, cfg_.grid);
                s.z = read_snapshot(zpath, cfg_.grid);
                s.theta = s.v + s.z;
            }
        }
    }
    return s;
}

std::string sibling_snapshot(const std::string& theta_path, char tag) {
    const std::string suffix = ".snap";
    if (theta_path.size() > suffix.size() &&
        theta_path.compare(theta_path.size() - suffix.size(), suffix.size(),
                           suffix) == 0)
        return theta_path.substr(0, theta_path.size() - suffix.size()) + "." +
               tag + suffix;
    return theta_path + "." + tag;
}

void Integrator::apply_decay(SpectralField& f,
                             const std::vector<double>& table) const {
    kernels::scale_real_inplace(f.coeffs(), table);
}

SpectralField Integrator::drift_advective(const TrajectoryState& state,
                                          const SpectralField& field_for_nl) const {
    if (cfg_.delta_mollify > 0.0) {
        auto [u1, u2] = mollified_velocity(*state.history, state.t);
        return advective_term(u1, u2, field_for_nl);
    }
    return nonlinear_term(field_for_nl);
}

SpectralField Integrator::noise_increment(const TrajectoryState& state,
                                          const WienerStream& stream,
                                          std::uint64_t traj) const {
    const NoiseDraw xi = wiener_increment(
        stream, traj, static_cast<std::uint64_t>(state.step_index), cfg_.dt,
        cfg_.grid.max_mode());
    SpectralField incr =
        add_noise_ ? noise_increment_field(*add_noise_, xi)
                   : apply_multiplicative(*mult_noise_, state.theta, xi);
    if (cfg_.mollify_noise) incr = poisson_filter(incr, cfg_.delta_mollify);
    return incr;
}

void Integrator::guard(const TrajectoryState& state) const {
    if (!state.theta.all_finite())
        throw BlowUpError("non-finite coefficient encountered", state.t,
                          std::numeric_limits<double>::quiet_NaN());
    const double h1 = sobolev_norm(state.theta, 1.0);
    if (h1 > cfg_.blowup_ceiling) {
        std::ostringstream os;
        os << "H^1 norm " << h1 << " exceeded ceiling " << cfg_.blowup_ceiling
           << " at t=" << state.t;
        throw BlowUpError(os.str(), state.t, h1);
    }
}

void Integrator::step(TrajectoryState& state, const WienerStream& stream,
                      std::uint64_t traj) const {
    const double dt = cfg_.dt;
    switch (cfg_.scheme) {
        case Scheme::DeterministicRk4: {
            // Integrating-factor RK4: classical four stages on the
            // advective part, exact e^{-kappa Lambda^{2a} dt} transport of
            // the stiff linear part.
            const SpectralField& th = state.theta;
            SpectralField n1 = drift_advective(state, th);

            SpectralField s2 = th;
            kernels::axpy(0.5 * dt, n1.coeffs(), s2.coeffs());
            apply_decay(s2, decay_half_);
            SpectralField n2 = drift_advective(state, s2);

            SpectralField s3 = th;
            apply_decay(s3, decay_half_);
            kernels::axpy(0.5 * dt, n2.coeffs(), s3.coeffs());
            SpectralField n3 = drift_advective(state, s3);

            SpectralField s4 = th;
            apply_decay(s4, decay_full_);
            SpectralField n3h = n3;
            apply_decay(n3h, decay_half_);
            kernels::axpy(dt, n3h.coeffs(), s4.coeffs());
            SpectralField n4 = drift_advective(state, s4);

            SpectralField out = th;
            apply_decay(out, decay_full_);
            apply_decay(n1, decay_full_);
            apply_decay(n2, decay_half_);
            apply_decay(n3, decay_half_);
            kernels::axpy(dt / 6.0, n1.coeffs(), out.coeffs());
            kernels::axpy(dt / 3.0, n2.coeffs(), out.coeffs());
            kernels::axpy(dt / 3.0, n3.coeffs(), out.coeffs());
            kernels::axpy(dt / 6.0, n4.coeffs(), out.coeffs());
            out.enforce_realness();
            state.theta = std::move(out);
            break;
        }
        case Scheme::EulerMaruyama: {
            SpectralField adv = drift_advective(state, state.theta);
            SpectralField out = state.theta;
            kernels::axpy(dt, adv.coeffs(), out.coeffs());
            apply_decay(out, decay_full_);
            if (cfg_.noise.type != NoiseConfig::Type::None)
                out += noise_increment(state, stream, traj);
            out.enforce_realness();
            state.theta = std::move(out);
            break;
        }
        case Scheme::ExpEulerAdditive: {
            SpectralField adv = drift_advective(state, state.theta);
            SpectralField v = state.v;
            kernels::axpy(dt, adv.coeffs(), v.coeffs());
            apply_decay(v, decay_full_);
            SpectralField z = state.z;
            if (add_noise_) {
                const NoiseDraw xi = wiener_increment(
                    stream, traj, static_cast<std::uint64_t>(state.step_index),
                    dt, cfg_.grid.max_mode());
                z = ou_exact_step(state.z, *add_noise_, cfg_.params, dt, xi);
                if (cfg_.mollify_noise) {
                    // Mollified increment: filter only the innovation part.
                    SpectralField decayed = state.z;
                    apply_decay(decayed, decay_full_);
                    SpectralField innov = z - decayed;
                    z = decayed + poisson_filter(innov, cfg_.delta_mollify);
                }
            } else {
                apply_decay(z, decay_full_);
            }
            v.enforce_realness();
            z.enforce_realness();
            state.v = std::move(v);
            state.z = std::move(z);
            state.theta = state.v + state.z;
            break;
        }
    }
    state.step_index += 1;
    state.t = static_cast<double>(state.step_index) * dt;
    if (state.history) state.history->push(state.t, state.theta);
    guard(state);
}

void Integrator::step_with_tangent(TrajectoryState& state, SpectralField& dtheta,
                                   const CutoffSpec& cut) const {
    const double dt = cfg_.dt;
    const SpectralField& th = state.theta;

    auto adv = [&](const SpectralField& f) {
        const double nsq = sobolev_norm(f, cut.s_reg);
        SpectralField n = nonlinear_term(f);
        n *= cut.chi(nsq * nsq);
        return n;
    };
    auto tan = [&](const SpectralField& f, const SpectralField& df) {
        // Advective part of tangent_rhs (the dissipation is carried by the
        // integrating factor).
        SpectralField full = tangent_rhs(f, df, cut, cfg_.params);
        SpectralField diss = apply_lambda(df, 2.0 * cfg_.params.alpha);
        kernels::axpy(cfg_.params.kappa, diss.coeffs(), full.coeffs());
        return full;
    };

    // Primal stages (cutoff dynamics) and their exact linearization.
    SpectralField n1 = adv(th);
    SpectralField m1 = tan(th, dtheta);

    SpectralField s2 = th;
    kernels::axpy(0.5 * dt, n1.coeffs(), s2.coeffs());
    apply_decay(s2, decay_half_);
    SpectralField d2 = dtheta;
    kernels::axpy(0.5 * dt, m1.coeffs(), d2.coeffs());
    apply_decay(d2, decay_half_);
    SpectralField n2 = adv(s2);
    SpectralField m2 = tan(s2, d2);

    SpectralField s3 = th;
    apply_decay(s3, decay_half_);
    kernels::axpy(0.5 * dt, n2.coeffs(), s3.coeffs());
    SpectralField d3 = dtheta;
    apply_decay(d3, decay_half_);
    kernels::axpy(0.5 * dt, m2.coeffs(), d3.coeffs());
    SpectralField n3 = adv(s3);
    SpectralField m3 = tan(s3, d3);

    SpectralField s4 = th;
    apply_decay(s4, decay_full_);
    SpectralField n3h = n3;
    apply_decay(n3h, decay_half_);
    kernels::axpy(dt, n3h.coeffs(), s4.coeffs());
    SpectralField d4 = dtheta;
    apply_decay(d4, decay_full_);
    SpectralField m3h = m3;
    apply_decay(m3h, decay_half_);
    kernels::axpy(dt, m3h.coeffs(), d4.coeffs());
    SpectralField n4 = adv(s4);
    SpectralField m4 = tan(s4, d4);

    auto combine = [&](const SpectralField& base, SpectralField k1,
                       SpectralField k2, SpectralField k3,
                       const SpectralField& k4) {
        SpectralField out = base;
        apply_decay(out, decay_full_);
        apply_decay(k1, decay_full_);
        apply_decay(k2, decay_half_);
        apply_decay(k3, decay_half_);
        kernels::axpy(dt / 6.0, k1.coeffs(), out.coeffs());
        kernels::axpy(dt / 3.0, k2.coeffs(), out.coeffs());
        kernels::axpy(dt / 3.0, k3.coeffs(), out.coeffs());
        kernels::axpy(dt / 6.0, k4.coeffs(), out.coeffs());
        out.enforce_realness();
        return out;
    };

    state.theta = combine(th, n1, n2, n3, n4);
    dtheta = combine(dtheta, m1, m2, m3, m4);
    state.step_index += 1;
    state.t = static_cast<double>(state.step_index) * dt;
    guard(state);
}

namespace {

// Cheap spectral bound ||u||_inf <= sum_k |u_hat(k)| for the CFL advisory.
double velocity_sup_bound(const SpectralField& theta) {
    auto [u1, u2] = riesz_perp(theta);
    double s1 = 0.0, s2 = 0.0;
    for (const auto& c : u1.coeffs()) s1 += std::abs(c);
    for (const auto& c : u2.coeffs()) s2 += std::abs(c);
    return std::max(s1, s2);
}

DiagnosticsRow measure(const TrajectoryState& s, const SimConfig& cfg,
                       double diss_cum) {
    DiagnosticsRow r;
    r.t = s.t;
    r.l2 = sobolev_norm(s.theta, 0.0);
    r.h_alpha = sobolev_norm(s.theta, cfg.params.alpha);
    r.h1 = sobolev_norm(s.theta, 1.0);
    r.lp = lp_norm(s.theta, cfg.lp_diag_p);
    r.tail_frac = tail_fraction(s.theta);
    r.diss_cum = diss_cum;
    return r;
}

}  // namespace

SimResult simulate(const SimConfig& cfg, std::uint64_t traj,
                   const SnapshotSink& sink) {
    Integrator integ(cfg);
    WienerStream stream(cfg.seed);
    TrajectoryState state = integ.initial_state();
    const std::int64_t n = cfg.n_steps();
    const double kmax = static_cast<double>(cfg.grid.max_mode());

    SimResult res;
    res.diag.lp_p = cfg.lp_diag_p;
    double diss_cum = 0.0;
    double h_alpha_sq_prev = 0.0;
    {
        const double ha = sobolev_norm(state.theta, cfg.params.alpha);
        h_alpha_sq_prev = ha * ha;
    }
    auto advisory = [&]() {
        if (res.stability_advisory) return;
        if (cfg.dt * kmax * velocity_sup_bound(state.theta) > 0.5) {
            res.stability_advisory = true;
            std::fprintf(stderr,
                         "sqg: stability advisory at t=%g: dt exceeds "
                         "0.5/(k_max ||u||_inf)\n",
                         state.t);
        }
    };
    res.diag.rows.push_back(measure(state, cfg, diss_cum));
    advisory();
    if (sink && cfg.snapshot_stride > 0) sink(state);

    for (std::int64_t i = 1; i <= n; ++i) {
        integ.step(state, stream, traj);
        const double ha = sobolev_norm(state.theta, cfg.params.alpha);
        diss_cum += 0.5 * cfg.dt * (h_alpha_sq_prev + ha * ha);
        h_alpha_sq_prev = ha * ha;
        const bool last = (i == n);
        if (i % cfg.diagnostic_stride == 0 || last) {
            res.diag.rows.push_back(measure(state, cfg, diss_cum));
            advisory();
        }
        if (sink && cfg.snapshot_stride > 0 &&
            (i % cfg.snapshot_stride == 0 || last))
            sink(state);
    }
    res.final_theta = state.theta;
    res.steps = n;
    return res;
}

std::vector<DiagnosticsRecord> run_ensemble(const SimConfig& cfg, int n_traj) {
    if (n_traj < 1) throw ConfigError("ensemble size must be >= 1");
    std::vector<DiagnosticsRecord> out(n_traj);
    std::exception_ptr first_error;
#pragma omp parallel for schedule(dynamic)
    for (int i = 0; i < n_traj; ++i) {
        try {
            out[i] = simulate(cfg, static_cast<std::uint64_t>(i)).diag;
        } catch (...) {
#pragma omp critical
            if (!first_error) first_error = std::current_exception();
        }
    }
    if (first_error) std::rethrow_exception(first_error);
    return out;
}

}  // namespace sqg
