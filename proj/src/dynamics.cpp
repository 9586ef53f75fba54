#include <cmath>
#include <sstream>

#include "sqg/dynamics.hpp"
#include "sqg/kernels.hpp"
#include "sqg/errors.hpp"

namespace sqg {

SpectralField advective_term(const SpectralField& u1, const SpectralField& u2,
                             const SpectralField& f) {
    SpectralField w1 = dealiased_product(u1, f);
    SpectralField w2 = dealiased_product(u2, f);
    SpectralField out = derivative(w1, 0);
    out += derivative(w2, 1);
    out *= -1.0;
    return out;
}

SpectralField nonlinear_term(const SpectralField& theta) {
    auto [u1, u2] = riesz_perp(theta);
    return advective_term(u1, u2, theta);
}

SpectralField rhs_sqg(const SpectralField& theta, const PhysicalParams& params) {
    SpectralField out = nonlinear_term(theta);
    SpectralField diss = apply_lambda(theta, 2.0 * params.alpha);
    kernels::axpy(-params.kappa, diss.coeffs(), out.coeffs());
    return out;
}

SpectralField rhs_v_equation(const SpectralField& v, const SpectralField& z,
                             const PhysicalParams& params) {
    SpectralField out = nonlinear_term(v + z);
    SpectralField diss = apply_lambda(v, 2.0 * params.alpha);
    kernels::axpy(-params.kappa, diss.coeffs(), out.coeffs());
    return out;
}

HistoryBuffer::HistoryBuffer(double delta, const GridSpec& grid)
    : delta_(delta), grid_(grid) {
    if (!(delta > 0.0)) throw ConfigError("history delta must be > 0");
}

void HistoryBuffer::push(double t, const SpectralField& f) {
    if (!ring_.empty() && t <= ring_.back().first)
        throw ConfigError("history snapshots must arrive in increasing time");
    ring_.emplace_back(t, f);
    // Keep everything needed to evaluate [t - 2 delta, t].
    const double horizon = t - 2.0 * delta_ - 1e-12;
    while (ring_.size() > 2 && ring_[1].first < horizon) ring_.pop_front();
}

bool HistoryBuffer::covers(double t) const {
    const double hi = t - delta_;
    if (hi <= 0.0) return true;  // whole window in the zero past
    if (ring_.empty()) return false;
    return ring_.front().first <= std::max(t - 2.0 * delta_, 0.0) + 1e-12 &&
           ring_.back().first >= hi - 1e-12;
}

SpectralField HistoryBuffer::eval(double t) const {
    if (t < 0.0) return SpectralField(grid_);
    if (ring_.empty() || t > ring_.back().first + 1e-12 ||
        t < ring_.front().first - 1e-12) {
        std::ostringstream os;
        os << "history does not cover t=" << t << " (have ";
        if (ring_.empty())
            os << "nothing";
        else
            os << "[" << ring_.front().first << ", " << ring_.back().first << "]";
        os << ")";
        throw InsufficientHistoryError(os.str(), t, t);
    }
    // Binary search for the segment containing t.
    std::size_t lo = 0;
    std::size_t hi = ring_.size() - 1;
    while (hi - lo > 1) {
        const std::size_t mid = (lo + hi) / 2;
        if (ring_[mid].first <= t)
            lo = mid;
        else
            hi = mid;
    }
    const auto& [t0, f0] = ring_[lo];
    const auto& [t1, f1] = ring_[hi];
    if (hi == lo || t1 == t0) return f0;
    const double w = (t - t0) / (t1 - t0);
    SpectralField out(grid_);
    kernels::add_scaled(f0.coeffs(), f1.coeffs(), 1.0 - w, w, out.coeffs());
    return out;
}

namespace {

// Quadrature of the delay profile: phi(tau) = exp(-1/(1-(2 tau-3)^2)) on
// (1,2), sampled on a uniform grid with trapezoid weights and normalized
// so the weights sum to one exactly.  The bump vanishes to all orders at
// the endpoints, so the trapezoid rule converges superalgebraically.
struct DelayProfile {
    std::vector<double> tau;
    std::vector<double> weight;
};

const DelayProfile& delay_profile() {
    static const DelayProfile p = [] {
        constexpr int n = 65;
        DelayProfile q;
        q.tau.resize(n);
        q.weight.resize(n);
        double sum = 0.0;
        for (int i = 0; i < n; ++i) {
            const double tau = 1.0 + static_cast<double>(i) / (n - 1);
            const double x = 2.0 * tau - 3.0;
            const double sq = x * x;
            double phi = 0.0;
            if (sq < 1.0) phi = std::exp(-1.0 / (1.0 - sq));
            const double tw = (i == 0 || i == n - 1) ? 0.5 : 1.0;
            q.tau[i] = tau;
            q.weight[i] = phi * tw;
            sum += q.weight[i];
        }
        for (auto& w : q.weight) w /= sum;
        return q;
    }();
    return p;
}

}  // namespace

std::pair<SpectralField, SpectralField> mollified_velocity(
    const HistoryBuffer& history, double t) {
    const double delta = history.delta();
    if (!history.covers(t)) {
        std::ostringstream os;
        os << "mollified velocity at t=" << t << " needs history over ["
           << t - 2.0 * delta << ", " << t - delta << "]";
        throw InsufficientHistoryError(os.str(), t - 2.0 * delta, t - delta);
    }
    const auto& prof = delay_profile();
    // The Poisson filter and the Riesz transform are linear and
    // time-independent, so average the snapshots first.
    SpectralField avg = history.eval(t - delta * prof.tau[0]);
    avg *= prof.weight[0];
    for (std::size_t i = 1; i < prof.tau.size(); ++i) {
        SpectralField snap = history.eval(t - delta * prof.tau[i]);
        kernels::axpy(prof.weight[i], snap.coeffs(), avg.coeffs());
    }
    return riesz_perp(poisson_filter(avg, delta));
}

SpectralField rhs_approx(const SpectralField& theta_n,
                         const HistoryBuffer& history, double t,
                         const PhysicalParams& params) {
    auto [u1, u2] = mollified_velocity(history, t);
    SpectralField out = advective_term(u1, u2, theta_n);
    SpectralField diss = apply_lambda(theta_n, 2.0 * params.alpha);
    kernels::axpy(-params.kappa, diss.coeffs(), out.coeffs());
    return out;
}

SpectralField rhs_cutoff(const SpectralField& theta, const CutoffSpec& cut,
                         const PhysicalParams& params) {
    const double nsq = sobolev_norm(theta, cut.s_reg);
    const double chi = cut.chi(nsq * nsq);
    SpectralField out = nonlinear_term(theta);
    out *= chi;
    SpectralField diss = apply_lambda(theta, 2.0 * params.alpha);
    kernels::axpy(-params.kappa, diss.coeffs(), out.coeffs());
    return out;
}

SpectralField tangent_rhs(const SpectralField& theta, const SpectralField& dtheta,
                          const CutoffSpec& cut, const PhysicalParams& params) {
    if (!theta.same_grid(dtheta)) throw ConfigError("tangent_rhs: grid mismatch");
    const double nsq = sobolev_norm(theta, cut.s_reg);
    const double q = nsq * nsq;
    const double chi = cut.chi(q);
    const double dchi = cut.chi_prime(q);

    auto [u1, u2] = riesz_perp(theta);
    auto [du1, du2] = riesz_perp(dtheta);

    // chi(q) [ div(Du theta) + div(u Dtheta) ]  (both advections in
    // divergence form, signs folded into advective_term).
    SpectralField out = advective_term(du1, du2, theta);
    out += advective_term(u1, u2, dtheta);
    out *= chi;

    if (dchi != 0.0) {
        const double pair = h_s_inner(theta, dtheta, cut.s_reg);
        SpectralField adv = advective_term(u1, u2, theta);
        kernels::axpy(2.0 * dchi * pair, adv.coeffs(), out.coeffs());
    }

    SpectralField diss = apply_lambda(dtheta, 2.0 * params.alpha);
    kernels::axpy(-params.kappa, diss.coeffs(), out.coeffs());
    return out;
}

}  // namespace sqg
