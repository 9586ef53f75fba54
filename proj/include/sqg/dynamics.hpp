#pragma once

#include <deque>

#include "sqg/params.hpp"
#include "sqg/spectral.hpp"

namespace sqg {

// -div(u f) with exact dealiased products; div u = 0 makes this equal to
// -u.grad(f) and keeps <output, f> = 0 to rounding.
SpectralField advective_term(const SpectralField& u1, const SpectralField& u2,
                             const SpectralField& f);

// -u.grad(theta) with u = R^perp(theta).
SpectralField nonlinear_term(const SpectralField& theta);

// Drift of the full dynamics: -kappa Lambda^{2 alpha} theta + nonlinear_term.
SpectralField rhs_sqg(const SpectralField& theta, const PhysicalParams& params);

// Drift of the pathwise v-equation dv/dt = -A_alpha v - u_{v+z}.grad(v+z):
// the nonlinearity is evaluated on theta = v + z, the dissipation on v only.
SpectralField rhs_v_equation(const SpectralField& v, const SpectralField& z,
                             const PhysicalParams& params);

// Time ring of snapshots backing the delayed mollified velocity.  Fields
// at times < 0 are treated as zero; evaluation interpolates linearly
// between stored snapshots (spacing should stay below delta/8).
class HistoryBuffer {
  public:
    HistoryBuffer() = default;
    HistoryBuffer(double delta, const GridSpec& grid);

    double delta() const { return delta_; }

    // Snapshots must arrive in increasing time order.
    void push(double t, const SpectralField& f);

    // Field value at time t (linear interpolation; zero for t < 0).
    // Throws InsufficientHistoryError outside the covered window.
    SpectralField eval(double t) const;

    // True when the window [t - 2 delta, t - delta] can be evaluated.
    bool covers(double t) const;

  private:
    double delta_ = 0.0;
    GridSpec grid_;
    std::deque<std::pair<double, SpectralField>> ring_;
};

// U_delta[theta](t) = int phi(tau) (k_delta * R^perp theta)(t - delta tau) dtau
// with the smooth bump phi supported in [1,2], normalized to integral one,
// and the Poisson multiplier e^{-delta |k|}.
std::pair<SpectralField, SpectralField> mollified_velocity(
    const HistoryBuffer& history, double t);

// Drift of the mollified/delayed approximation:
// -kappa Lambda^{2 alpha} theta_n - div(U_delta . theta_n).
SpectralField rhs_approx(const SpectralField& theta_n,
                         const HistoryBuffer& history, double t,
                         const PhysicalParams& params);

// Cutoff profile chi_R applied to |theta|^2_{H^{s_reg}}: equal to 1 on
// [0,R], 0 on [R+1,inf), and the linear ramp in between -- the unique
// monotone profile meeting the paper's Lipschitz-1 bound on a unit
// transition (no smooth profile can).  chi_prime is the a.e. derivative.
struct CutoffSpec {
    double R = 1.0;
    double s_reg = 2.0;

    double chi(double x) const {
        if (x <= R) return 1.0;
        if (x >= R + 1.0) return 0.0;
        return (R + 1.0) - x;
    }
    double chi_prime(double x) const {
        return (x > R && x < R + 1.0) ? -1.0 : 0.0;
    }
};

// -kappa Lambda^{2 alpha} theta + chi_R(|theta|^2_{H^s}) * nonlinear_term.
SpectralField rhs_cutoff(const SpectralField& theta, const CutoffSpec& cut,
                         const PhysicalParams& params);

// Linearization of rhs_cutoff at theta in direction dtheta:
//   -kappa Lambda^{2a} Dtheta
//   - chi(q) [ Du.grad(theta) + u.grad(Dtheta) ]
//   - 2 chi'(q) <theta, Dtheta>_{H^s} u.grad(theta),
// with q = |theta|^2_{H^s} and Du = R^perp(Dtheta).
SpectralField tangent_rhs(const SpectralField& theta, const SpectralField& dtheta,
                          const CutoffSpec& cut, const PhysicalParams& params);

}  // namespace sqg
