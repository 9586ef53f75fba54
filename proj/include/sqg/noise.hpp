#pragma once

#include <optional>
#include <string>
#include <vector>

#include "sqg/field.hpp"
#include "sqg/params.hpp"
#include "sqg/rng.hpp"

namespace sqg {

// Provenance of an additive spectral-diagonal noise operator.
enum class NoiseKind {
    E1Generic,   // sigma_k = amplitude * |k|^{-decay}
    E3PowerLaw,  // G = A_alpha^{-(s+alpha)/(2 alpha)} Q0^{1/2}, Q0 = q0 * I
};

struct NoiseSpecE1 {
    double amplitude = 1.0;
    double decay = 4.0;        // gamma in sigma_k = a |k|^{-gamma}
    double trace_sigma = 0.25; // the sigma in E0 = Tr(Lambda^{4-2a+2s} GG*)
};

struct NoiseSpecE3 {
    double s_reg = 2.0;   // s >= 1
    double q0_scale = 1.0;  // Q0 = q0 * I, q0 >= 0
};

// Partial sums over the retained band plus integral-comparison tail bounds
// for the two trace quantities entering the hypotheses.
struct TraceCertificates {
    double trace_retained = 0.0;  // Tr(GG*) over retained modes
    double trace_tail = 0.0;      // upper bound on the truncated remainder
    double e0_sigma = 0.0;        // sigma used in the E0 certificate
    double e0_retained = 0.0;     // Tr(Lambda^{4-2a+2s} GG*) retained part
    double e0_tail = 0.0;         // +inf when the tail exponent diverges
    bool e1_holds = false;        // E0 finite (tail exponent < -2)
    bool remark61_holds = false;  // E3 with s > 3 - 2 alpha

    double trace() const { return trace_retained + trace_tail; }
    double e0() const { return e0_retained + e0_tail; }
};

// Upper bound on sum over lattice k with |k| > R of |k|^beta, via the
// annulus count #( |k| in [n,n+1) ) <= 10 n.  +inf for beta >= -2.
double lattice_tail_sum_bound(double beta, double radius);

// Additive noise, diagonal in the real trigonometric eigenbasis with
// per-mode intensity sigma_k depending on |k| only.
class AdditiveSpectralNoise {
  public:
    AdditiveSpectralNoise() = default;
    AdditiveSpectralNoise(GridSpec grid, NoiseKind kind, PhysicalParams params,
                          std::vector<double> sigma, TraceCertificates certs)
        : grid_(grid), kind_(kind), params_(params), sigma_(std::move(sigma)),
          certs_(certs) {}

    const GridSpec& grid() const { return grid_; }
    NoiseKind kind() const { return kind_; }
    double sigma(int k1, int k2) const { return sigma_[grid_.index(k1, k2)]; }
    const std::vector<double>& sigma_table() const { return sigma_; }
    const TraceCertificates& certificates() const { return certs_; }

  private:
    GridSpec grid_;
    NoiseKind kind_ = NoiseKind::E1Generic;
    PhysicalParams params_;
    std::vector<double> sigma_;
    TraceCertificates certs_;
};

// Builders compute the sigma table and both certificates.  They throw
// DivergentTraceError when Tr(GG*) itself diverges for the requested
// parameters; a divergent E0 only clears the e1_holds flag.
AdditiveSpectralNoise build_additive_noise(const PhysicalParams& params,
                                           const NoiseSpecE1& spec,
                                           const GridSpec& grid);
AdditiveSpectralNoise build_additive_noise(const PhysicalParams& params,
                                           const NoiseSpecE3& spec,
                                           const GridSpec& grid);

// Hypothesis (E2): a diagonal right inverse g with G g = P_N.
struct E2Map {
    int n_ball = 0;
    std::vector<double> g;  // full coefficient table, zero outside the ball
    double op_norm = 0.0;   // max_{0<|k|<=N} 1/sigma_k
};

// Throws DegenerateModeError naming the first offending k when some
// sigma_k = 0 inside the ball.
E2Map check_hypothesis_E2(const AdditiveSpectralNoise& noise, int n_ball);

// The increment field G dW for one step: per canonical mode pair the two
// draws are the coefficients along the orthonormalized cos/sin basis
// functions, scaled by sigma_k.
SpectralField noise_increment_field(const AdditiveSpectralNoise& noise,
                                    const NoiseDraw& xi);

// Distributionally exact Ornstein-Uhlenbeck step for
// dz + A_alpha z dt = G dW:  per mode,
//   z' = e^{-lambda_k dt} z + sigma_k * N(0, (1-e^{-2 lambda_k dt})/(2 lambda_k)),
// with the Gaussian built from xi (variance dt) by exact rescaling so a
// shared stream stays comparable across schemes.
SpectralField ou_exact_step(const SpectralField& z,
                            const AdditiveSpectralNoise& noise,
                            const PhysicalParams& params, double dt,
                            const NoiseDraw& xi);

// Standard deviation of each real component of the complex coefficient
// c(k) under the stationary OU law (for distribution tests).
double ou_stationary_component_std(const AdditiveSpectralNoise& noise,
                                   const PhysicalParams& params, int k1, int k2);

// Diagonal multiplicative noise of Remark-3.4 type:
// increment = (sum_k b_k xi_k e_k) * g(theta), assembled pointwise.
struct MultiplicativeDiagNoise {
    enum class Profile { One, Identity, SmoothLinear };

    GridSpec grid;
    std::vector<double> b;  // full coefficient table b_k >= 0
    Profile profile = Profile::One;

    double g(double a) const;
    double g_lipschitz() const { return profile == Profile::One ? 0.0 : 1.0; }
    double g_zero() const { return profile == Profile::Identity ? 0.0 : 1.0; }
    double b_sq_sum() const;
};

MultiplicativeDiagNoise make_multiplicative_noise(
    const GridSpec& grid, double amplitude, double decay,
    MultiplicativeDiagNoise::Profile profile);

SpectralField apply_multiplicative(const MultiplicativeDiagNoise& noise,
                                   const SpectralField& theta,
                                   const NoiseDraw& xi);

}  // namespace sqg
