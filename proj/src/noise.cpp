#include <cmath>
#include <limits>
#include <numbers>
#include <sstream>

#include "sqg/errors.hpp"
#include "sqg/kernels.hpp"
#include "sqg/noise.hpp"
#include "sqg/transform.hpp"

namespace sqg {

namespace {

constexpr double inf = std::numeric_limits<double>::infinity();

// 1/(2 pi sqrt(2)): converts a draw along the orthonormalized cos/sin pair
// at k into the exponential-basis coefficient c(k) = A (xi_c - i xi_s).
const double kPairScale = 1.0 / (2.0 * std::numbers::pi * std::numbers::sqrt2);

double retained_power_sum(const GridSpec& grid, const std::vector<double>& sigma,
                          double extra_exponent) {
    const int k = grid.max_mode();
    double s = 0.0;
    for (int k1 = -k; k1 <= k; ++k1) {
        for (int k2 = -k; k2 <= k; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            const double sig = sigma[grid.index(k1, k2)];
            s += std::pow(mode_sq(k1, k2), 0.5 * extra_exponent) * sig * sig;
        }
    }
    return s;
}

}  // namespace

double lattice_tail_sum_bound(double beta, double radius) {
    if (beta >= -2.0) return inf;
    const double n0 = std::max(1.0, std::floor(radius));
    // #(|k| in [n,n+1)) <= 10 n for n >= 1, so
    // sum_{|k|>R} |k|^beta <= 10 (n0^{beta+1} + n0^{beta+2}/(-beta-2)).
    return 10.0 * (std::pow(n0, beta + 1.0) +
                   std::pow(n0, beta + 2.0) / (-beta - 2.0));
}

namespace {

// sigma as a function of |k|^2, shared by both builders.
template <typename SigmaFn>
AdditiveSpectralNoise build_common(const PhysicalParams& params,
                                   const GridSpec& grid, NoiseKind kind,
                                   SigmaFn sigma_of_sq, double sigma_sq_decay,
                                   double e0_sigma, bool remark61) {
    grid.validate();
    params.validate();
    const int k = grid.max_mode();
    std::vector<double> sigma(grid.coeff_count(), 0.0);
    for (int k1 = -k; k1 <= k; ++k1)
        for (int k2 = -k; k2 <= k; ++k2)
            if (k1 != 0 || k2 != 0)
                sigma[grid.index(k1, k2)] = sigma_of_sq(mode_sq(k1, k2));

    // sigma_k^2 ~ c |k|^{-2 g}; tails follow the power law exactly for both
    // provenances, anchored at the largest |k| certainly retained (the
    // inscribed square's radius K).
    const double sig_ref = sigma_of_sq(static_cast<double>(k) * k);
    const double c_ref =
        sig_ref * sig_ref * std::pow(static_cast<double>(k) * k, sigma_sq_decay);

    auto tail = [c_ref](double beta, double r) {
        return c_ref == 0.0 ? 0.0 : c_ref * lattice_tail_sum_bound(beta, r);
    };

    TraceCertificates certs;
    certs.e0_sigma = e0_sigma;
    certs.trace_retained = retained_power_sum(grid, sigma, 0.0);
    certs.trace_tail = tail(-2.0 * sigma_sq_decay, k);
    if (std::isinf(certs.trace_tail)) {
        std::ostringstream os;
        os << "noise trace Tr(GG*) diverges: sigma_k^2 ~ |k|^{"
           << -2.0 * sigma_sq_decay << "} is not summable";
        throw DivergentTraceError(os.str());
    }

    const double e0_exp = 4.0 - 2.0 * params.alpha + 2.0 * e0_sigma;
    certs.e0_retained = retained_power_sum(grid, sigma, e0_exp);
    certs.e0_tail = tail(e0_exp - 2.0 * sigma_sq_decay, k);
    certs.e1_holds = e0_sigma > 0.0 && !std::isinf(certs.e0_tail);
    certs.remark61_holds = remark61;
    return AdditiveSpectralNoise(grid, kind, params, std::move(sigma), certs);
}

}  // namespace

AdditiveSpectralNoise build_additive_noise(const PhysicalParams& params,
                                           const NoiseSpecE1& spec,
                                           const GridSpec& grid) {
    if (spec.amplitude < 0.0)
        throw ConfigError("noise.amplitude must be >= 0");
    if (!(spec.trace_sigma > 0.0))
        throw ConfigError("noise.trace_sigma must be > 0");
    const double a = spec.amplitude;
    const double g = spec.decay;
    if (a > 0.0 && !(g > 1.0))
        throw DivergentTraceError(
            "E1 noise needs decay > 1 for a finite trace (sigma_k^2 ~ "
            "|k|^{-2 decay})");
    return build_common(
        params, grid, NoiseKind::E1Generic,
        [a, g](double ksq) { return a * std::pow(ksq, -0.5 * g); }, g,
        spec.trace_sigma, false);
}

AdditiveSpectralNoise build_additive_noise(const PhysicalParams& params,
                                           const NoiseSpecE3& spec,
                                           const GridSpec& grid) {
    if (!(spec.s_reg >= 1.0)) throw ConfigError("noise.s_reg must be >= 1");
    if (spec.q0_scale < 0.0) throw ConfigError("noise.q0_scale must be >= 0");
    // G = A_alpha^{-(s+alpha)/(2 alpha)} Q0^{1/2} with A_alpha eigenvalue
    // kappa |k|^{2 alpha}:  sigma_k = (kappa |k|^{2 alpha})^{-(s+alpha)/(2
    // alpha)} sqrt(q0) = kappa^{-(s+alpha)/(2 alpha)} |k|^{-(s+alpha)} sqrt(q0).
    const double expo = (spec.s_reg + params.alpha) / (2.0 * params.alpha);
    const double q = std::sqrt(spec.q0_scale);
    const double kap = std::pow(params.kappa, -expo);
    const double decay = spec.s_reg + params.alpha;
    // E0 converges iff the certificate sigma < s + 2 alpha - 3 (Remark 6.1
    // regime when that window is nonempty); take its midpoint.
    const double window = spec.s_reg + 2.0 * params.alpha - 3.0;
    const double e0_sigma = window > 0.0 ? 0.5 * window : 0.25;
    return build_common(
        params, grid, NoiseKind::E3PowerLaw,
        [=](double ksq) { return kap * q * std::pow(ksq, -0.5 * decay); },
        decay, e0_sigma, window > 0.0);
}

E2Map check_hypothesis_E2(const AdditiveSpectralNoise& noise, int n_ball) {
    if (n_ball < 0) throw ConfigError("E2 ball radius must be >= 0");
    const GridSpec& grid = noise.grid();
    E2Map m;
    m.n_ball = n_ball;
    m.g.assign(grid.coeff_count(), 0.0);
    const int k = grid.max_mode();
    const double lim = static_cast<double>(n_ball) * n_ball;
    for (int k1 = -k; k1 <= k; ++k1) {
        for (int k2 = -k; k2 <= k; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            if (mode_sq(k1, k2) > lim) continue;
            const double s = noise.sigma(k1, k2);
            if (s <= 0.0) {
                std::ostringstream os;
                os << "(E2) fails for N=" << n_ball << ": sigma = 0 at mode ("
                   << k1 << "," << k2 << ")";
                throw DegenerateModeError(os.str(), k1, k2);
            }
            m.g[grid.index(k1, k2)] = 1.0 / s;
            m.op_norm = std::max(m.op_norm, 1.0 / s);
        }
    }
    return m;
}

SpectralField noise_increment_field(const AdditiveSpectralNoise& noise,
                                    const NoiseDraw& xi) {
    const GridSpec& grid = noise.grid();
    if (xi.max_mode != grid.max_mode())
        throw ConfigError("noise_increment_field: draw/grid mismatch");
    SpectralField f(grid);
    const auto& modes = canonical_modes(grid.max_mode());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const auto [k1, k2] = modes[i];
        const double s = noise.sigma(k1, k2) * kPairScale;
        const cplx c(s * xi.vals[2 * i], -s * xi.vals[2 * i + 1]);
        f.at(k1, k2) = c;
        f.at(-k1, -k2) = std::conj(c);
    }
    return f;
}

SpectralField ou_exact_step(const SpectralField& z,
                            const AdditiveSpectralNoise& noise,
                            const PhysicalParams& params, double dt,
                            const NoiseDraw& xi) {
    if (!(dt > 0.0)) throw ConfigError("ou_exact_step: dt must be > 0");
    const GridSpec& grid = noise.grid();
    if (!(z.grid() == grid))
        throw ConfigError("ou_exact_step: field/noise grid mismatch");
    SpectralField out(grid);
    const auto& modes = canonical_modes(grid.max_mode());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const auto [k1, k2] = modes[i];
        const double lam = params.lambda_mode(k1, k2);
        const double decay = std::exp(-lam * dt);
        // Exact one-step variance, expressed as a rescaling of the
        // variance-dt draw.
        const double var_scale =
            std::sqrt((1.0 - decay * decay) / (2.0 * lam * dt));
        const double s = noise.sigma(k1, k2) * var_scale * kPairScale;
        const cplx incr(s * xi.vals[2 * i], -s * xi.vals[2 * i + 1]);
        const cplx c = decay * z.at(k1, k2) + incr;
        out.at(k1, k2) = c;
        out.at(-k1, -k2) = std::conj(c);
    }
    return out;
}

double ou_stationary_component_std(const AdditiveSpectralNoise& noise,
                                   const PhysicalParams& params, int k1,
                                   int k2) {
    const double lam = params.lambda_mode(k1, k2);
    return noise.sigma(k1, k2) * std::sqrt(1.0 / (2.0 * lam)) * kPairScale;
}

double MultiplicativeDiagNoise::g(double a) const {
    switch (profile) {
        case Profile::One: return 1.0;
        case Profile::Identity: return a;
        case Profile::SmoothLinear: return std::sqrt(1.0 + a * a);
    }
    return 1.0;
}

double MultiplicativeDiagNoise::b_sq_sum() const {
    double s = 0.0;
    const int k = grid.max_mode();
    for (int k1 = -k; k1 <= k; ++k1)
        for (int k2 = -k; k2 <= k; ++k2)
            if (k1 != 0 || k2 != 0) {
                const double v = b[grid.index(k1, k2)];
                s += v * v;
            }
    return s;
}

MultiplicativeDiagNoise make_multiplicative_noise(
    const GridSpec& grid, double amplitude, double decay,
    MultiplicativeDiagNoise::Profile profile) {
    if (amplitude < 0.0) throw ConfigError("noise.amplitude must be >= 0");
    if (amplitude > 0.0 && !(decay > 1.0))
        throw DivergentTraceError(
            "multiplicative noise needs decay > 1 for sum b_k^2 < inf");
    MultiplicativeDiagNoise n;
    n.grid = grid;
    n.profile = profile;
    n.b.assign(grid.coeff_count(), 0.0);
    const int k = grid.max_mode();
    for (int k1 = -k; k1 <= k; ++k1)
        for (int k2 = -k; k2 <= k; ++k2)
            if (k1 != 0 || k2 != 0)
                n.b[grid.index(k1, k2)] =
                    amplitude * std::pow(mode_sq(k1, k2), -0.5 * decay);
    return n;
}

SpectralField apply_multiplicative(const MultiplicativeDiagNoise& noise,
                                   const SpectralField& theta,
                                   const NoiseDraw& xi) {
    const GridSpec& grid = noise.grid;
    if (xi.max_mode != grid.max_mode())
        throw ConfigError("apply_multiplicative: draw/grid mismatch");
    // Assemble the noise field sum_k b_k xi_k e_k.
    SpectralField bfield(grid);
    const auto& modes = canonical_modes(grid.max_mode());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const auto [k1, k2] = modes[i];
        const double s = noise.b[grid.index(k1, k2)] * kPairScale;
        const cplx c(s * xi.vals[2 * i], -s * xi.vals[2 * i + 1]);
        bfield.at(k1, k2) = c;
        bfield.at(-k1, -k2) = std::conj(c);
    }
    if (noise.profile == MultiplicativeDiagNoise::Profile::One) return bfield;

    const int n = grid.quad_size();
    auto tvals = transform::to_physical(theta, n);
    for (auto& v : tvals) v = noise.g(v);
    auto bvals = transform::to_physical(bfield, n);
    std::vector<double> prod(bvals.size());
    kernels::multiply_pointwise(bvals, tvals, prod);
    SpectralField out(grid);
    transform::from_physical(prod, n, out);
    return out;
}

}  // namespace sqg
