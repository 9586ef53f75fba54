#include <cmath>
#include <limits>
#include <map>
#include <numbers>

#include "sqg/errors.hpp"
#include "sqg/kernels.hpp"
#include "sqg/spectral.hpp"
#include "sqg/transform.hpp"

namespace sqg {

namespace {

constexpr double two_pi = 2.0 * std::numbers::pi;

// Thread-local multiplier scratch, keyed by coefficient count.
std::vector<double>& mult_scratch(std::size_t n) {
    thread_local std::map<std::size_t, std::vector<double>> pool;
    auto& v = pool[n];
    if (v.size() != n) v.assign(n, 0.0);
    return v;
}

template <typename F>
void fill_multiplier(const GridSpec& g, std::vector<double>& m, F f) {
    const int k = g.max_mode();
    for (int k1 = -k; k1 <= k; ++k1)
        for (int k2 = -k; k2 <= k; ++k2)
            m[g.index(k1, k2)] = (k1 == 0 && k2 == 0) ? 0.0 : f(k1, k2);
}

std::vector<double>& lambda_multiplier(const GridSpec& g, double s) {
    auto& m = mult_scratch(g.coeff_count());
    fill_multiplier(g, m, [s](int k1, int k2) {
        return std::pow(mode_sq(k1, k2), 0.5 * s);
    });
    return m;
}

}  // namespace

SpectralField apply_lambda(const SpectralField& f, double s) {
    SpectralField out(f.grid());
    kernels::scale_real(f.coeffs(), lambda_multiplier(f.grid(), s), out.coeffs());
    return out;
}

void apply_lambda_inplace(SpectralField& f, double s) {
    kernels::scale_real_inplace(f.coeffs(), lambda_multiplier(f.grid(), s));
}

SpectralField derivative(const SpectralField& f, int axis) {
    const int k = f.max_mode();
    SpectralField out(f.grid());
    for (int k1 = -k; k1 <= k; ++k1) {
        for (int k2 = -k; k2 <= k; ++k2) {
            const double kj = axis == 0 ? k1 : k2;
            const cplx c = f.at(k1, k2);
            out.at(k1, k2) = cplx(-kj * c.imag(), kj * c.real());
        }
    }
    return out;
}

std::pair<SpectralField, SpectralField> riesz_perp(const SpectralField& theta) {
    const int k = theta.max_mode();
    SpectralField u1(theta.grid());
    SpectralField u2(theta.grid());
    for (int k1 = -k; k1 <= k; ++k1) {
        for (int k2 = -k; k2 <= k; ++k2) {
            if (k1 == 0 && k2 == 0) continue;
            // Shared scalar s = i c / |k|; then u1 = k2 s, u2 = -k1 s.
            const cplx c = theta.at(k1, k2);
            const double inv = 1.0 / std::sqrt(mode_sq(k1, k2));
            const cplx s(-c.imag() * inv, c.real() * inv);
            u1.at(k1, k2) = static_cast<double>(k2) * s;
            u2.at(k1, k2) = static_cast<double>(-k1) * s;
        }
    }
    return {std::move(u1), std::move(u2)};
}

double spectral_divergence_max(const SpectralField& u1, const SpectralField& u2) {
    const int k = u1.max_mode();
    double worst = 0.0;
    for (int k1 = -k; k1 <= k; ++k1) {
        for (int k2 = -k; k2 <= k; ++k2) {
            const cplx d = static_cast<double>(k1) * u1.at(k1, k2) +
                           static_cast<double>(k2) * u2.at(k1, k2);
            worst = std::max(worst, std::abs(d));
        }
    }
    return worst;
}

double sobolev_norm(const SpectralField& f, double s) {
    const GridSpec& g = f.grid();
    auto& m = mult_scratch(g.coeff_count());
    fill_multiplier(g, m, [s](int k1, int k2) {
        return std::pow(mode_sq(k1, k2), s);
    });
    return two_pi * std::sqrt(kernels::weighted_abs2_sum(f.coeffs(), m));
}

double h_s_inner(const SpectralField& f, const SpectralField& g, double s) {
    if (!f.same_grid(g)) throw ConfigError("h_s_inner: grid mismatch");
    auto& m = mult_scratch(f.grid().coeff_count());
    fill_multiplier(f.grid(), m, [s](int k1, int k2) {
        return std::pow(mode_sq(k1, k2), s);
    });
    return two_pi * two_pi *
           kernels::weighted_dot_re(f.coeffs(), g.coeffs(), m);
}

double l2_inner(const SpectralField& f, const SpectralField& g) {
    if (!f.same_grid(g)) throw ConfigError("l2_inner: grid mismatch");
    return two_pi * two_pi * kernels::dot_re(f.coeffs(), g.coeffs());
}

double lp_norm(const SpectralField& f, double p) {
    if (p < 1.0) throw ConfigError("lp_norm: p must be >= 1");
    const int n = f.grid().quad_size();
    auto vals = transform::to_physical(f, n);
    if (std::isinf(p)) return kernels::max_abs(vals);
    const double cell = (two_pi / n) * (two_pi / n);
    const double s = kernels::abs_pow_sum(vals, p);
    return std::pow(cell * s, 1.0 / p);
}

SpectralField dealiased_product(const SpectralField& f, const SpectralField& g) {
    if (!f.same_grid(g)) throw ConfigError("dealiased_product: grid mismatch");
    const int n = f.grid().padded_size();
    auto a = transform::to_physical(f, n);
    auto b = transform::to_physical(g, n);
    std::vector<double> prod(a.size());
    kernels::multiply_pointwise(a, b, prod);
    SpectralField out(f.grid());
    transform::from_physical(prod, n, out);
    return out;
}

SpectralField project_ball(const SpectralField& f, int n_ball) {
    const int k = f.max_mode();
    SpectralField out(f.grid());
    const double lim = static_cast<double>(n_ball) * n_ball;
    for (int k1 = -k; k1 <= k; ++k1)
        for (int k2 = -k; k2 <= k; ++k2)
            if (mode_sq(k1, k2) <= lim) out.at(k1, k2) = f.at(k1, k2);
    out.at(0, 0) = cplx(0.0, 0.0);
    return out;
}

SpectralField poisson_filter(const SpectralField& f, double delta) {
    SpectralField out(f.grid());
    auto& m = mult_scratch(f.grid().coeff_count());
    fill_multiplier(f.grid(), m, [delta](int k1, int k2) {
        return std::exp(-delta * std::sqrt(mode_sq(k1, k2)));
    });
    kernels::scale_real(f.coeffs(), m, out.coeffs());
    return out;
}

SpectralField semigroup_apply(const SpectralField& f, double kappa, double alpha,
                              double t) {
    SpectralField out(f.grid());
    auto& m = mult_scratch(f.grid().coeff_count());
    fill_multiplier(f.grid(), m, [=](int k1, int k2) {
        return std::exp(-t * kappa * std::pow(mode_sq(k1, k2), alpha));
    });
    kernels::scale_real(f.coeffs(), m, out.coeffs());
    return out;
}

double tail_fraction(const SpectralField& f) {
    const int k = f.max_mode();
    const int cut = (2 * k) / 3;
    double tail = 0.0;
    double total = 0.0;
    for (int k1 = -k; k1 <= k; ++k1) {
        for (int k2 = -k; k2 <= k; ++k2) {
            const double e = std::norm(f.at(k1, k2));
            total += e;
            if (std::max(std::abs(k1), std::abs(k2)) > cut) tail += e;
        }
    }
    return total > 0.0 ? tail / total : 0.0;
}

}  // namespace sqg
