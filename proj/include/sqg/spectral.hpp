#pragma once

#include <utility>
#include <vector>

#include "sqg/field.hpp"

namespace sqg {

// Spectral calculus on zero-mean fields.  All operations preserve
// Hermitian symmetry and the zero mean; the k = 0 slot is identically
// zero so negative powers of |k| are total.

// Lambda^s = (-Laplace)^{s/2}: multiplier |k|^s per mode.
SpectralField apply_lambda(const SpectralField& f, double s);
void apply_lambda_inplace(SpectralField& f, double s);

// Partial derivative d/dxi_axis (axis 0 or 1): multiplier i*k_axis.
SpectralField derivative(const SpectralField& f, int axis);

// u = R^perp(theta) = (-R_2 theta, R_1 theta) with Riesz multiplier
// -i k_j / |k|; equivalently u = grad^perp(psi) for Lambda psi = -theta.
// The output is divergence-free in spectral space.
std::pair<SpectralField, SpectralField> riesz_perp(const SpectralField& theta);

// max_k |k . u_hat(k)| over the retained band.
double spectral_divergence_max(const SpectralField& u1, const SpectralField& u2);

// ||f||_{H^s} = ((2pi)^2 sum_k |k|^{2s} |c_k|^2)^{1/2}; s = 0 is the L^2
// norm (Parseval with constant one).
double sobolev_norm(const SpectralField& f, double s);

// H^s inner product under the same normalization.
double h_s_inner(const SpectralField& f, const SpectralField& g, double s);

// L^2(T^2) inner product: (2pi)^2 Re sum_k c_f(k) conj(c_g(k)).
double l2_inner(const SpectralField& f, const SpectralField& g);

// Equal-weight quadrature of |f|^p on the quadrature grid, then the p-th
// root; p = inf (std::numeric_limits infinity) returns the grid maximum.
// Exact for band-limited f when p is an even integer within the grid's
// resolving power; spectrally accurate otherwise.
double lp_norm(const SpectralField& f, double p);

// Alias-free retained-band coefficients of the pointwise product f*g,
// computed on the zero-padded grid.  Mean removed.
SpectralField dealiased_product(const SpectralField& f, const SpectralField& g);

// P_N: keep modes with |k| <= N, zero the rest.
SpectralField project_ball(const SpectralField& f, int n_ball);

// Poisson kernel filter: multiplier e^{-delta |k|}.
SpectralField poisson_filter(const SpectralField& f, double delta);

// e^{-t kappa Lambda^{2 alpha}} f (exact per-mode decay).
SpectralField semigroup_apply(const SpectralField& f, double kappa, double alpha,
                              double t);

// Fraction of L^2 energy carried by modes with max(|k1|,|k2|) > (2/3) K.
// Resolution monitor; returns 0 for the zero field.
double tail_fraction(const SpectralField& f);

}  // namespace sqg
