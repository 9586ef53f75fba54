#pragma once

#include <cstdint>

#include "sqg/constants.hpp"
#include "sqg/field.hpp"
#include "sqg/params.hpp"

namespace sqg {

// Random band-limited field: independent Gaussian coefficients with a
// |k|^{-decay} roll-off on 0 < |k| <= band.  Deterministic in seed.
SpectralField random_band_field(const GridSpec& grid, int band, double decay,
                                std::uint64_t seed);

// Max over an n-sample corpus of ||f||_{L^p} / ||Lambda^sigma f||_{L^q}.
double empirical_sobolev_constant(const GridSpec& grid, double sigma, double q,
                                  double p, int n_samples, std::uint64_t seed);

// Max of ||Lambda^s u_j||_{L^p} / ||Lambda^s theta||_{L^p} over the corpus
// and both velocity components.
double empirical_riesz_constant(const GridSpec& grid, double s, double p,
                                int n_samples, std::uint64_t seed);

// Max of ||Lambda^s(fg)||_{L^p} over the product-estimate right-hand side.
double empirical_product_constant(const GridSpec& grid, double s, double p,
                                  double p1, double p2, double p3, double p4,
                                  int n_samples, std::uint64_t seed);

// Max of ||Lambda^s(fg) - f Lambda^s g||_{L^p} over the commutator bound's
// right-hand side.
double empirical_commutator_constant(const GridSpec& grid, double s, double p,
                                     double p1, double p2, double p3, double p4,
                                     int n_samples, std::uint64_t seed);

// Max of ||f||_{H^s} / (||f||_{H^{s1}}^a ||f||_{H^{s2}}^{1-a}) with the
// interpolation weights; should not exceed 1 beyond rounding.
double empirical_interpolation_ratio(const GridSpec& grid, double s1, double s,
                                     double s2, int n_samples,
                                     std::uint64_t seed);

// The full constants record used by the coupling/diagnostics formulas at
// one (grid, alpha) working point.
EmpiricalConstants compute_empirical_constants(const GridSpec& grid,
                                               const PhysicalParams& params,
                                               double sigma_linf, int n_samples,
                                               std::uint64_t seed);

}  // namespace sqg
