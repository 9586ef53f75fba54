#pragma once

#include <complex>
#include <span>
#include <vector>

#include "sqg/grid.hpp"

namespace sqg {

using cplx = std::complex<double>;

// Zero-mean real scalar field on the torus, stored as complex coefficients
// c(k) of the exponential basis e^{i k.xi} over the retained band
// |k_i| <= M/2, row-major in (k1,k2).  Invariants: c(-k) = conj(c(k))
// (the field is real) and c(0,0) = 0 (zero mean).
//
// Norm convention: coefficients are related to the orthonormalized real
// eigenbasis of -Laplace by Parseval with constant one, i.e.
// ||f||_{L^2}^2 = (2pi)^2 sum_k |c(k)|^2.
class SpectralField {
  public:
    SpectralField() = default;
    explicit SpectralField(const GridSpec& grid)
        : grid_(grid), c_(static_cast<std::size_t>(grid.coeff_count())) {}

    const GridSpec& grid() const { return grid_; }
    int max_mode() const { return grid_.max_mode(); }

    cplx& at(int k1, int k2) { return c_[grid_.index(k1, k2)]; }
    const cplx& at(int k1, int k2) const { return c_[grid_.index(k1, k2)]; }

    std::span<cplx> coeffs() { return c_; }
    std::span<const cplx> coeffs() const { return c_; }

    // Projects onto the invariant manifold: Hermitian symmetry via pairwise
    // averaging and an exactly zero mean.  Cheap, and a no-op (up to
    // rounding already present) after symmetric operations.
    void enforce_realness();

    void set_zero();
    bool same_grid(const SpectralField& o) const { return grid_ == o.grid_; }
    bool all_finite() const;

    SpectralField& operator+=(const SpectralField& o);
    SpectralField& operator-=(const SpectralField& o);
    SpectralField& operator*=(double a);

    friend SpectralField operator+(SpectralField a, const SpectralField& b) {
        a += b;
        return a;
    }
    friend SpectralField operator-(SpectralField a, const SpectralField& b) {
        a -= b;
        return a;
    }
    friend SpectralField operator*(double s, SpectralField a) {
        a *= s;
        return a;
    }

  private:
    GridSpec grid_;
    std::vector<cplx> c_;
};

// Convenience constructors for test fields and initial conditions.
// make_mode yields amp * cos(k.xi) or amp * sin(k.xi).
SpectralField make_cos_mode(const GridSpec& g, int k1, int k2, double amp = 1.0);
SpectralField make_sin_mode(const GridSpec& g, int k1, int k2, double amp = 1.0);

}  // namespace sqg
