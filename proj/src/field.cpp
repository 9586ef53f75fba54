#include <cmath>

#include "sqg/field.hpp"
#include "sqg/kernels.hpp"

namespace sqg {

void SpectralField::enforce_realness() {
    const int k = grid_.max_mode();
    // Canonical half: k1 > 0, or k1 == 0 and k2 > 0.
    for (int k1 = 0; k1 <= k; ++k1) {
        const int k2_start = (k1 == 0) ? 1 : -k;
        for (int k2 = k2_start; k2 <= k; ++k2) {
            cplx& a = at(k1, k2);
            cplx& b = at(-k1, -k2);
            const cplx h = 0.5 * (a + std::conj(b));
            a = h;
            b = std::conj(h);
        }
    }
    at(0, 0) = cplx(0.0, 0.0);
}

void SpectralField::set_zero() {
    for (auto& c : c_) c = cplx(0.0, 0.0);
}

bool SpectralField::all_finite() const {
    for (const auto& c : c_) {
        if (!std::isfinite(c.real()) || !std::isfinite(c.imag())) return false;
    }
    return true;
}

SpectralField& SpectralField::operator+=(const SpectralField& o) {
    kernels::axpy(1.0, o.coeffs(), coeffs());
    return *this;
}

SpectralField& SpectralField::operator-=(const SpectralField& o) {
    kernels::axpy(-1.0, o.coeffs(), coeffs());
    return *this;
}

SpectralField& SpectralField::operator*=(double a) {
    kernels::scale(coeffs(), a);
    return *this;
}

SpectralField make_cos_mode(const GridSpec& g, int k1, int k2, double amp) {
    SpectralField f(g);
    f.at(k1, k2) = cplx(0.5 * amp, 0.0);
    f.at(-k1, -k2) = cplx(0.5 * amp, 0.0);
    return f;
}

SpectralField make_sin_mode(const GridSpec& g, int k1, int k2, double amp) {
    SpectralField f(g);
    f.at(k1, k2) = cplx(0.0, -0.5 * amp);
    f.at(-k1, -k2) = cplx(0.0, 0.5 * amp);
    return f;
}

}  // namespace sqg
