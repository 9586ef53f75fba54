#pragma once

#include <span>
#include <vector>

#include "sqg/field.hpp"

namespace sqg::transform {

// Evaluate the field on the uniform n x n grid xi_j = 2*pi*j/n (row-major).
// n must exceed the retained bandwidth (n >= 2K+1); the padded and
// quadrature sizes from GridSpec always qualify.
void to_physical(const SpectralField& f, int n, std::span<double> out);
std::vector<double> to_physical(const SpectralField& f, int n);

// Projection of grid values back onto the retained band.  Output is
// hermitized and mean-free.
void from_physical(std::span<const double> values, int n, SpectralField& out);

// Releases cached FFTW plans (mainly for leak-checking).
void clear_plan_cache();

}  // namespace sqg::transform
