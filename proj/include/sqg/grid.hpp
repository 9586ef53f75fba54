#pragma once

#include <cmath>
#include <cstdint>

#include "sqg/errors.hpp"

namespace sqg {

// Discretization frame for zero-mean fields on the torus [0,2pi)^2.
//
// Retained wavenumbers are k = (k1,k2) with |k_i| <= M/2.  Quadratic
// products are evaluated on a padded physical grid large enough that the
// projection of the product back onto the retained band is alias-free
// (this needs >= 3*(M/2)+1 points per dimension, slightly more than the
// nominal 3/2 oversampling).  L^p quadrature uses a further oversampled
// grid.
struct GridSpec {
    int modes_per_dim = 64;        // M, even, >= 4
    double padding_factor = 1.5;   // >= 3/2
    int quad_points = 0;           // 0 = auto (2 * padded size)

    int max_mode() const { return modes_per_dim / 2; }          // K
    int coeff_dim() const { return modes_per_dim + 1; }         // 2K+1
    int coeff_count() const { return coeff_dim() * coeff_dim(); }

    int padded_size() const {
        const int k = max_mode();
        const int from_factor = even_ceil(padding_factor * modes_per_dim);
        const int from_alias = even_ceil(3 * k + 1);
        return from_factor > from_alias ? from_factor : from_alias;
    }

    int quad_size() const {
        return quad_points > 0 ? quad_points : 2 * padded_size();
    }

    // Row-major coefficient index for wavenumber (k1,k2), |k_i| <= K.
    int index(int k1, int k2) const {
        const int k = max_mode();
        return (k1 + k) * coeff_dim() + (k2 + k);
    }

    void validate() const {
        if (modes_per_dim < 4 || modes_per_dim % 2 != 0)
            throw ConfigError("grid.modes_per_dim must be an even integer >= 4");
        if (padding_factor < 1.5)
            throw ConfigError("grid.padding_factor must be >= 3/2");
        if (quad_points != 0) {
            if (quad_points % 2 != 0 || quad_points < padded_size())
                throw ConfigError(
                    "grid.quad_points must be even and >= the padded size");
        }
    }

    bool operator==(const GridSpec& o) const {
        return modes_per_dim == o.modes_per_dim &&
               padding_factor == o.padding_factor && quad_points == o.quad_points;
    }

  private:
    static int even_ceil(double x) {
        int n = static_cast<int>(std::ceil(x));
        return n % 2 == 0 ? n : n + 1;
    }
};

// |k|^2 as a double for wavenumber (k1,k2).
inline double mode_sq(int k1, int k2) {
    return static_cast<double>(k1) * k1 + static_cast<double>(k2) * k2;
}

// Smallest |k|^2 among lattice modes with |k| > N (the eigenvalue slot
// "N+1" for the ball projection P_N).
inline double min_mode_sq_above(int n_ball) {
    // Candidates: (N+1, 0) and the diagonal-ish points just outside the ball.
    double best = 0.0;
    const int lim = n_ball + 1;
    for (int k1 = 0; k1 <= lim; ++k1) {
        for (int k2 = 0; k2 <= lim; ++k2) {
            const double s = mode_sq(k1, k2);
            if (s > static_cast<double>(n_ball) * n_ball) {
                if (best == 0.0 || s < best) best = s;
            }
        }
    }
    return best;
}

}  // namespace sqg
