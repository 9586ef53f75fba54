#pragma once

#include <cmath>

#include "sqg/grid.hpp"

namespace sqg {

// Dissipation parameters of  d theta + kappa (-Laplace)^alpha theta dt + ... .
// lambda1 = kappa * (min |k|^2)^alpha = kappa on the zero-mean torus grid
// (smallest retained |k| is 1).
struct PhysicalParams {
    double kappa = 1.0;
    double alpha = 0.75;

    double lambda1() const { return kappa; }

    // Eigenvalue of A_alpha at mode k.
    double lambda_mode(int k1, int k2) const {
        return kappa * std::pow(mode_sq(k1, k2), alpha);
    }

    // Smallest eigenvalue outside the ball |k| <= N (the "lambda_{N+1}"
    // of the ball projection).
    double lambda_ball_exit(int n_ball) const {
        return kappa * std::pow(min_mode_sq_above(n_ball), alpha);
    }

    void validate() const {
        if (!(kappa > 0.0)) throw ConfigError("physics.kappa must be > 0");
        if (!(alpha > 0.0 && alpha < 1.0))
            throw ConfigError("physics.alpha must lie in (0,1)");
    }
};

}  // namespace sqg
