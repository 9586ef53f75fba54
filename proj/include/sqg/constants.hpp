#pragma once

#include <string>

namespace sqg {

// Empirical corpus constants standing in for the Sobolev-embedding and
// Riesz-transform constants in the quantitative formulas.  Measured as max
// ratios over a random band-limited corpus (never proved); frozen per grid
// resolution in the test fixtures together with their generation recipe.
struct EmpiricalConstants {
    int modes_per_dim = 0;
    double alpha = 0.0;
    double p_critical = 0.0;
    double sigma_linf = 0.0;  // exponent in the L^inf embedding below

    // ||f||_{L^inf} <= c_s_linf ||Lambda^{sigma_linf} f||_{L^2}
    double c_s_linf = 0.0;
    // ||f||_{L^{p1}} <= c_s_embed ||Lambda^{1/p} f||_{L^2}, p1 = 2p/(p-1)
    double c_s_embed = 0.0;
    // ||u_j||_{L^p} <= c_r ||theta||_{L^p}
    double c_r = 0.0;

    // Single Sobolev constant used where the formulas write C_S: the two
    // embedding uses are conflated in the source estimates, so take the max.
    double c_s() const { return c_s_linf > c_s_embed ? c_s_linf : c_s_embed; }
};

void save_constants(const std::string& path, const EmpiricalConstants& c);
EmpiricalConstants load_constants(const std::string& path);

}  // namespace sqg
