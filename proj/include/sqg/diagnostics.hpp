#pragma once

#include <vector>

#include "sqg/constants.hpp"
#include "sqg/integrate.hpp"

namespace sqg {

// Quadrature of  int |theta|^{p-2} theta (kappa Lambda^{2 alpha} - 2
// lambda1 / p) theta dxi,  nonnegative for band-limited theta up to the
// quadrature's own error.
double positivity_functional(const SpectralField& theta, double p,
                             const PhysicalParams& params);

// E ||theta(t)||_{L^p}^p against the closed-form envelope
//   ||x||^p e^{-lambda1 t} + Cs^p [p(p-1)/2]^{p/2} lambda1^{-p/2} E0^{p/2}
//   (1 - e^{-lambda1 t}).
struct MomentBoundSpec {
    double p = 4.0;
    double slack = 1.0;
    double x_lp_p = 0.0;  // ||theta_0||_{L^p}^p
    double c_s = 0.0;     // empirical Sobolev constant (L^inf embedding)
    double e0 = 0.0;
    double lambda1 = 1.0;

    double bound(double t) const;
};

struct MomentCheckPoint {
    double t = 0.0;
    double mc_mean = 0.0;
    double mc_stderr = 0.0;
    double bound = 0.0;
    bool pass = false;
};

struct MomentReport {
    std::vector<MomentCheckPoint> points;
    bool pass = false;
};

MomentReport lp_moment_check(const std::vector<DiagnosticsRecord>& ensemble,
                             const MomentBoundSpec& spec);

// Ito energy balance for additive noise, tested as an equality:
//   E|theta(t)|^2 + 2 kappa E int_0^t ||theta||_{H^alpha}^2 =
//   |theta_0|^2 + t Tr[GG*].
struct EnergyCheckPoint {
    double t = 0.0;
    double lhs = 0.0;
    double rhs = 0.0;
    double rel_discrepancy = 0.0;
    double threshold = 0.0;  // 3 (mc_stderr/rhs + 2 dt)
    bool pass = false;
};

std::vector<EnergyCheckPoint> energy_balance_check(
    const std::vector<DiagnosticsRecord>& ensemble, const PhysicalParams& params,
    double trace_gg, double theta0_l2, double dt);

// Ergodic running averages with batch-means error bars.
enum class Observable { L2Sq, HAlphaSq, LpP, H1Sq };

struct TimeAverageResult {
    double mean = 0.0;
    double std_error = 0.0;  // batch-means
    int batches = 0;
    double burn_in = 0.0;
    std::vector<double> t;
    std::vector<double> running;
};

TimeAverageResult time_average(const DiagnosticsRecord& record,
                               Observable observable, double burn_in,
                               int batches = 32);

// Decay-rate fits in log coordinates.
enum class DecayModel { Exponential, Polynomial };

struct DecayFit {
    DecayModel model = DecayModel::Exponential;
    double amplitude = 0.0;  // a
    double rate = 0.0;       // b (exp) or q (poly); > 0 means decay
    double rate_stderr = 0.0;
    double residual_rms = 0.0;
    int points = 0;
};

DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& d,
                   DecayModel model);

// Fits both models and returns (fit, preferred-is-exponential).
std::pair<DecayFit, bool> fit_decay_compare(const std::vector<double>& t,
                                            const std::vector<double>& d);

// Window helper: keep samples with t >= t_min and d > floor.
void fit_window(const std::vector<double>& t, const std::vector<double>& d,
                double t_min, double floor, std::vector<double>& t_out,
                std::vector<double>& d_out);

}  // namespace sqg
