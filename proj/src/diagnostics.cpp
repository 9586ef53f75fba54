#include <cmath>
#include <numbers>

#include "sqg/kernels.hpp"
#include "sqg/diagnostics.hpp"
#include "sqg/errors.hpp"
#include "sqg/transform.hpp"

namespace sqg {

double positivity_functional(const SpectralField& theta, double p,
                             const PhysicalParams& params) {
    if (!(p >= 2.0)) throw ConfigError("positivity functional needs p >= 2");
    const int n = theta.grid().quad_size();
    auto tv = transform::to_physical(theta, n);
    SpectralField w = apply_lambda(theta, 2.0 * params.alpha);
    w *= params.kappa;
    kernels::axpy(-2.0 * params.lambda1() / p, theta.coeffs(), w.coeffs());
    auto wv = transform::to_physical(w, n);
    const double cell = std::pow(2.0 * std::numbers::pi / n, 2);
    double s = 0.0;
    for (std::size_t i = 0; i < tv.size(); ++i) {
        const double th = tv[i];
        s += std::pow(std::abs(th), p - 2.0) * th * wv[i];
    }
    return cell * s;
}

double MomentBoundSpec::bound(double t) const {
    const double decay = std::exp(-lambda1 * t);
    const double level = std::pow(c_s, p) * std::pow(0.5 * p * (p - 1.0), 0.5 * p) *
                         std::pow(lambda1, -0.5 * p) * std::pow(e0, 0.5 * p);
    return x_lp_p * decay + level * (1.0 - decay);
}

MomentReport lp_moment_check(const std::vector<DiagnosticsRecord>& ensemble,
                             const MomentBoundSpec& spec) {
    if (ensemble.size() < 16)
        throw ConfigError("lp_moment_check needs an ensemble of >= 16");
    const std::size_t rows = ensemble.front().rows.size();
    for (const auto& rec : ensemble) {
        if (rec.rows.size() != rows)
            throw ConfigError("lp_moment_check: ragged ensemble");
        if (rec.lp_p != spec.p)
            throw ConfigError("lp_moment_check: records carry a different p");
    }
    MomentReport rep;
    rep.pass = true;
    const double n = static_cast<double>(ensemble.size());
    for (std::size_t r = 0; r < rows; ++r) {
        double mean = 0.0;
        double m2 = 0.0;
        for (const auto& rec : ensemble) {
            const double v = std::pow(rec.rows[r].lp, spec.p);
            mean += v;
            m2 += v * v;
        }
        mean /= n;
        const double var = std::max(0.0, m2 / n - mean * mean);
        MomentCheckPoint pt;
        pt.t = ensemble.front().rows[r].t;
        pt.mc_mean = mean;
        pt.mc_stderr = std::sqrt(var / n);
        pt.bound = spec.bound(pt.t) * spec.slack;
        pt.pass = mean <= pt.bound + 3.0 * pt.mc_stderr;
        rep.pass = rep.pass && pt.pass;
        rep.points.push_back(pt);
    }
    return rep;
}

std::vector<EnergyCheckPoint> energy_balance_check(
    const std::vector<DiagnosticsRecord>& ensemble, const PhysicalParams& params,
    double trace_gg, double theta0_l2, double dt) {
    if (ensemble.size() < 16)
        throw ConfigError("energy_balance_check needs an ensemble of >= 16");
    const std::size_t rows = ensemble.front().rows.size();
    for (const auto& rec : ensemble)
        if (rec.rows.size() != rows)
            throw ConfigError("energy_balance_check: ragged ensemble");
    std::vector<EnergyCheckPoint> out;
    const double n = static_cast<double>(ensemble.size());
    for (std::size_t r = 0; r < rows; ++r) {
        double mean = 0.0;
        double m2 = 0.0;
        for (const auto& rec : ensemble) {
            const auto& row = rec.rows[r];
            const double v =
                row.l2 * row.l2 + 2.0 * params.kappa * row.diss_cum;
            mean += v;
            m2 += v * v;
        }
        mean /= n;
        const double var = std::max(0.0, m2 / n - mean * mean);
        EnergyCheckPoint pt;
        pt.t = ensemble.front().rows[r].t;
        pt.lhs = mean;
        pt.rhs = theta0_l2 * theta0_l2 + pt.t * trace_gg;
        if (pt.rhs > 0.0) {
            pt.rel_discrepancy = std::abs(pt.lhs - pt.rhs) / pt.rhs;
            pt.threshold = 3.0 * (std::sqrt(var / n) / pt.rhs + 2.0 * dt);
            pt.pass = pt.rel_discrepancy < pt.threshold;
        } else {
            pt.rel_discrepancy = std::abs(pt.lhs - pt.rhs);
            pt.threshold = 1e-12;
            pt.pass = pt.rel_discrepancy < pt.threshold;
        }
        out.push_back(pt);
    }
    return out;
}

namespace {

double observe(const DiagnosticsRow& row, Observable obs, double p) {
    switch (obs) {
        case Observable::L2Sq: return row.l2 * row.l2;
        case Observable::HAlphaSq: return row.h_alpha * row.h_alpha;
        case Observable::H1Sq: return row.h1 * row.h1;
        case Observable::LpP: return std::pow(row.lp, p);
    }
    return 0.0;
}

}  // namespace

TimeAverageResult time_average(const DiagnosticsRecord& record,
                               Observable observable, double burn_in,
                               int batches) {
    if (batches < 2) throw ConfigError("time_average needs >= 2 batches");
    TimeAverageResult res;
    res.burn_in = burn_in;

    std::vector<double> vals;
    for (const auto& row : record.rows) {
        if (row.t < burn_in) continue;
        vals.push_back(observe(row, observable, record.lp_p));
        res.t.push_back(row.t);
    }
    if (vals.size() < static_cast<std::size_t>(2 * batches))
        throw ConfigError("time_average: too few post-burn-in samples");

    double acc = 0.0;
    res.running.reserve(vals.size());
    for (std::size_t i = 0; i < vals.size(); ++i) {
        acc += vals[i];
        res.running.push_back(acc / static_cast<double>(i + 1));
    }
    res.mean = res.running.back();

    // Batch means over equal contiguous blocks (remainder joins the last).
    const std::size_t per = vals.size() / batches;
    std::vector<double> bm;
    for (int b = 0; b < batches; ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * per;
        const std::size_t hi =
            (b == batches - 1) ? vals.size() : lo + per;
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += vals[i];
        bm.push_back(s / static_cast<double>(hi - lo));
    }
    double mb = 0.0;
    for (double v : bm) mb += v;
    mb /= bm.size();
    double var = 0.0;
    for (double v : bm) var += (v - mb) * (v - mb);
    var /= (bm.size() - 1);
    res.std_error = std::sqrt(var / bm.size());
    res.batches = batches;
    return res;
}

DecayFit fit_decay(const std::vector<double>& t, const std::vector<double>& d,
                   DecayModel model) {
    if (t.size() != d.size() || t.size() < 3)
        throw ConfigError("fit_decay: need >= 3 samples");
    for (double v : d)
        if (!(v > 0.0))
            throw ConfigError("fit_decay: series must be positive (window it)");

    // Linear least squares on log d = log a - rate * x, with x = t
    // (exponential) or x = log(1+t) (polynomial).
    const std::size_t n = t.size();
    std::vector<double> x(n), y(n);
    for (std::size_t i = 0; i < n; ++i) {
        x[i] = model == DecayModel::Exponential ? t[i] : std::log1p(t[i]);
        y[i] = std::log(d[i]);
    }
    double sx = 0, sy = 0, sxx = 0, sxy = 0;
    for (std::size_t i = 0; i < n; ++i) {
        sx += x[i];
        sy += y[i];
        sxx += x[i] * x[i];
        sxy += x[i] * y[i];
    }
    const double nn = static_cast<double>(n);
    const double denom = nn * sxx - sx * sx;
    if (denom <= 0.0) throw ConfigError("fit_decay: degenerate abscissae");
    const double slope = (nn * sxy - sx * sy) / denom;
    const double intercept = (sy - slope * sx) / nn;

    double sse = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
        const double r = y[i] - (intercept + slope * x[i]);
        sse += r * r;
    }
    DecayFit fit;
    fit.model = model;
    fit.amplitude = std::exp(intercept);
    fit.rate = -slope;
    fit.points = static_cast<int>(n);
    fit.residual_rms = std::sqrt(sse / nn);
    if (n > 2) {
        const double sigma2 = sse / (nn - 2.0);
        fit.rate_stderr = std::sqrt(sigma2 * nn / denom);
    }
    return fit;
}

std::pair<DecayFit, bool> fit_decay_compare(const std::vector<double>& t,
                                            const std::vector<double>& d) {
    DecayFit e = fit_decay(t, d, DecayModel::Exponential);
    DecayFit p = fit_decay(t, d, DecayModel::Polynomial);
    const bool exp_preferred = e.residual_rms <= p.residual_rms;
    return {exp_preferred ? e : p, exp_preferred};
}

void fit_window(const std::vector<double>& t, const std::vector<double>& d,
                double t_min, double floor, std::vector<double>& t_out,
                std::vector<double>& d_out) {
    t_out.clear();
    d_out.clear();
    for (std::size_t i = 0; i < t.size(); ++i) {
        if (t[i] >= t_min && d[i] > floor) {
            t_out.push_back(t[i]);
            d_out.push_back(d[i]);
        }
    }
}

}  // namespace sqg
