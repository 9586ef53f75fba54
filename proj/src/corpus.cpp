#include <algorithm>
#include <cmath>
#include <fstream>
#include <limits>

#include <json.hpp>

#include "sqg/corpus.hpp"
#include "sqg/errors.hpp"
#include "sqg/rng.hpp"
#include "sqg/spectral.hpp"

namespace sqg {

SpectralField random_band_field(const GridSpec& grid, int band, double decay,
                                std::uint64_t seed) {
    const int b = std::min(band, grid.max_mode());
    SpectralField f(grid);
    WienerStream stream(seed);
    const auto& modes = canonical_modes(grid.max_mode());
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const auto [k1, k2] = modes[i];
        const double ksq = mode_sq(k1, k2);
        if (ksq > static_cast<double>(b) * b) continue;
        const auto [x, y] = stream.normal_pair(0, 0, static_cast<std::uint32_t>(i));
        const cplx c = std::pow(ksq, -0.5 * decay) * cplx(x, -y);
        f.at(k1, k2) = c;
        f.at(-k1, -k2) = std::conj(c);
    }
    return f;
}

namespace {

// Corpus mix: vary bandwidth and spectral slope so the max ratio probes
// both smooth and rough fields.
SpectralField corpus_sample(const GridSpec& grid, int i, std::uint64_t seed) {
    const int kmax = grid.max_mode();
    const int bands[4] = {std::max(2, kmax / 8), std::max(3, kmax / 4),
                          std::max(4, kmax / 2), kmax};
    const double decays[3] = {0.5, 1.0, 2.0};
    return random_band_field(grid, bands[i % 4], decays[(i / 4) % 3],
                             seed + static_cast<std::uint64_t>(i));
}

template <typename Ratio>
double corpus_max(const GridSpec& grid, int n, std::uint64_t seed, Ratio ratio) {
    double best = 0.0;
    for (int i = 0; i < n; ++i) {
        const double r = ratio(i);
        if (std::isfinite(r)) best = std::max(best, r);
    }
    (void)grid;
    return best;
}

}  // namespace

double empirical_sobolev_constant(const GridSpec& grid, double sigma, double q,
                                  double p, int n_samples, std::uint64_t seed) {
    return corpus_max(grid, n_samples, seed, [&](int i) {
        SpectralField f = corpus_sample(grid, i, seed);
        const double num = lp_norm(f, p);
        const double den = lp_norm(apply_lambda(f, sigma), q);
        return den > 0.0 ? num / den : 0.0;
    });
}

double empirical_riesz_constant(const GridSpec& grid, double s, double p,
                                int n_samples, std::uint64_t seed) {
    return corpus_max(grid, n_samples, seed, [&](int i) {
        SpectralField f = corpus_sample(grid, i, seed);
        auto [u1, u2] = riesz_perp(f);
        const double den = lp_norm(apply_lambda(f, s), p);
        if (den <= 0.0) return 0.0;
        const double n1 = lp_norm(apply_lambda(u1, s), p);
        const double n2 = lp_norm(apply_lambda(u2, s), p);
        return std::max(n1, n2) / den;
    });
}

double empirical_product_constant(const GridSpec& grid, double s, double p,
                                  double p1, double p2, double p3, double p4,
                                  int n_samples, std::uint64_t seed) {
    return corpus_max(grid, n_samples, seed, [&](int i) {
        SpectralField f = corpus_sample(grid, 2 * i, seed);
        SpectralField g = corpus_sample(grid, 2 * i + 1, seed ^ 0x5bd1e995u);
        const double num = lp_norm(apply_lambda(dealiased_product(f, g), s), p);
        const double den = lp_norm(f, p1) * lp_norm(apply_lambda(g, s), p2) +
                           lp_norm(g, p3) * lp_norm(apply_lambda(f, s), p4);
        return den > 0.0 ? num / den : 0.0;
    });
}

double empirical_commutator_constant(const GridSpec& grid, double s, double p,
                                     double p1, double p2, double p3, double p4,
                                     int n_samples, std::uint64_t seed) {
    return corpus_max(grid, n_samples, seed, [&](int i) {
        SpectralField f = corpus_sample(grid, 2 * i, seed);
        SpectralField g = corpus_sample(grid, 2 * i + 1, seed ^ 0x5bd1e995u);
        SpectralField comm = apply_lambda(dealiased_product(f, g), s) -
                             dealiased_product(f, apply_lambda(g, s));
        const double num = lp_norm(comm, p);
        SpectralField g1 = derivative(f, 0);
        SpectralField g2 = derivative(f, 1);
        const double grad_f =
            std::max(lp_norm(g1, p1), lp_norm(g2, p1));
        const double den =
            grad_f * lp_norm(apply_lambda(g, s - 1.0), p2) +
            lp_norm(g, p3) * lp_norm(apply_lambda(f, s), p4);
        return den > 0.0 ? num / den : 0.0;
    });
}

double empirical_interpolation_ratio(const GridSpec& grid, double s1, double s,
                                     double s2, int n_samples,
                                     std::uint64_t seed) {
    if (!(s1 < s && s < s2))
        throw ConfigError("interpolation needs s1 < s < s2");
    const double a = (s2 - s) / (s2 - s1);
    return corpus_max(grid, n_samples, seed, [&](int i) {
        SpectralField f = corpus_sample(grid, i, seed);
        const double den = std::pow(sobolev_norm(f, s1), a) *
                           std::pow(sobolev_norm(f, s2), 1.0 - a);
        return den > 0.0 ? sobolev_norm(f, s) / den : 0.0;
    });
}

EmpiricalConstants compute_empirical_constants(const GridSpec& grid,
                                               const PhysicalParams& params,
                                               double sigma_linf, int n_samples,
                                               std::uint64_t seed) {
    EmpiricalConstants c;
    c.modes_per_dim = grid.modes_per_dim;
    c.alpha = params.alpha;
    c.p_critical = (params.alpha + 1.0) / (params.alpha - 0.5);
    c.sigma_linf = sigma_linf;
    const double inf = std::numeric_limits<double>::infinity();
    c.c_s_linf =
        empirical_sobolev_constant(grid, sigma_linf, 2.0, inf, n_samples, seed);
    const double p = c.p_critical;
    const double p1 = 2.0 * p / (p - 1.0);
    c.c_s_embed = empirical_sobolev_constant(grid, 1.0 / p, 2.0, p1, n_samples,
                                             seed + 1);
    c.c_r = empirical_riesz_constant(grid, 0.0, p, n_samples, seed + 2);
    return c;
}

void save_constants(const std::string& path, const EmpiricalConstants& c) {
    nlohmann::json j{{"modes_per_dim", c.modes_per_dim},
                     {"alpha", c.alpha},
                     {"p_critical", c.p_critical},
                     {"sigma_linf", c.sigma_linf},
                     {"c_s_linf", c.c_s_linf},
                     {"c_s_embed", c.c_s_embed},
                     {"c_r", c.c_r}};
    std::ofstream out(path, std::ios::trunc);
    if (!out) throw ConfigError("cannot write constants file: " + path);
    out << j.dump(2) << "\n";
}

EmpiricalConstants load_constants(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw ConfigError("cannot open constants file: " + path);
    nlohmann::json j;
    try {
        j = nlohmann::json::parse(in, nullptr, true, true);
    } catch (const nlohmann::json::parse_error& e) {
        throw ConfigError("constants file parse error: " + std::string(e.what()));
    }
    EmpiricalConstants c;
    c.modes_per_dim = j.at("modes_per_dim").get<int>();
    c.alpha = j.at("alpha").get<double>();
    c.p_critical = j.at("p_critical").get<double>();
    c.sigma_linf = j.at("sigma_linf").get<double>();
    c.c_s_linf = j.at("c_s_linf").get<double>();
    c.c_s_embed = j.at("c_s_embed").get<double>();
    c.c_r = j.at("c_r").get<double>();
    return c;
}

}  // namespace sqg
