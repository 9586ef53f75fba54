#include <algorithm>
#include <cmath>
#include <vector>

#include "sqg/kernels.hpp"

namespace sqg::kernels::serial {

void scale_real(std::span<const cplx> in, std::span<const double> mult,
                std::span<cplx> out) {
    for (std::size_t i = 0; i < in.size(); ++i) out[i] = in[i] * mult[i];
}

void scale_real_inplace(std::span<cplx> a, std::span<const double> mult) {
    for (std::size_t i = 0; i < a.size(); ++i) a[i] *= mult[i];
}

void axpy(double alpha, std::span<const cplx> x, std::span<cplx> y) {
    for (std::size_t i = 0; i < x.size(); ++i) y[i] += alpha * x[i];
}

void scale(std::span<cplx> a, double alpha) {
    for (auto& c : a) c *= alpha;
}

void add_scaled(std::span<const cplx> x, std::span<const cplx> y, double a,
                double b, std::span<cplx> out) {
    for (std::size_t i = 0; i < x.size(); ++i) out[i] = a * x[i] + b * y[i];
}

void multiply_pointwise(std::span<const double> a, std::span<const double> b,
                        std::span<double> out) {
    for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] * b[i];
}

// Reductions accumulate fixed-size block partials, then combine the
// partials in index order. The OpenMP variants share this structure so the
// two policies agree bitwise.
namespace {

template <typename Partial>
double blocked_sum(std::size_t n, Partial partial) {
    const std::size_t nblocks = (n + reduce_block - 1) / reduce_block;
    std::vector<double> parts(nblocks);
    for (std::size_t b = 0; b < nblocks; ++b) {
        const std::size_t lo = b * reduce_block;
        const std::size_t hi = std::min(lo + reduce_block, n);
        parts[b] = partial(lo, hi);
    }
    double total = 0.0;
    for (double p : parts) total += p;
    return total;
}

}  // namespace

double weighted_abs2_sum(std::span<const cplx> c, std::span<const double> w) {
    return blocked_sum(c.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += w[i] * std::norm(c[i]);
        return s;
    });
}

double dot_re(std::span<const cplx> a, std::span<const cplx> b) {
    return blocked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i)
            s += a[i].real() * b[i].real() + a[i].imag() * b[i].imag();
        return s;
    });
}

double weighted_dot_re(std::span<const cplx> a, std::span<const cplx> b,
                       std::span<const double> w) {
    return blocked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i)
            s += w[i] * (a[i].real() * b[i].real() + a[i].imag() * b[i].imag());
        return s;
    });
}

double abs_pow_sum(std::span<const double> v, double p) {
    return blocked_sum(v.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += std::pow(std::abs(v[i]), p);
        return s;
    });
}

double max_abs(std::span<const double> v) {
    double m = 0.0;
    for (double x : v) m = std::max(m, std::abs(x));
    return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
    return blocked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
        return s;
    });
}

}  // namespace sqg::kernels::serial
