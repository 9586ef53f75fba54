#include <algorithm>
#include <cmath>
#include <cstdint>
#include <vector>

#include "sqg/kernels.hpp"

namespace sqg::kernels::omp {

void scale_real(std::span<const cplx> in, std::span<const double> mult,
                std::span<cplx> out) {
    const std::int64_t n = static_cast<std::int64_t>(in.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) out[i] = in[i] * mult[i];
}

void scale_real_inplace(std::span<cplx> a, std::span<const double> mult) {
    const std::int64_t n = static_cast<std::int64_t>(a.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) a[i] *= mult[i];
}

void axpy(double alpha, std::span<const cplx> x, std::span<cplx> y) {
    const std::int64_t n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) y[i] += alpha * x[i];
}

void scale(std::span<cplx> a, double alpha) {
    const std::int64_t n = static_cast<std::int64_t>(a.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) a[i] *= alpha;
}

void add_scaled(std::span<const cplx> x, std::span<const cplx> y, double a,
                double b, std::span<cplx> out) {
    const std::int64_t n = static_cast<std::int64_t>(x.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) out[i] = a * x[i] + b * y[i];
}

void multiply_pointwise(std::span<const double> a, std::span<const double> b,
                        std::span<double> out) {
    const std::int64_t n = static_cast<std::int64_t>(a.size());
#pragma omp parallel for schedule(static)
    for (std::int64_t i = 0; i < n; ++i) out[i] = a[i] * b[i];
}

namespace {

// Same block decomposition as the serial reference: partials are computed
// in parallel but combined in block order, so the sum is bitwise identical
// for every thread count.
template <typename Partial>
double blocked_sum(std::size_t n, Partial partial) {
    const std::int64_t nblocks =
        static_cast<std::int64_t>((n + reduce_block - 1) / reduce_block);
    std::vector<double> parts(nblocks);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < nblocks; ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * reduce_block;
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
    const std::int64_t nblocks = static_cast<std::int64_t>(
        (v.size() + reduce_block - 1) / reduce_block);
    std::vector<double> parts(nblocks, 0.0);
#pragma omp parallel for schedule(static)
    for (std::int64_t b = 0; b < nblocks; ++b) {
        const std::size_t lo = static_cast<std::size_t>(b) * reduce_block;
        const std::size_t hi = std::min(lo + reduce_block, v.size());
        double m = 0.0;
        for (std::size_t i = lo; i < hi; ++i) m = std::max(m, std::abs(v[i]));
        parts[b] = m;
    }
    double m = 0.0;
    for (double p : parts) m = std::max(m, p);
    return m;
}

double dot(std::span<const double> a, std::span<const double> b) {
    return blocked_sum(a.size(), [&](std::size_t lo, std::size_t hi) {
        double s = 0.0;
        for (std::size_t i = lo; i < hi; ++i) s += a[i] * b[i];
        return s;
    });
}

}  // namespace sqg::kernels::omp
