#include <atomic>

#include "sqg/kernels.hpp"

namespace sqg::kernels {

namespace {
std::atomic<Exec> g_exec{Exec::OpenMP};
}

void set_default_exec(Exec e) { g_exec.store(e, std::memory_order_relaxed); }
Exec default_exec() { return g_exec.load(std::memory_order_relaxed); }

#define SQG_DISPATCH(fn, ...)                     \
    (default_exec() == Exec::Serial ? serial::fn(__VA_ARGS__) \
                                    : omp::fn(__VA_ARGS__))

void scale_real(std::span<const cplx> in, std::span<const double> mult,
                std::span<cplx> out) {
    SQG_DISPATCH(scale_real, in, mult, out);
}
void scale_real_inplace(std::span<cplx> a, std::span<const double> mult) {
    SQG_DISPATCH(scale_real_inplace, a, mult);
}
void axpy(double alpha, std::span<const cplx> x, std::span<cplx> y) {
    SQG_DISPATCH(axpy, alpha, x, y);
}
void scale(std::span<cplx> a, double alpha) { SQG_DISPATCH(scale, a, alpha); }
void add_scaled(std::span<const cplx> x, std::span<const cplx> y, double a,
                double b, std::span<cplx> out) {
    SQG_DISPATCH(add_scaled, x, y, a, b, out);
}
void multiply_pointwise(std::span<const double> a, std::span<const double> b,
                        std::span<double> out) {
    SQG_DISPATCH(multiply_pointwise, a, b, out);
}
double weighted_abs2_sum(std::span<const cplx> c, std::span<const double> w) {
    return SQG_DISPATCH(weighted_abs2_sum, c, w);
}
double dot_re(std::span<const cplx> a, std::span<const cplx> b) {
    return SQG_DISPATCH(dot_re, a, b);
}
double weighted_dot_re(std::span<const cplx> a, std::span<const cplx> b,
                       std::span<const double> w) {
    return SQG_DISPATCH(weighted_dot_re, a, b, w);
}
double abs_pow_sum(std::span<const double> v, double p) {
    return SQG_DISPATCH(abs_pow_sum, v, p);
}
double max_abs(std::span<const double> v) { return SQG_DISPATCH(max_abs, v); }
double dot(std::span<const double> a, std::span<const double> b) {
    return SQG_DISPATCH(dot, a, b);
}

#undef SQG_DISPATCH

}  // namespace sqg::kernels
