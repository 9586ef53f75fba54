#pragma once

#include <complex>
#include <cstddef>
#include <span>

namespace sqg::kernels {

using cplx = std::complex<double>;

// Execution policy for the data-parallel kernels.  Serial is the reference
// implementation; OpenMP must produce bit-identical results (element-wise
// kernels write disjoint slots, reductions accumulate fixed-size block
// partials in a fixed order, so the result is independent of thread count
// and schedule).
enum class Exec { Serial, OpenMP };

// Process-wide default used by the field/spectral layers.
void set_default_exec(Exec e);
Exec default_exec();

// Block size for deterministic reductions. Fixed: part of the numeric
// contract, not a tuning knob.
inline constexpr std::size_t reduce_block = 1024;

namespace serial {
void scale_real(std::span<const cplx> in, std::span<const double> mult,
                std::span<cplx> out);
void scale_real_inplace(std::span<cplx> a, std::span<const double> mult);
void axpy(double alpha, std::span<const cplx> x, std::span<cplx> y);
void scale(std::span<cplx> a, double alpha);
void add_scaled(std::span<const cplx> x, std::span<const cplx> y, double a,
                double b, std::span<cplx> out);
void multiply_pointwise(std::span<const double> a, std::span<const double> b,
                        std::span<double> out);
double weighted_abs2_sum(std::span<const cplx> c, std::span<const double> w);
double dot_re(std::span<const cplx> a, std::span<const cplx> b);
double weighted_dot_re(std::span<const cplx> a, std::span<const cplx> b,
                       std::span<const double> w);
double abs_pow_sum(std::span<const double> v, double p);
double max_abs(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
}  // namespace serial

namespace omp {
void scale_real(std::span<const cplx> in, std::span<const double> mult,
                std::span<cplx> out);
void scale_real_inplace(std::span<cplx> a, std::span<const double> mult);
void axpy(double alpha, std::span<const cplx> x, std::span<cplx> y);
void scale(std::span<cplx> a, double alpha);
void add_scaled(std::span<const cplx> x, std::span<const cplx> y, double a,
                double b, std::span<cplx> out);
void multiply_pointwise(std::span<const double> a, std::span<const double> b,
                        std::span<double> out);
double weighted_abs2_sum(std::span<const cplx> c, std::span<const double> w);
double dot_re(std::span<const cplx> a, std::span<const cplx> b);
double weighted_dot_re(std::span<const cplx> a, std::span<const cplx> b,
                       std::span<const double> w);
double abs_pow_sum(std::span<const double> v, double p);
double max_abs(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);
}  // namespace omp

// Dispatching wrappers (use the process default policy).
void scale_real(std::span<const cplx> in, std::span<const double> mult,
                std::span<cplx> out);
void scale_real_inplace(std::span<cplx> a, std::span<const double> mult);
void axpy(double alpha, std::span<const cplx> x, std::span<cplx> y);
void scale(std::span<cplx> a, double alpha);
void add_scaled(std::span<const cplx> x, std::span<const cplx> y, double a,
                double b, std::span<cplx> out);
void multiply_pointwise(std::span<const double> a, std::span<const double> b,
                        std::span<double> out);
double weighted_abs2_sum(std::span<const cplx> c, std::span<const double> w);
double dot_re(std::span<const cplx> a, std::span<const cplx> b);
double weighted_dot_re(std::span<const cplx> a, std::span<const cplx> b,
                       std::span<const double> w);
double abs_pow_sum(std::span<const double> v, double p);
double max_abs(std::span<const double> v);
double dot(std::span<const double> a, std::span<const double> b);

}  // namespace sqg::kernels
