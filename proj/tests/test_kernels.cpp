#include <doctest.h>

#include <random>
#include <vector>

#include "sqg/kernels.hpp"

using namespace sqg::kernels;

namespace {

std::vector<cplx> random_cvec(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<cplx> v(n);
    for (auto& c : v) c = cplx(nd(rng), nd(rng));
    return v;
}

std::vector<double> random_rvec(std::size_t n, unsigned seed) {
    std::mt19937_64 rng(seed);
    std::normal_distribution<double> nd;
    std::vector<double> v(n);
    for (auto& x : v) x = nd(rng);
    return v;
}

}  // namespace

TEST_CASE("omp kernels match the serial reference bitwise") {
    // Sizes straddling the reduction block boundary.
    for (std::size_t n : {7ul, 1024ul, 1025ul, 40000ul}) {
        auto a = random_cvec(n, 1);
        auto b = random_cvec(n, 2);
        auto m = random_rvec(n, 3);
        auto x = random_rvec(n, 4);
        auto y = random_rvec(n, 5);

        std::vector<cplx> out_s(n), out_p(n);
        serial::scale_real(a, m, out_s);
        omp::scale_real(a, m, out_p);
        CHECK(out_s == out_p);

        auto ys = a, yp = a;
        serial::axpy(0.37, b, ys);
        omp::axpy(0.37, b, yp);
        CHECK(ys == yp);

        std::vector<cplx> cs(n), cp(n);
        serial::add_scaled(a, b, 1.25, -0.5, cs);
        omp::add_scaled(a, b, 1.25, -0.5, cp);
        CHECK(cs == cp);

        std::vector<double> ps(n), pp(n);
        serial::multiply_pointwise(x, y, ps);
        omp::multiply_pointwise(x, y, pp);
        CHECK(ps == pp);

        CHECK(serial::weighted_abs2_sum(a, m) == omp::weighted_abs2_sum(a, m));
        CHECK(serial::dot_re(a, b) == omp::dot_re(a, b));
        CHECK(serial::weighted_dot_re(a, b, m) == omp::weighted_dot_re(a, b, m));
        CHECK(serial::abs_pow_sum(x, 3.3) == omp::abs_pow_sum(x, 3.3));
        CHECK(serial::max_abs(x) == omp::max_abs(x));
        CHECK(serial::dot(x, y) == omp::dot(x, y));
    }
}

TEST_CASE("dispatch honors the process default") {
    auto a = random_cvec(2048, 9);
    auto m = random_rvec(2048, 10);
    const Exec saved = default_exec();
    set_default_exec(Exec::Serial);
    const double s = weighted_abs2_sum(a, m);
    set_default_exec(Exec::OpenMP);
    const double p = weighted_abs2_sum(a, m);
    set_default_exec(saved);
    CHECK(s == p);
}
