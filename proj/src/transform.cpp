#include <fftw3.h>

#include <cassert>
#include <cstdint>
#include <map>
#include <mutex>
#include <stdexcept>

#include "sqg/transform.hpp"

namespace sqg::transform {

namespace {

// One pair of c2c plans per grid size, created once under a lock (FFTW
// planning is not thread-safe) and executed through the new-array
// interface, which is.  FFTW_ESTIMATE keeps planning deterministic.
struct PlanPair {
    fftw_plan forward = nullptr;
    fftw_plan backward = nullptr;
};

std::mutex g_plan_mutex;
std::map<int, PlanPair>& plan_map() {
    static std::map<int, PlanPair> m;
    return m;
}

PlanPair get_plans(int n) {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    auto& m = plan_map();
    auto it = m.find(n);
    if (it != m.end()) return it->second;

    std::vector<cplx> a(static_cast<std::size_t>(n) * n);
    std::vector<cplx> b(a.size());
    auto* ap = reinterpret_cast<fftw_complex*>(a.data());
    auto* bp = reinterpret_cast<fftw_complex*>(b.data());
    PlanPair p;
    const unsigned flags = FFTW_ESTIMATE | FFTW_UNALIGNED;
    p.forward = fftw_plan_dft_2d(n, n, ap, bp, FFTW_FORWARD, flags);
    p.backward = fftw_plan_dft_2d(n, n, ap, bp, FFTW_BACKWARD, flags);
    if (!p.forward || !p.backward)
        throw std::runtime_error("fftw plan creation failed");
    m.emplace(n, p);
    return p;
}

struct Scratch {
    std::vector<cplx> a;
    std::vector<cplx> b;
};

Scratch& scratch_for(int n) {
    thread_local std::map<int, Scratch> pool;
    auto& s = pool[n];
    const std::size_t need = static_cast<std::size_t>(n) * n;
    if (s.a.size() != need) {
        s.a.assign(need, cplx{});
        s.b.assign(need, cplx{});
    }
    return s;
}

inline int slot(int w, int n) { return w >= 0 ? w : w + n; }

}  // namespace

void to_physical(const SpectralField& f, int n, std::span<double> out) {
    const int k = f.max_mode();
    assert(n >= 2 * k + 1);
    assert(out.size() == static_cast<std::size_t>(n) * n);
    auto& s = scratch_for(n);
    for (auto& c : s.a) c = cplx(0.0, 0.0);
    for (int k1 = -k; k1 <= k; ++k1) {
        const int r = slot(k1, n) * n;
        for (int k2 = -k; k2 <= k; ++k2)
            s.a[static_cast<std::size_t>(r) + slot(k2, n)] = f.at(k1, k2);
    }
    PlanPair plans = get_plans(n);
    fftw_execute_dft(plans.backward, reinterpret_cast<fftw_complex*>(s.a.data()),
                     reinterpret_cast<fftw_complex*>(s.b.data()));
    const std::int64_t total = static_cast<std::int64_t>(n) * n;
    for (std::int64_t i = 0; i < total; ++i) out[i] = s.b[i].real();
}

std::vector<double> to_physical(const SpectralField& f, int n) {
    std::vector<double> out(static_cast<std::size_t>(n) * n);
    to_physical(f, n, out);
    return out;
}

void from_physical(std::span<const double> values, int n, SpectralField& out) {
    const int k = out.max_mode();
    assert(n >= 2 * k + 1);
    assert(values.size() == static_cast<std::size_t>(n) * n);
    auto& s = scratch_for(n);
    const std::int64_t total = static_cast<std::int64_t>(n) * n;
    for (std::int64_t i = 0; i < total; ++i) s.a[i] = cplx(values[i], 0.0);
    PlanPair plans = get_plans(n);
    fftw_execute_dft(plans.forward, reinterpret_cast<fftw_complex*>(s.a.data()),
                     reinterpret_cast<fftw_complex*>(s.b.data()));
    const double inv = 1.0 / (static_cast<double>(n) * n);
    for (int k1 = -k; k1 <= k; ++k1) {
        const int r = slot(k1, n) * n;
        for (int k2 = -k; k2 <= k; ++k2)
            out.at(k1, k2) = inv * s.b[static_cast<std::size_t>(r) + slot(k2, n)];
    }
    out.enforce_realness();
}

void clear_plan_cache() {
    std::lock_guard<std::mutex> lock(g_plan_mutex);
    for (auto& [n, p] : plan_map()) {
        fftw_destroy_plan(p.forward);
        fftw_destroy_plan(p.backward);
    }
    plan_map().clear();
}

}  // namespace sqg::transform
