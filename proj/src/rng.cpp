#include <cmath>
#include <map>
#include <mutex>
#include <numbers>

#include "sqg/rng.hpp"

namespace sqg {

namespace philox {

namespace {

constexpr std::uint32_t kMul0 = 0xD2511F53u;
constexpr std::uint32_t kMul1 = 0xCD9E8D57u;
constexpr std::uint32_t kWeyl0 = 0x9E3779B9u;
constexpr std::uint32_t kWeyl1 = 0xBB67AE85u;

inline void round_once(std::uint32_t c[4], std::uint32_t k0, std::uint32_t k1) {
    const std::uint64_t p0 = static_cast<std::uint64_t>(kMul0) * c[0];
    const std::uint64_t p1 = static_cast<std::uint64_t>(kMul1) * c[2];
    const std::uint32_t hi0 = static_cast<std::uint32_t>(p0 >> 32);
    const std::uint32_t lo0 = static_cast<std::uint32_t>(p0);
    const std::uint32_t hi1 = static_cast<std::uint32_t>(p1 >> 32);
    const std::uint32_t lo1 = static_cast<std::uint32_t>(p1);
    const std::uint32_t n0 = hi1 ^ c[1] ^ k0;
    const std::uint32_t n1 = lo1;
    const std::uint32_t n2 = hi0 ^ c[3] ^ k1;
    const std::uint32_t n3 = lo0;
    c[0] = n0;
    c[1] = n1;
    c[2] = n2;
    c[3] = n3;
}

}  // namespace

Block generate(std::uint64_t key, std::uint32_t c0, std::uint32_t c1,
               std::uint32_t c2, std::uint32_t c3) {
    std::uint32_t k0 = static_cast<std::uint32_t>(key);
    std::uint32_t k1 = static_cast<std::uint32_t>(key >> 32);
    std::uint32_t c[4] = {c0, c1, c2, c3};
    for (int r = 0; r < 10; ++r) {
        round_once(c, k0, k1);
        k0 += kWeyl0;
        k1 += kWeyl1;
    }
    return Block{{c[0], c[1], c[2], c[3]}};
}

}  // namespace philox

namespace {

// 53-bit uniform in (0,1]: safe under log().
inline double uniform_open(std::uint32_t hi, std::uint32_t lo) {
    const std::uint64_t x =
        (static_cast<std::uint64_t>(hi) << 32) | static_cast<std::uint64_t>(lo);
    return (static_cast<double>(x >> 11) + 1.0) * 0x1.0p-53;
}

}  // namespace

std::pair<double, double> WienerStream::normal_pair(std::uint64_t traj,
                                                    std::uint64_t step,
                                                    std::uint32_t slot) const {
    const philox::Block b = philox::generate(
        seed_, static_cast<std::uint32_t>(step),
        static_cast<std::uint32_t>(step >> 32), slot,
        static_cast<std::uint32_t>(traj) ^
            (static_cast<std::uint32_t>(traj >> 32) * 0x85EBCA6Bu));
    const double u1 = uniform_open(b.v[0], b.v[1]);
    const double u2 = uniform_open(b.v[2], b.v[3]);
    const double r = std::sqrt(-2.0 * std::log(u1));
    const double a = 2.0 * std::numbers::pi * u2;
    return {r * std::cos(a), r * std::sin(a)};
}

const std::vector<std::pair<int, int>>& canonical_modes(int max_mode) {
    static std::mutex mtx;
    static std::map<int, std::vector<std::pair<int, int>>> cache;
    std::lock_guard<std::mutex> lock(mtx);
    auto& v = cache[max_mode];
    if (v.empty()) {
        for (int k2 = 1; k2 <= max_mode; ++k2) v.emplace_back(0, k2);
        for (int k1 = 1; k1 <= max_mode; ++k1)
            for (int k2 = -max_mode; k2 <= max_mode; ++k2) v.emplace_back(k1, k2);
    }
    return v;
}

NoiseDraw wiener_increment(const WienerStream& stream, std::uint64_t traj,
                           std::uint64_t step, double dt, int max_mode) {
    const auto& modes = canonical_modes(max_mode);
    NoiseDraw d;
    d.max_mode = max_mode;
    d.dt = dt;
    d.vals.resize(2 * modes.size());
    const double sd = std::sqrt(dt);
    for (std::size_t i = 0; i < modes.size(); ++i) {
        const auto [zc, zs] =
            stream.normal_pair(traj, step, static_cast<std::uint32_t>(i));
        d.vals[2 * i] = sd * zc;
        d.vals[2 * i + 1] = sd * zs;
    }
    return d;
}

}  // namespace sqg
