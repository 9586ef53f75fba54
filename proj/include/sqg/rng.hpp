#pragma once

#include <cstdint>
#include <utility>
#include <vector>

namespace sqg {

// Philox-4x32-10 counter-based generator (Salmon et al., "Parallel random
// numbers: as easy as 1, 2, 3").  A draw is a pure function of
// (key, counter), so streams can be sampled in any order from any thread.
namespace philox {

struct Block {
    std::uint32_t v[4];
};

Block generate(std::uint64_t key, std::uint32_t c0, std::uint32_t c1,
               std::uint32_t c2, std::uint32_t c3);

}  // namespace philox

// Keyed Gaussian stream for the cylindrical Wiener process on the
// truncated basis.  Identical (root_seed, traj, step, slot) keys yield
// identical draws regardless of evaluation order or thread count.
class WienerStream {
  public:
    explicit WienerStream(std::uint64_t root_seed) : seed_(root_seed) {}

    std::uint64_t root_seed() const { return seed_; }

    // Two independent N(0,1) variates for the given key (Box-Muller over
    // one Philox block).
    std::pair<double, double> normal_pair(std::uint64_t traj, std::uint64_t step,
                                          std::uint32_t slot) const;

  private:
    std::uint64_t seed_;
};

// Fixed enumeration of one representative per Hermitian mode pair:
// (0,k2) for k2=1..K, then (k1,k2) for k1=1..K, k2=-K..K.  The position in
// this list is the RNG slot for that mode.
const std::vector<std::pair<int, int>>& canonical_modes(int max_mode);

// Mode-indexed Gaussian increment vector: two variates (cos and sin
// components) per canonical mode, each N(0, dt).
struct NoiseDraw {
    int max_mode = 0;
    double dt = 0.0;
    std::vector<double> vals;  // layout: [2*i], [2*i+1] for canonical mode i
};

NoiseDraw wiener_increment(const WienerStream& stream, std::uint64_t traj,
                           std::uint64_t step, double dt, int max_mode);

}  // namespace sqg
