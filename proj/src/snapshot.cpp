#include <bit>
#include <cstdint>
#include <cstring>
#include <fstream>

#include "sqg/errors.hpp"
#include "sqg/snapshot.hpp"

namespace sqg {

static_assert(std::endian::native == std::endian::little,
              "snapshot format is little-endian; add byte swapping for this "
              "platform");

namespace {
constexpr char kMagic[4] = {'S', 'Q', 'G', 'F'};
constexpr std::uint32_t kVersion = 1;
}  // namespace

void write_snapshot(const std::string& path, const SpectralField& f) {
    std::ofstream out(path, std::ios::binary | std::ios::trunc);
    if (!out) throw ConfigError("cannot open snapshot for writing: " + path);
    const GridSpec& g = f.grid();
    const std::uint32_t m = static_cast<std::uint32_t>(g.modes_per_dim);
    const std::uint32_t q = static_cast<std::uint32_t>(g.quad_points);
    const double pf = g.padding_factor;
    out.write(kMagic, 4);
    out.write(reinterpret_cast<const char*>(&kVersion), 4);
    out.write(reinterpret_cast<const char*>(&m), 4);
    out.write(reinterpret_cast<const char*>(&q), 4);
    out.write(reinterpret_cast<const char*>(&pf), 8);
    out.write(reinterpret_cast<const char*>(f.coeffs().data()),
              static_cast<std::streamsize>(f.coeffs().size() * sizeof(cplx)));
    if (!out) throw ConfigError("snapshot write failed: " + path);
}

namespace {

SpectralField read_impl(const std::string& path, const GridSpec* expect) {
    std::ifstream in(path, std::ios::binary);
    if (!in) throw ConfigError("cannot open snapshot: " + path);
    char magic[4];
    std::uint32_t version = 0, m = 0, q = 0;
    double pf = 0.0;
    in.read(magic, 4);
    in.read(reinterpret_cast<char*>(&version), 4);
    in.read(reinterpret_cast<char*>(&m), 4);
    in.read(reinterpret_cast<char*>(&q), 4);
    in.read(reinterpret_cast<char*>(&pf), 8);
    if (!in || std::memcmp(magic, kMagic, 4) != 0)
        throw ConfigError("not a field snapshot: " + path);
    if (version != kVersion)
        throw ConfigError("unsupported snapshot version in " + path);
    GridSpec g{static_cast<int>(m), pf, static_cast<int>(q)};
    if (expect) {
        if (expect->modes_per_dim != g.modes_per_dim)
            throw ConfigError("snapshot resolution mismatch: file has M=" +
                              std::to_string(m));
        g = *expect;
    }
    g.validate();
    SpectralField f(g);
    in.read(reinterpret_cast<char*>(f.coeffs().data()),
            static_cast<std::streamsize>(f.coeffs().size() * sizeof(cplx)));
    if (!in) throw ConfigError("snapshot truncated: " + path);
    f.enforce_realness();
    return f;
}

}  // namespace

SpectralField read_snapshot(const std::string& path, const GridSpec& grid) {
    return read_impl(path, &grid);
}

SpectralField read_snapshot(const std::string& path) {
    return read_impl(path, nullptr);
}

}  // namespace sqg
