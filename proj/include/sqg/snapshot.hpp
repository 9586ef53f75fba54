#pragma once

#include <string>

#include "sqg/field.hpp"

namespace sqg {

// Field snapshot file: 4-byte magic "SQGF", u32 version, u32 modes_per_dim,
// u32 quad_points, f64 padding_factor, then (2K+1)^2 little-endian f64
// (re, im) pairs in row-major k order.
void write_snapshot(const std::string& path, const SpectralField& f);

// Reads a snapshot; the stored grid must match `grid` in modes_per_dim.
SpectralField read_snapshot(const std::string& path, const GridSpec& grid);

// Reads a snapshot on its own stored grid.
SpectralField read_snapshot(const std::string& path);

}  // namespace sqg
