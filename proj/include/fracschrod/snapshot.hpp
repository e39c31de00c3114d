#pragma once

#include <complex>
#include <filesystem>
#include <vector>

#include "fracschrod/grid.hpp"

namespace fracschrod {

/// CSV snapshot of the interior field: one row per node with columns
/// j, k, x, y, re, im, abs (j, k are 1-based grid indices, x fastest).
void write_snapshot_csv(const std::filesystem::path& path, const ComplexField& u, double time);

/// Raw snapshot: 32-byte header
///   bytes  0..7   magic "FSNAP1\0\0"
///   bytes  8..11  uint32 mx (little-endian)
///   bytes 12..15  uint32 my
///   bytes 16..23  float64 time
///   bytes 24..31  reserved, zero
/// followed by (mx-1)(my-1) complex64 values (float32 re, float32 im),
/// little-endian, interior nodes in x-fastest order.
void write_snapshot_binary(const std::filesystem::path& path, const ComplexField& u, double time);

struct Snapshot {
    int mx = 0;
    int my = 0;
    double time = 0.0;
    std::vector<std::complex<float>> values;  ///< x-fastest interior values
};

/// Reads a binary snapshot back; throws std::runtime_error on a malformed file.
Snapshot read_snapshot_binary(const std::filesystem::path& path);

}  // namespace fracschrod
