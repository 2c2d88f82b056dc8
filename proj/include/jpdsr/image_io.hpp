#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <utility>
#include <vector>

#include "jpdsr/image.hpp"

namespace jpdsr {

/// What an f64 dump holds; stored in its header.
enum class RawImageKind : std::uint16_t {
  Native = 0,
  SumGrid = 1,
  DifferenceGrid = 2,
  Phase = 3,
};

struct RawImage {
  Image image;
  RawImageKind kind = RawImageKind::Native;
  int samples_per_pixel = 1;          ///< 2 for the half-pitch projection grids
  std::vector<std::uint8_t> mask;     ///< empty when every sample is valid

  double pitch() const { return 1.0 / samples_per_pixel; }
};

/// 32-byte "BPSI" header, little-endian f64 samples row-major, then one mask byte per
/// sample when the mask flag is set.
void write_raw_image(const std::filesystem::path& path, const RawImage& image);
RawImage read_raw_image(const std::filesystem::path& path);

/// 16-bit binary PGM, linearly mapping [lo, hi] (default the image range) to [0, 65535].
void write_pgm16(const std::filesystem::path& path, const Image& image,
                 std::optional<std::pair<double, double>> range = std::nullopt);
/// Reads 8- or 16-bit binary PGM into raw sample values.
Image read_pgm(const std::filesystem::path& path);

}  // namespace jpdsr
