#pragma once

#include "jpdsr/image.hpp"
#include "jpdsr/jpd.hpp"

namespace jpdsr {

/// P+(s): sum of Gamma(r1, r2) over valid entries with r1 + r2 = s.
Image2x sum_projection(const Jpd& jpd);
/// P-(d): sum of Gamma(r, r + d) over valid entries, stored at d + (M - 1).
Image2x minus_projection(const Jpd& jpd);

/// Number of valid entries that land on each projection sample.
Image2x sum_support(const Jpd& jpd);
Image2x minus_support(const Jpd& jpd);

enum class DiagonalKind { Diagonal, AntiDiagonal };

/// Gamma(r, r) for near field, Gamma(r, c - r) for far field.
Image extract_diagonal_image(const Jpd& jpd, DiagonalKind kind);

}  // namespace jpdsr
