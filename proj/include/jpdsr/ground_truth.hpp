#pragma once

#include "jpdsr/image.hpp"
#include "jpdsr/jpd.hpp"
#include "jpdsr/scene.hpp"

namespace jpdsr {

/// Pixel-integrated JPD of the scene in probability per emitted pair.
///
/// Integrates the pair source of PairSampler over pixel areas: the anchor density
/// over sub-grid cells and the Gaussian offset per axis. Symmetrized, so that the
/// expected estimator value for r1 != r2 is 2 * pairs_per_frame * eta^2 * Gamma.
Jpd ground_truth_jpd(const Scene& scene, int band_radius);

/// Point-sampled delta-correlated JPD on the half-pixel grid.
///
/// Near field: Gamma(r1, r2) = w(d) |t(m)|^4 F(m, m) with m = (r1 + r2) / 2; far field:
/// Gamma = w(u) |t(x)|^2 |t(c - x)|^2 F(x, c - x) with x = (c - d) / 2. w is 1 at the
/// origin and halves for every axis with unit offset, so each sum (near) or difference
/// (far) coordinate receives exactly the object value at its half-pixel position.
Jpd analytic_delta_jpd(const Scene& scene, int band_radius = 1);

enum class Sampling { PixelCenter, PixelAverage };

/// Classical intensity |t|^2, times (1 + v cos(dtheta - alpha)) / 2 for holography scenes.
Image classical_image(const Scene& scene, Sampling sampling = Sampling::PixelCenter);

/// |t(r)|^4 at pixel centres (the ideal diagonal image).
Image diagonal_reference(const Scene& scene);

}  // namespace jpdsr
