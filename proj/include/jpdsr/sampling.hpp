#pragma once

#include <cstdint>
#include <random>
#include <vector>

#include "jpdsr/scene.hpp"

namespace jpdsr {

struct PairEvent {
  Point x1;
  Point x2;
  double relative_phase = 0.0;  ///< phi(x1) + phi(x2) between the HH and VV branches
};

/// Monte-Carlo source of photon pairs for a scene.
///
/// Near field draws the pair centroid from |t|^4 on the sub-grid and splits it by
/// xi ~ N(0, sigma^2): x1 = m - xi/2, x2 = m + xi/2. Far field draws the anchor x from
/// |t(x)|^2 |t(c - x)|^2 and sets x1 = x + xi/2, x2 = c - x + xi/2. Holography scenes
/// thin pairs by the polarizer acceptance.
class PairSampler {
public:
  PairSampler(Scene scene, double pairs_per_frame, std::uint64_t seed);

  const Scene& scene() const { return scene_; }
  double pairs_per_frame() const { return rate_; }

  /// Events of one frame; depends only on (seed, frame).
  std::vector<PairEvent> frame_events(std::size_t frame) const;
  PairEvent draw(std::mt19937_64& rng) const;
  /// Draws one pair and applies the polarizer; false when the pair is rejected.
  bool draw_accepted(std::mt19937_64& rng, PairEvent& event) const;

private:
  Scene scene_;
  double rate_;
  std::uint64_t seed_;
  int cells_x_;
  std::vector<double> cumulative_;
};

/// Events for frames [0, frames).
std::vector<std::vector<PairEvent>> sample_pair_events(const Scene& scene, double pairs_per_frame,
                                                       std::uint64_t seed, std::size_t frames);

}  // namespace jpdsr
