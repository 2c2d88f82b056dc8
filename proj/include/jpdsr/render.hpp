#pragma once

#include <cstdint>
#include <optional>
#include <vector>

#include "jpdsr/camera.hpp"
#include "jpdsr/frames.hpp"
#include "jpdsr/sampling.hpp"

namespace jpdsr {

/// Frame source that synthesizes each frame on demand from its index.
///
/// Frame l depends only on (seed, l), so frames can be rendered in any order and
/// in parallel.
class FrameRenderer final : public FrameSource {
public:
  FrameRenderer(Dims dims, std::optional<PairSampler> pairs, CameraModel camera, std::size_t frames,
                std::uint64_t seed, std::optional<Image> classical_overlay = std::nullopt);

  Dims dims() const override { return dims_; }
  std::size_t count() const override { return frames_; }
  void read(std::size_t index, std::span<double> out) const override;

  const CameraModel& camera() const { return camera_; }

  /// Photons reaching pixels in one frame, before the detector response.
  void photon_counts(std::size_t index, std::span<double> counts) const;

private:
  Dims dims_;
  std::optional<PairSampler> pairs_;
  CameraModel camera_;
  std::size_t frames_;
  std::uint64_t seed_;
  std::optional<Image> overlay_;
};

/// Renders every frame into a stack of the camera's output type.
FrameStack render_frames(const FrameRenderer& renderer, unsigned workers = 0);

/// Convenience wrapper: scene pairs (if rate > 0), camera and optional classical overlay.
FrameRenderer make_renderer(const Scene& scene, double pairs_per_frame, const CameraModel& camera,
                            std::size_t frames, std::uint64_t seed);

/// Mean photons per pixel of a classical object illuminated at the scene's classical flux.
Image classical_overlay_image(const Scene& scene);

}  // namespace jpdsr
