#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>

#include "jpdsr/camera.hpp"
#include "jpdsr/config.hpp"
#include "jpdsr/scene.hpp"

namespace jpdsr {

/// Everything `simulate` needs to produce a frame stack.
struct Experiment {
  Scene scene;
  CameraModel camera;
  double pairs_per_frame = 0.0;
  std::size_t frames = 0;
  std::uint64_t seed = 0;
};

struct ExperimentOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> slm_phase;  ///< radians, replaces [phase] slm_phase
};

/// Builds an experiment from a config; unknown keys are rejected.
Experiment experiment_from_config(const Config& config, const ExperimentOverrides& overrides = {});

}  // namespace jpdsr
