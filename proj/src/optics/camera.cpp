#include "jpdsr/camera.hpp"

#include <cmath>

#include "jpdsr/error.hpp"

namespace jpdsr {
namespace {

bool is_probability(double p) { return p >= 0.0 && p <= 1.0; }
bool non_negative(double v) { return std::isfinite(v) && v >= 0.0; }

}  // namespace

void CameraModel::validate() const {
  require(is_probability(quantum_efficiency), ErrorKind::Config, "quantum efficiency must lie in [0, 1]");
  require(is_probability(fill_factor), ErrorKind::Config, "fill factor must lie in [0, 1]");
  require(is_probability(crosstalk_prob), ErrorKind::Config, "crosstalk probability must lie in [0, 1]");
  require(smearing_coeff >= 0.0 && smearing_coeff < 1.0, ErrorKind::Config, "smearing coefficient must lie in [0, 1)");
  require(smearing_decay >= 0.0 && smearing_decay < 1.0, ErrorKind::Config, "smearing decay must lie in [0, 1)");
  require(non_negative(gain_mean) && non_negative(gain_sigma), ErrorKind::Config, "gain parameters must be non-negative");
  require(non_negative(baseline) && non_negative(read_noise_sigma) && non_negative(dark_rate), ErrorKind::Config,
          "baseline, read noise and dark rate must be non-negative");
  require(pixel_pitch_um > 0.0, ErrorKind::Config, "pixel pitch must be positive");
}

PixelType CameraModel::output_type() const { return kind == CameraKind::Spad ? PixelType::U1 : PixelType::U16; }

UnmeasurableModel CameraModel::unmeasurable() const {
  switch (kind) {
    case CameraKind::Ideal: return UnmeasurableModel::SamePixel;
    case CameraKind::Emccd: return UnmeasurableModel::SameColumn;
    case CameraKind::Spad: return UnmeasurableModel::SpadNeighbors;
  }
  return UnmeasurableModel::SamePixel;
}

}  // namespace jpdsr
