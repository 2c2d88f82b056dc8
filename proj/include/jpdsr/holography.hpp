#pragma once

#include <array>
#include <cstdint>
#include <vector>

#include "jpdsr/image.hpp"
#include "jpdsr/scene.hpp"

namespace jpdsr {

enum class HolographyProtocol {
  EntangledFarField,  ///< shifts {0, pi/2, pi, 3pi/2}, recovers dtheta
  Noon,               ///< shifts {0, pi/4, pi/2, 3pi/4}, recovers 2 dtheta
  Classical,          ///< shifts {0, pi/2, pi, 3pi/2}, recovers dtheta
};

std::array<double, 4> protocol_shifts(HolographyProtocol protocol);

/// Four images taken at the listed SLM phases, all on the same grid.
struct PhaseSeries {
  std::vector<double> shifts;
  std::vector<Image> images;
};

/// Wrapped phase with a per-pixel validity flag (0 where all four images vanish).
struct PhaseImage {
  Image phase;
  std::vector<std::uint8_t> defined;

  bool is_defined(int x, int y) const { return defined[phase.dims().index({x, y})] != 0; }
};

/// Maps onto (-pi, pi].
double wrap_phase(double phase);

PhaseImage reconstruct_phase_four_step(const PhaseSeries& series, HolographyProtocol protocol);

/// Half of a wrapped N00N phase. Only defined modulo pi.
Image half_phase(const PhaseImage& doubled);

enum class CurveKind { Noon, Classical };

struct PhaseCurve {
  std::vector<double> alphas;
  std::vector<double> values;
};

/// Sweeps a uniform SLM phase over [0, 2 pi) in n_points steps. Noon records the
/// centre of the minus projection of the analytic near-field JPD, Classical the mean
/// classical intensity.
PhaseCurve double_phase_curve(const Scene& scene, int n_points, CurveKind kind);

/// Period (radians of alpha) of the single sinusoid that best fits the curve.
double fit_sinusoid_period(const PhaseCurve& curve);

}  // namespace jpdsr
