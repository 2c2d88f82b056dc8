#include "jpdsr/holography.hpp"

#include <cmath>
#include <numbers>

#include <Eigen/Dense>

#include "jpdsr/error.hpp"
#include "jpdsr/ground_truth.hpp"
#include "jpdsr/projection.hpp"

namespace jpdsr {

using std::numbers::pi;

std::array<double, 4> protocol_shifts(HolographyProtocol protocol) {
  if (protocol == HolographyProtocol::Noon) return {0.0, pi / 4, pi / 2, 3 * pi / 4};
  return {0.0, pi / 2, pi, 3 * pi / 2};
}

double wrap_phase(double phase) {
  double w = std::remainder(phase, 2 * pi);
  if (w <= -pi) w += 2 * pi;
  return w;
}

PhaseImage reconstruct_phase_four_step(const PhaseSeries& series, HolographyProtocol protocol) {
  require(series.shifts.size() == 4 && series.images.size() == 4, ErrorKind::Protocol,
          "four-step reconstruction needs exactly four shifts and images");
  const auto expected = protocol_shifts(protocol);
  for (int k = 0; k < 4; ++k)
    require(std::abs(wrap_phase(series.shifts[k] - expected[k])) < 1e-9, ErrorKind::Protocol,
            "phase shifts do not match the protocol");
  const Dims dims = series.images[0].dims();
  for (const Image& im : series.images)
    require(im.dims() == dims && !im.empty(), ErrorKind::Shape, "phase-series images differ in size");

  PhaseImage out{Image(dims), std::vector<std::uint8_t>(dims.area(), 1)};
  const auto a = series.images[0].values(), b = series.images[1].values();
  const auto c = series.images[2].values(), d = series.images[3].values();
  auto phase = out.phase.values();
  for (std::size_t i = 0; i < phase.size(); ++i) {
    if (a[i] == 0.0 && b[i] == 0.0 && c[i] == 0.0 && d[i] == 0.0) {
      out.defined[i] = 0;
      phase[i] = 0.0;
      continue;
    }
    // The Noon shift list doubles onto {0, pi/2, pi, 3pi/2}, so all protocols
    // pair the images the same way.
    phase[i] = wrap_phase(std::atan2(b[i] - d[i], a[i] - c[i]));
  }
  return out;
}

Image half_phase(const PhaseImage& doubled) {
  Image out = doubled.phase;
  for (double& v : out.values()) v *= 0.5;
  return out;
}

PhaseCurve double_phase_curve(const Scene& scene, int n_points, CurveKind kind) {
  require(n_points >= 4, ErrorKind::Config, "phase sweep needs at least four points");
  PhaseCurve curve;
  Scene s = scene;
  s.holography = true;
  s.geometry = Geometry::NearField;
  for (int k = 0; k < n_points; ++k) {
    const double alpha = 2 * pi * k / n_points;
    s.slm_phase = objects::constant(alpha);
    double value;
    if (kind == CurveKind::Noon) {
      value = minus_projection(analytic_delta_jpd(s, 1)).at({0, 0});
    } else {
      value = classical_image(s).mean();
    }
    curve.alphas.push_back(alpha);
    curve.values.push_back(value);
  }
  return curve;
}

namespace {

/// Residual of the least-squares fit y ~ a + b cos(f alpha) + c sin(f alpha).
double sinusoid_residual(const PhaseCurve& curve, double f) {
  const auto n = static_cast<Eigen::Index>(curve.alphas.size());
  Eigen::MatrixXd basis(n, 3);
  Eigen::VectorXd y(n);
  for (Eigen::Index k = 0; k < n; ++k) {
    basis(k, 0) = 1.0;
    basis(k, 1) = std::cos(f * curve.alphas[k]);
    basis(k, 2) = std::sin(f * curve.alphas[k]);
    y(k) = curve.values[k];
  }
  const Eigen::VectorXd coef = basis.colPivHouseholderQr().solve(y);
  return (basis * coef - y).squaredNorm();
}

}  // namespace

double fit_sinusoid_period(const PhaseCurve& curve) {
  require(curve.alphas.size() == curve.values.size() && curve.alphas.size() >= 4, ErrorKind::Config,
          "curve needs at least four samples");
  // Coarse scan of angular frequency in cycles per 2 pi, then golden-section refinement.
  double best_f = 0.5, best_r = INFINITY;
  for (double f = 0.5; f <= 6.0; f += 0.01) {
    const double r = sinusoid_residual(curve, f);
    if (r < best_r) {
      best_r = r;
      best_f = f;
    }
  }
  double lo = best_f - 0.01, hi = best_f + 0.01;
  const double g = (std::sqrt(5.0) - 1.0) / 2.0;
  for (int it = 0; it < 80; ++it) {
    const double a = hi - g * (hi - lo), b = lo + g * (hi - lo);
    if (sinusoid_residual(curve, a) < sinusoid_residual(curve, b))
      hi = b;
    else
      lo = a;
  }
  return 2 * pi / (0.5 * (lo + hi));
}

}  // namespace jpdsr
