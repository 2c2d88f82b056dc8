#include "jpdsr/scene.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>

#include "jpdsr/accumulate.hpp"
#include "jpdsr/error.hpp"

namespace jpdsr {

void Scene::validate() const {
  require(sensor.width > 0 && sensor.height > 0, ErrorKind::Config, "sensor dimensions must be positive");
  require(subgrid >= 2, ErrorKind::Resolution, "sub-grid must be at least 2 cells per pixel");
  require(std::isfinite(correlation_width) && correlation_width >= 0.0, ErrorKind::Config,
          "correlation width must be finite and non-negative");
  require(fringe_contrast > 0.0 && fringe_contrast <= 1.0, ErrorKind::Config, "fringe contrast must lie in (0, 1]");
  require(std::isfinite(classical_flux) && classical_flux >= 0.0, ErrorKind::Config,
          "classical flux must be non-negative");
}

double Scene::t(double x, double y) const { return amplitude ? amplitude(x, y) : 1.0; }

double Scene::delta_theta(double x, double y) const {
  return (theta_h ? theta_h(x, y) : 0.0) - (theta_v ? theta_v(x, y) : 0.0);
}

double Scene::alpha(double x, double y) const { return slm_phase ? slm_phase(x, y) : 0.0; }

Pixel Scene::pair_center() const { return center.value_or(default_center(sensor)); }

double Scene::fringe(Point p1, Point p2) const {
  if (!holography) return 1.0;
  const double phi = delta_theta(p1.x, p1.y) - alpha(p1.x, p1.y) + delta_theta(p2.x, p2.y) - alpha(p2.x, p2.y);
  const double v = fringe_contrast;
  const double f = 1.0 + v * std::cos(phi);
  return f * f / ((1.0 + v) * (1.0 + v));
}

namespace objects {

Field constant(double value) {
  return [value](double, double) { return value; };
}

Field square_grating(double period, double duty, double offset, double low, double high) {
  require(period > 0.0, ErrorKind::Config, "grating period must be positive");
  require(duty > 0.0 && duty < 1.0, ErrorKind::Config, "grating duty must lie in (0, 1)");
  return [=](double, double y) {
    const double phase = (y - offset) / period;
    return phase - std::floor(phase) < duty ? high : low;
  };
}

Field bandlimited_grating(double period, double duty, double cutoff, double offset, double low, double high) {
  require(period > 0.0, ErrorKind::Config, "grating period must be positive");
  require(duty > 0.0 && duty < 1.0, ErrorKind::Config, "grating duty must lie in (0, 1)");
  std::vector<double> coefficients;
  for (int n = 1; n / period <= cutoff + 1e-12; ++n)
    coefficients.push_back(2.0 / (n * std::numbers::pi) * std::sin(n * std::numbers::pi * duty));
  const double centre = offset + 0.5 * duty * period;
  auto ripple = [coefficients](double phase) {
    double f = 0.0;
    for (std::size_t k = 0; k < coefficients.size(); ++k)
      f += coefficients[k] * std::cos(static_cast<double>(k + 1) * phase);
    return f;
  };
  // Shrink the ripple if the truncated series overshoots [0, 1]; clamping would
  // reintroduce the harmonics the cutoff removed.
  double lo = 0.0, hi = 0.0;
  for (int i = 0; i < 4096; ++i) {
    const double f = ripple(2.0 * std::numbers::pi * i / 4096.0);
    lo = std::min(lo, f);
    hi = std::max(hi, f);
  }
  double scale = 1.0;
  if (duty + lo < 0.0) scale = std::min(scale, duty / -lo);
  if (duty + hi > 1.0) scale = std::min(scale, (1.0 - duty) / hi);
  return [=](double, double y) {
    const double f = duty + scale * ripple(2.0 * std::numbers::pi * (y - centre) / period);
    return std::clamp(low + (high - low) * f, 0.0, 1.0);
  };
}

Field cosine_grating(double period, double mean, double depth, double offset) {
  require(period > 0.0, ErrorKind::Config, "grating period must be positive");
  return [=](double, double y) { return mean + depth * std::cos(2.0 * std::numbers::pi * (y - offset) / period); };
}

Field checkerboard(Dims sensor, int cells, std::vector<double> values) {
  require(cells > 0, ErrorKind::Config, "checkerboard needs at least one cell");
  require(values.size() == static_cast<std::size_t>(cells * cells), ErrorKind::Config,
          "checkerboard needs cells * cells values");
  return [=](double x, double y) {
    const int i = std::clamp(static_cast<int>(std::floor((x + 0.5) * cells / sensor.width)), 0, cells - 1);
    const int j = std::clamp(static_cast<int>(std::floor((y + 0.5) * cells / sensor.height)), 0, cells - 1);
    return values[static_cast<std::size_t>(j * cells + i)];
  };
}

Field half_plane(Field inner, double split_x) {
  return [inner = std::move(inner), split_x](double x, double y) { return x < split_x ? inner(x, y) : 1.0; };
}

namespace {

bool in_triangle(double px, double py, double ax, double ay, double bx, double by, double cx, double cy) {
  const double d1 = (px - bx) * (ay - by) - (ax - bx) * (py - by);
  const double d2 = (px - cx) * (by - cy) - (bx - cx) * (py - cy);
  const double d3 = (px - ax) * (cy - ay) - (cx - ax) * (py - ay);
  const bool neg = d1 < 0 || d2 < 0 || d3 < 0;
  const bool pos = d1 > 0 || d2 > 0 || d3 > 0;
  return !(neg && pos);
}

double segment_distance(double px, double py, double ax, double ay, double bx, double by) {
  const double vx = bx - ax, vy = by - ay;
  const double s = std::clamp(((px - ax) * vx + (py - ay) * vy) / (vx * vx + vy * vy), 0.0, 1.0);
  return std::hypot(px - ax - s * vx, py - ay - s * vy);
}

}  // namespace

Field cat_silhouette(double cx, double cy, double size) {
  require(size > 0.0, ErrorKind::Config, "silhouette size must be positive");
  return [=](double x, double y) {
    const double u = (x - cx) / size;
    const double v = (y - cy) / size;
    const bool head = std::hypot(u, v + 0.22) < 0.2;
    const bool ears = in_triangle(u, v, -0.19, -0.28, -0.05, -0.38, -0.17, -0.5) ||
                      in_triangle(u, v, 0.19, -0.28, 0.05, -0.38, 0.17, -0.5);
    const double bu = u / 0.2, bv = (v - 0.18) / 0.28;
    const bool body = bu * bu + bv * bv < 1.0;
    const bool tail = segment_distance(u, v, 0.15, 0.4, 0.38, 0.02) < 0.05;
    return head || ears || body || tail ? 1.0 : 0.0;
  };
}

Field raster(Image image) {
  require(!image.empty(), ErrorKind::Config, "raster object needs a non-empty image");
  return [image = std::move(image)](double x, double y) {
    const int i = std::clamp(static_cast<int>(std::floor(x + 0.5)), 0, image.width() - 1);
    const int j = std::clamp(static_cast<int>(std::floor(y + 0.5)), 0, image.height() - 1);
    return image(i, j);
  };
}

}  // namespace objects
}  // namespace jpdsr
