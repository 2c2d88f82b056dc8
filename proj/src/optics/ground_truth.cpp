#include "jpdsr/ground_truth.hpp"

#include <algorithm>
#include <cmath>

#include "jpdsr/error.hpp"

namespace jpdsr {
namespace {

constexpr int kQuadrature = 16;

struct AxisTerm {
  int cell;
  double probability;
};

/// Per-axis probability that a pair anchored uniformly in sub-cell k lands in
/// pixels (i1, i2), with the Gaussian offset integrated analytically.
class AxisTable {
public:
  AxisTable(Geometry geometry, int pixels, int subgrid, int band, int center, double sigma)
      : pixels_(pixels), band_(band), terms_(static_cast<std::size_t>(pixels) * (2 * band + 1)) {
    const double h = 1.0 / subgrid;
    const double reach = band + 1.5 + 8.0 * sigma;
    for (int i1 = 0; i1 < pixels; ++i1) {
      for (int o = -band; o <= band; ++o) {
        const int i2 = geometry == Geometry::NearField ? i1 + o : center - i1 + o;
        if (i2 < 0 || i2 >= pixels) continue;
        auto& list = terms_[slot(i1, o)];
        for (int k = 0; k < pixels * subgrid; ++k) {
          const double lo_cell = -0.5 + k * h;
          if (std::abs(lo_cell + 0.5 * h - i1) > reach) continue;
          double sum = 0.0;
          for (int q = 0; q < kQuadrature; ++q) {
            const double m = lo_cell + (q + 0.5) * h / kQuadrature;
            double lo, hi;
            if (geometry == Geometry::NearField) {
              // x1 = m - xi/2, x2 = m + xi/2
              lo = std::max(2.0 * (m - i1 - 0.5), 2.0 * (i2 - 0.5 - m));
              hi = std::min(2.0 * (m - i1 + 0.5), 2.0 * (i2 + 0.5 - m));
            } else {
              // x1 = m + xi/2, x2 = c - m + xi/2
              lo = std::max(2.0 * (i1 - 0.5 - m), 2.0 * (i2 - 0.5 - center + m));
              hi = std::min(2.0 * (i1 + 0.5 - m), 2.0 * (i2 + 0.5 - center + m));
            }
            sum += offset_probability(lo, hi, sigma);
          }
          if (sum > 0.0) list.push_back({k, sum / kQuadrature});
        }
      }
    }
  }

  const std::vector<AxisTerm>& terms(int i1, int o) const { return terms_[slot(i1, o)]; }

private:
  static double offset_probability(double lo, double hi, double sigma) {
    if (hi <= lo) return 0.0;
    if (sigma == 0.0) return lo <= 0.0 && 0.0 < hi ? 1.0 : 0.0;
    const double s = sigma * std::sqrt(2.0);
    return 0.5 * (std::erf(hi / s) - std::erf(lo / s));
  }
  std::size_t slot(int i1, int o) const { return static_cast<std::size_t>(i1) * (2 * band_ + 1) + (o + band_); }

  int pixels_;
  int band_;
  std::vector<std::vector<AxisTerm>> terms_;
};

Jpd symmetrized(const Jpd& raw) {
  Jpd out = raw;
  const Dims dims = raw.dims();
  for (int p = 0; p < raw.plane_count(); ++p) {
    const Pixel o = raw.plane_offset(p);
    auto values = out.plane(o);
    const auto states = raw.states(o);
    for (int y = 0; y < dims.height; ++y) {
      for (int x = 0; x < dims.width; ++x) {
        const Pixel r{x, y};
        const std::size_t i = dims.index(r);
        if (states[i] == EntryState::OutOfSensor) continue;
        const JpdLocation t = *raw.locate(raw.partner(o, r), r);
        values[i] = 0.5 * (raw.plane(o)[i] + raw.value(t.offset, t.pixel));
      }
    }
  }
  return out;
}

double pow4(double a) { return a * a * a * a; }

}  // namespace

Jpd ground_truth_jpd(const Scene& scene, int band_radius) {
  scene.validate();
  require(band_radius >= 1, ErrorKind::Config, "band radius must be at least 1");
  const Dims dims = scene.sensor;
  const int s = scene.subgrid;
  const Pixel c = scene.pair_center();
  const bool near = scene.geometry == Geometry::NearField;

  const int cells_x = dims.width * s, cells_y = dims.height * s;
  std::vector<double> weight(static_cast<std::size_t>(cells_x) * cells_y);
  double total = 0.0;
  for (int j = 0; j < cells_y; ++j) {
    for (int i = 0; i < cells_x; ++i) {
      const Point m{scene.cell_center(i), scene.cell_center(j)};
      const double a = scene.t(m.x, m.y);
      require(a >= 0.0 && a <= 1.0, ErrorKind::Config, "object amplitude must lie in [0, 1]");
      double w;
      Point partner = m;
      if (near) {
        w = pow4(a);
      } else {
        partner = {c.x - m.x, c.y - m.y};
        const double b = scene.t(partner.x, partner.y);
        w = a * a * b * b;
      }
      total += w;
      weight[static_cast<std::size_t>(j) * cells_x + i] = w * scene.fringe(m, partner);
    }
  }
  require(total > 0.0, ErrorKind::DegenerateDensity, "object has zero transmission");

  const Geometry g = scene.geometry;
  const AxisTable ax(g, dims.width, s, band_radius, c.x, scene.correlation_width);
  const AxisTable ay(g, dims.height, s, band_radius, c.y, scene.correlation_width);

  Jpd raw(g, dims, band_radius, near ? std::nullopt : std::optional<Pixel>(c));
  for (int p = 0; p < raw.plane_count(); ++p) {
    const Pixel o = raw.plane_offset(p);
    auto values = raw.plane(o);
    const auto states = raw.states(o);
    for (int y = 0; y < dims.height; ++y) {
      const auto& ty = ay.terms(y, o.y);
      for (int x = 0; x < dims.width; ++x) {
        const std::size_t idx = dims.index({x, y});
        if (states[idx] == EntryState::OutOfSensor) continue;
        const auto& tx = ax.terms(x, o.x);
        double sum = 0.0;
        for (const AxisTerm& v : ty) {
          const double* row = weight.data() + static_cast<std::size_t>(v.cell) * cells_x;
          double inner = 0.0;
          for (const AxisTerm& u : tx) inner += row[u.cell] * u.probability;
          sum += inner * v.probability;
        }
        values[idx] = sum / total;
      }
    }
  }
  return symmetrized(raw);
}

Jpd analytic_delta_jpd(const Scene& scene, int band_radius) {
  scene.validate();
  require(band_radius >= 1, ErrorKind::Config, "band radius must be at least 1");
  const Dims dims = scene.sensor;
  const Pixel c = scene.pair_center();
  const bool near = scene.geometry == Geometry::NearField;
  Jpd jpd(scene.geometry, dims, band_radius, near ? std::nullopt : std::optional<Pixel>(c));

  for (int oy = -1; oy <= 1; ++oy) {
    for (int ox = -1; ox <= 1; ++ox) {
      const Pixel o{ox, oy};
      const double w = (ox == 0 ? 1.0 : 0.5) * (oy == 0 ? 1.0 : 0.5);
      auto values = jpd.plane(o);
      const auto states = jpd.states(o);
      for (int y = 0; y < dims.height; ++y) {
        for (int x = 0; x < dims.width; ++x) {
          const std::size_t i = dims.index({x, y});
          if (states[i] == EntryState::OutOfSensor) continue;
          const Pixel r2 = jpd.partner(o, {x, y});
          if (near) {
            const Point m{0.5 * (x + r2.x), 0.5 * (y + r2.y)};
            values[i] = w * pow4(scene.t(m.x, m.y)) * scene.fringe(m, m);
          } else {
            const Point p1{0.5 * (c.x - (r2.x - x)), 0.5 * (c.y - (r2.y - y))};
            const Point p2{c.x - p1.x, c.y - p1.y};
            const double a = scene.t(p1.x, p1.y), b = scene.t(p2.x, p2.y);
            values[i] = w * a * a * b * b * scene.fringe(p1, p2);
          }
        }
      }
    }
  }
  return jpd;
}

Image classical_image(const Scene& scene, Sampling sampling) {
  scene.validate();
  auto intensity = [&](double x, double y) {
    const double a = scene.t(x, y);
    double v = a * a;
    if (scene.holography)
      v *= 0.5 * (1.0 + scene.fringe_contrast * std::cos(scene.delta_theta(x, y) - scene.alpha(x, y)));
    return v;
  };
  Image out(scene.sensor);
  const int s = scene.subgrid;
  for (int y = 0; y < scene.sensor.height; ++y) {
    for (int x = 0; x < scene.sensor.width; ++x) {
      if (sampling == Sampling::PixelCenter) {
        out(x, y) = intensity(x, y);
        continue;
      }
      double sum = 0.0;
      for (int j = 0; j < s; ++j)
        for (int i = 0; i < s; ++i) sum += intensity(x - 0.5 + (i + 0.5) / s, y - 0.5 + (j + 0.5) / s);
      out(x, y) = sum / (s * s);
    }
  }
  return out;
}

Image diagonal_reference(const Scene& scene) {
  Image out(scene.sensor);
  for (int y = 0; y < scene.sensor.height; ++y)
    for (int x = 0; x < scene.sensor.width; ++x) out(x, y) = pow4(scene.t(x, y));
  return out;
}

}  // namespace jpdsr
