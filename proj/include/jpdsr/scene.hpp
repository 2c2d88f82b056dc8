#pragma once

#include <functional>
#include <optional>
#include <vector>

#include "jpdsr/image.hpp"
#include "jpdsr/jpd.hpp"

namespace jpdsr {

/// Continuous coordinate in native pixel units; pixel (i, j) spans [i - 0.5, i + 0.5).
struct Point {
  double x = 0.0;
  double y = 0.0;
};

/// Scalar map over the sensor plane, evaluated at native-pixel coordinates.
using Field = std::function<double(double x, double y)>;

/// Object, illumination and correlation model of one acquisition.
///
/// For holography scenes a pair passing the 45 degree polarizer is kept with
/// probability [1 + v cos(phi(x1) + phi(x2))]^2 / (1 + v)^2, where
/// phi = theta_h - theta_v - alpha.
struct Scene {
  Dims sensor{32, 32};
  Geometry geometry = Geometry::NearField;
  int subgrid = 8;                 ///< sub-cells per native pixel and axis
  double correlation_width = 0.25; ///< sigma of the pair offset, pixels per axis
  Field amplitude;                 ///< |t| in [0, 1]; empty means fully transparent
  Field theta_h;                   ///< radians, empty means 0
  Field theta_v;
  Field slm_phase;                 ///< alpha, radians
  bool holography = false;
  double fringe_contrast = 1.0;    ///< v in (0, 1]
  std::optional<Pixel> center;     ///< far-field sum coordinate, default (W - 1, H - 1)
  Field classical_overlay;         ///< amplitude of an extra classical object, optional
  double classical_flux = 0.0;     ///< overlay photons per pixel per frame at unit amplitude

  void validate() const;

  double t(double x, double y) const;
  double delta_theta(double x, double y) const;
  double alpha(double x, double y) const;
  Pixel pair_center() const;

  /// Polarizer acceptance for a pair at (p1, p2); 1 for non-holography scenes.
  double fringe(Point p1, Point p2) const;

  /// Sub-grid cell centre along one axis.
  double cell_center(int k) const { return -0.5 + (k + 0.5) / subgrid; }
};

namespace objects {

Field constant(double value);

/// Square-wave grating varying along y: `high` for the first `duty` fraction of each period.
Field square_grating(double period, double duty, double offset = 0.0, double low = 0.0, double high = 1.0);

/// Square grating truncated to harmonics at or below `cutoff` cycles/pixel. The ripple is scaled down
/// when the truncated series would leave [0, 1].
Field bandlimited_grating(double period, double duty, double cutoff, double offset = 0.0, double low = 0.0,
                          double high = 1.0);

/// mean + depth * cos(2 pi (y - offset) / period), varying along y.
Field cosine_grating(double period, double mean, double depth, double offset = 0.0);

/// Square cells x cells tiling of the sensor, cell (i, j) taking values[j * cells + i].
Field checkerboard(Dims sensor, int cells, std::vector<double> values);

/// `inner` for x < split, 1 elsewhere.
Field half_plane(Field inner, double split_x);

/// Binary cat silhouette (head, ears, body, tail) centred at (cx, cy), `size` pixels tall.
Field cat_silhouette(double cx, double cy, double size);

/// Nearest-pixel lookup into an image, clamped at the borders.
Field raster(Image image);

}  // namespace objects
}  // namespace jpdsr
