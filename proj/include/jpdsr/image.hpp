#pragma once

#include <cstddef>
#include <span>
#include <vector>

namespace jpdsr {

/// Integer pixel coordinate; x is the column, y the row.
struct Pixel {
  int x = 0;
  int y = 0;

  friend bool operator==(const Pixel&, const Pixel&) = default;
  Pixel operator+(Pixel o) const { return {x + o.x, y + o.y}; }
  Pixel operator-(Pixel o) const { return {x - o.x, y - o.y}; }
};

struct Dims {
  int width = 0;
  int height = 0;

  friend bool operator==(const Dims&, const Dims&) = default;
  std::size_t area() const { return static_cast<std::size_t>(width) * static_cast<std::size_t>(height); }
  bool contains(Pixel p) const { return p.x >= 0 && p.y >= 0 && p.x < width && p.y < height; }
  std::size_t index(Pixel p) const {
    return static_cast<std::size_t>(p.y) * static_cast<std::size_t>(width) + static_cast<std::size_t>(p.x);
  }
};

/// Row-major 2D array of doubles.
class Image {
public:
  Image() = default;
  Image(int width, int height, double fill = 0.0);
  explicit Image(Dims dims, double fill = 0.0) : Image(dims.width, dims.height, fill) {}

  int width() const { return dims_.width; }
  int height() const { return dims_.height; }
  Dims dims() const { return dims_; }
  bool empty() const { return values_.empty(); }

  double& operator()(int x, int y) { return values_[dims_.index({x, y})]; }
  double operator()(int x, int y) const { return values_[dims_.index({x, y})]; }

  std::span<double> values() { return values_; }
  std::span<const double> values() const { return values_; }

  double sum() const;
  double mean() const;
  double max() const;
  double min() const;

private:
  Dims dims_{};
  std::vector<double> values_;
};

/// Which coordinate a projection image is laid out in.
enum class ProjectionGrid {
  Sum,         ///< index i holds r1 + r2 = i, physical position i / 2
  Difference,  ///< index i holds r2 - r1 = i - (M - 1), physical position (i - (M - 1)) / 2
};

/// Image sampled on the half-pitch grid produced by a JPD projection:
/// (2 * height - 1) rows by (2 * width - 1) columns for a width x height sensor.
struct Image2x {
  Image values;
  ProjectionGrid grid = ProjectionGrid::Sum;
  Dims sensor{};

  static Image2x zeros(Dims sensor, ProjectionGrid grid);

  /// Physical coordinate of a sample in native pixel units.
  double position_x(int i) const;
  double position_y(int j) const;

  /// Sample index for a sum coordinate (Sum grid) or displacement (Difference grid).
  int column_of(int coordinate) const;
  int row_of(int coordinate) const;

  double at(Pixel coordinate) const;
};

}  // namespace jpdsr
