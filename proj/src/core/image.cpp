#include "jpdsr/image.hpp"

#include <algorithm>
#include <numeric>

#include "jpdsr/error.hpp"

namespace jpdsr {

std::string_view to_string(ErrorKind kind) noexcept {
  switch (kind) {
    case ErrorKind::Shape: return "shape";
    case ErrorKind::InsufficientData: return "insufficient-data";
    case ErrorKind::Config: return "config";
    case ErrorKind::State: return "state";
    case ErrorKind::Io: return "io";
    case ErrorKind::Format: return "format";
    case ErrorKind::Resolution: return "resolution";
    case ErrorKind::DegenerateDensity: return "degenerate-density";
    case ErrorKind::EmptyFilter: return "empty-filter";
    case ErrorKind::DegeneratePlane: return "degenerate-plane";
    case ErrorKind::Interpolation: return "interpolation";
    case ErrorKind::Protocol: return "protocol";
    case ErrorKind::SizeGuard: return "size-guard";
  }
  return "unknown";
}

Image::Image(int width, int height, double fill) : dims_{width, height} {
  require(width >= 0 && height >= 0, ErrorKind::Shape, "negative image dimensions");
  values_.assign(dims_.area(), fill);
}

double Image::sum() const { return std::accumulate(values_.begin(), values_.end(), 0.0); }

double Image::mean() const {
  require(!values_.empty(), ErrorKind::Shape, "mean of empty image");
  return sum() / static_cast<double>(values_.size());
}

double Image::max() const {
  require(!values_.empty(), ErrorKind::Shape, "max of empty image");
  return *std::max_element(values_.begin(), values_.end());
}

double Image::min() const {
  require(!values_.empty(), ErrorKind::Shape, "min of empty image");
  return *std::min_element(values_.begin(), values_.end());
}

Image2x Image2x::zeros(Dims sensor, ProjectionGrid grid) {
  require(sensor.width > 0 && sensor.height > 0, ErrorKind::Shape, "empty sensor");
  return Image2x{Image(2 * sensor.width - 1, 2 * sensor.height - 1), grid, sensor};
}

double Image2x::position_x(int i) const {
  return grid == ProjectionGrid::Sum ? 0.5 * i : 0.5 * (i - (sensor.width - 1));
}

double Image2x::position_y(int j) const {
  return grid == ProjectionGrid::Sum ? 0.5 * j : 0.5 * (j - (sensor.height - 1));
}

int Image2x::column_of(int coordinate) const {
  return grid == ProjectionGrid::Sum ? coordinate : coordinate + sensor.width - 1;
}

int Image2x::row_of(int coordinate) const {
  return grid == ProjectionGrid::Sum ? coordinate : coordinate + sensor.height - 1;
}

double Image2x::at(Pixel coordinate) const {
  const int i = column_of(coordinate.x);
  const int j = row_of(coordinate.y);
  require(values.dims().contains({i, j}), ErrorKind::Shape, "coordinate outside projection grid");
  return values(i, j);
}

}  // namespace jpdsr
