#include "jpdsr/projection.hpp"

#include "jpdsr/error.hpp"

namespace jpdsr {
namespace {

enum class Coordinate { Sum, Difference };

template <typename Accumulate>
Image2x project(const Jpd& jpd, Coordinate coordinate, Accumulate&& accumulate) {
  require(!jpd.has_pending(), ErrorKind::State, "JPD has pending entries; interpolate or exclude them first");
  const Dims dims = jpd.dims();
  Image2x out = Image2x::zeros(dims, coordinate == Coordinate::Sum ? ProjectionGrid::Sum : ProjectionGrid::Difference);
  for (const Pixel o : jpd.present_offsets()) {
    const auto values = jpd.plane(o);
    const auto states = jpd.states(o);
    for (int y = 0; y < dims.height; ++y) {
      for (int x = 0; x < dims.width; ++x) {
        const std::size_t i = dims.index({x, y});
        if (states[i] != EntryState::Valid) continue;
        const Pixel r1{x, y};
        const Pixel r2 = jpd.partner(o, r1);
        const Pixel c = coordinate == Coordinate::Sum ? r1 + r2 : r2 - r1;
        accumulate(out.values(out.column_of(c.x), out.row_of(c.y)), values[i]);
      }
    }
  }
  return out;
}

}  // namespace

Image2x sum_projection(const Jpd& jpd) {
  return project(jpd, Coordinate::Sum, [](double& acc, double v) { acc += v; });
}

Image2x minus_projection(const Jpd& jpd) {
  return project(jpd, Coordinate::Difference, [](double& acc, double v) { acc += v; });
}

Image2x sum_support(const Jpd& jpd) {
  return project(jpd, Coordinate::Sum, [](double& acc, double) { acc += 1.0; });
}

Image2x minus_support(const Jpd& jpd) {
  return project(jpd, Coordinate::Difference, [](double& acc, double) { acc += 1.0; });
}

Image extract_diagonal_image(const Jpd& jpd, DiagonalKind kind) {
  const bool near = jpd.geometry() == Geometry::NearField;
  require(near == (kind == DiagonalKind::Diagonal), ErrorKind::Config,
          near ? "anti-diagonal image needs a far-field JPD" : "diagonal image needs a near-field JPD");
  require(!jpd.has_pending(), ErrorKind::State, "JPD has pending entries; interpolate or exclude them first");
  const Pixel zero{0, 0};
  Image out(jpd.dims());
  if (!jpd.present(zero)) return out;
  const auto values = jpd.plane(zero);
  const auto states = jpd.states(zero);
  for (std::size_t i = 0; i < values.size(); ++i)
    out.values()[i] = states[i] == EntryState::Valid ? values[i] : 0.0;
  return out;
}

}  // namespace jpdsr
