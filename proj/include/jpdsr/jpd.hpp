#pragma once

#include <cstddef>
#include <cstdint>
#include <filesystem>
#include <optional>
#include <span>
#include <vector>

#include "jpdsr/image.hpp"

namespace jpdsr {

enum class Geometry {
  NearField,  ///< pairs position-correlated, r1 ~ r2
  FarField,   ///< pairs anti-correlated about a centre, r1 + r2 ~ c
};

enum class EntryState : std::uint8_t {
  OutOfSensor = 0,  ///< partner pixel falls outside the sensor
  Valid = 1,
  Pending = 2,      ///< not measurable by the camera; must be interpolated or excluded
  Excluded = 3,     ///< dropped from all sums
};

/// Position of one stored JPD entry: plane offset plus the first pixel.
struct JpdLocation {
  Pixel offset;
  Pixel pixel;
};

/// Banded joint probability distribution Gamma(r1, r2).
///
/// Near field stores displacement planes Gamma_d(r) = Gamma(r, r + d); far field
/// stores anti-displacement planes Gamma_u(r) = Gamma(r, c - r + u), where c is
/// the integer sum coordinate the pairs are anti-correlated about. Offsets span
/// |d|_inf <= band_radius. Planes can be removed (filtering), after which they
/// read as zero and are skipped by every sum.
class Jpd {
public:
  Jpd(Geometry geometry, Dims dims, int band_radius, std::optional<Pixel> center = std::nullopt);

  Geometry geometry() const { return geometry_; }
  Dims dims() const { return dims_; }
  int band_radius() const { return band_; }
  Pixel center() const { return center_; }

  int plane_count() const { return side() * side(); }
  int side() const { return 2 * band_ + 1; }
  bool in_band(Pixel offset) const;
  int plane_index(Pixel offset) const;
  Pixel plane_offset(int index) const;

  /// Second pixel of the entry stored at `pixel` in plane `offset`.
  Pixel partner(Pixel offset, Pixel pixel) const {
    return geometry_ == Geometry::NearField ? pixel + offset : center_ - pixel + offset;
  }
  /// Storage location of Gamma(r1, r2), if that pair lies inside the band.
  std::optional<JpdLocation> locate(Pixel r1, Pixel r2) const;

  bool present(Pixel offset) const { return planes_[plane_index(offset)].present; }
  std::span<const double> plane(Pixel offset) const { return planes_[plane_index(offset)].values; }
  std::span<double> plane(Pixel offset) { return planes_[plane_index(offset)].values; }
  std::span<const EntryState> states(Pixel offset) const { return planes_[plane_index(offset)].states; }
  std::span<EntryState> states(Pixel offset) { return planes_[plane_index(offset)].states; }

  double value(Pixel offset, Pixel pixel) const { return plane(offset)[dims_.index(pixel)]; }
  double& value(Pixel offset, Pixel pixel) { return plane(offset)[dims_.index(pixel)]; }
  EntryState state(Pixel offset, Pixel pixel) const { return states(offset)[dims_.index(pixel)]; }

  /// Value of Gamma(r1, r2) or nullopt if the pair is outside the band or sensor.
  std::optional<double> at(Pixel r1, Pixel r2) const;

  /// Drops a plane: its values become zero and sums skip it.
  void remove_plane(Pixel offset);

  std::vector<Pixel> present_offsets() const;
  bool has_pending() const;
  std::size_t valid_count(Pixel offset) const;
  /// Sum of valid entries of a plane (zero for removed planes).
  double plane_mass(Pixel offset) const;
  double plane_mean(Pixel offset) const;
  double total_mass() const;

private:
  struct Plane {
    std::vector<double> values;
    std::vector<EntryState> states;
    bool present = true;
  };

  Geometry geometry_;
  Dims dims_;
  int band_;
  Pixel center_{};
  std::vector<Plane> planes_;
};

/// Snapshot file: fixed header, plane index table, then per plane the f64 values
/// followed by one state byte per entry.
void write_jpd_snapshot(const Jpd& jpd, const std::filesystem::path& path);
Jpd read_jpd_snapshot(const std::filesystem::path& path);

}  // namespace jpdsr
