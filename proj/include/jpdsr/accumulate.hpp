#pragma once

#include <cstddef>
#include <optional>
#include <span>
#include <vector>

#include "jpdsr/frames.hpp"
#include "jpdsr/jpd.hpp"

namespace jpdsr {

/// Which pixel pairs the detector cannot measure in the estimator.
enum class UnmeasurableModel {
  None,           ///< every pair is trusted
  SamePixel,      ///< r1 == r2 (the singles term biases Gamma(r, r))
  SameColumn,     ///< r1.x == r2.x, EMCCD charge smearing along the readout column
  SpadNeighbors,  ///< |r2 - r1|_inf <= 1, SPAD crosstalk
};

bool is_unmeasurable(UnmeasurableModel model, Pixel r1, Pixel r2);

struct AccumulateOptions {
  Geometry geometry = Geometry::NearField;
  int band_radius = 3;
  std::optional<Pixel> center;  // sum coordinate r1 + r2; required for far field
  UnmeasurableModel unmeasurable = UnmeasurableModel::None;
  unsigned workers = 0;         // 0 picks the hardware concurrency
  std::size_t chunk_pairs = 4096;
};

/// Raw per-entry sums over a run of consecutive frame pairs.
///
/// Sums are plain totals, so partials over disjoint runs merge by addition.
class JpdPartial {
public:
  JpdPartial(Geometry geometry, Dims dims, int band_radius, Pixel center);

  /// Adds the term I_l(r1) I_l(r2) - I_l(r1) I_{l+1}(r2) for every banded entry.
  void add_pair(std::span<const double> current, std::span<const double> next);
  void merge(const JpdPartial& other);

  std::size_t pairs() const { return pairs_; }
  const std::vector<double>& intensity_sum() const { return intensity_; }
  std::span<const double> plane_sum(int plane) const;

  Geometry geometry() const { return geometry_; }
  Dims dims() const { return dims_; }
  int band_radius() const { return band_; }
  Pixel center() const { return center_; }

private:
  Geometry geometry_;
  Dims dims_;
  int band_;
  Pixel center_;
  std::size_t pairs_ = 0;
  std::vector<double> sums_;       // plane-major
  std::vector<int> partner_;       // plane-major partner index, -1 off sensor
  std::vector<double> intensity_;
  std::vector<std::size_t> nonzero_;
};

/// Divides by the pair count, symmetrizes and flags unmeasurable entries as pending.
Jpd finalize_partial(const JpdPartial& partial, UnmeasurableModel unmeasurable);

struct JpdEstimate {
  Jpd jpd;
  Image intensity;  ///< mean of frames 1..N
  std::size_t frame_pairs = 0;
};

/// Streaming estimator over consecutive frame pairs, parallel over frame chunks.
JpdEstimate estimate_jpd(const FrameSource& frames, const AccumulateOptions& options);
Jpd accumulate_jpd(const FrameSource& frames, const AccumulateOptions& options);

/// Default sum coordinate for far-field data: the sensor centre, (W - 1, H - 1).
Pixel default_center(Dims dims);

}  // namespace jpdsr
