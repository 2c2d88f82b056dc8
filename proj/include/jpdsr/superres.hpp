#pragma once

#include <optional>
#include <string>
#include <vector>

#include "jpdsr/accumulate.hpp"
#include "jpdsr/frames.hpp"
#include "jpdsr/image.hpp"
#include "jpdsr/jpd.hpp"

namespace jpdsr {

/// Replaces every pending entry by the mean of the same pixel in the planes
/// offset by -e_x and +e_x. Falls back to the single available neighbour at the
/// band or sensor edge.
Jpd interpolate_invalid(const Jpd& jpd);

/// Marks pending entries excluded instead of estimating them.
Jpd exclude_pending(const Jpd& jpd);

/// Removes every plane whose selector value is below threshold * max. The selector
/// is the minus projection for near field and the sum projection for far field.
Jpd filter_jpd(const Jpd& jpd, double threshold);

/// Divides every present plane by its mean over valid entries.
Jpd normalize_jpd(const Jpd& jpd);

/// projection / support where support > 0, zero elsewhere.
Image2x support_average(const Image2x& projection, const Image2x& support);

enum class PendingPolicy { Interpolate, Exclude };

struct PipelineConfig {
  Geometry geometry = Geometry::NearField;
  int band_radius = 3;
  double threshold = 0.5;
  std::optional<Pixel> center;
  UnmeasurableModel unmeasurable = UnmeasurableModel::SamePixel;
  PendingPolicy pending = PendingPolicy::Interpolate;
  /// Per-plane normalization plus averaging over the entries feeding each sample.
  /// When false the plain projection of the filtered JPD is returned.
  bool normalize = true;
  unsigned workers = 0;
  std::size_t chunk_pairs = 4096;
};

struct StageTiming {
  std::string stage;
  double seconds = 0.0;
};

struct PipelineResult {
  Image2x image;             ///< super-resolved image (sum grid near field, difference grid far field)
  Jpd estimate;              ///< finalized estimator output, pending entries unresolved
  Jpd processed;             ///< after pending resolution, filtering and normalization
  Image intensity;           ///< mean frame
  std::vector<Pixel> surviving;
  std::vector<StageTiming> timings;
};

/// Runs the pipeline on an already estimated JPD.
PipelineResult super_resolve_jpd(const Jpd& estimate, const PipelineConfig& config);

PipelineResult run_super_resolution(const FrameSource& frames, const PipelineConfig& config);
Image2x super_resolve(const FrameSource& frames, const PipelineConfig& config);

}  // namespace jpdsr
