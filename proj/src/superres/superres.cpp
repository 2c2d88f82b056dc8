#include "jpdsr/superres.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>

#include "jpdsr/error.hpp"
#include "jpdsr/projection.hpp"

namespace jpdsr {

Jpd interpolate_invalid(const Jpd& jpd) {
  Jpd out = jpd;
  const Dims dims = jpd.dims();
  for (const Pixel o : jpd.present_offsets()) {
    const auto states = jpd.states(o);
    auto values = out.plane(o);
    auto out_states = out.states(o);
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (states[i] != EntryState::Pending) continue;
      double sum = 0.0;
      int n = 0;
      for (int dx : {-1, 1}) {
        const Pixel q{o.x + dx, o.y};
        if (!jpd.in_band(q) || !jpd.present(q) || jpd.states(q)[i] != EntryState::Valid) continue;
        sum += jpd.plane(q)[i];
        ++n;
      }
      if (n == 0) {
        const Pixel r{static_cast<int>(i % dims.width), static_cast<int>(i / dims.width)};
        fail(ErrorKind::Interpolation, "no valid neighbour to interpolate plane (" + std::to_string(o.x) + ", " +
                                           std::to_string(o.y) + ") at pixel (" + std::to_string(r.x) + ", " +
                                           std::to_string(r.y) + ")");
      }
      values[i] = n == 2 ? 0.5 * sum : sum;
      out_states[i] = EntryState::Valid;
    }
  }
  return out;
}

Jpd exclude_pending(const Jpd& jpd) {
  Jpd out = jpd;
  for (int p = 0; p < out.plane_count(); ++p) {
    const Pixel o = out.plane_offset(p);
    auto values = out.plane(o);
    auto states = out.states(o);
    for (std::size_t i = 0; i < states.size(); ++i) {
      if (states[i] != EntryState::Pending) continue;
      states[i] = EntryState::Excluded;
      values[i] = 0.0;
    }
  }
  return out;
}

Jpd filter_jpd(const Jpd& jpd, double threshold) {
  require(threshold >= 0.0 && threshold <= 1.0, ErrorKind::Config, "threshold must lie in [0, 1]");
  require(!jpd.has_pending(), ErrorKind::State, "JPD has pending entries; interpolate or exclude them first");
  if (threshold == 0.0) return jpd;
  const bool near = jpd.geometry() == Geometry::NearField;
  const Image2x selector = near ? minus_projection(jpd) : sum_projection(jpd);
  const auto offsets = jpd.present_offsets();
  auto selector_value = [&](Pixel o) { return selector.at(near ? o : jpd.center() + o); };

  double peak = -INFINITY;
  for (const Pixel o : offsets) peak = std::max(peak, selector_value(o));
  require(!offsets.empty() && peak > 0.0, ErrorKind::EmptyFilter, "selector projection has no positive value");
  Jpd out = jpd;
  for (const Pixel o : offsets)
    if (selector_value(o) < threshold * peak) out.remove_plane(o);
  return out;
}

Jpd normalize_jpd(const Jpd& jpd) {
  const auto offsets = jpd.present_offsets();
  require(!offsets.empty(), ErrorKind::EmptyFilter, "no plane left to normalize");
  Jpd out = jpd;
  for (const Pixel o : offsets) {
    const double mean = jpd.plane_mean(o);
    require(std::isfinite(mean) && mean > 0.0, ErrorKind::DegeneratePlane,
            "plane (" + std::to_string(o.x) + ", " + std::to_string(o.y) + ") has a non-positive mean");
    const auto states = jpd.states(o);
    auto values = out.plane(o);
    for (std::size_t i = 0; i < values.size(); ++i)
      if (states[i] == EntryState::Valid) values[i] /= mean;
  }
  return out;
}

Image2x support_average(const Image2x& projection, const Image2x& support) {
  require(projection.values.dims() == support.values.dims(), ErrorKind::Shape, "support grid does not match");
  Image2x out = projection;
  const auto s = support.values.values();
  auto v = out.values.values();
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = s[i] > 0.0 ? v[i] / s[i] : 0.0;
  return out;
}

namespace {

class StageClock {
public:
  explicit StageClock(std::vector<StageTiming>& sink) : sink_(sink) {}
  void mark(const char* stage) {
    const auto now = std::chrono::steady_clock::now();
    sink_.push_back({stage, std::chrono::duration<double>(now - last_).count()});
    last_ = now;
  }

private:
  std::vector<StageTiming>& sink_;
  std::chrono::steady_clock::time_point last_ = std::chrono::steady_clock::now();
};

Image2x project_processed(const Jpd& processed, bool normalize) {
  const bool near = processed.geometry() == Geometry::NearField;
  Image2x image = near ? sum_projection(processed) : minus_projection(processed);
  if (normalize) image = support_average(image, near ? sum_support(processed) : minus_support(processed));
  return image;
}

}  // namespace

PipelineResult super_resolve_jpd(const Jpd& estimate, const PipelineConfig& config) {
  std::vector<StageTiming> timings;
  StageClock clock(timings);
  Jpd processed = config.pending == PendingPolicy::Interpolate ? interpolate_invalid(estimate) : exclude_pending(estimate);
  clock.mark("resolve_pending");
  processed = filter_jpd(processed, config.threshold);
  clock.mark("filter");
  if (config.normalize) {
    processed = normalize_jpd(processed);
    clock.mark("normalize");
  }
  Image2x image = project_processed(processed, config.normalize);
  clock.mark("project");
  std::vector<Pixel> surviving = processed.present_offsets();
  return PipelineResult{std::move(image), estimate, std::move(processed), Image(), std::move(surviving),
                        std::move(timings)};
}

PipelineResult run_super_resolution(const FrameSource& frames, const PipelineConfig& config) {
  const auto start = std::chrono::steady_clock::now();
  AccumulateOptions options;
  options.geometry = config.geometry;
  options.band_radius = config.band_radius;
  options.center = config.center;
  if (config.geometry == Geometry::FarField && !options.center) options.center = default_center(frames.dims());
  options.unmeasurable = config.unmeasurable;
  options.workers = config.workers;
  options.chunk_pairs = config.chunk_pairs;
  JpdEstimate estimate = estimate_jpd(frames, options);
  const double accumulate_seconds = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();

  PipelineResult result = super_resolve_jpd(estimate.jpd, config);
  result.intensity = std::move(estimate.intensity);
  result.timings.insert(result.timings.begin(), StageTiming{"accumulate", accumulate_seconds});
  return result;
}

Image2x super_resolve(const FrameSource& frames, const PipelineConfig& config) {
  return run_super_resolution(frames, config).image;
}

}  // namespace jpdsr
