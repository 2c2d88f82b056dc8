#include <gtest/gtest.h>

#include <algorithm>
#include <cmath>

#include "jpdsr/accumulate.hpp"
#include "jpdsr/error.hpp"
#include "jpdsr/ground_truth.hpp"
#include "jpdsr/projection.hpp"
#include "jpdsr/spectrum.hpp"
#include "jpdsr/superres.hpp"
#include "support.hpp"

using namespace jpdsr;

namespace {

Jpd filled(Geometry g, Dims dims, int band, std::uint64_t seed) {
  Jpd jpd(g, dims, band, g == Geometry::FarField ? std::optional<Pixel>(default_center(dims)) : std::nullopt);
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> u(0.5, 2.0);
  for (const Pixel o : jpd.present_offsets()) {
    auto v = jpd.plane(o);
    const auto s = jpd.states(o);
    for (std::size_t i = 0; i < v.size(); ++i) v[i] = s[i] == EntryState::Valid ? u(rng) : 0.0;
  }
  return jpd;
}

void set_plane_mass(Jpd& jpd, Pixel o, double mass) {
  const double per = mass / static_cast<double>(jpd.valid_count(o));
  auto v = jpd.plane(o);
  const auto s = jpd.states(o);
  for (std::size_t i = 0; i < v.size(); ++i) v[i] = s[i] == EntryState::Valid ? per : 0.0;
}

void mark_pending(Jpd& jpd, Pixel o) {
  for (EntryState& s : jpd.states(o))
    if (s == EntryState::Valid) s = EntryState::Pending;
}

std::vector<Pixel> sorted(std::vector<Pixel> v) {
  std::sort(v.begin(), v.end(), [](Pixel a, Pixel b) { return a.y != b.y ? a.y < b.y : a.x < b.x; });
  return v;
}

ErrorKind kind_of(auto&& f) {
  try {
    f();
  } catch (const Error& e) {
    return e.kind();
  }
  ADD_FAILURE() << "no error thrown";
  return ErrorKind::State;
}

}  // namespace

TEST(Interpolate, ConstantNeighboursFillTheGap) {
  Jpd jpd(Geometry::NearField, {6, 5}, 1);
  for (const Pixel o : jpd.present_offsets()) set_plane_mass(jpd, o, 0.0);
  for (double& v : jpd.plane({-1, 0})) v = 3.0;
  for (double& v : jpd.plane({1, 0})) v = 3.0;
  mark_pending(jpd, {0, 0});
  const Jpd out = interpolate_invalid(jpd);
  EXPECT_FALSE(out.has_pending());
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 6; ++x) EXPECT_EQ(out.value({0, 0}, {x, y}), 3.0);
}

TEST(Interpolate, AveragesTheTwoNeighboursOrUsesTheOnlyOne) {
  Jpd jpd = filled(Geometry::NearField, {6, 5}, 2, 4);
  mark_pending(jpd, {0, 1});
  mark_pending(jpd, {2, 0});
  const Jpd out = interpolate_invalid(jpd);
  for (int y = 0; y < 4; ++y)
    for (int x = 0; x < 6; ++x) {
      const bool left = x >= 1, right = x + 1 < 6;  // partners of the +-e_x planes
      double expect = 0.0;
      if (left && right) expect = 0.5 * (jpd.value({-1, 1}, {x, y}) + jpd.value({1, 1}, {x, y}));
      else expect = left ? jpd.value({-1, 1}, {x, y}) : jpd.value({1, 1}, {x, y});
      EXPECT_DOUBLE_EQ(out.value({0, 1}, {x, y}), expect) << x << "," << y;
    }
  // Band edge: (2, 0) only has (1, 0).
  for (int y = 0; y < 5; ++y)
    for (int x = 0; x < 4; ++x) EXPECT_EQ(out.value({2, 0}, {x, y}), jpd.value({1, 0}, {x, y}));
}

TEST(Interpolate, EmccdColumnPlanes) {
  AccumulateOptions opt;
  opt.band_radius = 2;
  opt.unmeasurable = UnmeasurableModel::SameColumn;
  const Jpd jpd = accumulate_jpd(test::random_frames({7, 6}, 20, 3), opt);
  const Jpd out = interpolate_invalid(jpd);
  EXPECT_FALSE(out.has_pending());
  for (int dy = -2; dy <= 2; ++dy) {
    const Pixel o{0, dy};
    for (int y = 0; y < 6; ++y)
      for (int x = 1; x < 6; ++x) {
        if (jpd.state(o, {x, y}) == EntryState::OutOfSensor) continue;
        EXPECT_DOUBLE_EQ(out.value(o, {x, y}), 0.5 * (jpd.value({-1, dy}, {x, y}) + jpd.value({1, dy}, {x, y})));
      }
  }
}

TEST(Interpolate, NoNeighbourIsAnError) {
  Jpd jpd = filled(Geometry::NearField, {4, 4}, 1, 2);
  mark_pending(jpd, {0, 0});
  jpd.remove_plane({1, 0});
  jpd.remove_plane({-1, 0});
  EXPECT_EQ(kind_of([&] { interpolate_invalid(jpd); }), ErrorKind::Interpolation);
  const Jpd excluded = exclude_pending(jpd);
  EXPECT_EQ(excluded.valid_count({0, 0}), 0u);
  EXPECT_EQ(excluded.plane_mass({0, 0}), 0.0);
}

TEST(Filter, KeepsPlanesAboveThresholdTimesPeak) {
  Jpd jpd(Geometry::NearField, {5, 5}, 1);
  for (const Pixel o : jpd.present_offsets()) set_plane_mass(jpd, o, 0.0);
  set_plane_mass(jpd, {0, 0}, 10.0);
  set_plane_mass(jpd, {1, 0}, 5.0);
  set_plane_mass(jpd, {0, 1}, 1.0);
  const Jpd out = filter_jpd(jpd, 0.4);
  EXPECT_EQ(sorted(out.present_offsets()), (std::vector<Pixel>{{0, 0}, {1, 0}}));
  EXPECT_EQ(filter_jpd(jpd, 0.0).present_offsets().size(), 9u);
}

TEST(Filter, IdempotentAndMonotone) {
  Jpd jpd = filled(Geometry::NearField, {8, 8}, 3, 9);
  for (const Pixel o : jpd.present_offsets()) {
    const double w = std::exp(-0.5 * (o.x * o.x + o.y * o.y));
    for (double& v : jpd.plane(o)) v *= w;
  }
  std::size_t previous = 49;
  for (double t : {0.0, 0.1, 0.3, 0.5, 0.7, 0.9, 1.0}) {
    const Jpd once = filter_jpd(jpd, t);
    const Jpd twice = filter_jpd(once, t);
    EXPECT_EQ(once.present_offsets(), twice.present_offsets());
    EXPECT_LE(once.present_offsets().size(), previous);
    previous = once.present_offsets().size();
    EXPECT_GE(previous, 1u);
  }
}

TEST(Filter, FarFieldUsesTheSumProjection) {
  const Dims dims{6, 6};
  Jpd jpd(Geometry::FarField, dims, 1, default_center(dims));
  for (const Pixel o : jpd.present_offsets()) set_plane_mass(jpd, o, 0.1);
  set_plane_mass(jpd, {0, 0}, 4.0);
  set_plane_mass(jpd, {0, -1}, 3.0);
  EXPECT_EQ(sorted(filter_jpd(jpd, 0.5).present_offsets()), (std::vector<Pixel>{{0, -1}, {0, 0}}));
}

TEST(Filter, Errors) {
  Jpd zero(Geometry::NearField, {3, 3}, 1);
  EXPECT_EQ(kind_of([&] { filter_jpd(zero, 0.5); }), ErrorKind::EmptyFilter);
  Jpd jpd = filled(Geometry::NearField, {3, 3}, 1, 1);
  EXPECT_EQ(kind_of([&] { filter_jpd(jpd, 1.5); }), ErrorKind::Config);
  mark_pending(jpd, {0, 0});
  EXPECT_EQ(kind_of([&] { filter_jpd(jpd, 0.5); }), ErrorKind::State);
}

TEST(Normalize, EveryPlaneHasUnitMean) {
  Jpd jpd = filled(Geometry::NearField, {6, 6}, 2, 5);
  for (double& v : jpd.plane({1, 0})) v *= 2.0;
  for (double& v : jpd.plane({0, 1})) v *= 8.0;
  const Jpd out = normalize_jpd(jpd);
  for (const Pixel o : out.present_offsets()) EXPECT_NEAR(out.plane_mean(o), 1.0, 1e-12);
  // Shape within a plane is kept.
  const double ratio = jpd.value({0, 1}, {2, 2}) / jpd.value({0, 1}, {3, 1});
  EXPECT_NEAR(out.value({0, 1}, {2, 2}) / out.value({0, 1}, {3, 1}), ratio, 1e-12);
}

TEST(Normalize, InvariantUnderGlobalScale) {
  const Jpd jpd = filled(Geometry::NearField, {5, 4}, 1, 6);
  Jpd scaled = jpd;
  for (const Pixel o : scaled.present_offsets())
    for (double& v : scaled.plane(o)) v *= 37.5;
  const Jpd a = normalize_jpd(jpd), b = normalize_jpd(scaled);
  for (const Pixel o : a.present_offsets())
    for (std::size_t i = 0; i < 20; ++i) EXPECT_NEAR(a.plane(o)[i], b.plane(o)[i], 1e-12);
}

TEST(Normalize, DegeneratePlanes) {
  Jpd jpd = filled(Geometry::NearField, {4, 4}, 1, 7);
  set_plane_mass(jpd, {1, 1}, 0.0);
  EXPECT_EQ(kind_of([&] { normalize_jpd(jpd); }), ErrorKind::DegeneratePlane);
  set_plane_mass(jpd, {1, 1}, -2.0);
  EXPECT_EQ(kind_of([&] { normalize_jpd(jpd); }), ErrorKind::DegeneratePlane);
}

TEST(SupportAverage, DividesWhereSupported) {
  Image2x p = Image2x::zeros({2, 2}, ProjectionGrid::Sum), s = p;
  p.values(0, 0) = 6.0;
  s.values(0, 0) = 3.0;
  p.values(1, 1) = 5.0;
  const Image2x out = support_average(p, s);
  EXPECT_EQ(out.values(0, 0), 2.0);
  EXPECT_EQ(out.values(1, 1), 0.0);
}

TEST(Pipeline, UniformObjectGivesFlatImage) {
  Scene scene;
  scene.sensor = {16, 16};
  scene.correlation_width = 1.0;
  PipelineConfig cfg;
  cfg.band_radius = 2;
  Jpd gt = ground_truth_jpd(scene, 2);
  mark_pending(gt, {0, 0});  // as an ideal camera would
  const PipelineResult r = super_resolve_jpd(gt, cfg);
  EXPECT_EQ(r.surviving.size(), 9u);
  double lo = INFINITY, hi = 0.0;
  for (int j = 8; j < 23; ++j)
    for (int i = 8; i < 23; ++i) {
      lo = std::min(lo, r.image.values(i, j));
      hi = std::max(hi, r.image.values(i, j));
    }
  EXPECT_LT((hi - lo) / hi, 0.02);
}

TEST(Pipeline, UnnormalizedOutputIsThePlainProjection) {
  AccumulateOptions opt;
  opt.band_radius = 2;
  opt.unmeasurable = UnmeasurableModel::SamePixel;
  const Jpd est = accumulate_jpd(test::random_frames({6, 6}, 30, 12, 0.3), opt);
  PipelineConfig cfg;
  cfg.band_radius = 2;
  cfg.threshold = 0.0;
  cfg.normalize = false;
  const PipelineResult r = super_resolve_jpd(est, cfg);
  const Image2x direct = sum_projection(interpolate_invalid(est));
  for (std::size_t i = 0; i < direct.values.values().size(); ++i)
    EXPECT_EQ(r.image.values.values()[i], direct.values.values()[i]);
  EXPECT_FALSE(r.timings.empty());
}

TEST(Pipeline, ExcludePolicyDropsPendingEntries) {
  AccumulateOptions opt;
  opt.band_radius = 1;
  opt.unmeasurable = UnmeasurableModel::SamePixel;
  const Jpd est = accumulate_jpd(test::random_frames({5, 5}, 30, 13, 0.3), opt);
  PipelineConfig cfg;
  cfg.band_radius = 1;
  cfg.threshold = 0.0;
  cfg.normalize = false;
  cfg.pending = PendingPolicy::Exclude;
  const PipelineResult r = super_resolve_jpd(est, cfg);
  // Even-even sum samples are fed only by the excluded d = 0 plane.
  EXPECT_EQ(r.image.values(4, 4), 0.0);
  EXPECT_EQ(r.processed.valid_count({0, 0}), 0u);
}

TEST(Pipeline, RecoversFrequenciesAboveTheNativeNyquistLimit) {
  for (double f : {0.6, 0.8}) {
    Scene scene;
    scene.sensor = {30, 30};
    scene.amplitude = objects::cosine_grating(1.0 / f, 0.5, 0.4);
    PipelineConfig cfg;
    cfg.band_radius = 1;
    cfg.threshold = 0.0;
    cfg.normalize = false;
    cfg.unmeasurable = UnmeasurableModel::None;
    const PipelineResult r = super_resolve_jpd(analytic_delta_jpd(scene, 1), cfg);
    SpectrumOptions so;
    so.hann = true;
    const Spectrum s = spectrum_x_avg(r.image, so);
    const auto peaks = detect_peaks(s, 0.02);
    ASSERT_FALSE(peaks.empty());
    const auto top = std::max_element(peaks.begin(), peaks.end(),
                                      [](const Peak& a, const Peak& b) { return a.amplitude < b.amplitude; });
    EXPECT_NEAR(top->frequency, f, s.frequency[1]) << "f = " << f;
  }
}
