#include <gtest/gtest.h>

#include <cmath>

#include "jpdsr/accumulate.hpp"
#include "jpdsr/error.hpp"
#include "jpdsr/metrics.hpp"
#include "support.hpp"

using namespace jpdsr;
using test::VectorFrames;

namespace {

AccumulateOptions near_options(int band) {
  AccumulateOptions o;
  o.band_radius = band;
  o.workers = 1;
  return o;
}

AccumulateOptions far_options(Dims dims, int band) {
  AccumulateOptions o;
  o.geometry = Geometry::FarField;
  o.band_radius = band;
  o.center = default_center(dims);
  o.workers = 1;
  return o;
}

}  // namespace

TEST(Jpd, PlaneIndexingAndPartners) {
  const Jpd near(Geometry::NearField, {5, 4}, 2);
  EXPECT_EQ(near.plane_count(), 25);
  EXPECT_EQ(near.plane_index({-2, -2}), 0);
  EXPECT_EQ(near.plane_index({0, 0}), 12);
  EXPECT_EQ(near.plane_index({1, -1}), 8);
  for (int p = 0; p < near.plane_count(); ++p) EXPECT_EQ(near.plane_index(near.plane_offset(p)), p);
  EXPECT_EQ(near.partner({1, 2}, {0, 0}), (Pixel{1, 2}));

  const Jpd far(Geometry::FarField, {5, 4}, 2, Pixel{4, 3});
  EXPECT_EQ(far.partner({0, 0}, {0, 0}), (Pixel{4, 3}));
  EXPECT_EQ(far.partner({1, -1}, {1, 1}), (Pixel{4, 1}));
}

TEST(Jpd, LocateInvertsPartner) {
  for (const Geometry g : {Geometry::NearField, Geometry::FarField}) {
    const Jpd jpd(g, {6, 5}, 2, Pixel{5, 4});
    for (int p = 0; p < jpd.plane_count(); ++p) {
      const Pixel o = jpd.plane_offset(p);
      for (int y = 0; y < 5; ++y)
        for (int x = 0; x < 6; ++x) {
          const Pixel r2 = jpd.partner(o, {x, y});
          EXPECT_EQ(jpd.state(o, {x, y}) == EntryState::OutOfSensor, !jpd.dims().contains(r2));
          if (!jpd.dims().contains(r2)) continue;
          const auto loc = jpd.locate({x, y}, r2);
          ASSERT_TRUE(loc.has_value());
          EXPECT_EQ(loc->offset, o);
          EXPECT_EQ(loc->pixel, (Pixel{x, y}));
        }
    }
    if (g == Geometry::NearField) {
      EXPECT_FALSE(jpd.locate({0, 0}, {5, 0}).has_value());
    }
  }
}

TEST(Jpd, RemovedPlanesReadZero) {
  Jpd jpd(Geometry::NearField, {3, 3}, 1);
  for (double& v : jpd.plane({1, 0})) v = 2.0;
  EXPECT_GT(jpd.plane_mass({1, 0}), 0.0);
  jpd.remove_plane({1, 0});
  EXPECT_FALSE(jpd.present({1, 0}));
  EXPECT_EQ(jpd.plane_mass({1, 0}), 0.0);
  EXPECT_EQ(jpd.present_offsets().size(), 8u);
}

TEST(Estimator, SinglePairHandCount) {
  // Frame 0 holds one photon pair, frame 1 is empty.
  const Dims dims{4, 4};
  std::vector<std::vector<double>> frames(2, std::vector<double>(16, 0.0));
  frames[0][dims.index({1, 1})] = 1;
  frames[0][dims.index({2, 1})] = 1;
  const VectorFrames src(dims, frames);
  AccumulateOptions opt = near_options(2);
  const Jpd jpd = accumulate_jpd(src, opt);
  EXPECT_DOUBLE_EQ(*jpd.at({1, 1}, {2, 1}), 1.0);
  EXPECT_DOUBLE_EQ(*jpd.at({2, 1}, {1, 1}), 1.0);
  EXPECT_DOUBLE_EQ(*jpd.at({1, 1}, {1, 1}), 1.0);
  EXPECT_DOUBLE_EQ(*jpd.at({0, 0}, {1, 1}), 0.0);
  EXPECT_DOUBLE_EQ(jpd.total_mass(), 4.0);
}

TEST(Estimator, AccidentalsAreSubtracted) {
  const Dims dims{3, 1};
  // Photon at 0 in frame 0 and at 2 in frame 1: an accidental, not a pair.
  const VectorFrames src(dims, {{1, 0, 0}, {0, 0, 1}});
  const Jpd jpd = accumulate_jpd(src, near_options(2));
  EXPECT_DOUBLE_EQ(*jpd.at({0, 0}, {2, 0}), -0.5);
  EXPECT_DOUBLE_EQ(*jpd.at({2, 0}, {0, 0}), -0.5);
}

TEST(Estimator, ConstantFramesGiveZero) {
  const VectorFrames src({3, 3}, std::vector<std::vector<double>>(5, std::vector<double>(9, 4.0)));
  const Jpd jpd = accumulate_jpd(src, near_options(2));
  for (const Pixel o : jpd.present_offsets())
    for (double v : jpd.plane(o)) EXPECT_EQ(v, 0.0);
}

TEST(Estimator, MatchesDenseOracleExactly) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 20; ++trial) {
    const Dims dims{std::uniform_int_distribution<int>(1, 9)(rng), std::uniform_int_distribution<int>(1, 9)(rng)};
    const auto src = test::random_frames(dims, 2 + trial % 7, 100 + trial);
    const int band = 1 + trial % 4;
    const AccumulateOptions opt = trial % 2 ? far_options(dims, band) : near_options(band);
    const Jpd jpd = accumulate_jpd(src, opt);
    const DenseJpd dense = dense_oracle_jpd(src).symmetrized();
    for (const Pixel o : jpd.present_offsets())
      for (int y = 0; y < dims.height; ++y)
        for (int x = 0; x < dims.width; ++x) {
          if (jpd.state(o, {x, y}) != EntryState::Valid) continue;
          ASSERT_EQ(jpd.value(o, {x, y}), dense({x, y}, jpd.partner(o, {x, y}))) << "trial " << trial;
        }
  }
}

TEST(Estimator, FullBandEqualsDenseEverywhere) {
  const Dims dims{4, 4};
  const auto src = test::random_frames(dims, 10, 77);
  const Jpd jpd = accumulate_jpd(src, near_options(4));
  const DenseJpd dense = dense_oracle_jpd(src).symmetrized();
  for (int y1 = 0; y1 < 4; ++y1)
    for (int x1 = 0; x1 < 4; ++x1)
      for (int y2 = 0; y2 < 4; ++y2)
        for (int x2 = 0; x2 < 4; ++x2) {
          const auto v = jpd.at({x1, y1}, {x2, y2});
          ASSERT_TRUE(v.has_value());
          EXPECT_EQ(*v, dense({x1, y1}, {x2, y2}));
        }
}

TEST(Estimator, MatchesCoincidenceCounting) {
  const Dims dims{6, 5};
  const auto src = test::random_frames(dims, 40, 5, 0.85, 1);
  const Jpd jpd = accumulate_jpd(src, near_options(5));
  const auto counts = test::coincidence_counts(src);
  for (int y1 = 0; y1 < dims.height; ++y1)
    for (int x1 = 0; x1 < dims.width; ++x1)
      for (int y2 = 0; y2 < dims.height; ++y2)
        for (int x2 = 0; x2 < dims.width; ++x2) {
          const std::size_t a = dims.index({x1, y1}), b = dims.index({x2, y2});
          const auto ab = counts.find({a, b});
          const auto ba = counts.find({b, a});
          const double expect = 0.5 * ((ab == counts.end() ? 0.0 : ab->second) + (ba == counts.end() ? 0.0 : ba->second));
          EXPECT_NEAR(*jpd.at({x1, y1}, {x2, y2}), expect, 1e-12);
        }
}

TEST(Estimator, ResultIsSymmetric) {
  const Dims dims{7, 6};
  const auto src = test::random_frames(dims, 12, 9);
  for (const AccumulateOptions& opt : {near_options(3), far_options(dims, 3)}) {
    const Jpd jpd = accumulate_jpd(src, opt);
    for (const Pixel o : jpd.present_offsets())
      for (int y = 0; y < dims.height; ++y)
        for (int x = 0; x < dims.width; ++x) {
          if (jpd.state(o, {x, y}) == EntryState::OutOfSensor) continue;
          const Pixel r2 = jpd.partner(o, {x, y});
          EXPECT_EQ(jpd.value(o, {x, y}), *jpd.at(r2, {x, y}));
        }
  }
}

TEST(Estimator, IndependentOfWorkersAndChunks) {
  const Dims dims{8, 7};
  const auto src = test::random_frames(dims, 101, 21);
  AccumulateOptions base = near_options(3);
  base.chunk_pairs = 1000;
  const Jpd reference = accumulate_jpd(src, base);
  for (unsigned workers : {1u, 2u, 3u, 8u}) {
    AccumulateOptions opt = base;
    opt.workers = workers;
    opt.chunk_pairs = 7;
    const Jpd other = accumulate_jpd(src, opt);
    AccumulateOptions same_chunks = opt;
    same_chunks.workers = 1;
    const Jpd serial = accumulate_jpd(src, same_chunks);
    for (const Pixel o : reference.present_offsets())
      for (std::size_t i = 0; i < dims.area(); ++i) {
        EXPECT_EQ(other.plane(o)[i], serial.plane(o)[i]);  // bit-identical across worker counts
        EXPECT_NEAR(other.plane(o)[i], reference.plane(o)[i], 1e-10);
      }
  }
}

TEST(Estimator, PartialsMergeByAddition) {
  const Dims dims{5, 5};
  const auto src = test::random_frames(dims, 30, 8);
  const Pixel c = default_center(dims);
  JpdPartial whole(Geometry::NearField, dims, 2, c), first(Geometry::NearField, dims, 2, c),
      second(Geometry::NearField, dims, 2, c);
  std::vector<double> a(dims.area()), b(dims.area());
  for (std::size_t l = 0; l + 1 < src.count(); ++l) {
    src.read(l, a);
    src.read(l + 1, b);
    whole.add_pair(a, b);
    (l < 13 ? first : second).add_pair(a, b);
  }
  first.merge(second);
  EXPECT_EQ(first.pairs(), whole.pairs());
  const Jpd x = finalize_partial(whole, UnmeasurableModel::None);
  const Jpd y = finalize_partial(first, UnmeasurableModel::None);
  for (const Pixel o : x.present_offsets())
    for (std::size_t i = 0; i < dims.area(); ++i) EXPECT_NEAR(x.plane(o)[i], y.plane(o)[i], 1e-12);
}

TEST(Estimator, UnmeasurablePairsArePending) {
  const Dims dims{5, 5};
  const auto src = test::random_frames(dims, 10, 4);
  AccumulateOptions opt = near_options(2);
  opt.unmeasurable = UnmeasurableModel::SameColumn;
  const Jpd jpd = accumulate_jpd(src, opt);
  for (const Pixel o : jpd.present_offsets())
    for (int y = 0; y < 5; ++y)
      for (int x = 0; x < 5; ++x) {
        const EntryState s = jpd.state(o, {x, y});
        if (s == EntryState::OutOfSensor) continue;
        EXPECT_EQ(s == EntryState::Pending, o.x == 0) << o.x << "," << o.y;
      }
  EXPECT_TRUE(jpd.has_pending());

  EXPECT_TRUE(is_unmeasurable(UnmeasurableModel::SpadNeighbors, {2, 2}, {3, 3}));
  EXPECT_FALSE(is_unmeasurable(UnmeasurableModel::SpadNeighbors, {2, 2}, {4, 3}));
  EXPECT_TRUE(is_unmeasurable(UnmeasurableModel::SamePixel, {1, 1}, {1, 1}));
  EXPECT_FALSE(is_unmeasurable(UnmeasurableModel::None, {1, 1}, {1, 1}));
}

TEST(Estimator, NullEstimatorOnIndependentFrames) {
  // Independent Poisson frames carry no correlation: off-diagonal entries average to zero.
  const Dims dims{4, 4};
  double sum = 0.0, sq = 0.0;
  const int stacks = 50;
  for (int s = 0; s < stacks; ++s) {
    std::mt19937_64 rng(1000 + s);
    std::poisson_distribution<int> photons(0.5);
    std::vector<std::vector<double>> frames(400, std::vector<double>(16));
    for (auto& f : frames)
      for (double& v : f) v = photons(rng);
    const Jpd jpd = accumulate_jpd(VectorFrames(dims, frames), near_options(1));
    const double v = jpd.plane_mean({1, 0});
    sum += v;
    sq += v * v;
  }
  const double mean = sum / stacks;
  const double se = std::sqrt((sq / stacks - mean * mean) / (stacks - 1));
  EXPECT_LT(std::abs(mean), 5 * se);
}

TEST(Estimator, Errors) {
  const VectorFrames one({2, 2}, {{1, 0, 0, 1}});
  try {
    accumulate_jpd(one, near_options(1));
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::InsufficientData);
  }
  const VectorFrames two({2, 2}, {{1, 0, 0, 1}, {0, 0, 0, 0}});
  AccumulateOptions far = near_options(1);
  far.geometry = Geometry::FarField;
  try {
    accumulate_jpd(two, far);
    FAIL();
  } catch (const Error& e) {
    EXPECT_EQ(e.kind(), ErrorKind::Config);
  }
  EXPECT_THROW(accumulate_jpd(two, near_options(0)), Error);
}

TEST(JpdSnapshot, RoundTripKeepsValuesStatesAndRemovedPlanes) {
  const Dims dims{5, 4};
  AccumulateOptions opt = far_options(dims, 2);
  opt.unmeasurable = UnmeasurableModel::SamePixel;
  Jpd jpd = accumulate_jpd(test::random_frames(dims, 9, 2), opt);
  jpd.remove_plane({2, 2});
  const auto dir = test::scratch_dir("snapshot");
  write_jpd_snapshot(jpd, dir / "j.bpsj");
  const Jpd back = read_jpd_snapshot(dir / "j.bpsj");
  EXPECT_EQ(back.geometry(), Geometry::FarField);
  EXPECT_EQ(back.center(), jpd.center());
  EXPECT_FALSE(back.present({2, 2}));
  for (int p = 0; p < jpd.plane_count(); ++p) {
    const Pixel o = jpd.plane_offset(p);
    for (std::size_t i = 0; i < dims.area(); ++i) {
      EXPECT_EQ(back.plane(o)[i], jpd.plane(o)[i]);
      EXPECT_EQ(back.states(o)[i], jpd.states(o)[i]);
    }
  }
}
