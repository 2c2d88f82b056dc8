#pragma once

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <map>
#include <random>
#include <string>
#include <vector>

#include "jpdsr/frames.hpp"
#include "jpdsr/jpd.hpp"

namespace jpdsr::test {

class VectorFrames final : public FrameSource {
public:
  VectorFrames(Dims dims, std::vector<std::vector<double>> frames) : dims_(dims), frames_(std::move(frames)) {}
  Dims dims() const override { return dims_; }
  std::size_t count() const override { return frames_.size(); }
  void read(std::size_t i, std::span<double> out) const override {
    std::copy(frames_[i].begin(), frames_[i].end(), out.begin());
  }
  const std::vector<double>& frame(std::size_t i) const { return frames_[i]; }

private:
  Dims dims_;
  std::vector<std::vector<double>> frames_;
};

/// Sparse random counts: each pixel is zero with probability `empty`, else uniform in [1, max].
inline VectorFrames random_frames(Dims dims, std::size_t count, std::uint64_t seed, double empty = 0.6,
                                  int max = 3) {
  std::mt19937_64 rng(seed);
  std::bernoulli_distribution zero(empty);
  std::uniform_int_distribution<int> value(1, max);
  std::vector<std::vector<double>> frames(count, std::vector<double>(dims.area(), 0.0));
  for (auto& f : frames)
    for (double& v : f) v = zero(rng) ? 0.0 : value(rng);
  return VectorFrames(dims, std::move(frames));
}

/// Counts photon coincidences from per-frame hit lists: same-frame coincidences
/// minus coincidences between consecutive frames, per ordered pixel pair, over N pairs.
inline std::map<std::pair<std::size_t, std::size_t>, double> coincidence_counts(const FrameSource& frames) {
  const std::size_t n = frames.dims().area();
  std::vector<std::map<std::size_t, double>> hits(frames.count());
  std::vector<double> buf(n);
  for (std::size_t l = 0; l < frames.count(); ++l) {
    frames.read(l, buf);
    for (std::size_t i = 0; i < n; ++i)
      if (buf[i] != 0.0) hits[l][i] = buf[i];
  }
  std::map<std::pair<std::size_t, std::size_t>, double> out;
  const double pairs = static_cast<double>(frames.count() - 1);
  for (std::size_t l = 0; l + 1 < frames.count(); ++l) {
    for (const auto& [a, va] : hits[l]) {
      for (const auto& [b, vb] : hits[l]) out[{a, b}] += va * vb / pairs;
      for (const auto& [b, vb] : hits[l + 1]) out[{a, b}] -= va * vb / pairs;
    }
  }
  return out;
}

inline std::filesystem::path scratch_dir(const std::string& name) {
  const auto dir = std::filesystem::temp_directory_path() / ("jpdsr_test_" + name);
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

}  // namespace jpdsr::test
