#include "jpdsr/sampling.hpp"

#include <algorithm>
#include <cmath>

#include "jpdsr/error.hpp"
#include "jpdsr/rng.hpp"

namespace jpdsr {

PairSampler::PairSampler(Scene scene, double pairs_per_frame, std::uint64_t seed)
    : scene_(std::move(scene)), rate_(pairs_per_frame), seed_(seed) {
  scene_.validate();
  require(std::isfinite(rate_) && rate_ > 0.0, ErrorKind::Config, "pair rate must be positive");
  const int s = scene_.subgrid;
  cells_x_ = scene_.sensor.width * s;
  const int cells_y = scene_.sensor.height * s;
  const Pixel c = scene_.pair_center();
  cumulative_.reserve(static_cast<std::size_t>(cells_x_) * cells_y);
  double total = 0.0;
  for (int j = 0; j < cells_y; ++j) {
    for (int i = 0; i < cells_x_; ++i) {
      const double x = scene_.cell_center(i), y = scene_.cell_center(j);
      const double a = scene_.t(x, y);
      require(a >= 0.0 && a <= 1.0, ErrorKind::Config, "object amplitude must lie in [0, 1]");
      double w;
      if (scene_.geometry == Geometry::NearField) {
        w = a * a * a * a;
      } else {
        const double b = scene_.t(c.x - x, c.y - y);
        w = a * a * b * b;
      }
      total += w;
      cumulative_.push_back(total);
    }
  }
  require(total > 0.0, ErrorKind::DegenerateDensity, "object has zero transmission, no pairs to sample");
}

PairEvent PairSampler::draw(std::mt19937_64& rng) const {
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double target = uniform(rng) * cumulative_.back();
  const auto it = std::upper_bound(cumulative_.begin(), cumulative_.end(), target);
  const auto k = static_cast<int>(std::min<std::ptrdiff_t>(it - cumulative_.begin(), cumulative_.size() - 1));
  const double cell = 1.0 / scene_.subgrid;
  const Point m{-0.5 + (k % cells_x_) * cell + uniform(rng) * cell, -0.5 + (k / cells_x_) * cell + uniform(rng) * cell};

  Point xi{0.0, 0.0};
  if (scene_.correlation_width > 0.0) {
    std::normal_distribution<double> gauss(0.0, scene_.correlation_width);
    xi = {gauss(rng), gauss(rng)};
  }
  PairEvent e;
  if (scene_.geometry == Geometry::NearField) {
    e.x1 = {m.x - 0.5 * xi.x, m.y - 0.5 * xi.y};
    e.x2 = {m.x + 0.5 * xi.x, m.y + 0.5 * xi.y};
  } else {
    const Pixel c = scene_.pair_center();
    e.x1 = {m.x + 0.5 * xi.x, m.y + 0.5 * xi.y};
    e.x2 = {c.x - m.x + 0.5 * xi.x, c.y - m.y + 0.5 * xi.y};
  }
  if (scene_.holography) {
    e.relative_phase = scene_.delta_theta(e.x1.x, e.x1.y) - scene_.alpha(e.x1.x, e.x1.y) +
                       scene_.delta_theta(e.x2.x, e.x2.y) - scene_.alpha(e.x2.x, e.x2.y);
  }
  return e;
}

bool PairSampler::draw_accepted(std::mt19937_64& rng, PairEvent& event) const {
  event = draw(rng);
  if (!scene_.holography) return true;
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  return uniform(rng) < scene_.fringe(event.x1, event.x2);
}

std::vector<PairEvent> PairSampler::frame_events(std::size_t frame) const {
  auto rng = frame_engine(seed_, frame, RngStream::PairSampler);
  std::poisson_distribution<int> occupancy(rate_);
  const int n = occupancy(rng);
  std::vector<PairEvent> events;
  events.reserve(static_cast<std::size_t>(n));
  PairEvent e;
  for (int k = 0; k < n; ++k)
    if (draw_accepted(rng, e)) events.push_back(e);
  return events;
}

std::vector<std::vector<PairEvent>> sample_pair_events(const Scene& scene, double pairs_per_frame,
                                                       std::uint64_t seed, std::size_t frames) {
  const PairSampler sampler(scene, pairs_per_frame, seed);
  std::vector<std::vector<PairEvent>> out;
  out.reserve(frames);
  for (std::size_t l = 0; l < frames; ++l) out.push_back(sampler.frame_events(l));
  return out;
}

}  // namespace jpdsr
