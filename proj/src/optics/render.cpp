#include "jpdsr/render.hpp"

#include <algorithm>
#include <cmath>
#include <thread>

#include "jpdsr/error.hpp"
#include "jpdsr/rng.hpp"

namespace jpdsr {

FrameRenderer::FrameRenderer(Dims dims, std::optional<PairSampler> pairs, CameraModel camera, std::size_t frames,
                             std::uint64_t seed, std::optional<Image> classical_overlay)
    : dims_(dims), pairs_(std::move(pairs)), camera_(camera), frames_(frames), seed_(seed),
      overlay_(std::move(classical_overlay)) {
  camera_.validate();
  require(frames_ >= 2, ErrorKind::Config, "at least two frames are required");
  require(dims_.width > 0 && dims_.height > 0, ErrorKind::Config, "sensor dimensions must be positive");
  require(!pairs_ || pairs_->scene().sensor == dims_, ErrorKind::Shape, "scene sensor does not match renderer");
  require(!overlay_ || overlay_->dims() == dims_, ErrorKind::Shape, "overlay does not match sensor");
}

void FrameRenderer::photon_counts(std::size_t index, std::span<double> counts) const {
  require(counts.size() == dims_.area(), ErrorKind::Shape, "output buffer size does not match frame");
  std::fill(counts.begin(), counts.end(), 0.0);
  auto rng = frame_engine(seed_, index, RngStream::Camera);
  std::uniform_real_distribution<double> uniform(0.0, 1.0);
  const double eta = camera_.quantum_efficiency;
  const double half_active = 0.5 * std::sqrt(camera_.fill_factor);

  auto detect = [&](Point p) {
    if (uniform(rng) >= eta) return;
    const double px = std::floor(p.x + 0.5), py = std::floor(p.y + 0.5);
    if (std::abs(p.x - px) > half_active || std::abs(p.y - py) > half_active) return;
    const Pixel pixel{static_cast<int>(px), static_cast<int>(py)};
    if (dims_.contains(pixel)) counts[dims_.index(pixel)] += 1.0;
  };
  if (pairs_) {
    for (const PairEvent& e : pairs_->frame_events(index)) {
      detect(e.x1);
      detect(e.x2);
    }
  }
  if (overlay_) {
    auto overlay_rng = frame_engine(seed_, index, RngStream::Overlay);
    const auto mean = overlay_->values();
    for (std::size_t i = 0; i < counts.size(); ++i) {
      const double lambda = eta * camera_.fill_factor * mean[i];
      if (lambda > 0.0) counts[i] += std::poisson_distribution<int>(lambda)(overlay_rng);
    }
  }
  if (camera_.dark_rate > 0.0) {
    std::poisson_distribution<int> dark(camera_.dark_rate);
    for (double& c : counts) c += dark(rng);
  }
}

void FrameRenderer::read(std::size_t index, std::span<double> out) const {
  require(index < frames_, ErrorKind::Shape, "frame index out of range");
  photon_counts(index, out);
  // Separate engine, so photon statistics do not depend on the detector kind.
  auto rng = frame_engine(seed_, index, RngStream::Response);
  const int w = dims_.width, h = dims_.height;

  switch (camera_.kind) {
    case CameraKind::Ideal:
      return;
    case CameraKind::Emccd: {
      if (camera_.smearing_coeff > 0.0) {
        const double c = camera_.smearing_coeff, rho = camera_.smearing_decay;
        for (int x = 0; x < w; ++x) {
          double carry = 0.0;
          for (int y = 0; y < h; ++y) {
            double& v = out[dims_.index({x, y})];
            const double s = v;
            v = (1.0 - c) * s + (1.0 - rho) * carry;
            carry = rho * carry + c * s;
          }
        }
      }
      double gain = camera_.gain_mean;
      if (camera_.gain_sigma > 0.0) gain = std::max(0.0, std::normal_distribution<double>(gain, camera_.gain_sigma)(rng));
      std::normal_distribution<double> read_noise(0.0, camera_.read_noise_sigma > 0.0 ? camera_.read_noise_sigma : 1.0);
      for (double& v : out) {
        double value = gain * v + camera_.baseline;
        if (camera_.read_noise_sigma > 0.0) value += read_noise(rng);
        v = std::clamp(std::round(value), 0.0, 65535.0);
      }
      return;
    }
    case CameraKind::Spad: {
      std::vector<char> fired(out.size());
      for (std::size_t i = 0; i < out.size(); ++i) fired[i] = out[i] > 0.0;
      std::vector<char> result = fired;
      if (camera_.crosstalk_prob > 0.0) {
        std::uniform_real_distribution<double> uniform(0.0, 1.0);
        const bool eight = camera_.crosstalk_topology == CrosstalkTopology::Eight;
        for (int y = 0; y < h; ++y) {
          for (int x = 0; x < w; ++x) {
            if (!fired[dims_.index({x, y})]) continue;
            for (int dy = -1; dy <= 1; ++dy) {
              for (int dx = -1; dx <= 1; ++dx) {
                if ((dx == 0 && dy == 0) || (!eight && dx != 0 && dy != 0)) continue;
                const Pixel n{x + dx, y + dy};
                if (uniform(rng) < camera_.crosstalk_prob && dims_.contains(n)) result[dims_.index(n)] = 1;
              }
            }
          }
        }
      }
      for (std::size_t i = 0; i < out.size(); ++i) out[i] = result[i] ? 1.0 : 0.0;
      return;
    }
  }
}

FrameStack render_frames(const FrameRenderer& renderer, unsigned workers) {
  const Dims dims = renderer.dims();
  const std::size_t n = renderer.count();
  FrameStack stack(dims, renderer.camera().output_type());
  stack.reserve(n);
  if (workers == 0) workers = std::max(1u, std::thread::hardware_concurrency());
  constexpr std::size_t kBlock = 512;
  std::vector<double> block(kBlock * dims.area());
  for (std::size_t begin = 0; begin < n; begin += kBlock) {
    const std::size_t count = std::min(kBlock, n - begin);
    {
      std::vector<std::jthread> threads;
      for (unsigned w = 0; w < workers; ++w) {
        threads.emplace_back([&, w] {
          for (std::size_t k = w; k < count; k += workers)
            renderer.read(begin + k, std::span<double>(block).subspan(k * dims.area(), dims.area()));
        });
      }
    }
    for (std::size_t k = 0; k < count; ++k)
      stack.push_back(std::span<const double>(block).subspan(k * dims.area(), dims.area()));
  }
  return stack;
}

Image classical_overlay_image(const Scene& scene) {
  Image out(scene.sensor);
  if (!scene.classical_overlay || scene.classical_flux <= 0.0) return out;
  const int s = scene.subgrid;
  for (int y = 0; y < scene.sensor.height; ++y) {
    for (int x = 0; x < scene.sensor.width; ++x) {
      double sum = 0.0;
      for (int j = 0; j < s; ++j) {
        for (int i = 0; i < s; ++i) {
          const double a = scene.classical_overlay(x - 0.5 + (i + 0.5) / s, y - 0.5 + (j + 0.5) / s);
          sum += a * a;
        }
      }
      out(x, y) = scene.classical_flux * sum / (s * s);
    }
  }
  return out;
}

FrameRenderer make_renderer(const Scene& scene, double pairs_per_frame, const CameraModel& camera,
                            std::size_t frames, std::uint64_t seed) {
  std::optional<PairSampler> pairs;
  if (pairs_per_frame > 0.0) pairs.emplace(scene, pairs_per_frame, seed);
  std::optional<Image> overlay;
  if (scene.classical_overlay && scene.classical_flux > 0.0) overlay = classical_overlay_image(scene);
  return FrameRenderer(scene.sensor, std::move(pairs), camera, frames, seed, std::move(overlay));
}

}  // namespace jpdsr
