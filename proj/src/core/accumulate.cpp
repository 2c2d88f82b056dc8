#include "jpdsr/accumulate.hpp"

#include <algorithm>
#include <cstdlib>
#include <thread>

#include "jpdsr/error.hpp"

namespace jpdsr {

bool is_unmeasurable(UnmeasurableModel model, Pixel r1, Pixel r2) {
  switch (model) {
    case UnmeasurableModel::None: return false;
    case UnmeasurableModel::SamePixel: return r1 == r2;
    case UnmeasurableModel::SameColumn: return r1.x == r2.x;
    case UnmeasurableModel::SpadNeighbors: return std::abs(r1.x - r2.x) <= 1 && std::abs(r1.y - r2.y) <= 1;
  }
  return false;
}

Pixel default_center(Dims dims) { return {dims.width - 1, dims.height - 1}; }

JpdPartial::JpdPartial(Geometry geometry, Dims dims, int band_radius, Pixel center)
    : geometry_(geometry), dims_(dims), band_(band_radius), center_(center) {
  const int side = 2 * band_ + 1;
  const std::size_t area = dims.area();
  sums_.assign(static_cast<std::size_t>(side * side) * area, 0.0);
  partner_.assign(sums_.size(), -1);
  intensity_.assign(area, 0.0);
  for (int p = 0; p < side * side; ++p) {
    const Pixel o{p % side - band_, p / side - band_};
    for (int y = 0; y < dims.height; ++y) {
      for (int x = 0; x < dims.width; ++x) {
        const Pixel r{x, y};
        const Pixel q = geometry == Geometry::NearField ? r + o : center - r + o;
        if (dims.contains(q)) partner_[p * area + dims.index(r)] = static_cast<int>(dims.index(q));
      }
    }
  }
}

std::span<const double> JpdPartial::plane_sum(int plane) const {
  const std::size_t area = dims_.area();
  return std::span<const double>(sums_).subspan(static_cast<std::size_t>(plane) * area, area);
}

void JpdPartial::add_pair(std::span<const double> current, std::span<const double> next) {
  const std::size_t area = dims_.area();
  require(current.size() == area && next.size() == area, ErrorKind::Shape, "frame size does not match JPD");
  nonzero_.clear();
  for (std::size_t i = 0; i < area; ++i) {
    if (current[i] != 0.0) nonzero_.push_back(i);
    intensity_[i] += current[i];
  }
  const std::size_t planes = sums_.size() / area;
  for (std::size_t p = 0; p < planes; ++p) {
    double* sum = sums_.data() + p * area;
    const int* partner = partner_.data() + p * area;
    for (std::size_t i : nonzero_) {
      const int j = partner[i];
      if (j < 0) continue;
      const double a = current[i];
      sum[i] += a * current[j] - a * next[j];
    }
  }
  ++pairs_;
}

void JpdPartial::merge(const JpdPartial& other) {
  require(other.dims_ == dims_ && other.band_ == band_ && other.geometry_ == geometry_ &&
              other.center_ == center_,
          ErrorKind::Shape, "cannot merge partials with different layouts");
  for (std::size_t i = 0; i < sums_.size(); ++i) sums_[i] += other.sums_[i];
  for (std::size_t i = 0; i < intensity_.size(); ++i) intensity_[i] += other.intensity_[i];
  pairs_ += other.pairs_;
}

Jpd finalize_partial(const JpdPartial& partial, UnmeasurableModel unmeasurable) {
  require(partial.pairs() > 0, ErrorKind::InsufficientData, "no frame pairs accumulated");
  const std::optional<Pixel> center =
      partial.geometry() == Geometry::FarField ? std::optional<Pixel>(partial.center()) : std::nullopt;
  Jpd jpd(partial.geometry(), partial.dims(), partial.band_radius(), center);
  const Dims dims = partial.dims();
  const double n = static_cast<double>(partial.pairs());

  for (int p = 0; p < jpd.plane_count(); ++p) {
    const Pixel o = jpd.plane_offset(p);
    auto values = jpd.plane(o);
    auto states = jpd.states(o);
    const auto sums = partial.plane_sum(p);
    for (int y = 0; y < dims.height; ++y) {
      for (int x = 0; x < dims.width; ++x) {
        const Pixel r{x, y};
        const std::size_t i = dims.index(r);
        if (states[i] != EntryState::Valid) continue;
        const Pixel q = jpd.partner(o, r);
        if (is_unmeasurable(unmeasurable, r, q)) {
          states[i] = EntryState::Pending;
          continue;
        }
        const JpdLocation t = *jpd.locate(q, r);
        const double transposed = partial.plane_sum(jpd.plane_index(t.offset))[dims.index(t.pixel)];
        values[i] = 0.5 * (sums[i] / n + transposed / n);
      }
    }
  }
  return jpd;
}

JpdEstimate estimate_jpd(const FrameSource& frames, const AccumulateOptions& options) {
  const Dims dims = frames.dims();
  require(frames.count() >= 2, ErrorKind::InsufficientData, "the estimator needs at least two frames");
  require(options.band_radius >= 1, ErrorKind::Config, "band radius must be at least 1");
  require(options.chunk_pairs >= 1, ErrorKind::Config, "chunk size must be positive");
  require(options.geometry == Geometry::NearField || options.center.has_value(), ErrorKind::Config,
          "far-field accumulation requires a centre");
  const Pixel center = options.center.value_or(Pixel{});

  const std::size_t pairs = frames.count() - 1;
  const std::size_t chunks = (pairs + options.chunk_pairs - 1) / options.chunk_pairs;
  unsigned workers = options.workers ? options.workers : std::max(1u, std::thread::hardware_concurrency());
  workers = static_cast<unsigned>(std::min<std::size_t>(workers, chunks));

  auto run_chunk = [&](std::size_t chunk, JpdPartial& partial) {
    const std::size_t begin = chunk * options.chunk_pairs;
    const std::size_t end = std::min(pairs, begin + options.chunk_pairs);
    std::vector<double> current(dims.area()), next(dims.area());
    frames.read(begin, current);
    for (std::size_t l = begin; l < end; ++l) {
      frames.read(l + 1, next);
      partial.add_pair(current, next);
      std::swap(current, next);
    }
  };

  // Chunks run in waves of `workers`; partials are folded into the total in chunk
  // order, so the result does not depend on the worker count or scheduling.
  JpdPartial total(options.geometry, dims, options.band_radius, center);
  for (std::size_t wave = 0; wave < chunks; wave += workers) {
    const std::size_t count = std::min<std::size_t>(workers, chunks - wave);
    std::vector<JpdPartial> partials(count, JpdPartial(options.geometry, dims, options.band_radius, center));
    if (count == 1) {
      run_chunk(wave, partials[0]);
    } else {
      std::vector<std::exception_ptr> errors(count);
      std::vector<std::jthread> threads;
      for (std::size_t k = 0; k < count; ++k) {
        threads.emplace_back([&, k] {
          try {
            run_chunk(wave + k, partials[k]);
          } catch (...) {
            errors[k] = std::current_exception();
          }
        });
      }
      threads.clear();
      for (auto& e : errors)
        if (e) std::rethrow_exception(e);
    }
    for (const auto& partial : partials) total.merge(partial);
  }

  JpdEstimate estimate{finalize_partial(total, options.unmeasurable), Image(dims), total.pairs()};
  for (std::size_t i = 0; i < dims.area(); ++i)
    estimate.intensity.values()[i] = total.intensity_sum()[i] / static_cast<double>(total.pairs());
  return estimate;
}

Jpd accumulate_jpd(const FrameSource& frames, const AccumulateOptions& options) {
  return estimate_jpd(frames, options).jpd;
}

}  // namespace jpdsr
