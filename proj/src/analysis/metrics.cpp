#include "jpdsr/metrics.hpp"

#include <array>
#include <cmath>

#include <Eigen/Dense>

#include "jpdsr/error.hpp"

namespace jpdsr {
namespace {

double alternating_power(const std::vector<double>& v) {
  double a = 0.0;
  for (std::size_t k = 0; k < v.size(); ++k) a += k % 2 ? -v[k] : v[k];
  a /= static_cast<double>(v.size());
  return a * a;
}

}  // namespace

double stripe_metric(const Image& image) {
  require(!image.empty(), ErrorKind::Shape, "stripe metric of an empty image");
  const double mean = image.mean();
  require(mean != 0.0 && std::isfinite(mean), ErrorKind::Config, "stripe metric undefined for a zero-mean image");
  std::vector<double> rows(static_cast<std::size_t>(image.height()), 0.0);
  std::vector<double> cols(static_cast<std::size_t>(image.width()), 0.0);
  for (int y = 0; y < image.height(); ++y) {
    for (int x = 0; x < image.width(); ++x) {
      rows[y] += image(x, y);
      cols[x] += image(x, y);
    }
  }
  for (double& r : rows) r /= image.width();
  for (double& c : cols) c /= image.height();
  return (alternating_power(rows) + alternating_power(cols)) / (mean * mean);
}

double stripe_metric(const Image2x& image) { return stripe_metric(image.values); }

DenseJpd::DenseJpd(Dims dims) : dims_(dims), values_(dims.area() * dims.area(), 0.0) {}

DenseJpd DenseJpd::symmetrized() const {
  DenseJpd out(dims_);
  const std::size_t n = dims_.area();
  for (std::size_t a = 0; a < n; ++a)
    for (std::size_t b = 0; b < n; ++b) out.values_[a * n + b] = 0.5 * (values_[a * n + b] + values_[b * n + a]);
  return out;
}

DenseJpd dense_oracle_jpd(const FrameSource& frames) {
  const Dims dims = frames.dims();
  require(dims.area() <= kDenseOracleMaxPixels, ErrorKind::SizeGuard, "dense oracle is limited to 256 pixels");
  require(frames.count() >= 2, ErrorKind::InsufficientData, "the estimator needs at least two frames");
  const std::size_t n = dims.area();
  const std::size_t pairs = frames.count() - 1;
  std::vector<double> sums(n * n, 0.0);
  std::vector<double> current(n), next(n);
  frames.read(0, current);
  for (std::size_t l = 0; l < pairs; ++l) {
    frames.read(l + 1, next);
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = 0; b < n; ++b) sums[a * n + b] += current[a] * current[b] - current[a] * next[b];
    std::swap(current, next);
  }
  DenseJpd out(dims);
  for (int y1 = 0; y1 < dims.height; ++y1)
    for (int x1 = 0; x1 < dims.width; ++x1)
      for (int y2 = 0; y2 < dims.height; ++y2)
        for (int x2 = 0; x2 < dims.width; ++x2) {
          const Pixel r1{x1, y1}, r2{x2, y2};
          out(r1, r2) = sums[dims.index(r1) * n + dims.index(r2)] / static_cast<double>(pairs);
        }
  return out;
}

BackgroundFit fit_background(const Jpd& jpd, const Image& intensity) {
  require(intensity.dims() == jpd.dims(), ErrorKind::Shape, "intensity image does not match the JPD");
  std::vector<std::array<double, 3>> rows;
  std::vector<double> targets;
  const Dims dims = jpd.dims();
  for (const Pixel o : jpd.present_offsets()) {
    const auto values = jpd.plane(o);
    const auto states = jpd.states(o);
    for (int y = 0; y < dims.height; ++y) {
      for (int x = 0; x < dims.width; ++x) {
        const std::size_t i = dims.index({x, y});
        const Pixel r2 = jpd.partner(o, {x, y});
        if (states[i] != EntryState::Valid || r2 == Pixel{x, y}) continue;
        const double i1 = intensity(x, y), i2 = intensity(r2.x, r2.y);
        rows.push_back({i1 * i2, i1 + i2, 1.0});
        targets.push_back(values[i]);
      }
    }
  }
  require(rows.size() >= 3, ErrorKind::InsufficientData, "too few entries for a background fit");
  Eigen::MatrixXd a(static_cast<Eigen::Index>(rows.size()), 3);
  Eigen::VectorXd b(static_cast<Eigen::Index>(rows.size()));
  for (std::size_t k = 0; k < rows.size(); ++k) {
    for (int j = 0; j < 3; ++j) a(static_cast<Eigen::Index>(k), j) = rows[k][j];
    b(static_cast<Eigen::Index>(k)) = targets[k];
  }
  const Eigen::Vector3d c = a.colPivHouseholderQr().solve(b);
  return {c(0), c(1), c(2)};
}

double correlation(std::span<const double> a, std::span<const double> b) {
  require(a.size() == b.size() && !a.empty(), ErrorKind::Shape, "correlation needs equally sized samples");
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= static_cast<double>(a.size());
  mb /= static_cast<double>(b.size());
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  require(saa > 0.0 && sbb > 0.0, ErrorKind::Config, "correlation of a constant sample is undefined");
  return sab / std::sqrt(saa * sbb);
}

}  // namespace jpdsr
