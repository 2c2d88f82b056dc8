#pragma once

#include <vector>

#include "jpdsr/frames.hpp"
#include "jpdsr/image.hpp"
#include "jpdsr/jpd.hpp"

namespace jpdsr {

/// Power of the alternating (two-sample period) component of the row means plus
/// that of the column means, over mean^2. For row means alternating between a
/// and b this is the row-mean variance ((a - b) / 2)^2; smooth object structure
/// does not contribute.
double stripe_metric(const Image& image);
double stripe_metric(const Image2x& image);

/// Full Gamma(r1, r2) over every ordered pixel pair.
class DenseJpd {
public:
  explicit DenseJpd(Dims dims);

  Dims dims() const { return dims_; }
  double operator()(Pixel r1, Pixel r2) const { return values_[slot(r1, r2)]; }
  double& operator()(Pixel r1, Pixel r2) { return values_[slot(r1, r2)]; }
  DenseJpd symmetrized() const;

private:
  std::size_t slot(Pixel r1, Pixel r2) const { return dims_.index(r1) * dims_.area() + dims_.index(r2); }

  Dims dims_;
  std::vector<double> values_;
};

inline constexpr std::size_t kDenseOracleMaxPixels = 256;

/// Brute-force estimator over all ordered pixel pairs, unsymmetrized.
DenseJpd dense_oracle_jpd(const FrameSource& frames);

/// Coefficients of alpha I1 I2 + beta (I1 + I2) + gamma.
struct BackgroundFit {
  double alpha = 0.0;
  double beta = 0.0;
  double gamma = 0.0;
};

/// Least-squares fit of the background model to all valid entries with r1 != r2.
BackgroundFit fit_background(const Jpd& jpd, const Image& intensity);

/// Pearson correlation of two equally sized sample sets.
double correlation(std::span<const double> a, std::span<const double> b);

}  // namespace jpdsr
