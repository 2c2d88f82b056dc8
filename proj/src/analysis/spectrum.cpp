#include "jpdsr/spectrum.hpp"

#include <fftw3.h>

#include <algorithm>
#include <cmath>
#include <complex>
#include <cstdio>
#include <mutex>
#include <numbers>

#include "jpdsr/error.hpp"

namespace jpdsr {
namespace {

std::mutex planner_mutex;  // the FFTW planner is not thread-safe

/// Calls `visit(line, spectrum)` with the one-sided DFT of every line along the axis.
template <typename Visit>
void for_each_line_dft(const Image& image, SpectrumOptions options, Visit&& visit) {
  require(!image.empty(), ErrorKind::Shape, "spectrum of an empty image");
  const bool along_y = options.axis == SpectrumAxis::AlongY;
  const int n = along_y ? image.height() : image.width();
  const int lines = along_y ? image.width() : image.height();
  const int bins = n / 2 + 1;

  double* in = fftw_alloc_real(static_cast<std::size_t>(n));
  fftw_complex* out = fftw_alloc_complex(static_cast<std::size_t>(bins));
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex);
    plan = fftw_plan_dft_r2c_1d(n, in, out, FFTW_ESTIMATE);
  }
  std::vector<double> window(static_cast<std::size_t>(n), 1.0);
  if (options.hann && n > 1)
    for (int k = 0; k < n; ++k) window[k] = 0.5 * (1.0 - std::cos(2.0 * std::numbers::pi * k / (n - 1)));

  std::vector<std::complex<double>> line(static_cast<std::size_t>(bins));
  for (int l = 0; l < lines; ++l) {
    for (int k = 0; k < n; ++k) in[k] = window[k] * (along_y ? image(l, k) : image(k, l));
    fftw_execute(plan);
    for (int k = 0; k < bins; ++k) line[k] = {out[k][0], out[k][1]};
    visit(n, line);
  }
  {
    std::lock_guard lock(planner_mutex);
    fftw_destroy_plan(plan);
  }
  fftw_free(in);
  fftw_free(out);
}

}  // namespace

std::size_t Spectrum::nearest_bin(double f) const {
  require(!frequency.empty(), ErrorKind::Shape, "empty spectrum");
  std::size_t best = 0;
  for (std::size_t k = 1; k < frequency.size(); ++k)
    if (std::abs(frequency[k] - f) < std::abs(frequency[best] - f)) best = k;
  return best;
}

Spectrum spectrum_x_avg(const Image& image, double pitch, SpectrumOptions options) {
  require(pitch > 0.0, ErrorKind::Config, "sample pitch must be positive");
  Spectrum s;
  int length = 0;
  for_each_line_dft(image, options, [&](int n, const std::vector<std::complex<double>>& line) {
    if (s.amplitude.empty()) s.amplitude.assign(line.size(), 0.0);
    length = n;
    for (std::size_t k = 0; k < line.size(); ++k) s.amplitude[k] += std::abs(line[k]);
  });
  const double zero = s.amplitude[0];
  for (double& a : s.amplitude) a = zero > 0.0 ? a / zero : 0.0;
  s.frequency.resize(s.amplitude.size());
  for (std::size_t k = 0; k < s.frequency.size(); ++k) s.frequency[k] = static_cast<double>(k) / (length * pitch);
  return s;
}

Spectrum spectrum_x_avg(const Image2x& image, SpectrumOptions options) {
  return spectrum_x_avg(image.values, 0.5, options);
}

double spectral_power(const Image& image, SpectrumOptions options) {
  double power = 0.0;
  for_each_line_dft(image, options, [&](int n, const std::vector<std::complex<double>>& line) {
    double sum = std::norm(line[0]);
    for (std::size_t k = 1; k < line.size(); ++k) {
      const bool nyquist = n % 2 == 0 && static_cast<int>(k) == n / 2;
      sum += (nyquist ? 1.0 : 2.0) * std::norm(line[k]);
    }
    power += sum / n;
  });
  return power;
}

std::vector<Peak> detect_peaks(const Spectrum& spectrum, double min_prominence) {
  const auto& a = spectrum.amplitude;
  std::vector<Peak> peaks;
  if (a.size() < 3) return peaks;
  for (std::size_t i = 1; i + 1 < a.size(); ++i) {
    if (!(a[i] > a[i - 1] && a[i] >= a[i + 1])) continue;
    // Prominence: height above the higher of the two minima reached before a taller sample.
    double left_min = a[i];
    for (std::size_t j = i; j-- > 0;) {
      if (a[j] > a[i]) break;
      left_min = std::min(left_min, a[j]);
    }
    double right_min = a[i];
    for (std::size_t j = i + 1; j < a.size(); ++j) {
      if (a[j] > a[i]) break;
      right_min = std::min(right_min, a[j]);
    }
    const double prominence = a[i] - std::max(left_min, right_min);
    if (prominence >= min_prominence && prominence > 0.0)
      peaks.push_back({spectrum.frequency[i], a[i], prominence, i});
  }
  return peaks;
}

double local_noise_floor(const Spectrum& spectrum, double f, double half_width, int guard_bins) {
  const std::size_t centre = spectrum.nearest_bin(f);
  std::vector<double> samples;
  for (std::size_t k = 1; k < spectrum.frequency.size(); ++k) {
    if (std::abs(spectrum.frequency[k] - f) > half_width) continue;
    if (std::abs(static_cast<long>(k) - static_cast<long>(centre)) <= guard_bins) continue;
    samples.push_back(spectrum.amplitude[k]);
  }
  require(!samples.empty(), ErrorKind::Config, "noise-floor window holds no bins");
  const auto mid = samples.begin() + static_cast<long>(samples.size() / 2);
  std::nth_element(samples.begin(), mid, samples.end());
  if (samples.size() % 2 == 1) return *mid;
  const double upper = *mid;
  const double lower = *std::max_element(samples.begin(), mid);
  return 0.5 * (lower + upper);
}

double amplitude_near(const Spectrum& spectrum, double f, int bins) {
  const long centre = static_cast<long>(spectrum.nearest_bin(f));
  double best = 0.0;
  for (long k = std::max(1L, centre - bins); k <= centre + bins && k < static_cast<long>(spectrum.amplitude.size()); ++k)
    best = std::max(best, spectrum.amplitude[static_cast<std::size_t>(k)]);
  return best;
}

void write_spectrum_csv(const Spectrum& spectrum, std::ostream& out) {
  out << "frequency_cycles_per_pixel,amplitude\n";
  char line[96];
  for (std::size_t k = 0; k < spectrum.frequency.size(); ++k) {
    std::snprintf(line, sizeof line, "%.12g,%.12g\n", spectrum.frequency[k], spectrum.amplitude[k]);
    out << line;
  }
}

}  // namespace jpdsr
