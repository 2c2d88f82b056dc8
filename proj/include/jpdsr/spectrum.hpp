#pragma once

#include <cstddef>
#include <ostream>
#include <vector>

#include "jpdsr/image.hpp"

namespace jpdsr {

enum class SpectrumAxis {
  AlongY,  ///< transform each column, average over x
  AlongX,  ///< transposed variant
};

struct SpectrumOptions {
  SpectrumAxis axis = SpectrumAxis::AlongY;
  bool hann = false;
};

/// One-sided amplitude spectrum; frequencies in cycles per native pixel.
struct Spectrum {
  std::vector<double> frequency;
  std::vector<double> amplitude;

  std::size_t nearest_bin(double f) const;
};

/// |DFT| along one axis averaged over the other, normalized to the zero-order bin.
/// `pitch` is the sample spacing in native pixels.
Spectrum spectrum_x_avg(const Image& image, double pitch = 1.0, SpectrumOptions options = {});
Spectrum spectrum_x_avg(const Image2x& image, SpectrumOptions options = {});

/// Sum over lines of (1/n) sum_k |F_k|^2 over the full two-sided transform;
/// equals the sum of squared (windowed) samples.
double spectral_power(const Image& image, SpectrumOptions options = {});

struct Peak {
  double frequency = 0.0;
  double amplitude = 0.0;
  double prominence = 0.0;
  std::size_t bin = 0;
};

/// Interior local maxima (zero order and the last bin excluded) whose topographic
/// prominence reaches min_prominence, in increasing frequency.
std::vector<Peak> detect_peaks(const Spectrum& spectrum, double min_prominence);

/// Median amplitude within +-half_width of f, ignoring the zero order and the
/// guard bins around f itself.
double local_noise_floor(const Spectrum& spectrum, double f, double half_width = 0.1, int guard_bins = 2);

/// Largest amplitude within +-bins of the bin nearest to f.
double amplitude_near(const Spectrum& spectrum, double f, int bins = 1);

void write_spectrum_csv(const Spectrum& spectrum, std::ostream& out);

}  // namespace jpdsr
