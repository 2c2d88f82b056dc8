#pragma once

#include "jpdsr/accumulate.hpp"
#include "jpdsr/frames.hpp"

namespace jpdsr {

enum class CameraKind { Ideal, Emccd, Spad };

enum class CrosstalkTopology { Four, Eight };

/// Detector response. Gain, baseline and noise are in output counts.
struct CameraModel {
  CameraKind kind = CameraKind::Ideal;
  double quantum_efficiency = 1.0;
  double fill_factor = 1.0;        ///< active square centred in each pixel, area fraction
  double pixel_pitch_um = 16.0;
  double gain_mean = 1.0;          ///< EMCCD counts per photo-electron
  double gain_sigma = 0.0;         ///< per-frame gain fluctuation
  double baseline = 0.0;           ///< EMCCD bias offset
  double read_noise_sigma = 0.0;
  double dark_rate = 0.0;          ///< mean dark events per pixel per frame
  double smearing_coeff = 0.0;     ///< fraction of each packet left along its column
  double smearing_decay = 0.5;     ///< geometric decay of the smear trail per row
  double crosstalk_prob = 0.0;     ///< SPAD neighbour fire probability
  CrosstalkTopology crosstalk_topology = CrosstalkTopology::Four;

  void validate() const;
  PixelType output_type() const;
  UnmeasurableModel unmeasurable() const;
};

}  // namespace jpdsr
