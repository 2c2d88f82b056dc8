#include "jpdsr/scene_config.hpp"

#include <cmath>

#include "jpdsr/error.hpp"
#include "jpdsr/image_io.hpp"

namespace jpdsr {
namespace {

/// Amplitude primitive described by the `object` key of a section.
Field parse_object(const Config& cfg, const std::string& section, Dims sensor) {
  const std::string kind = cfg.string(section, "object", "uniform");
  Field field;
  if (kind == "uniform") {
    field = objects::constant(cfg.number(section, "level", "", 1.0));
  } else if (kind == "square_grating") {
    field = objects::square_grating(cfg.number(section, "period", "px"), cfg.number(section, "duty", "", 0.5),
                                    cfg.number(section, "offset", "px", 0.0), cfg.number(section, "low", "", 0.0),
                                    cfg.number(section, "high", "", 1.0));
  } else if (kind == "bandlimited_grating") {
    field = objects::bandlimited_grating(cfg.number(section, "period", "px"), cfg.number(section, "duty", "", 0.5),
                                         cfg.number(section, "cutoff", "cycles/px"),
                                         cfg.number(section, "offset", "px", 0.0), cfg.number(section, "low", "", 0.0),
                                         cfg.number(section, "high", "", 1.0));
  } else if (kind == "cosine_grating") {
    field = objects::cosine_grating(cfg.number(section, "period", "px"), cfg.number(section, "mean", ""),
                                    cfg.number(section, "depth", ""), cfg.number(section, "offset", "px", 0.0));
  } else if (kind == "checkerboard") {
    const auto cells = cfg.integer(section, "cells", "", 3);
    field = objects::checkerboard(sensor, static_cast<int>(cells), cfg.numbers(section, "values", ""));
  } else if (kind == "cat") {
    field = objects::cat_silhouette(cfg.number(section, "cat_x", "px", 0.25 * (sensor.width - 1)),
                                    cfg.number(section, "cat_y", "px", 0.5 * (sensor.height - 1)),
                                    cfg.number(section, "cat_size", "px", 0.8 * sensor.height));
  } else if (kind == "image") {
    Image im = read_pgm(cfg.string(section, "path"));
    const double peak = im.max();
    require(peak > 0.0, ErrorKind::Config, "object image is entirely black");
    for (double& v : im.values()) v /= peak;
    require(im.dims() == sensor, ErrorKind::Config, "object image size must match the sensor");
    field = objects::raster(std::move(im));
  } else {
    cfg.fail_at(section, "object", "unknown object '" + kind + "'");
  }
  if (cfg.boolean(section, "half_plane", false))
    field = objects::half_plane(std::move(field), cfg.number(section, "split", "px", 0.5 * (sensor.width - 1)));
  return field;
}

CameraModel parse_camera(const Config& cfg) {
  CameraModel cam;
  const std::string kind = cfg.string("camera", "kind", "ideal");
  if (kind == "ideal")
    cam.kind = CameraKind::Ideal;
  else if (kind == "emccd")
    cam.kind = CameraKind::Emccd;
  else if (kind == "spad")
    cam.kind = CameraKind::Spad;
  else
    cfg.fail_at("camera", "kind", "unknown camera '" + kind + "'");
  cam.quantum_efficiency = cfg.number("camera", "quantum_efficiency", "", 1.0);
  cam.fill_factor = cfg.number("camera", "fill_factor", "", 1.0);
  cam.pixel_pitch_um = cfg.number("camera", "pixel_pitch", "um", 16.0);
  cam.gain_mean = cfg.number("camera", "gain_mean", "counts", 1.0);
  cam.gain_sigma = cfg.number("camera", "gain_sigma", "counts", 0.0);
  cam.baseline = cfg.number("camera", "baseline", "counts", 0.0);
  cam.read_noise_sigma = cfg.number("camera", "read_noise", "counts", 0.0);
  cam.dark_rate = cfg.number("camera", "dark_rate", "counts", 0.0);
  cam.smearing_coeff = cfg.number("camera", "smearing", "", 0.0);
  cam.smearing_decay = cfg.number("camera", "smearing_decay", "", 0.5);
  cam.crosstalk_prob = cfg.number("camera", "crosstalk", "", 0.0);
  const auto neighbours = cfg.integer("camera", "crosstalk_neighbors", "", 4);
  if (neighbours != 4 && neighbours != 8) cfg.fail_at("camera", "crosstalk_neighbors", "must be 4 or 8");
  cam.crosstalk_topology = neighbours == 8 ? CrosstalkTopology::Eight : CrosstalkTopology::Four;
  try {
    cam.validate();
  } catch (const Error& e) {
    fail(ErrorKind::Config, cfg.source() + ": [camera] " + e.what());
  }
  return cam;
}

}  // namespace

Experiment experiment_from_config(const Config& cfg, const ExperimentOverrides& overrides) {
  Experiment ex;
  Scene& scene = ex.scene;
  const auto width = cfg.integer("sensor", "width", "px");
  const auto height = cfg.integer("sensor", "height", "px");
  if (width <= 0 || width > 4096) cfg.fail_at("sensor", "width", "must lie in [1, 4096]");
  if (height <= 0 || height > 4096) cfg.fail_at("sensor", "height", "must lie in [1, 4096]");
  scene.sensor = {static_cast<int>(width), static_cast<int>(height)};

  const std::string geometry = cfg.string("scene", "geometry", "near");
  if (geometry == "near")
    scene.geometry = Geometry::NearField;
  else if (geometry == "far")
    scene.geometry = Geometry::FarField;
  else
    cfg.fail_at("scene", "geometry", "expected near or far");
  scene.subgrid = static_cast<int>(cfg.integer("scene", "subgrid", "", 8));
  scene.correlation_width = cfg.number("scene", "correlation_width", "px", 0.25);
  if (cfg.has("scene", "center_x") || cfg.has("scene", "center_y"))
    scene.center = Pixel{static_cast<int>(cfg.integer("scene", "center_x", "px")),
                         static_cast<int>(cfg.integer("scene", "center_y", "px"))};
  scene.amplitude = parse_object(cfg, "scene", scene.sensor);

  if (cfg.has_section("phase")) {
    scene.holography = true;
    scene.fringe_contrast = cfg.number("phase", "contrast", "", 1.0);
    const std::string pattern = cfg.string("phase", "pattern", "none");
    if (pattern == "checkerboard") {
      const auto cells = cfg.integer("phase", "cells", "", 3);
      scene.theta_h = objects::checkerboard(scene.sensor, static_cast<int>(cells), cfg.numbers("phase", "values", "rad"));
    } else if (pattern != "none") {
      cfg.fail_at("phase", "pattern", "expected none or checkerboard");
    }
    double alpha = cfg.number("phase", "slm_phase", "rad", 0.0);
    if (overrides.slm_phase) alpha = *overrides.slm_phase;
    const std::string region = cfg.string("phase", "slm_region", "all");
    const double split = cfg.number("phase", "slm_split", "px", 0.5 * (scene.sensor.width - 1));
    if (region == "all")
      scene.slm_phase = objects::constant(alpha);
    else if (region == "right")
      scene.slm_phase = [alpha, split](double x, double) { return x >= split ? alpha : 0.0; };
    else if (region == "left")
      scene.slm_phase = [alpha, split](double x, double) { return x < split ? alpha : 0.0; };
    else
      cfg.fail_at("phase", "slm_region", "expected all, left or right");
  } else {
    require(!overrides.slm_phase, ErrorKind::Config, "an SLM phase override needs a [phase] section");
  }

  if (cfg.has_section("overlay")) {
    scene.classical_overlay = parse_object(cfg, "overlay", scene.sensor);
    scene.classical_flux = cfg.number("overlay", "flux", "photons");
  }

  ex.pairs_per_frame = cfg.number("source", "pairs_per_frame", "pairs");
  if (!(ex.pairs_per_frame >= 0.0)) cfg.fail_at("source", "pairs_per_frame", "must be non-negative");
  ex.camera = parse_camera(cfg);

  const auto frames = cfg.integer("acquisition", "frames", "");
  if (frames < 2) cfg.fail_at("acquisition", "frames", "at least two frames are required");
  ex.frames = static_cast<std::size_t>(frames);
  const auto seed = cfg.integer("acquisition", "seed", "", 0);
  if (seed < 0) cfg.fail_at("acquisition", "seed", "must be non-negative");
  ex.seed = overrides.seed.value_or(static_cast<std::uint64_t>(seed));

  cfg.reject_unused();
  try {
    scene.validate();
  } catch (const Error& e) {
    fail(ErrorKind::Config, cfg.source() + ": [scene] " + e.what());
  }
  return ex;
}

}  // namespace jpdsr
