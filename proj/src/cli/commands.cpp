#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <numbers>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"
#include "jpdsr/cli.hpp"
#include "jpdsr/config.hpp"
#include "jpdsr/error.hpp"
#include "jpdsr/frames.hpp"
#include "jpdsr/holography.hpp"
#include "jpdsr/image_io.hpp"
#include "jpdsr/projection.hpp"
#include "jpdsr/render.hpp"
#include "jpdsr/scene_config.hpp"
#include "jpdsr/spectrum.hpp"
#include "jpdsr/superres.hpp"

namespace fs = std::filesystem;
using nlohmann::ordered_json;

namespace jpdsr {
namespace {

struct SimulateArgs {
  std::string config;
  std::string manifest;
  std::string out;
  std::optional<std::uint64_t> seed;
  std::optional<double> slm_phase;
};

struct ReconstructArgs {
  std::vector<std::string> frames;
  std::string mode = "near";
  int band = 3;
  double threshold = 0.5;
  std::string protocol = "none";
  std::string out_dir;
  std::string camera = "ideal";
  std::optional<int> center_x, center_y;
  bool no_normalize = false;
  unsigned workers = 0;
};

struct SpectrumArgs {
  std::string image;
  std::string out;
  std::string axis = "y";
  bool hann = false;
  double prominence = 0.02;
  std::optional<double> pitch;
};

std::string fnv1a64(std::string_view text) {
  std::uint64_t h = 0xcbf29ce484222325ull;
  for (unsigned char c : text) {
    h ^= c;
    h *= 0x100000001b3ull;
  }
  char buf[24];
  std::snprintf(buf, sizeof buf, "%016llx", static_cast<unsigned long long>(h));
  return buf;
}

std::string read_text(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  require(static_cast<bool>(in), ErrorKind::Io, "cannot open: " + path.string());
  std::ostringstream s;
  s << in.rdbuf();
  return s.str();
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  require(static_cast<bool>(out), ErrorKind::Io, "cannot open for writing: " + path.string());
  out << text;
  require(static_cast<bool>(out), ErrorKind::Io, "write failed: " + path.string());
}

/// Re-raises a library error with the failing stage prepended.
template <typename F>
auto stage(const char* name, F&& f) -> decltype(f()) {
  try {
    return f();
  } catch (const Error& e) {
    throw Error(e.kind(), std::string(name) + ": " + e.what());
  }
}

const char* dtype_name(PixelType t) {
  switch (t) {
    case PixelType::U16: return "u16";
    case PixelType::F32: return "f32";
    case PixelType::U1: return "u1";
  }
  return "?";
}

void cmd_simulate(const SimulateArgs& args, std::ostream& out) {
  std::string text, source;
  ExperimentOverrides overrides{args.seed, args.slm_phase};
  if (!args.manifest.empty()) {
    require(args.config.empty(), ErrorKind::Config, "--config and --from-manifest are exclusive");
    ordered_json manifest;
    try {
      manifest = ordered_json::parse(read_text(args.manifest));
      text = manifest.at("config").get<std::string>();
      if (!overrides.seed) overrides.seed = manifest.at("seed").get<std::uint64_t>();
      const auto& slm = manifest.at("overrides").at("slm_phase");
      if (!overrides.slm_phase && !slm.is_null()) overrides.slm_phase = slm.get<double>();
    } catch (const nlohmann::json::exception& e) {
      fail(ErrorKind::Config, "malformed manifest " + args.manifest + ": " + e.what());
    }
    source = args.manifest + "#config";
  } else {
    require(!args.config.empty(), ErrorKind::Config, "simulate needs --config or --from-manifest");
    text = read_text(args.config);
    source = args.config;
  }
  const Config config = Config::parse(text, source);
  const Experiment ex = experiment_from_config(config, overrides);
  const FrameStack stack = stage("render", [&] {
    return render_frames(make_renderer(ex.scene, ex.pairs_per_frame, ex.camera, ex.frames, ex.seed));
  });
  write_frame_stack(stack, args.out);

  ordered_json manifest;
  manifest["tool"] = "jpdsr simulate";
  manifest["seed"] = ex.seed;
  manifest["config_hash"] = fnv1a64(text);
  manifest["overrides"] = {{"slm_phase", overrides.slm_phase ? ordered_json(*overrides.slm_phase) : ordered_json()}};
  manifest["frames"] = stack.count();
  manifest["width"] = stack.dims().width;
  manifest["height"] = stack.dims().height;
  manifest["dtype"] = dtype_name(stack.type());
  manifest["config"] = text;
  write_text(args.out + ".manifest.json", manifest.dump(2) + "\n");
  out << "wrote " << stack.count() << " frames (" << stack.dims().width << "x" << stack.dims().height << ", "
      << dtype_name(stack.type()) << ") to " << args.out << "\n";
}

void write_outputs(const fs::path& dir, const std::string& name, const Image& image, RawImageKind kind, int spp,
                   std::vector<std::uint8_t> mask = {}, std::optional<std::pair<double, double>> range = {}) {
  write_raw_image(dir / (name + ".f64"), RawImage{image, kind, spp, std::move(mask)});
  write_pgm16(dir / (name + ".pgm"), image, range);
}

PipelineConfig pipeline_config(const ReconstructArgs& args, Dims dims) {
  PipelineConfig cfg;
  require(args.mode == "near" || args.mode == "far", ErrorKind::Config, "--mode must be near or far");
  cfg.geometry = args.mode == "near" ? Geometry::NearField : Geometry::FarField;
  require(args.band >= 1, ErrorKind::Config, "--band must be at least 1");
  cfg.band_radius = args.band;
  require(args.threshold >= 0.0 && args.threshold <= 1.0, ErrorKind::Config, "--threshold must lie in [0, 1]");
  cfg.threshold = args.threshold;
  require(args.center_x.has_value() == args.center_y.has_value(), ErrorKind::Config,
          "--center-x and --center-y go together");
  if (args.center_x) cfg.center = Pixel{*args.center_x, *args.center_y};
  else if (cfg.geometry == Geometry::FarField) cfg.center = default_center(dims);
  CameraModel camera;
  if (args.camera == "ideal") camera.kind = CameraKind::Ideal;
  else if (args.camera == "emccd") camera.kind = CameraKind::Emccd;
  else if (args.camera == "spad") camera.kind = CameraKind::Spad;
  else fail(ErrorKind::Config, "--camera must be ideal, emccd or spad");
  cfg.unmeasurable = camera.unmeasurable();
  cfg.pending = camera.kind == CameraKind::Spad ? PendingPolicy::Exclude : PendingPolicy::Interpolate;
  cfg.normalize = !args.no_normalize;
  cfg.workers = args.workers;
  return cfg;
}

ordered_json plane_report(const Jpd& resolved, const Jpd& processed) {
  ordered_json planes = ordered_json::array();
  for (int p = 0; p < resolved.plane_count(); ++p) {
    const Pixel o = resolved.plane_offset(p);
    planes.push_back({{"dx", o.x}, {"dy", o.y}, {"mass", resolved.plane_mass(o)}, {"kept", processed.present(o)}});
  }
  return planes;
}

ordered_json offsets_json(const std::vector<Pixel>& offsets) {
  ordered_json out = ordered_json::array();
  for (const Pixel o : offsets) out.push_back({o.x, o.y});
  return out;
}

void cmd_reconstruct(const ReconstructArgs& args, std::ostream& out) {
  static const std::vector<std::string> protocols = {"none", "entangled", "noon", "classical"};
  require(std::find(protocols.begin(), protocols.end(), args.protocol) != protocols.end(), ErrorKind::Config,
          "--protocol must be none, entangled, noon or classical");
  const std::size_t expected = args.protocol == "none" ? 1 : 4;
  require(args.frames.size() == expected, ErrorKind::Config,
          "protocol '" + args.protocol + "' needs " + std::to_string(expected) + " --frames inputs");
  require(!args.out_dir.empty(), ErrorKind::Config, "--out-dir is required");
  std::vector<FrameStack> stacks;
  for (const auto& path : args.frames) stacks.push_back(read_frame_stack(path));
  for (const auto& s : stacks)
    require(s.dims() == stacks[0].dims(), ErrorKind::Shape, "input frame stacks differ in size");
  PipelineConfig cfg = pipeline_config(args, stacks[0].dims());
  std::error_code ec;
  fs::create_directories(args.out_dir, ec);
  require(!ec, ErrorKind::Io, "cannot create output directory: " + args.out_dir);
  const fs::path dir(args.out_dir);

  ordered_json report;
  ordered_json timing;
  report["mode"] = args.mode;
  report["band_radius"] = cfg.band_radius;
  report["threshold"] = cfg.threshold;
  report["protocol"] = args.protocol;
  report["camera"] = args.camera;
  ordered_json inputs = ordered_json::array();
  for (std::size_t k = 0; k < stacks.size(); ++k)
    inputs.push_back({{"file", fs::path(args.frames[k]).filename().string()},
                      {"frames", stacks[k].count()},
                      {"width", stacks[k].dims().width},
                      {"height", stacks[k].dims().height}});
  report["inputs"] = inputs;
  const bool near = cfg.geometry == Geometry::NearField;
  const RawImageKind grid_kind = near ? RawImageKind::SumGrid : RawImageKind::DifferenceGrid;

  if (args.protocol == "none") {
    report["normalize"] = cfg.normalize;
    const PipelineResult result = stage("super-resolution", [&] { return run_super_resolution(stacks[0], cfg); });
    const Jpd resolved = cfg.pending == PendingPolicy::Interpolate ? interpolate_invalid(result.estimate)
                                                                   : exclude_pending(result.estimate);
    const Image diagonal = extract_diagonal_image(resolved, near ? DiagonalKind::Diagonal : DiagonalKind::AntiDiagonal);
    write_outputs(dir, "intensity", result.intensity, RawImageKind::Native, 1);
    write_outputs(dir, near ? "diagonal" : "antidiagonal", diagonal, RawImageKind::Native, 1);
    write_outputs(dir, "superres", result.image.values, grid_kind, 2);
    report["frame_pairs"] = stacks[0].count() - 1;
    report["planes"] = plane_report(resolved, result.processed);
    report["surviving_planes"] = offsets_json(result.surviving);
    report["surviving_count"] = result.surviving.size();
    report["outputs"] = {"intensity", near ? "diagonal" : "antidiagonal", "superres"};
    for (const auto& t : result.timings) timing[t.stage] = t.seconds;
    out << "surviving planes: " << result.surviving.size() << "\n";
  } else {
    HolographyProtocol protocol = HolographyProtocol::Classical;
    if (args.protocol == "entangled") {
      require(!near, ErrorKind::Config, "the entangled protocol works on far-field data (--mode far)");
      protocol = HolographyProtocol::EntangledFarField;
    } else if (args.protocol == "noon") {
      require(near, ErrorKind::Config, "the noon protocol works on near-field data (--mode near)");
      protocol = HolographyProtocol::Noon;
    }
    const auto shifts = protocol_shifts(protocol);
    PhaseSeries series;
    ordered_json per_shift = ordered_json::array();
    int spp = 1;
    for (std::size_t k = 0; k < 4; ++k) {
      series.shifts.push_back(shifts[k]);
      const std::string name = "shift" + std::to_string(k);
      if (protocol == HolographyProtocol::Classical) {
        series.images.push_back(mean_frame(stacks[k]));
        write_outputs(dir, "intensity_" + name, series.images.back(), RawImageKind::Native, 1);
        per_shift.push_back({{"alpha", shifts[k]}});
      } else {
        // Per-plane normalization rescales each shift differently and would bias the phase.
        PipelineConfig c = cfg;
        c.normalize = false;
        const PipelineResult r = stage("super-resolution", [&] { return run_super_resolution(stacks[k], c); });
        series.images.push_back(r.image.values);
        spp = 2;
        write_outputs(dir, "superres_" + name, r.image.values, grid_kind, 2);
        per_shift.push_back({{"alpha", shifts[k]}, {"surviving_planes", offsets_json(r.surviving)}});
        for (const auto& t : r.timings) timing[name][t.stage] = t.seconds;
      }
    }
    const PhaseImage phase = stage("phase", [&] { return reconstruct_phase_four_step(series, protocol); });
    write_outputs(dir, "phase", phase.phase, RawImageKind::Phase, spp, phase.defined,
                  std::pair{-std::numbers::pi, std::numbers::pi});
    if (protocol == HolographyProtocol::Noon)
      write_outputs(dir, "phase_half", half_phase(phase), RawImageKind::Phase, spp, phase.defined,
                    std::pair{-std::numbers::pi / 2, std::numbers::pi / 2});
    std::size_t defined = 0;
    for (auto d : phase.defined) defined += d;
    report["shifts"] = per_shift;
    report["phase_defined_pixels"] = defined;
    report["outputs"] = protocol == HolographyProtocol::Noon ? ordered_json{"phase", "phase_half"} : ordered_json{"phase"};
    out << "phase map written, " << defined << " defined samples\n";
  }
  write_text(dir / "report.json", report.dump(2) + "\n");
  write_text(dir / "timing.json", timing.dump(2) + "\n");
}

void cmd_spectrum(const SpectrumArgs& args, std::ostream& out) {
  require(args.axis == "y" || args.axis == "x", ErrorKind::Config, "--axis must be x or y");
  Image image;
  double pitch = 1.0;
  if (fs::path(args.image).extension() == ".pgm") {
    image = read_pgm(args.image);
  } else {
    RawImage raw = read_raw_image(args.image);
    image = std::move(raw.image);
    pitch = raw.pitch();
  }
  if (args.pitch) pitch = *args.pitch;
  SpectrumOptions options;
  options.axis = args.axis == "y" ? SpectrumAxis::AlongY : SpectrumAxis::AlongX;
  options.hann = args.hann;
  const Spectrum spectrum = spectrum_x_avg(image, pitch, options);
  std::ostringstream csv;
  write_spectrum_csv(spectrum, csv);
  write_text(args.out, csv.str());
  char line[128];
  for (const Peak& p : detect_peaks(spectrum, args.prominence)) {
    std::snprintf(line, sizeof line, "peak frequency=%.6g amplitude=%.6g prominence=%.6g\n", p.frequency, p.amplitude,
                  p.prominence);
    out << line;
  }
}

int exit_code(ErrorKind kind) {
  switch (kind) {
    case ErrorKind::Config: return kExitConfig;
    case ErrorKind::Io:
    case ErrorKind::Format: return kExitIo;
    default: return kExitPipeline;
  }
}

}  // namespace

int run_cli(int argc, const char* const* argv, std::ostream& out, std::ostream& err) {
  CLI::App app{"Pixel super-resolution with photon-pair correlations", "jpdsr"};
  app.require_subcommand(1);

  SimulateArgs sim;
  auto* simulate = app.add_subcommand("simulate", "Render a frame stack from a scene config");
  simulate->add_option("--config", sim.config, "Scene and camera config");
  simulate->add_option("--from-manifest", sim.manifest, "Re-run from a manifest written by an earlier simulate");
  simulate->add_option("--out", sim.out, "Frame-stack file to write")->required();
  simulate->add_option("--seed", sim.seed, "Master seed, overrides the config");
  simulate->add_option("--slm-phase", sim.slm_phase, "SLM phase in radians, overrides the config");

  ReconstructArgs rec;
  auto* reconstruct = app.add_subcommand("reconstruct", "Run the JPD pipeline on frame stacks");
  reconstruct->add_option("--frames", rec.frames, "Frame-stack file; four, in shift order, for phase protocols")
      ->required();
  reconstruct->add_option("--mode", rec.mode, "near or far");
  reconstruct->add_option("--band", rec.band, "Band radius K in pixels");
  reconstruct->add_option("--threshold", rec.threshold, "Filter threshold fraction");
  reconstruct->add_option("--protocol", rec.protocol, "none, entangled, noon or classical");
  reconstruct->add_option("--out-dir", rec.out_dir, "Output directory")->required();
  reconstruct->add_option("--camera", rec.camera, "ideal, emccd or spad; selects unmeasurable entries");
  reconstruct->add_option("--center-x", rec.center_x, "Far-field sum coordinate, x");
  reconstruct->add_option("--center-y", rec.center_y, "Far-field sum coordinate, y");
  reconstruct->add_flag("--no-normalize", rec.no_normalize, "Skip plane normalization");
  reconstruct->add_option("--workers", rec.workers, "Worker threads, 0 for all cores");

  SpectrumArgs spec;
  auto* spectrum = app.add_subcommand("spectrum", "x-averaged spectrum of an image");
  spectrum->add_option("--image", spec.image, "f64 dump or PGM")->required();
  spectrum->add_option("--out", spec.out, "CSV to write")->required();
  spectrum->add_option("--axis", spec.axis, "Transform axis, y (default) or x");
  spectrum->add_flag("--hann", spec.hann, "Apply a Hann window");
  spectrum->add_option("--prominence", spec.prominence, "Minimum peak prominence");
  spectrum->add_option("--pitch", spec.pitch, "Sample pitch in native pixels");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitConfig;
  }
  try {
    if (*simulate) cmd_simulate(sim, out);
    if (*reconstruct) cmd_reconstruct(rec, out);
    if (*spectrum) cmd_spectrum(spec, out);
  } catch (const Error& e) {
    err << "error (" << to_string(e.kind()) << "): " << e.what() << "\n";
    return exit_code(e.kind());
  } catch (const std::exception& e) {
    err << "error: " << e.what() << "\n";
    return kExitPipeline;
  }
  return kExitOk;
}

}  // namespace jpdsr
