// odisal command-line interface: omni-directional saliency estimation,
// prior fitting, and evaluation.

#include <CLI11.hpp>

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "odisal/dataset.hpp"
#include "odisal/fusion.hpp"
#include "odisal/io.hpp"
#include "odisal/metrics.hpp"
#include "odisal/prior.hpp"

namespace fs = std::filesystem;
using namespace odisal;

namespace {

// ---------------------------------------------------------------------------
// Shared helpers
// ---------------------------------------------------------------------------

void warn_if_not_equirect(int width, int height) {
  if (width != 2 * height) {
    std::cerr << "warning: input is " << width << "x" << height
              << "; equirectangular images are expected to be 2:1\n";
  }
}

std::vector<double> parse_number_list(const std::string& text, const std::string& flag) {
  std::vector<double> out;
  std::stringstream in(text);
  std::string item;
  while (std::getline(in, item, ',')) {
    if (item.empty()) continue;
    try {
      out.push_back(std::stod(item));
    } catch (const std::exception&) {
      throw CLI::ValidationError(flag, "'" + item + "' is not a number");
    }
  }
  if (out.empty()) throw CLI::ValidationError(flag, "empty list");
  return out;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot write " + path.string());
  out << text;
}

// Resolved-config echo: key=value under the command's section, reloadable
// with `odisal --config <file>` (the section re-triggers the command).
void write_config_echo(CLI::App* cmd, const fs::path& out_dir) {
  write_text(out_dir / "run.config",
             "[" + cmd->get_name() + "]\n" + cmd->config_to_str(/*default_also=*/true));
}

fs::path prepare_out_dir(const std::string& out_dir) {
  fs::path dir(out_dir);
  fs::create_directories(dir);
  return dir;
}

std::unique_ptr<SaliencyBackend> make_backend(const std::string& spec) {
  if (spec == "constant") return std::make_unique<ConstantBackend>();
  if (spec == "spectral") return std::make_unique<SpectralResidualBackend>();
  if (spec.rfind("file:", 0) == 0) return std::make_unique<FileBackend>(spec.substr(5));
  throw InvalidArgumentError("unknown backend '" + spec +
                             "' (expected constant, spectral, or file:<manifest>)");
}

LatitudeBiasSet load_latitude_biases(const fs::path& dir) {
  fs::path meta_path = dir / "bias_meta.txt";
  std::ifstream meta(meta_path);
  if (!meta) throw IoError("cannot open " + meta_path.string());
  std::string line;
  std::vector<double> latitudes_deg;
  while (std::getline(meta, line)) {
    if (line.rfind("latitudes_deg=", 0) == 0) {
      latitudes_deg = parse_number_list(line.substr(14), "bias_meta");
    }
  }
  if (latitudes_deg.empty()) {
    throw ParseError(meta_path.string() + ": missing 'latitudes_deg=' line");
  }
  LatitudeBiasSet set;
  char buf[64];
  for (double lat : latitudes_deg) {
    std::snprintf(buf, sizeof(buf), "bias_%g.fmap", lat);
    Raster bias = load_map(dir / buf);
    if (!bias.all_nonnegative() || !bias.all_finite()) {
      throw InvalidArgumentError(std::string(buf) + " has negative or non-finite weights");
    }
    set.entries.push_back({deg_to_rad(lat), std::move(bias)});
  }
  return set;
}

void save_latitude_biases(const fs::path& dir, const LatitudeBiasSet& set, double interval_deg) {
  std::ostringstream meta;
  meta << "interval_deg=" << interval_deg << "\n";
  meta << "latitudes_deg=";
  char buf[64];
  for (std::size_t i = 0; i < set.entries.size(); ++i) {
    double lat = rad_to_deg(set.entries[i].phi_c);
    meta << (i ? "," : "") << lat;
    std::snprintf(buf, sizeof(buf), "bias_%g.fmap", lat);
    save_map(dir / buf, set.entries[i].bias);
  }
  meta << "\n";
  write_text(dir / "bias_meta.txt", meta.str());
}

Prior make_prior(const std::string& spec, int out_width, int out_height) {
  if (spec == "none") return std::monostate{};
  if (spec.rfind("a:", 0) == 0) {
    Raster bias = load_map(spec.substr(2));
    if (bias.width() != out_width || bias.height() != out_height) {
      throw BiasShapeMismatchError("equator bias is " + std::to_string(bias.width()) + "x" +
                                   std::to_string(bias.height()) + " but the output is " +
                                   std::to_string(out_width) + "x" + std::to_string(out_height));
    }
    if (!bias.all_nonnegative() || !bias.all_finite() || bias.max() == 0.0) {
      throw InvalidArgumentError("equator bias must be non-negative, finite, and not all zero");
    }
    return EquatorBias{std::move(bias)};
  }
  if (spec.rfind("b:", 0) == 0) return load_latitude_biases(spec.substr(2));
  throw InvalidArgumentError("unknown prior '" + spec +
                             "' (expected none, a:<bias map>, or b:<bias dir>)");
}

// Piecewise-linear heat colormap (dark blue -> cyan -> yellow -> red) over
// the map scaled by its maximum. Visualization only.
Image colorize_heatmap(const Raster& map) {
  static const double stops[5][3] = {
      {0.05, 0.03, 0.35}, {0.0, 0.55, 0.85}, {0.1, 0.85, 0.35}, {0.95, 0.9, 0.1}, {0.85, 0.1, 0.1},
  };
  double peak = map.max();
  double inv = peak > 0.0 ? 1.0 / peak : 0.0;
  Raster r(map.width(), map.height(), 0.0), g = r, b = r;
  for (std::size_t i = 0; i < map.size(); ++i) {
    double t = std::clamp(map[i] * inv, 0.0, 1.0) * 4.0;
    int s = std::min(3, static_cast<int>(t));
    double f = t - s;
    r[i] = stops[s][0] + f * (stops[s + 1][0] - stops[s][0]);
    g[i] = stops[s][1] + f * (stops[s + 1][1] - stops[s][1]);
    b[i] = stops[s][2] + f * (stops[s + 1][2] - stops[s][2]);
  }
  return Image(std::move(r), std::move(g), std::move(b));
}

std::vector<const DatasetEntry*> select_entries(const DatasetManifest& manifest,
                                                const std::string& split) {
  std::vector<const DatasetEntry*> out;
  auto push_ids = [&](const std::vector<std::string>& ids) {
    for (const std::string& id : ids) out.push_back(manifest.find(id));
  };
  if (split == "train" && !manifest.train_ids.empty()) {
    push_ids(manifest.train_ids);
  } else if (split == "val" && !manifest.val_ids.empty()) {
    push_ids(manifest.val_ids);
  } else {
    for (const DatasetEntry& e : manifest.entries) out.push_back(&e);
  }
  return out;
}

std::vector<EvalCase> build_eval_cases(const DatasetManifest& manifest, const std::string& split,
                                       double gt_sigma) {
  std::vector<EvalCase> cases;
  for (const DatasetEntry* entry : select_entries(manifest, split)) {
    EvalCase c;
    c.name = entry->id;
    c.odi = load_image(entry->image_path).luma();
    double sigma = gt_sigma >= 0.0 ? gt_sigma : default_gt_sigma(c.odi.height());
    c.gt = load_or_make_gt(*entry, c.odi.width(), c.odi.height(), sigma);
    c.fixations = fixations_to_pixels(load_fixations(entry->fixation_path, entry->id),
                                      c.odi.width(), c.odi.height());
    cases.push_back(std::move(c));
  }
  return cases;
}

// ---------------------------------------------------------------------------
// Subcommand options
// ---------------------------------------------------------------------------

struct ExtractOpts {
  std::string input, image_id, out_dir = "out";
  double interval = 45.0, fov = 100.0;
  int view_side = 500, jobs = 1;
};

struct PredictOpts {
  std::string input, image_id, backend = "constant", prior = "none", out_dir = "out";
  double interval = 45.0, fov = 100.0, sigma = 0.0;
  int view_side = 500, jobs = 1;
  bool nearest = false, emit_heatmap = false;
};

struct FitBiasOpts {
  std::string manifest, method = "b", loss = "kl", fit_backend = "constant", out_dir = "out";
  double interval = 45.0, fov = 100.0, lr = 1.0, fit_sigma = 0.0, gt_sigma = -1.0;
  int view_side = 64, bias_resolution = 25, iterations = 100;
};

struct EvaluateOpts {
  std::string pred, gt, fixations, name = "map", out_dir = "out";
};

struct SweepBlurOpts {
  std::string manifest, backend = "constant", prior = "none", split = "all",
              sigmas = "0,8,16,24,32,40,48", out_dir = "out";
  double interval = 45.0, fov = 100.0, gt_sigma = -1.0;
  int view_side = 500, jobs = 1;
};

struct SweepIntervalOpts {
  std::string manifest, backend = "constant", prior = "none", split = "all",
              intervals = "90,45,30,22.5", out_dir = "out";
  double fov = 100.0, sigma = 0.0, gt_sigma = -1.0;
  int view_side = 500, jobs = 1;
};

struct MakeGtOpts {
  std::string fixations, name = "gt", out_dir = "out";
  int width = 1600, height = 800;
  double sigma = 24.0;
};

struct GenSyntheticOpts {
  std::string out_dir = "out";
  int n_images = 16, width = 128, height = 64, n_blobs = 6, n_fixations = 300;
  double prior_sigma_phi = 0.3, gt_sigma = -1.0;
  std::uint64_t seed = 0;
};

// ---------------------------------------------------------------------------
// Subcommand implementations
// ---------------------------------------------------------------------------

void run_extract(const ExtractOpts& opt, CLI::App* cmd) {
  fs::path dir = prepare_out_dir(opt.out_dir);
  Image odi = load_image(opt.input);
  warn_if_not_equirect(odi.width(), odi.height());
  std::string image_id = opt.image_id.empty() ? fs::path(opt.input).stem().string() : opt.image_id;
  ViewGrid grid = view_grid(opt.interval, deg_to_rad(opt.fov));

  std::ostringstream index;
  char buf[128];
  for (std::size_t k = 0; k < grid.frames.size(); ++k) {
    const ViewFrame& frame = grid.frames[k];
    Image view;
    for (const Raster& plane : odi.planes) {
      view.planes.push_back(extract_view(plane, frame, opt.view_side));
    }
    std::snprintf(buf, sizeof(buf), "view_%03zu_t%g_p%g.png", k, rad_to_deg(frame.theta_c),
                  rad_to_deg(frame.phi_c));
    save_image_png8(dir / buf, view);
    index << image_id << " " << rad_to_deg(frame.theta_c) << " " << rad_to_deg(frame.phi_c)
          << " " << buf << "\n";
  }
  write_text(dir / "views.txt", index.str());
  write_config_echo(cmd, dir);
  std::cout << "extracted " << grid.frames.size() << " views to " << dir.string() << "\n";
}

void run_predict(const PredictOpts& opt, CLI::App* cmd) {
  fs::path dir = prepare_out_dir(opt.out_dir);
  Raster odi = load_image(opt.input).luma();
  warn_if_not_equirect(odi.width(), odi.height());
  std::string image_id = opt.image_id.empty() ? fs::path(opt.input).stem().string() : opt.image_id;
  ViewGrid grid = view_grid(opt.interval, deg_to_rad(opt.fov));
  std::unique_ptr<SaliencyBackend> backend = make_backend(opt.backend);
  Prior prior = make_prior(opt.prior, odi.width(), odi.height());

  EstimateOptions eopts;
  eopts.view_side = opt.view_side;
  eopts.jobs = opt.jobs;
  eopts.source_id = image_id;
  eopts.sample_mode = opt.nearest ? SampleMode::nearest : SampleMode::bilinear;

  FusedMap fused = estimate(odi, *backend, grid, prior, BlurSpec{opt.sigma}, eopts);
  save_map(dir / "saliency.fmap", fused.map);
  if (opt.emit_heatmap) save_image_png8(dir / "heatmap.png", colorize_heatmap(fused.map));
  if (fused.uncovered_count > 0) {
    std::cerr << "warning: " << fused.uncovered_count << " pixels not covered by any view\n";
  }
  write_config_echo(cmd, dir);
  std::cout << "saliency map written to " << (dir / "saliency.fmap").string() << "\n";
}

void run_fit_bias(const FitBiasOpts& opt, CLI::App* cmd) {
  fs::path dir = prepare_out_dir(opt.out_dir);
  DatasetManifest manifest = load_manifest(opt.manifest);
  std::vector<const DatasetEntry*> entries = select_entries(manifest, "train");
  if (entries.empty()) throw InvalidArgumentError("manifest has no training entries");

  if (opt.method == "a") {
    std::vector<Raster> gts;
    for (const DatasetEntry* e : entries) {
      Raster image = load_image(e->image_path).luma();
      double sigma = opt.gt_sigma >= 0.0 ? opt.gt_sigma : default_gt_sigma(image.height());
      gts.push_back(load_or_make_gt(*e, image.width(), image.height(), sigma));
    }
    EquatorBias bias = average_equator_bias(gts);
    save_map(dir / "equator_bias.fmap", bias.map);
    write_config_echo(cmd, dir);
    std::cout << "equator bias (average of " << gts.size() << " maps) written to "
              << (dir / "equator_bias.fmap").string() << "\n";
    return;
  }
  if (opt.method != "b") throw InvalidArgumentError("--method must be a or b");

  std::vector<TrainExample> train;
  for (const DatasetEntry* e : entries) {
    TrainExample ex;
    ex.odi = load_image(e->image_path).luma();
    double sigma = opt.gt_sigma >= 0.0 ? opt.gt_sigma : default_gt_sigma(ex.odi.height());
    ex.gt = load_or_make_gt(*e, ex.odi.width(), ex.odi.height(), sigma);
    ex.source_id = e->id;
    train.push_back(std::move(ex));
  }

  FitConfig config;
  config.learning_rate = opt.lr;
  config.iterations = opt.iterations;
  config.bias_resolution = opt.bias_resolution;
  config.loss = opt.loss == "mse" ? FitLoss::mse : FitLoss::kl;
  config.view_side = opt.view_side;
  config.blur_sigma = opt.fit_sigma;

  ViewGrid grid = view_grid(opt.interval, deg_to_rad(opt.fov));
  SpectralResidualBackend spectral;
  ConstantBackend constant;
  if (opt.fit_backend != "constant" && opt.fit_backend != "spectral") {
    throw InvalidArgumentError("--fit-backend must be constant or spectral");
  }
  const SaliencyBackend& backend = opt.fit_backend == "spectral"
                                       ? static_cast<const SaliencyBackend&>(spectral)
                                       : static_cast<const SaliencyBackend&>(constant);

  FitResult result = fit_latitude_bias(train, backend, grid, config);
  save_latitude_biases(dir, result.biases, opt.interval);

  std::ostringstream trace;
  trace << "iteration,loss\n";
  for (std::size_t i = 0; i < result.loss_trace.size(); ++i) {
    trace << i << "," << result.loss_trace[i] << "\n";
  }
  write_text(dir / "loss_trace.csv", trace.str());
  write_config_echo(cmd, dir);
  std::cout << "fitted " << result.biases.entries.size() << " latitude biases; loss "
            << result.loss_trace.front() << " -> " << result.loss_trace.back() << "\n";
}

void run_evaluate(const EvaluateOpts& opt, CLI::App* cmd) {
  fs::path dir = prepare_out_dir(opt.out_dir);
  Raster pred = normalize_sum(load_map(opt.pred));
  Raster gt = normalize_sum(load_map(opt.gt));
  if (!gt.same_shape(pred)) {
    throw ShapeMismatchError("prediction and ground truth shapes differ");
  }
  std::vector<PixelCoord> fixations = fixations_to_pixels(
      load_fixations(opt.fixations, opt.name), gt.width(), gt.height());

  MetricReport report = evaluate_map(opt.name, gt, pred, fixations);
  std::string csv = report_csv({report});
  write_text(dir / "report.csv", csv);
  write_config_echo(cmd, dir);
  std::cout << csv;
}

void run_sweep_blur(const SweepBlurOpts& opt, CLI::App* cmd) {
  fs::path dir = prepare_out_dir(opt.out_dir);
  DatasetManifest manifest = load_manifest(opt.manifest);
  std::vector<EvalCase> cases = build_eval_cases(manifest, opt.split, opt.gt_sigma);
  if (cases.empty()) throw InvalidArgumentError("no dataset entries selected");

  std::unique_ptr<SaliencyBackend> backend = make_backend(opt.backend);
  PipelineConfig config;
  config.backend = backend.get();
  config.prior = make_prior(opt.prior, cases.front().odi.width(), cases.front().odi.height());
  config.options.view_side = opt.view_side;
  config.options.jobs = opt.jobs;

  ViewGrid grid = view_grid(opt.interval, deg_to_rad(opt.fov));
  BlurSweepResult result =
      sweep_blur(cases, config, grid, parse_number_list(opt.sigmas, "--sigmas"));

  write_text(dir / "sweep_blur.csv", report_csv(result.mean_reports));
  write_config_echo(cmd, dir);
  for (std::size_t s = 0; s < result.sigmas.size(); ++s) {
    std::cout << "sigma " << result.sigmas[s] << ": mean a = " << result.mean_reports[s].a
              << "\n";
  }
  std::cout << "best sigma: " << result.best_sigma << "\n";
}

void run_sweep_interval(const SweepIntervalOpts& opt, CLI::App* cmd) {
  fs::path dir = prepare_out_dir(opt.out_dir);
  DatasetManifest manifest = load_manifest(opt.manifest);
  std::vector<EvalCase> cases = build_eval_cases(manifest, opt.split, opt.gt_sigma);
  if (cases.empty()) throw InvalidArgumentError("no dataset entries selected");

  std::unique_ptr<SaliencyBackend> backend = make_backend(opt.backend);
  PipelineConfig config;
  config.backend = backend.get();
  config.prior = make_prior(opt.prior, cases.front().odi.width(), cases.front().odi.height());
  config.options.view_side = opt.view_side;
  config.options.jobs = opt.jobs;
  config.blur = BlurSpec{opt.sigma};

  std::vector<IntervalSweepEntry> entries = sweep_interval(
      cases, config, deg_to_rad(opt.fov), parse_number_list(opt.intervals, "--intervals"));

  std::vector<MetricReport> means;
  for (const IntervalSweepEntry& e : entries) {
    std::cout << "interval " << e.interval_deg << ": " << e.view_count
              << " views, mean a = " << e.mean.a << "\n";
    means.push_back(e.mean);
  }
  write_text(dir / "sweep_interval.csv", report_csv(means));
  write_config_echo(cmd, dir);
}

void run_make_gt(const MakeGtOpts& opt, CLI::App* cmd) {
  fs::path dir = prepare_out_dir(opt.out_dir);
  FixationSet fix = load_fixations(opt.fixations, opt.name);
  Raster gt = make_gt_map(fix, opt.width, opt.height, opt.sigma);
  save_map(dir / (opt.name + ".fmap"), gt);
  write_config_echo(cmd, dir);
  std::cout << "ground-truth map (" << fix.fixations.size() << " fixations) written to "
            << (dir / (opt.name + ".fmap")).string() << "\n";
}

void run_gen_synthetic(const GenSyntheticOpts& opt, CLI::App* cmd) {
  fs::path dir = prepare_out_dir(opt.out_dir);
  SyntheticSpec spec;
  spec.n_images = opt.n_images;
  spec.width = opt.width;
  spec.height = opt.height;
  spec.prior_sigma_phi = opt.prior_sigma_phi;
  spec.n_blobs = opt.n_blobs;
  spec.n_fixations = opt.n_fixations;
  spec.seed = opt.seed;
  spec.gt_sigma = opt.gt_sigma;

  SyntheticDataset data = generate_synthetic(spec, dir);
  write_config_echo(cmd, dir);
  std::cout << "generated " << data.manifest.entries.size() << " images ("
            << data.manifest.train_ids.size() << " train / " << data.manifest.val_ids.size()
            << " val) under " << dir.string() << "\n";
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Saliency-map estimation for omni-directional images"};
  app.require_subcommand(1);
  app.set_config("--config", "",
                 "Config file with a [command] section of key=value lines; command-line flags "
                 "override file values");

  // Subcommands are configurable so a [command] section both selects the
  // command and supplies its options. A config section plus an explicit
  // command name would trigger the callback twice; run each command once.
  std::set<const CLI::App*> ran;
  auto once = [&ran](CLI::App* cmd, std::function<void()> body) {
    cmd->callback([&ran, cmd, body = std::move(body)] {
      if (ran.insert(cmd).second) body();
    });
  };
  auto add_config = [](CLI::App* cmd) { cmd->configurable(true); };

  ExtractOpts ex;
  CLI::App* extract = app.add_subcommand("extract", "Extract planar views from an ODI image");
  add_config(extract);
  extract->add_option("--input", ex.input, "Equirectangular image (.png or .fmap)")->required();
  extract->add_option("--image-id", ex.image_id, "Image id (default: input stem)");
  extract->add_option("--interval", ex.interval, "Viewing-direction interval in degrees")
      ->capture_default_str();
  extract->add_option("--fov", ex.fov, "View field of view in degrees")->capture_default_str();
  extract->add_option("--view-side", ex.view_side, "Extracted view side in pixels")
      ->capture_default_str();
  extract->add_option("--jobs", ex.jobs, "Worker threads")->capture_default_str();
  extract->add_option("--out-dir", ex.out_dir, "Output directory")->capture_default_str();
  once(extract, [&] { run_extract(ex, extract); });

  PredictOpts pr;
  CLI::App* predict = app.add_subcommand("predict", "Estimate an ODI saliency map");
  add_config(predict);
  predict->add_option("--input", pr.input, "Equirectangular image (.png or .fmap)")->required();
  predict->add_option("--image-id", pr.image_id, "Image id (default: input stem)");
  predict->add_option("--backend", pr.backend, "constant | spectral | file:<manifest>")
      ->capture_default_str();
  predict->add_option("--prior", pr.prior, "none | a:<bias map> | b:<bias dir>")
      ->capture_default_str();
  predict->add_option("--interval", pr.interval, "Viewing-direction interval in degrees")
      ->capture_default_str();
  predict->add_option("--fov", pr.fov, "View field of view in degrees")->capture_default_str();
  predict->add_option("--view-side", pr.view_side, "Extracted view side in pixels")
      ->capture_default_str();
  predict->add_option("--sigma", pr.sigma, "Gaussian blur sigma in pixels")
      ->capture_default_str();
  predict->add_flag("--nearest", pr.nearest, "Integrate with nearest-neighbor sampling");
  predict->add_flag("--emit-heatmap", pr.emit_heatmap, "Also write a colorized heatmap PNG");
  predict->add_option("--jobs", pr.jobs, "Worker threads")->capture_default_str();
  predict->add_option("--out-dir", pr.out_dir, "Output directory")->capture_default_str();
  once(predict, [&] { run_predict(pr, predict); });

  FitBiasOpts fb;
  CLI::App* fit = app.add_subcommand("fit-bias", "Fit prior distributions from training data");
  add_config(fit);
  fit->add_option("--manifest", fb.manifest, "Dataset manifest")->required();
  fit->add_option("--method", fb.method, "a (average equator bias) | b (learned latitude biases)")
      ->capture_default_str();
  fit->add_option("--interval", fb.interval, "Viewing-direction interval in degrees")
      ->capture_default_str();
  fit->add_option("--fov", fb.fov, "View field of view in degrees")->capture_default_str();
  fit->add_option("--view-side", fb.view_side, "View side during fitting")->capture_default_str();
  fit->add_option("--bias-resolution", fb.bias_resolution, "Coarse bias grid side")
      ->capture_default_str();
  fit->add_option("--lr", fb.lr, "Gradient-descent learning rate")->capture_default_str();
  fit->add_option("--iterations", fb.iterations, "Gradient-descent iterations")
      ->capture_default_str();
  fit->add_option("--loss", fb.loss, "kl | mse")->capture_default_str();
  fit->add_option("--fit-sigma", fb.fit_sigma, "Pipeline blur sigma during fitting")
      ->capture_default_str();
  fit->add_option("--gt-sigma", fb.gt_sigma,
                  "Blur for ground truth built from fixations (-1: 24px at height 800, scaled)")
      ->capture_default_str();
  fit->add_option("--fit-backend", fb.fit_backend, "constant | spectral")->capture_default_str();
  fit->add_option("--out-dir", fb.out_dir, "Output directory")->capture_default_str();
  once(fit, [&] { run_fit_bias(fb, fit); });

  EvaluateOpts ev;
  CLI::App* evaluate = app.add_subcommand("evaluate", "Score a predicted map against ground truth");
  add_config(evaluate);
  evaluate->add_option("--pred", ev.pred, "Predicted map")->required();
  evaluate->add_option("--gt", ev.gt, "Ground-truth map")->required();
  evaluate->add_option("--fixations", ev.fixations, "Fixation CSV")->required();
  evaluate->add_option("--name", ev.name, "Row name in the report")->capture_default_str();
  evaluate->add_option("--out-dir", ev.out_dir, "Output directory")->capture_default_str();
  once(evaluate, [&] { run_evaluate(ev, evaluate); });

  SweepBlurOpts sb;
  CLI::App* sweep_b = app.add_subcommand("sweep-blur", "Select the best blur size by mean a");
  add_config(sweep_b);
  sweep_b->add_option("--manifest", sb.manifest, "Dataset manifest")->required();
  sweep_b->add_option("--backend", sb.backend, "constant | spectral | file:<manifest>")
      ->capture_default_str();
  sweep_b->add_option("--prior", sb.prior, "none | a:<bias map> | b:<bias dir>")
      ->capture_default_str();
  sweep_b->add_option("--split", sb.split, "all | train | val")->capture_default_str();
  sweep_b->add_option("--sigmas", sb.sigmas, "Comma-separated sigma list (must include 0)")
      ->capture_default_str();
  sweep_b->add_option("--interval", sb.interval, "Viewing-direction interval in degrees")
      ->capture_default_str();
  sweep_b->add_option("--fov", sb.fov, "View field of view in degrees")->capture_default_str();
  sweep_b->add_option("--view-side", sb.view_side, "Extracted view side in pixels")
      ->capture_default_str();
  sweep_b->add_option("--gt-sigma", sb.gt_sigma,
                      "Blur for ground truth built from fixations (-1: scaled default)")
      ->capture_default_str();
  sweep_b->add_option("--jobs", sb.jobs, "Worker threads")->capture_default_str();
  sweep_b->add_option("--out-dir", sb.out_dir, "Output directory")->capture_default_str();
  once(sweep_b, [&] { run_sweep_blur(sb, sweep_b); });

  SweepIntervalOpts si;
  CLI::App* sweep_i =
      app.add_subcommand("sweep-interval", "Compare viewing-direction intervals");
  add_config(sweep_i);
  sweep_i->add_option("--manifest", si.manifest, "Dataset manifest")->required();
  sweep_i->add_option("--backend", si.backend, "constant | spectral | file:<manifest>")
      ->capture_default_str();
  sweep_i->add_option("--prior", si.prior, "none | a:<bias map>")->capture_default_str();
  sweep_i->add_option("--split", si.split, "all | train | val")->capture_default_str();
  sweep_i->add_option("--intervals", si.intervals, "Comma-separated interval list in degrees")
      ->capture_default_str();
  sweep_i->add_option("--fov", si.fov, "View field of view in degrees")->capture_default_str();
  sweep_i->add_option("--sigma", si.sigma, "Gaussian blur sigma in pixels")
      ->capture_default_str();
  sweep_i->add_option("--view-side", si.view_side, "Extracted view side in pixels")
      ->capture_default_str();
  sweep_i->add_option("--gt-sigma", si.gt_sigma,
                      "Blur for ground truth built from fixations (-1: scaled default)")
      ->capture_default_str();
  sweep_i->add_option("--jobs", si.jobs, "Worker threads")->capture_default_str();
  sweep_i->add_option("--out-dir", si.out_dir, "Output directory")->capture_default_str();
  once(sweep_i, [&] { run_sweep_interval(si, sweep_i); });

  MakeGtOpts mg;
  CLI::App* make_gt = app.add_subcommand("make-gt", "Build a ground-truth map from fixations");
  add_config(make_gt);
  make_gt->add_option("--fixations", mg.fixations, "Fixation CSV")->required();
  make_gt->add_option("--width", mg.width, "Map width in pixels")->capture_default_str();
  make_gt->add_option("--height", mg.height, "Map height in pixels")->capture_default_str();
  make_gt->add_option("--sigma", mg.sigma, "Gaussian blur sigma in pixels")
      ->capture_default_str();
  make_gt->add_option("--name", mg.name, "Output map name")->capture_default_str();
  make_gt->add_option("--out-dir", mg.out_dir, "Output directory")->capture_default_str();
  once(make_gt, [&] { run_make_gt(mg, make_gt); });

  GenSyntheticOpts gs;
  CLI::App* gen = app.add_subcommand("gen-synthetic", "Generate a seeded synthetic dataset");
  add_config(gen);
  gen->add_option("--n-images", gs.n_images, "Number of images")->capture_default_str();
  gen->add_option("--width", gs.width, "Image width in pixels")->capture_default_str();
  gen->add_option("--height", gs.height, "Image height in pixels")->capture_default_str();
  gen->add_option("--prior-sigma-phi", gs.prior_sigma_phi, "Latitude prior sigma in radians")
      ->capture_default_str();
  gen->add_option("--n-blobs", gs.n_blobs, "Intensity blobs per image (0 = flat)")
      ->capture_default_str();
  gen->add_option("--n-fixations", gs.n_fixations, "Fixations per image")->capture_default_str();
  gen->add_option("--seed", gs.seed, "RNG seed")->capture_default_str();
  gen->add_option("--gt-sigma", gs.gt_sigma,
                  "Ground-truth blur sigma (-1: 24px at height 800, scaled)")
      ->capture_default_str();
  gen->add_option("--out-dir", gs.out_dir, "Output directory")->capture_default_str();
  once(gen, [&] { run_gen_synthetic(gs, gen); });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);  // 0
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);  // 0
  } catch (const CLI::ParseError& e) {
    app.exit(e);  // prints the offending flag and usage
    return 1;
  } catch (const InvalidArgumentError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ParseError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const RangeError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InvalidFovError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InvalidIntervalError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const BiasShapeMismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const ShapeMismatchError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
