#include "cli.hpp"

#include <filesystem>
#include <iostream>
#include <optional>

#include "CLI11.hpp"
#include "ssmrpe/distance.hpp"
#include "ssmrpe/embed.hpp"
#include "ssmrpe/errors.hpp"
#include "ssmrpe/eval.hpp"
#include "ssmrpe/io.hpp"
#include "ssmrpe/synth.hpp"
#include "ssmrpe/wmf.hpp"

namespace ssmrpe::cli {
namespace {

namespace fs = std::filesystem;

bool any_given(const std::vector<CLI::Option*>& opts) {
  for (const auto* o : opts) {
    if (o->count() > 0) return true;
  }
  return false;
}

struct MethodArgs {
  std::string method = "ssmrpe";
  MethodConfig cfg;
  double scd_const = 0.0;
  std::vector<CLI::Option*> scd_opts;  // one per subcommand

  MethodConfig resolve() {
    cfg.method = parse_method(method);
    cfg.scd_const = any_given(scd_opts) ? std::optional<double>(scd_const) : std::nullopt;
    cfg.validate();
    return cfg;
  }
};

struct SplitArgs {
  std::size_t train_count = 20;
  double train_frac = 0.0;
  std::vector<CLI::Option*> frac_opts;
  SplitSpec spec;

  SplitSpec resolve() {
    if (any_given(frac_opts)) {
      spec.mode = SplitSpec::Mode::kFraction;
      spec.fraction = train_frac;
    } else {
      spec.mode = SplitSpec::Mode::kCount;
      spec.count = train_count;
    }
    spec.validate();
    return spec;
  }
};

void add_method_options(CLI::App& cmd, MethodArgs& m) {
  cmd.add_option("--method", m.method, "raw | pca | npe | ssmrpe")->capture_default_str();
  cmd.add_option("--w", m.cfg.w, "Odd spatial window size")->capture_default_str();
  cmd.add_option("--k", m.cfg.k, "Neighbor count")->capture_default_str();
  cmd.add_option("--d", m.cfg.d, "Embedding dimension")->capture_default_str();
  cmd.add_option("--gamma0", m.cfg.gamma0, "Weighted mean filter kernel constant")->capture_default_str();
  cmd.add_option("--eps", m.cfg.eps, "Gram regularizer, relative to trace/k")->capture_default_str();
  cmd.add_option("--ridge", m.cfg.ridge, "Pencil ridge, relative to trace(XX^T)/D")->capture_default_str();
  cmd.add_flag("--project-filtered", m.cfg.project_filtered, "Use filtered spectra for measures and projection");
  m.scd_opts.push_back(cmd.add_option("--scd-const", m.scd_const, "Replace coordinate distances by this constant"));
}

void add_split_options(CLI::App& cmd, SplitArgs& s, bool with_repeats) {
  auto* count = cmd.add_option("--train-count", s.train_count, "Training samples per class")->capture_default_str();
  auto* frac = cmd.add_option("--train-frac", s.train_frac, "Training fraction per class, rounded up");
  count->excludes(frac);
  s.frac_opts.push_back(frac);
  cmd.add_option("--seed", s.spec.seed, "Split seed")->capture_default_str();
  if (with_repeats) cmd.add_option("--repeats", s.spec.repeats, "Number of random splits")->capture_default_str();
}

void ensure_dir(const fs::path& dir) {
  if (!dir.empty()) fs::create_directories(dir);
}

std::vector<std::size_t> all_pixels(std::size_t n) {
  std::vector<std::size_t> out(n);
  for (std::size_t i = 0; i < n; ++i) out[i] = i;
  return out;
}

EmbeddingModel fit_model(const HyperCube& cube, const MethodConfig& cfg, std::span<const std::size_t> pixels) {
  const Eigen::MatrixXd data = cube.gather(pixels);
  switch (cfg.method) {
    case Method::kPca:
      return pca_fit(data, cfg.d);
    case Method::kNpe:
      return npe_fit(data, cfg.k, cfg.d, cfg.eps, cfg.ridge);
    case Method::kSsmrpe: {
      const SscdContext ctx(cube, FilterConfig{cfg.w, cfg.gamma0});
      return ssmrpe_fit(ctx, pixels, cfg.graph_options(), cfg.d, cfg.ridge);
    }
    case Method::kRaw:
      break;
  }
  throw ConfigError("embed needs a projection method (pca, npe or ssmrpe)");
}

void log_absent_classes(const MetricsReport& report, std::ostream& err) {
  for (const auto& row : report.classes) {
    if (row.test == 0) err << "note: class " << row.class_id << " has no test samples and is excluded from AA\n";
  }
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Spatial-spectral manifold reconstruction embedding for hyperspectral cubes"};
  app.require_subcommand(1);

  // synth
  SynthOptions synth_opts;
  std::string synth_cube;
  std::string synth_labels;
  auto* synth = app.add_subcommand("synth", "Generate the synthetic four-block benchmark scene");
  synth->add_option("--out", synth_cube, "Output cube file")->required();
  synth->add_option("--labels-out", synth_labels, "Output label file")->required();
  synth->add_option("--seed", synth_opts.seed, "Noise seed")->capture_default_str();
  synth->add_option("--size", synth_opts.size, "Raster side length")->capture_default_str();
  synth->add_option("--bands", synth_opts.bands, "Spectral bands")->capture_default_str();
  synth->add_option("--noise", synth_opts.noise_sigma, "Additive noise std")->capture_default_str();

  // filter
  FilterConfig filter_cfg;
  std::string filter_in;
  std::string filter_out;
  auto* filter = app.add_subcommand("filter", "Apply the weighted mean filter to a cube");
  filter->add_option("--in", filter_in, "Input cube file")->required();
  filter->add_option("--out", filter_out, "Output cube file")->required();
  filter->add_option("--w", filter_cfg.w, "Odd spatial window size")->capture_default_str();
  filter->add_option("--gamma0", filter_cfg.gamma0, "Kernel constant")->capture_default_str();

  // embed / classify / evaluate / sweep share data and method options
  std::string cube_path;
  std::string labels_path;
  std::string out_dir = ".";
  MethodArgs method_args;
  SplitArgs split_args;

  auto* embed = app.add_subcommand("embed", "Fit a projection and embed every pixel");
  embed->add_option("--in", cube_path, "Input cube file")->required();
  embed->add_option("--labels", labels_path, "Label file; when given the fit uses the trial-0 training split");
  embed->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
  add_method_options(*embed, method_args);
  add_split_options(*embed, split_args, false);

  std::size_t trial = 0;
  auto* classify = app.add_subcommand("classify", "Run one split: fit, project, 1-NN classify");
  classify->add_option("--in", cube_path, "Input cube file")->required();
  classify->add_option("--labels", labels_path, "Label file")->required();
  classify->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
  classify->add_option("--trial", trial, "Trial index mixed into the seed")->capture_default_str();
  add_method_options(*classify, method_args);
  add_split_options(*classify, split_args, false);

  auto* evaluate = app.add_subcommand("evaluate", "Repeated-split evaluation with OA/AA/Kappa");
  evaluate->add_option("--in", cube_path, "Input cube file")->required();
  evaluate->add_option("--labels", labels_path, "Label file")->required();
  evaluate->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
  add_method_options(*evaluate, method_args);
  add_split_options(*evaluate, split_args, true);

  std::vector<std::size_t> w_values{1, 3, 5};
  std::vector<std::size_t> k_values{5, 10, 20};
  auto* sweep_cmd = app.add_subcommand("sweep", "Overall accuracy over a grid of window sizes and neighbor counts");
  sweep_cmd->add_option("--in", cube_path, "Input cube file")->required();
  sweep_cmd->add_option("--labels", labels_path, "Label file")->required();
  sweep_cmd->add_option("--out-dir", out_dir, "Output directory")->capture_default_str();
  sweep_cmd->add_option("--w-values", w_values, "Window sizes")->delimiter(',')->capture_default_str();
  sweep_cmd->add_option("--k-values", k_values, "Neighbor counts")->delimiter(',')->capture_default_str();
  add_method_options(*sweep_cmd, method_args);
  add_split_options(*sweep_cmd, split_args, true);

  std::vector<const char*> argv;
  argv.reserve(args.size());
  for (const auto& a : args) argv.push_back(a.c_str());
  try {
    app.parse(static_cast<int>(argv.size()), argv.data());
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*synth) {
      auto [cube, labels] = generate_synthetic(synth_opts);
      io::save_cube(cube, synth_cube);
      io::save_labels(labels, synth_labels);
      out << "wrote " << cube.height() << "x" << cube.width() << "x" << cube.bands() << " cube\n";
    } else if (*filter) {
      filter_cfg.validate();
      const HyperCube cube = io::load_cube(filter_in);
      io::save_cube(filter_cube(cube, filter_cfg), filter_out);
    } else if (*embed) {
      const MethodConfig cfg = method_args.resolve();
      const HyperCube cube = io::load_cube(cube_path);
      std::vector<std::size_t> fit_pixels;
      if (!labels_path.empty()) {
        const LabelRaster labels = io::load_labels(labels_path);
        if (labels.height() != cube.height() || labels.width() != cube.width()) {
          throw ShapeError("label raster does not match the cube");
        }
        fit_pixels = split_per_class(labels, split_args.resolve(), 0).train;
      } else {
        fit_pixels = all_pixels(cube.pixel_count());
      }
      const EmbeddingModel model = fit_model(cube, cfg, fit_pixels);
      const auto pixels = all_pixels(cube.pixel_count());
      ensure_dir(out_dir);
      io::write_file_atomic(fs::path(out_dir) / "projection.csv", io::projection_csv(model));
      io::write_file_atomic(fs::path(out_dir) / "embedded.csv",
                            io::features_csv(project(model, cube.gather(pixels)), pixels));
    } else if (*classify) {
      const MethodConfig cfg = method_args.resolve();
      const SplitSpec spec = split_args.resolve();
      const HyperCube cube = io::load_cube(cube_path);
      const LabelRaster labels = io::load_labels(labels_path);
      const TrialResult result = run_trial(cube, labels, cfg, spec, trial);
      const LabelRaster map = prediction_map(labels, result);
      ensure_dir(out_dir);
      io::save_labels(map, fs::path(out_dir) / "predictions.hsl");
      io::render_class_map(map, io::default_palette(), fs::path(out_dir) / "classmap.ppm");
      out << "OA " << io::format_percent(result.metrics.oa) << " AA " << io::format_percent(result.metrics.aa)
          << " Kappa " << io::format_percent(100.0 * result.metrics.kappa) << '\n';
    } else if (*evaluate) {
      const MethodConfig cfg = method_args.resolve();
      const SplitSpec spec = split_args.resolve();
      const HyperCube cube = io::load_cube(cube_path);
      const LabelRaster labels = io::load_labels(labels_path);
      const MetricsReport report = run_experiment(cube, labels, cfg, spec);
      log_absent_classes(report, err);
      const TrialResult first = run_trial(cube, labels, cfg, spec, 0);
      ensure_dir(out_dir);
      io::export_metrics(report, fs::path(out_dir) / "metrics.csv");
      io::render_class_map(prediction_map(labels, first), io::default_palette(), fs::path(out_dir) / "classmap.ppm");
      out << "OA " << io::format_percent(report.oa.mean) << " +- " << io::format_percent(report.oa.std) << '\n';
    } else if (*sweep_cmd) {
      const MethodConfig cfg = method_args.resolve();
      const SplitSpec spec = split_args.resolve();
      const HyperCube cube = io::load_cube(cube_path);
      const LabelRaster labels = io::load_labels(labels_path);
      const auto cells = sweep(cube, labels, cfg, w_values, k_values, spec);
      ensure_dir(out_dir);
      io::write_file_atomic(fs::path(out_dir) / "sweep.csv", io::sweep_csv(cells));
    }
  } catch (const ConfigError& e) {
    err << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const NumericalError& e) {
    err << "numerical failure: " << e.what() << '\n';
    return kExitNumerical;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return kExitData;
  }
  return kExitOk;
}

}  // namespace ssmrpe::cli
