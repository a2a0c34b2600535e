#include "ssmrpe/eval.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <numbers>
#include <string>

#include "ssmrpe/distance.hpp"
#include "ssmrpe/errors.hpp"
#include "ssmrpe/parallel.hpp"

namespace ssmrpe {

std::uint64_t SplitRng::below(std::uint64_t bound) {
  if (bound == 0) throw ConfigError("SplitRng::below needs a positive bound");
  // Reject the partial block at the top of the range.
  const std::uint64_t limit = std::numeric_limits<std::uint64_t>::max() - std::numeric_limits<std::uint64_t>::max() % bound;
  std::uint64_t draw = engine_();
  while (draw >= limit) draw = engine_();
  return draw % bound;
}

double SplitRng::uniform() { return static_cast<double>(engine_() >> 11) * 0x1.0p-53; }

double SplitRng::normal() {
  if (spare_normal_) {
    const double v = *spare_normal_;
    spare_normal_.reset();
    return v;
  }
  double u1 = uniform();
  while (u1 <= 0.0) u1 = uniform();
  const double u2 = uniform();
  const double radius = std::sqrt(-2.0 * std::log(u1));
  const double angle = 2.0 * std::numbers::pi * u2;
  spare_normal_ = radius * std::sin(angle);
  return radius * std::cos(angle);
}

void SplitSpec::validate() const {
  if (mode == Mode::kCount && count == 0) throw ConfigError("training count per class must be >= 1");
  if (mode == Mode::kFraction && !(fraction > 0.0 && fraction < 1.0)) {
    throw ConfigError("training fraction must lie in (0, 1)");
  }
  if (repeats == 0) throw ConfigError("repeats must be >= 1");
}

Split split_per_class(const LabelRaster& labels, const SplitSpec& spec, std::size_t trial) {
  spec.validate();
  const std::size_t classes = labels.classes();
  std::vector<std::vector<std::size_t>> members(classes + 1);
  for (std::size_t i = 0; i < labels.pixel_count(); ++i) {
    if (const auto label = labels.at(i); label != 0) members[label].push_back(i);
  }

  Split split;
  split.train_per_class.assign(classes + 1, 0);
  split.test_per_class.assign(classes + 1, 0);
  SplitRng rng(spec.seed + trial);
  for (std::size_t c = 1; c <= classes; ++c) {
    auto& pool = members[c];
    if (pool.empty()) continue;
    std::size_t take = 0;
    if (spec.mode == SplitSpec::Mode::kCount) {
      take = spec.count;
      if (pool.size() <= take) {
        throw ConfigError("class " + std::to_string(c) + " has " + std::to_string(pool.size()) +
                          " samples, needs more than " + std::to_string(take));
      }
    } else {
      if (pool.size() < 2) throw ConfigError("class " + std::to_string(c) + " has fewer than 2 samples");
      take = std::max<std::size_t>(1, static_cast<std::size_t>(std::ceil(spec.fraction * static_cast<double>(pool.size()))));
      take = std::min(take, pool.size() - 1);
    }
    rng.shuffle(pool);
    split.train.insert(split.train.end(), pool.begin(), pool.begin() + static_cast<std::ptrdiff_t>(take));
    split.test.insert(split.test.end(), pool.begin() + static_cast<std::ptrdiff_t>(take), pool.end());
    split.train_per_class[c] = take;
    split.test_per_class[c] = pool.size() - take;
  }
  std::sort(split.train.begin(), split.train.end());
  std::sort(split.test.begin(), split.test.end());
  return split;
}

std::vector<std::uint16_t> nn_classify(const FeatureMatrix& train, std::span<const std::uint16_t> train_labels,
                                       const FeatureMatrix& test) {
  if (train.count() == 0) throw ConfigError("1-NN needs at least one training sample");
  if (train_labels.size() != train.count()) throw ShapeError("training labels and features differ in count");
  if (test.count() > 0 && test.dim() != train.dim()) throw ShapeError("training and test features differ in dimension");

  std::vector<std::uint16_t> predicted(test.count());
  parallel_for(test.count(), [&](std::size_t t) {
    const auto query = test.values.col(static_cast<Eigen::Index>(t));
    double best = std::numeric_limits<double>::infinity();
    std::size_t best_index = 0;
    for (std::size_t j = 0; j < train.count(); ++j) {
      const double d2 = (train.values.col(static_cast<Eigen::Index>(j)) - query).squaredNorm();
      if (d2 < best) {
        best = d2;
        best_index = j;
      }
    }
    predicted[t] = train_labels[best_index];
  });
  return predicted;
}

ClassificationMetrics classification_metrics(std::span<const std::uint16_t> truth,
                                             std::span<const std::uint16_t> predicted, std::size_t classes) {
  if (truth.size() != predicted.size()) throw ShapeError("truth and prediction lengths differ");
  if (truth.empty()) throw ConfigError("metrics need at least one sample");
  if (classes == 0) throw ConfigError("metrics need at least one class");

  ClassificationMetrics m;
  m.classes = classes;
  m.confusion.assign(classes + 1, std::vector<std::size_t>(classes + 1, 0));
  for (std::size_t i = 0; i < truth.size(); ++i) {
    if (truth[i] == 0 || truth[i] > classes || predicted[i] == 0 || predicted[i] > classes) {
      throw ConfigError("label outside [1, " + std::to_string(classes) + "] at position " + std::to_string(i));
    }
    ++m.confusion[truth[i]][predicted[i]];
  }

  const auto total = static_cast<double>(truth.size());
  std::size_t correct = 0;
  double chance = 0.0;
  double recall_sum = 0.0;
  std::size_t present_count = 0;
  m.per_class.assign(classes + 1, 0.0);
  m.present.assign(classes + 1, false);
  for (std::size_t c = 1; c <= classes; ++c) {
    std::size_t row = 0;
    std::size_t col = 0;
    for (std::size_t o = 1; o <= classes; ++o) {
      row += m.confusion[c][o];
      col += m.confusion[o][c];
    }
    correct += m.confusion[c][c];
    chance += (static_cast<double>(row) / total) * (static_cast<double>(col) / total);
    if (row > 0) {
      m.present[c] = true;
      m.per_class[c] = 100.0 * static_cast<double>(m.confusion[c][c]) / static_cast<double>(row);
      recall_sum += m.per_class[c];
      ++present_count;
    }
  }
  const double agreement = static_cast<double>(correct) / total;
  m.oa = 100.0 * agreement;
  m.aa = recall_sum / static_cast<double>(present_count);
  // Chance agreement of 1 means truth and prediction are one single class.
  m.kappa = chance < 1.0 ? (agreement - chance) / (1.0 - chance) : (agreement == 1.0 ? 1.0 : 0.0);
  return m;
}

Stat summarize(std::span<const double> values) {
  if (values.empty()) return {};
  double mean = 0.0;
  for (double v : values) mean += v;
  mean /= static_cast<double>(values.size());
  double var = 0.0;
  for (double v : values) var += (v - mean) * (v - mean);
  var /= static_cast<double>(values.size());
  return {mean, std::sqrt(var)};
}

void MethodConfig::validate() const {
  FilterConfig{w, gamma0}.validate();
  if (method != Method::kRaw && d == 0) throw ConfigError("embedding dimension d must be >= 1");
  if ((method == Method::kNpe || method == Method::kSsmrpe) && k == 0) throw ConfigError("k must be >= 1");
  if (!(eps >= 0.0) || !std::isfinite(eps)) throw ConfigError("eps must be finite and nonnegative");
  if (!(ridge >= 0.0) || !std::isfinite(ridge)) throw ConfigError("ridge must be finite and nonnegative");
  if (scd_const && !(*scd_const > 0.0)) throw ConfigError("constant coordinate distance must be positive");
}

GraphOptions MethodConfig::graph_options() const {
  GraphOptions opts;
  opts.k = k;
  opts.eps = eps;
  opts.scd_const = scd_const;
  opts.filtered_measures = project_filtered;
  return opts;
}

namespace {

std::vector<std::uint16_t> labels_at(const LabelRaster& labels, std::span<const std::size_t> pixels) {
  std::vector<std::uint16_t> out;
  out.reserve(pixels.size());
  for (std::size_t i : pixels) out.push_back(labels.at(i));
  return out;
}

bool needs_context(const MethodConfig& method) {
  return method.method == Method::kSsmrpe || method.project_filtered;
}

// Fit sees the training pixel indices only; labels are not passed in.
std::pair<FeatureMatrix, FeatureMatrix> embed_split(const HyperCube& cube, const SscdContext* ctx,
                                                    const MethodConfig& method, const Split& split) {
  const HyperCube& source = (method.project_filtered && ctx != nullptr) ? ctx->filtered() : cube;
  const Eigen::MatrixXd train = source.gather(split.train);
  const Eigen::MatrixXd test = source.gather(split.test);
  EmbeddingModel model;
  switch (method.method) {
    case Method::kRaw:
      return {FeatureMatrix{train}, FeatureMatrix{test}};
    case Method::kPca:
      model = pca_fit(train, method.d);
      break;
    case Method::kNpe:
      model = npe_fit(train, method.k, method.d, method.eps, method.ridge);
      break;
    case Method::kSsmrpe:
      model = ssmrpe_fit(*ctx, split.train, method.graph_options(), method.d, method.ridge);
      break;
  }
  return {project(model, train), project(model, test)};
}

TrialResult evaluate_trial(const HyperCube& cube, const SscdContext* ctx, const LabelRaster& labels,
                           const MethodConfig& method, const SplitSpec& spec, std::size_t trial) {
  TrialResult result;
  result.split = split_per_class(labels, spec, trial);
  auto [train_features, test_features] = embed_split(cube, ctx, method, result.split);
  const auto train_labels = labels_at(labels, result.split.train);
  result.predictions = nn_classify(train_features, train_labels, test_features);
  const auto truth = labels_at(labels, result.split.test);
  result.metrics = classification_metrics(truth, result.predictions, labels.classes());
  return result;
}

void check_pair(const HyperCube& cube, const LabelRaster& labels) {
  if (cube.height() != labels.height() || cube.width() != labels.width()) {
    throw ShapeError("label raster " + std::to_string(labels.height()) + "x" + std::to_string(labels.width()) +
                     " does not match cube " + std::to_string(cube.height()) + "x" + std::to_string(cube.width()));
  }
}

std::unique_ptr<SscdContext> make_context(const HyperCube& cube, const MethodConfig& method) {
  if (!needs_context(method)) return nullptr;
  return std::make_unique<SscdContext>(cube, FilterConfig{method.w, method.gamma0});
}

}  // namespace

TrialResult run_trial(const HyperCube& cube, const LabelRaster& labels, const MethodConfig& method,
                      const SplitSpec& spec, std::size_t trial) {
  check_pair(cube, labels);
  method.validate();
  const auto ctx = make_context(cube, method);
  return evaluate_trial(cube, ctx.get(), labels, method, spec, trial);
}

MetricsReport run_experiment(const HyperCube& cube, const LabelRaster& labels, const MethodConfig& method,
                             const SplitSpec& spec) {
  check_pair(cube, labels);
  method.validate();
  spec.validate();
  const auto ctx = make_context(cube, method);

  const std::size_t classes = labels.classes();
  std::vector<double> oa;
  std::vector<double> aa;
  std::vector<double> kappa;
  std::vector<std::vector<double>> per_class(classes + 1);
  MetricsReport report;
  report.repeats = spec.repeats;
  for (std::size_t trial = 0; trial < spec.repeats; ++trial) {
    const TrialResult result = evaluate_trial(cube, ctx.get(), labels, method, spec, trial);
    oa.push_back(result.metrics.oa);
    aa.push_back(result.metrics.aa);
    kappa.push_back(100.0 * result.metrics.kappa);
    for (std::size_t c = 1; c <= classes; ++c) {
      if (result.metrics.present[c]) per_class[c].push_back(result.metrics.per_class[c]);
    }
    if (trial == 0) {
      for (std::size_t c = 1; c <= classes; ++c) {
        if (result.split.train_per_class[c] + result.split.test_per_class[c] == 0) continue;
        report.classes.push_back({c, result.split.train_per_class[c], result.split.test_per_class[c], {}});
      }
    }
  }
  for (auto& row : report.classes) row.accuracy = summarize(per_class[row.class_id]);
  report.oa = summarize(oa);
  report.aa = summarize(aa);
  report.kappa = summarize(kappa);
  return report;
}

LabelRaster prediction_map(const LabelRaster& labels, const TrialResult& trial) {
  if (trial.predictions.size() != trial.split.test.size()) throw ShapeError("predictions do not match the test set");
  std::vector<std::uint16_t> out(labels.pixel_count(), 0);
  for (std::size_t i : trial.split.train) out.at(i) = labels.at(i);
  for (std::size_t t = 0; t < trial.split.test.size(); ++t) out.at(trial.split.test[t]) = trial.predictions[t];
  return {labels.height(), labels.width(), labels.classes(), std::move(out)};
}

std::vector<SweepCell> sweep(const HyperCube& cube, const LabelRaster& labels, const MethodConfig& base,
                             std::span<const std::size_t> w_values, std::span<const std::size_t> k_values,
                             const SplitSpec& spec) {
  if (w_values.empty() || k_values.empty()) throw ConfigError("sweep grids must be nonempty");
  std::vector<SweepCell> cells;
  cells.reserve(w_values.size() * k_values.size());
  for (std::size_t w : w_values) {
    for (std::size_t k : k_values) {
      MethodConfig cfg = base;
      cfg.w = w;
      cfg.k = k;
      cells.push_back({w, k, run_experiment(cube, labels, cfg, spec)});
    }
  }
  return cells;
}

}  // namespace ssmrpe
