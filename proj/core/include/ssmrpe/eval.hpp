#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <random>
#include <span>
#include <vector>

#include "ssmrpe/cube.hpp"
#include "ssmrpe/embed.hpp"

namespace ssmrpe {

/// Portable seeded generator: std::mt19937_64 (whose output sequence is fixed
/// by the standard) with unbiased rejection sampling for bounded integers, so
/// shuffles reproduce across standard libraries.
class SplitRng {
 public:
  explicit SplitRng(std::uint64_t seed) : engine_(seed) {}
  /// Uniform integer in [0, bound). bound must be > 0.
  std::uint64_t below(std::uint64_t bound);
  /// Uniform double in [0, 1) from the top 53 bits.
  double uniform();
  /// Standard normal via Box-Muller.
  double normal();
  template <typename T>
  void shuffle(std::vector<T>& values) {
    for (std::size_t i = values.size(); i > 1; --i) {
      std::swap(values[i - 1], values[below(i)]);
    }
  }

 private:
  std::mt19937_64 engine_;
  std::optional<double> spare_normal_;
};

struct SplitSpec {
  enum class Mode { kCount, kFraction };
  Mode mode = Mode::kCount;
  std::size_t count = 10;   // training samples per class (kCount)
  double fraction = 0.01;   // training share per class, rounded up, min 1 (kFraction)
  std::uint64_t seed = 0;
  std::size_t repeats = 5;

  void validate() const;
};

/// Train/test partition of labeled pixels (flat indices, ascending). The
/// per-class vectors are indexed by class id, entry 0 unused.
struct Split {
  std::vector<std::size_t> train;
  std::vector<std::size_t> test;
  std::vector<std::size_t> train_per_class;
  std::vector<std::size_t> test_per_class;
};

/// Random per-class split for trial `trial`; the generator is seeded with
/// seed + trial. Unlabeled pixels are excluded. Throws ConfigError naming the
/// first class too small to leave a test sample.
Split split_per_class(const LabelRaster& labels, const SplitSpec& spec, std::size_t trial);

/// 1-NN by Euclidean distance; ties go to the lower training index.
std::vector<std::uint16_t> nn_classify(const FeatureMatrix& train, std::span<const std::uint16_t> train_labels,
                                       const FeatureMatrix& test);

/// Metrics of one prediction run. Accuracies in percent, kappa as a fraction.
struct ClassificationMetrics {
  std::size_t classes = 0;
  // confusion[t][p]: samples of true class t predicted as p, ids 1..classes.
  std::vector<std::vector<std::size_t>> confusion;
  std::vector<double> per_class;  // recall per class id (percent); entry 0 unused
  std::vector<bool> present;      // class id occurs in the truth
  double oa = 0.0;
  double aa = 0.0;
  double kappa = 0.0;
};

/// OA, AA over classes present in `truth`, and Cohen's kappa.
ClassificationMetrics classification_metrics(std::span<const std::uint16_t> truth,
                                             std::span<const std::uint16_t> predicted, std::size_t classes);

struct Stat {
  double mean = 0.0;
  double std = 0.0;  // population std over repeats
};

Stat summarize(std::span<const double> values);

struct ClassRow {
  std::size_t class_id = 0;
  std::size_t train = 0;
  std::size_t test = 0;
  Stat accuracy;
};

/// Aggregate over repeats, all values in percent (kappa scaled by 100).
struct MetricsReport {
  std::vector<ClassRow> classes;
  Stat oa;
  Stat aa;
  Stat kappa;
  std::size_t repeats = 0;
};

struct MethodConfig {
  Method method = Method::kSsmrpe;
  std::size_t w = 13;
  std::size_t k = 20;
  std::size_t d = 30;
  double gamma0 = 0.2;
  double eps = 1e-3;
  double ridge = 1e-6;  // relative to trace(X X^T)/D
  bool project_filtered = false;
  std::optional<double> scd_const;

  void validate() const;
  GraphOptions graph_options() const;
};

struct TrialResult {
  Split split;
  std::vector<std::uint16_t> predictions;  // aligned with split.test
  ClassificationMetrics metrics;
};

/// Fits and evaluates one trial. Only the training pixels' spectra (and, for
/// SSMRPE, the unlabeled image context around them) reach the fit.
TrialResult run_trial(const HyperCube& cube, const LabelRaster& labels, const MethodConfig& method,
                      const SplitSpec& spec, std::size_t trial);

MetricsReport run_experiment(const HyperCube& cube, const LabelRaster& labels, const MethodConfig& method,
                             const SplitSpec& spec);

/// Labels of every labeled pixel for a finished trial: training pixels keep
/// their truth, test pixels get their predictions, unlabeled stay 0.
LabelRaster prediction_map(const LabelRaster& labels, const TrialResult& trial);

struct SweepCell {
  std::size_t w = 0;
  std::size_t k = 0;
  MetricsReport report;
};

/// run_experiment for every (w, k), w-major order.
std::vector<SweepCell> sweep(const HyperCube& cube, const LabelRaster& labels, const MethodConfig& base,
                             std::span<const std::size_t> w_values, std::span<const std::size_t> k_values,
                             const SplitSpec& spec);

}  // namespace ssmrpe
