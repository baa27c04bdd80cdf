#pragma once

// Discrimination and rate estimators for (possibly weighted) validation
// samples, plus percentile bootstrap intervals.

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include <nlohmann/json_fwd.hpp>

namespace sgs::metrics {

struct EvalRecord {
  std::uint8_t truth = 0;
  double score = 0.0;
  double weight = 1.0;  // inverse inclusion probability
};

std::vector<EvalRecord> make_records(std::span<const std::uint8_t> truth,
                                     std::span<const double> scores,
                                     std::span<const double> weights = {});

// Midrank counts a tied case/control pair as 1/2; Strict counts it as 0.
enum class TieMode { Midrank, Strict };

// Fraction of case/control pairs ordered correctly. O(n log n).
double auc_wilcoxon(std::span<const EvalRecord> records, TieMode ties = TieMode::Midrank);
double auc_wilcoxon(std::span<const std::uint8_t> truth, std::span<const double> scores,
                    TieMode ties = TieMode::Midrank);

// Pairwise weighted concordance sum_ij w_i w_j [...] / sum_ij w_i w_j over
// case i, control j. Equal weights give exactly auc_wilcoxon.
double auc_ipw(std::span<const EvalRecord> records, TieMode ties = TieMode::Midrank);

enum class RateKind { Sensitivity, Specificity, Prevalence };

// Weighted proportions: sensitivity = P(score >= threshold | case),
// specificity = P(score < threshold | control), prevalence = sum w y / sum w
// (threshold unused).
double ipw_rate(std::span<const EvalRecord> records, RateKind kind, double threshold = 0.5);

// Trapezoidal AUC of a binary predictor: (sens + spec) / 2.
double auc_binary_predictor(double sensitivity, double specificity);

// Type-7 (linear interpolation) sample quantile, q in [0, 1].
double quantile(std::vector<double> values, double q);

struct Interval {
  double estimate = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  int resamples = 0;
};

using Statistic = std::function<double(std::span<const EvalRecord>)>;

// Percentile bootstrap. Resamples on which the statistic throws
// UndefinedMetric are redrawn, at most 10 times each.
Interval bootstrap_ci(const Statistic& statistic, std::span<const EvalRecord> records,
                      int resamples = 1000, double level = 0.95, std::uint64_t seed = 0);

struct EvaluationReport {
  double auc = 0.0;
  double auc_ipw = 0.0;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double prevalence_ipw = 0.0;
  double threshold = 0.5;
  Interval auc_ci;
  Interval auc_ipw_ci;
  int resamples = 0;
  std::uint64_t seed = 0;
};

// resamples == 0 skips the intervals.
EvaluationReport evaluate(std::span<const EvalRecord> records, double threshold,
                          int resamples, double level, std::uint64_t seed,
                          TieMode ties = TieMode::Midrank);

nlohmann::json to_json(const EvaluationReport& report);

}  // namespace sgs::metrics
