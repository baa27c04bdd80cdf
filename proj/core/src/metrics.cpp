#include "sgs/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "sgs/error.hpp"
#include "sgs/random.hpp"

namespace sgs::metrics {
namespace {

// Sweep over distinct score levels in ascending order. For each level the
// cases there are concordant with every control strictly below.
double concordance(std::span<const EvalRecord> records, TieMode ties, bool weighted) {
  std::vector<std::size_t> order(records.size());
  std::iota(order.begin(), order.end(), std::size_t{0});
  std::sort(order.begin(), order.end(), [&](std::size_t a, std::size_t b) {
    return records[a].score < records[b].score;
  });
  const double base = weighted && !records.empty() ? records[0].weight : 1.0;
  double controls_below = 0.0;
  double total_cases = 0.0;
  double numerator = 0.0;
  std::size_t i = 0;
  while (i < order.size()) {
    const double level = records[order[i]].score;
    double cases = 0.0;
    double controls = 0.0;
    for (; i < order.size() && records[order[i]].score == level; ++i) {
      const EvalRecord& r = records[order[i]];
      const double w = weighted ? r.weight / base : 1.0;
      (r.truth ? cases : controls) += w;
    }
    numerator += cases * controls_below;
    if (ties == TieMode::Midrank) numerator += 0.5 * cases * controls;
    controls_below += controls;
    total_cases += cases;
  }
  const double denominator = total_cases * controls_below;
  if (!(denominator > 0.0)) {
    throw UndefinedMetric("AUC needs at least one case and one control");
  }
  return numerator / denominator;
}

void check_records(std::span<const EvalRecord> records) {
  for (const EvalRecord& r : records) {
    if (r.truth > 1) throw InvalidArgument("truth must be 0 or 1");
    if (!std::isfinite(r.score)) throw InvalidArgument("scores must be finite");
    if (!(r.weight > 0.0) || !std::isfinite(r.weight)) {
      throw InvalidArgument("weights must be positive and finite");
    }
  }
}

}  // namespace

std::vector<EvalRecord> make_records(std::span<const std::uint8_t> truth,
                                     std::span<const double> scores,
                                     std::span<const double> weights) {
  if (truth.size() != scores.size() || (!weights.empty() && weights.size() != truth.size())) {
    throw InvalidArgument("truth, scores and weights must have equal length");
  }
  std::vector<EvalRecord> records(truth.size());
  for (std::size_t i = 0; i < truth.size(); ++i) {
    records[i] = {truth[i], scores[i], weights.empty() ? 1.0 : weights[i]};
  }
  return records;
}

double auc_wilcoxon(std::span<const EvalRecord> records, TieMode ties) {
  check_records(records);
  return concordance(records, ties, false);
}

double auc_wilcoxon(std::span<const std::uint8_t> truth, std::span<const double> scores,
                    TieMode ties) {
  const auto records = make_records(truth, scores);
  return auc_wilcoxon(records, ties);
}

double auc_ipw(std::span<const EvalRecord> records, TieMode ties) {
  check_records(records);
  return concordance(records, ties, true);
}

double ipw_rate(std::span<const EvalRecord> records, RateKind kind, double threshold) {
  check_records(records);
  double num = 0.0;
  double den = 0.0;
  for (const EvalRecord& r : records) {
    switch (kind) {
      case RateKind::Sensitivity:
        if (r.truth) {
          den += r.weight;
          if (r.score >= threshold) num += r.weight;
        }
        break;
      case RateKind::Specificity:
        if (!r.truth) {
          den += r.weight;
          if (r.score < threshold) num += r.weight;
        }
        break;
      case RateKind::Prevalence:
        den += r.weight;
        if (r.truth) num += r.weight;
        break;
    }
  }
  if (!(den > 0.0)) {
    throw UndefinedMetric(kind == RateKind::Sensitivity   ? "sensitivity needs a case"
                          : kind == RateKind::Specificity ? "specificity needs a control"
                                                          : "prevalence needs records");
  }
  return num / den;
}

double auc_binary_predictor(double sensitivity, double specificity) {
  if (!(sensitivity >= 0.0 && sensitivity <= 1.0 && specificity >= 0.0 &&
        specificity <= 1.0)) {
    throw InvalidArgument("sensitivity and specificity must lie in [0,1]");
  }
  return 0.5 * (sensitivity + specificity);
}

double quantile(std::vector<double> values, double q) {
  if (values.empty()) throw InvalidArgument("quantile of an empty set");
  std::sort(values.begin(), values.end());
  const double h = (static_cast<double>(values.size()) - 1.0) * q;
  const auto lo = static_cast<std::size_t>(std::floor(h));
  const std::size_t hi = std::min(lo + 1, values.size() - 1);
  return values[lo] + (h - static_cast<double>(lo)) * (values[hi] - values[lo]);
}

Interval bootstrap_ci(const Statistic& statistic, std::span<const EvalRecord> records,
                      int resamples, double level, std::uint64_t seed) {
  if (resamples < 1) throw InvalidArgument("bootstrap needs at least one resample");
  if (!(level > 0.0 && level < 1.0)) throw InvalidArgument("level must lie in (0,1)");
  if (records.empty()) throw InvalidArgument("bootstrap of an empty sample");
  constexpr int kRetries = 10;
  Interval out;
  out.estimate = statistic(records);
  out.resamples = resamples;
  std::vector<double> values;
  values.reserve(static_cast<std::size_t>(resamples));
  std::vector<EvalRecord> draw(records.size());
  for (int b = 0; b < resamples; ++b) {
    bool done = false;
    for (int attempt = 0; attempt <= kRetries && !done; ++attempt) {
      Rng rng = make_rng(seed, streams::kBootstrap,
                         static_cast<std::uint64_t>(b) * (kRetries + 1) +
                             static_cast<std::uint64_t>(attempt));
      for (EvalRecord& r : draw) r = records[uniform_index(rng, records.size())];
      try {
        values.push_back(statistic(draw));
        done = true;
      } catch (const UndefinedMetric&) {
      }
    }
    if (!done) {
      throw UndefinedMetric(fmt::format(
          "bootstrap resample {} undefined after {} redraws", b, kRetries));
    }
  }
  const double alpha = 1.0 - level;
  out.lower = quantile(values, alpha / 2.0);
  out.upper = quantile(values, 1.0 - alpha / 2.0);
  return out;
}

EvaluationReport evaluate(std::span<const EvalRecord> records, double threshold,
                          int resamples, double level, std::uint64_t seed, TieMode ties) {
  EvaluationReport rep;
  rep.threshold = threshold;
  rep.auc = auc_wilcoxon(records, ties);
  rep.auc_ipw = auc_ipw(records, ties);
  rep.sensitivity = ipw_rate(records, RateKind::Sensitivity, threshold);
  rep.specificity = ipw_rate(records, RateKind::Specificity, threshold);
  rep.prevalence_ipw = ipw_rate(records, RateKind::Prevalence);
  rep.resamples = resamples;
  rep.seed = seed;
  if (resamples > 0) {
    rep.auc_ci = bootstrap_ci(
        [ties](std::span<const EvalRecord> r) { return auc_wilcoxon(r, ties); }, records,
        resamples, level, seed);
    rep.auc_ipw_ci = bootstrap_ci(
        [ties](std::span<const EvalRecord> r) { return auc_ipw(r, ties); }, records,
        resamples, level, seed);
  }
  return rep;
}

nlohmann::json to_json(const EvaluationReport& r) {
  nlohmann::json j = {{"auc", r.auc},
                      {"auc_ipw", r.auc_ipw},
                      {"sens", r.sensitivity},
                      {"spec", r.specificity},
                      {"prevalence_ipw", r.prevalence_ipw},
                      {"threshold", r.threshold},
                      {"B", r.resamples},
                      {"seed", r.seed}};
  if (r.resamples > 0) {
    j["auc_ci"] = {r.auc_ci.lower, r.auc_ci.upper};
    j["auc_ipw_ci"] = {r.auc_ipw_ci.lower, r.auc_ipw_ci.upper};
  }
  return j;
}

}  // namespace sgs::metrics
