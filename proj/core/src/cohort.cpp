#include "sgs/cohort.hpp"

#include <algorithm>
#include <array>
#include <limits>
#include <random>
#include <cmath>
#include <cstdlib>
#include <istream>
#include <numeric>
#include <ostream>
#include <sstream>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "sgs/error.hpp"
#include "sgs/random.hpp"

namespace sgs::cohort {
namespace {

constexpr std::size_t kBlock = 4096;
constexpr int kMaxCalibrationRounds = 100;
constexpr double kCharacteristicTolerance = 0.01;

double expit(double x) { return 1.0 / (1.0 + std::exp(-x)); }

std::size_t block_count(std::size_t n) { return (n + kBlock - 1) / kBlock; }

// Monotone increasing f on [lo, hi]; returns x with |f(x)| <= tol.
template <class F>
double bisect(F&& f, double lo, double hi, double tol, const char* what) {
  double f_lo = f(lo);
  double f_hi = f(hi);
  if (f_lo > 0.0 || f_hi < 0.0) {
    throw CalibrationFailure(fmt::format(
        "{}: target not bracketed by [{}, {}] (f = {:.6f}, {:.6f})", what, lo, hi,
        f_lo, f_hi));
  }
  double mid = 0.5 * (lo + hi);
  for (int iter = 0; iter < 200; ++iter) {
    mid = 0.5 * (lo + hi);
    const double f_mid = f(mid);
    if (std::abs(f_mid) <= tol) break;
    if (f_mid < 0.0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return mid;
}

std::vector<double> predictor(const Eigen::MatrixXd& x, const Eigen::VectorXd& beta) {
  std::vector<double> eta(static_cast<std::size_t>(x.rows()), 0.0);
  if (x.cols() > 0) Eigen::Map<Eigen::VectorXd>(eta.data(), x.rows()) = x * beta;
  return eta;
}

double mean_of(std::span<const std::uint8_t> v) {
  if (v.empty()) return 0.0;
  return static_cast<double>(std::count(v.begin(), v.end(), std::uint8_t{1})) /
         static_cast<double>(v.size());
}

}  // namespace

std::size_t Cohort::surrogate_index(std::string_view name) const {
  for (std::size_t k = 0; k < surrogate_names.size(); ++k) {
    if (surrogate_names[k] == name) return k;
  }
  throw InvalidArgument(fmt::format("cohort has no surrogate column '{}'", name));
}

std::span<const std::uint8_t> Cohort::surrogate(std::string_view name) const {
  return surrogates[surrogate_index(name)];
}

void Cohort::check() const {
  const std::size_t n = outcomes.size();
  if (static_cast<std::size_t>(features.rows()) != n || ids.size() != n) {
    throw InvalidArgument("cohort: feature/outcome/id lengths disagree");
  }
  if (surrogates.size() != surrogate_names.size()) {
    throw InvalidArgument("cohort: surrogate names and columns disagree");
  }
  auto binary = [](std::span<const std::uint8_t> v) {
    return std::all_of(v.begin(), v.end(), [](std::uint8_t b) { return b <= 1; });
  };
  if (!binary(outcomes)) throw InvalidArgument("cohort: outcomes must be 0/1");
  for (const Binary& z : surrogates) {
    if (z.size() != n) throw InvalidArgument("cohort: surrogate length mismatch");
    if (!binary(z)) throw InvalidArgument("cohort: surrogates must be 0/1");
  }
}

std::string_view to_string(SurrogateMode mode) {
  return mode == SurrogateMode::ConditionalZGivenY ? "conditional_z_given_y"
                                                   : "paper_y_given_z";
}

SurrogateMode parse_surrogate_mode(std::string_view text) {
  if (text == "conditional_z_given_y" || text == "conditional")
    return SurrogateMode::ConditionalZGivenY;
  if (text == "paper_y_given_z" || text == "paper") return SurrogateMode::PaperYGivenZ;
  throw InvalidArgument(fmt::format("unknown surrogate mode '{}'", text));
}

void validate(const CohortConfig& config) {
  if (config.cohort_size < 1) throw InvalidArgument("cohort size must be positive");
  if (config.features < 0) throw InvalidArgument("feature count must be >= 0");
  if (!(config.prevalence > 0.0 && config.prevalence < 1.0)) {
    throw InvalidArgument("prevalence target must lie in (0,1)");
  }
  if (!(config.feature_freq_mean > 0.0)) {
    throw InvalidArgument("feature frequency mean must be positive");
  }
  if (config.features < kFrequentFeatures + kSignalFeatures) {
    throw InvalidArgument(fmt::format(
        "at least {} features are needed for the coefficient pattern (got {})",
        kFrequentFeatures + kSignalFeatures, config.features));
  }
  for (const SurrogateTarget& t : config.surrogates) design::validate(t.spec);
}

RealizedSurrogate realized_characteristics(std::string name,
                                           std::span<const std::uint8_t> z,
                                           std::span<const std::uint8_t> y) {
  std::array<std::array<double, 2>, 2> counts{};  // [y][z]
  for (std::size_t i = 0; i < y.size(); ++i) counts[y[i]][z[i]] += 1.0;
  RealizedSurrogate r;
  r.name = std::move(name);
  const double cases = counts[1][0] + counts[1][1];
  const double controls = counts[0][0] + counts[0][1];
  r.sensitivity = cases > 0 ? counts[1][1] / cases : 0.0;
  r.specificity = controls > 0 ? counts[0][0] / controls : 0.0;
  r.positive_rate = y.empty() ? 0.0 : (counts[0][1] + counts[1][1]) / (cases + controls);
  return r;
}

FeatureDraw generate_features(const CohortConfig& config) {
  const auto n = static_cast<Eigen::Index>(config.cohort_size);
  const Eigen::Index p = config.features;
  FeatureDraw draw;
  draw.frequencies.resize(p);
  Rng freq_rng = make_rng(config.seed, streams::kFeatureFrequencies);
  std::exponential_distribution<double> exponential(1.0 / config.feature_freq_mean);
  for (Eigen::Index j = 0; j < p; ++j) {
    draw.frequencies[j] =
        std::clamp(exponential(freq_rng), kMinFeatureFrequency, kMaxFeatureFrequency);
  }
  draw.features.resize(n, p);
  for (Eigen::Index j = 0; j < p; ++j) {
    Rng rng = make_rng(config.seed, streams::kFeatureColumn, static_cast<std::uint64_t>(j));
    const double pj = draw.frequencies[j];
    double* col = draw.features.col(j).data();
    for (Eigen::Index i = 0; i < n; ++i) col[i] = uniform01(rng) < pj ? 1.0 : 0.0;
  }
  return draw;
}

Eigen::VectorXd assign_coefficients(const Eigen::VectorXd& frequencies,
                                    double prevalence) {
  const Eigen::Index p = frequencies.size();
  if (p < kFrequentFeatures + kSignalFeatures) {
    throw InvalidArgument(fmt::format(
        "assign_coefficients needs at least {} features (got {})",
        kFrequentFeatures + kSignalFeatures, p));
  }
  std::vector<Eigen::Index> order(static_cast<std::size_t>(p));
  std::iota(order.begin(), order.end(), Eigen::Index{0});
  std::stable_sort(order.begin(), order.end(), [&](Eigen::Index a, Eigen::Index b) {
    return frequencies[a] > frequencies[b];
  });

  Eigen::VectorXd beta = Eigen::VectorXd::Zero(p);
  constexpr std::array<double, 3> pattern{-0.75, -0.5, 0.25};
  for (int k = 0; k < kFrequentFeatures; ++k) {
    beta[order[static_cast<std::size_t>(k)]] = pattern[static_cast<std::size_t>(k) % 3];
  }

  std::vector<Eigen::Index> rest(order.begin() + kFrequentFeatures, order.end());
  std::sort(rest.begin(), rest.end());
  std::stable_sort(rest.begin(), rest.end(), [&](Eigen::Index a, Eigen::Index b) {
    return std::abs(frequencies[a] - prevalence) < std::abs(frequencies[b] - prevalence);
  });
  for (int k = 0; k < kSignalFeatures; ++k) beta[rest[static_cast<std::size_t>(k)]] = 1.0;
  return beta;
}

double calibrate_intercept(std::span<const double> linear_predictor,
                           double prevalence, double tolerance) {
  if (!(prevalence > 0.0 && prevalence < 1.0)) {
    throw InvalidArgument("prevalence target must lie in (0,1)");
  }
  if (linear_predictor.empty()) return std::log(prevalence / (1.0 - prevalence));
  const double inv_n = 1.0 / static_cast<double>(linear_predictor.size());
  auto gap = [&](double b0) {
    double sum = 0.0;
    for (double eta : linear_predictor) sum += expit(b0 + eta);
    return sum * inv_n - prevalence;
  };
  return bisect(gap, -40.0, 40.0, tolerance, "intercept calibration");
}

double calibrate_intercept(const Eigen::VectorXd& coefficients,
                           const Eigen::MatrixXd& features, double prevalence) {
  if (coefficients.isZero(0.0)) return std::log(prevalence / (1.0 - prevalence));
  const std::vector<double> eta = predictor(features, coefficients);
  return calibrate_intercept(eta, prevalence);
}

Binary generate_outcomes(std::span<const double> linear_predictor, double intercept,
                         std::uint64_t seed) {
  const std::size_t n = linear_predictor.size();
  Binary y(n);
  for (std::size_t b = 0; b < block_count(n); ++b) {
    Rng rng = make_rng(seed, streams::kOutcomeBlock, b);
    const std::size_t end = std::min(n, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      y[i] = uniform01(rng) < expit(intercept + linear_predictor[i]) ? 1 : 0;
    }
  }
  return y;
}

Binary draw_conditional_surrogate(std::span<const std::uint8_t> outcomes,
                                  const design::SurrogateSpec& spec,
                                  std::uint64_t seed, std::size_t surrogate_index) {
  design::validate(spec);
  const std::size_t n = outcomes.size();
  Binary z(n);
  for (std::size_t b = 0; b < block_count(n); ++b) {
    Rng rng = make_rng(seed, streams::kSurrogateBlock + surrogate_index, b);
    const std::size_t end = std::min(n, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      const double u = uniform01(rng);
      z[i] = outcomes[i] ? (u < spec.sensitivity ? 1 : 0)
                         : (u < 1.0 - spec.specificity ? 1 : 0);
    }
  }
  return z;
}

namespace {

Binary draw_marginal_surrogate(std::size_t n, double rate, std::uint64_t seed,
                               std::size_t surrogate_index) {
  Binary z(n);
  for (std::size_t b = 0; b < block_count(n); ++b) {
    Rng rng = make_rng(seed, streams::kSurrogateBlock + surrogate_index, b);
    const std::size_t end = std::min(n, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) z[i] = uniform01(rng) < rate ? 1 : 0;
  }
  return z;
}

// Y drawn after Z: calibrate (intercept, surrogate coefficients) so the
// expected operating characteristics hit the targets, then draw Y and retry
// until the realized ones are within tolerance.
std::vector<RealizedSurrogate> attach_paper_mode(GeneratedCohort& g,
                                                 std::span<const double> eta_x) {
  const CohortConfig& cfg = g.config;
  const std::size_t n = eta_x.size();
  const std::size_t k_count = cfg.surrogates.size();
  const design::PopulationSpec pop{cfg.prevalence, cfg.cohort_size};

  std::vector<double> targets(k_count);
  g.cohort.surrogates.clear();
  g.cohort.surrogate_names.clear();
  for (std::size_t k = 0; k < k_count; ++k) {
    const auto& t = cfg.surrogates[k];
    const double marginal = design::p_z(pop, t.spec);
    g.cohort.surrogates.push_back(draw_marginal_surrogate(n, marginal, cfg.seed, k));
    g.cohort.surrogate_names.push_back(t.name);
    // Target case rate within the surrogate-positive stratum.
    targets[k] = t.spec.sensitivity * cfg.prevalence / marginal;
  }

  std::vector<double> coef(k_count, 2.0);
  std::vector<double> total(n);
  auto rebuild = [&] {
    for (std::size_t i = 0; i < n; ++i) {
      double v = eta_x[i];
      for (std::size_t k = 0; k < k_count; ++k) v += coef[k] * g.cohort.surrogates[k][i];
      total[i] = v;
    }
  };

  double best_deviation = std::numeric_limits<double>::infinity();
  std::vector<RealizedSurrogate> best;
  for (int round = 0; round < kMaxCalibrationRounds; ++round) {
    rebuild();
    double b0 = calibrate_intercept(total, cfg.prevalence);
    for (std::size_t k = 0; k < k_count; ++k) {
      const Binary& zk = g.cohort.surrogates[k];
      const double positives = static_cast<double>(std::count(zk.begin(), zk.end(), 1));
      if (positives == 0.0) break;
      auto gap = [&](double c) {
        double sum = 0.0;
        for (std::size_t i = 0; i < n; ++i) {
          if (zk[i]) sum += expit(b0 + total[i] + (c - coef[k]));
        }
        return sum / positives - targets[k];
      };
      try {
        coef[k] = bisect(gap, -20.0, 20.0, 1e-6, "surrogate coefficient calibration");
      } catch (const CalibrationFailure&) {
        // Keep the previous value; the retry loop reports the best attempt.
      }
      rebuild();
    }
    b0 = calibrate_intercept(total, cfg.prevalence);

    const Binary y = generate_outcomes(total, b0, derive_seed(cfg.seed, 0x9e, round));
    std::vector<RealizedSurrogate> realized;
    double deviation = 0.0;
    for (std::size_t k = 0; k < k_count; ++k) {
      RealizedSurrogate r = realized_characteristics(cfg.surrogates[k].name,
                                                     g.cohort.surrogates[k], y);
      r.coefficient = coef[k];
      deviation = std::max({deviation,
                            std::abs(r.sensitivity - cfg.surrogates[k].spec.sensitivity),
                            std::abs(r.specificity - cfg.surrogates[k].spec.specificity)});
      realized.push_back(std::move(r));
    }
    if (deviation < best_deviation) {
      best_deviation = deviation;
      best = realized;
    }
    if (deviation <= kCharacteristicTolerance) {
      g.cohort.outcomes = y;
      g.intercept = b0;
      return realized;
    }
  }

  std::string summary;
  for (const RealizedSurrogate& r : best) {
    summary += fmt::format(" {}(sens={:.4f}, spec={:.4f}, coef={:.4f})", r.name,
                           r.sensitivity, r.specificity, r.coefficient);
  }
  throw CalibrationFailure(fmt::format(
      "surrogate calibration did not reach +/-{} within {} rounds; best:{}",
      kCharacteristicTolerance, kMaxCalibrationRounds, summary));
}

}  // namespace

std::vector<RealizedSurrogate> attach_surrogates(GeneratedCohort& g,
                                                 std::span<const double> feature_predictor) {
  if (g.config.mode == SurrogateMode::PaperYGivenZ) {
    return attach_paper_mode(g, feature_predictor);
  }
  const Binary& y = g.cohort.outcomes;
  if (y.empty() && g.cohort.size() == 0 && g.config.cohort_size > 0) {
    throw InvalidArgument("conditional surrogates need outcomes first");
  }
  g.cohort.surrogates.clear();
  g.cohort.surrogate_names.clear();
  std::vector<RealizedSurrogate> realized;
  for (std::size_t k = 0; k < g.config.surrogates.size(); ++k) {
    const SurrogateTarget& t = g.config.surrogates[k];
    g.cohort.surrogates.push_back(draw_conditional_surrogate(y, t.spec, g.config.seed, k));
    g.cohort.surrogate_names.push_back(t.name);
    realized.push_back(realized_characteristics(t.name, g.cohort.surrogates.back(), y));
  }
  return realized;
}

GeneratedCohort generate_cohort(const CohortConfig& config) {
  validate(config);
  GeneratedCohort g;
  g.config = config;
  FeatureDraw draw = generate_features(config);
  g.frequencies = std::move(draw.frequencies);
  g.cohort.features = std::move(draw.features);
  g.coefficients = assign_coefficients(g.frequencies, config.prevalence);
  const std::vector<double> eta = predictor(g.cohort.features, g.coefficients);

  g.cohort.ids.resize(static_cast<std::size_t>(config.cohort_size));
  std::iota(g.cohort.ids.begin(), g.cohort.ids.end(), std::int64_t{0});

  if (config.mode == SurrogateMode::ConditionalZGivenY) {
    g.intercept = calibrate_intercept(eta, config.prevalence);
    g.cohort.outcomes = generate_outcomes(eta, g.intercept, config.seed);
  }
  g.realized = attach_surrogates(g, eta);
  g.realized_prevalence = mean_of(g.cohort.outcomes);
  return g;
}

GeneratedCohort generate_binormal_cohort(const BinormalCohortConfig& config) {
  const Eigen::Index p = config.case_mean.size();
  if (config.covariance.rows() != p || config.covariance.cols() != p) {
    throw InvalidArgument("binormal cohort: covariance shape must match case mean");
  }
  if (!(config.prevalence > 0.0 && config.prevalence < 1.0)) {
    throw InvalidArgument("prevalence must lie in (0,1)");
  }
  Eigen::LLT<Eigen::MatrixXd> llt(config.covariance);
  if (llt.info() != Eigen::Success) {
    throw InvalidArgument("binormal cohort: covariance must be positive definite");
  }
  const Eigen::MatrixXd lower = llt.matrixL();
  const auto n = static_cast<std::size_t>(config.cohort_size);

  GeneratedCohort g;
  g.config.cohort_size = config.cohort_size;
  g.config.features = static_cast<int>(p);
  g.config.prevalence = config.prevalence;
  g.config.surrogates = config.surrogates;
  g.config.seed = config.seed;
  g.cohort.features.resize(static_cast<Eigen::Index>(n), p);
  g.cohort.outcomes.resize(n);
  g.cohort.ids.resize(n);
  std::iota(g.cohort.ids.begin(), g.cohort.ids.end(), std::int64_t{0});

  Eigen::VectorXd noise(p);
  for (std::size_t b = 0; b < block_count(n); ++b) {
    Rng rng = make_rng(config.seed, streams::kBinormalBlock, b);
    std::normal_distribution<double> normal;
    const std::size_t end = std::min(n, (b + 1) * kBlock);
    for (std::size_t i = b * kBlock; i < end; ++i) {
      const bool is_case = uniform01(rng) < config.prevalence;
      for (Eigen::Index j = 0; j < p; ++j) noise[j] = normal(rng);
      Eigen::VectorXd row = lower * noise;
      if (is_case) row += config.case_mean;
      g.cohort.features.row(static_cast<Eigen::Index>(i)) = row.transpose();
      g.cohort.outcomes[i] = is_case ? 1 : 0;
    }
  }

  const design::BinormalParams truth = design::lda_truth(config.case_mean, config.covariance);
  g.coefficients = truth.coefficients;
  g.intercept = std::log(config.prevalence / (1.0 - config.prevalence)) -
                0.5 * config.case_mean.dot(truth.coefficients);
  g.frequencies = Eigen::VectorXd::Zero(p);
  g.realized = attach_surrogates(g, {});
  g.realized_prevalence = mean_of(g.cohort.outcomes);
  return g;
}

void write_cohort_csv(std::ostream& out, const Cohort& cohort) {
  cohort.check();
  out << "id,y";
  for (const std::string& name : cohort.surrogate_names) out << ',' << name;
  for (Eigen::Index j = 0; j < cohort.features.cols(); ++j) out << ",x" << (j + 1);
  out << '\n';
  std::string line;
  for (std::size_t i = 0; i < cohort.size(); ++i) {
    line = fmt::format("{},{}", cohort.ids[i], cohort.outcomes[i]);
    for (const Binary& z : cohort.surrogates) line += z[i] ? ",1" : ",0";
    for (Eigen::Index j = 0; j < cohort.features.cols(); ++j) {
      line += fmt::format(",{}", cohort.features(static_cast<Eigen::Index>(i), j));
    }
    line += '\n';
    out << line;
  }
}

namespace {

std::vector<std::string> split_csv(const std::string& line) {
  std::vector<std::string> cells;
  std::string cell;
  std::istringstream ss(line);
  while (std::getline(ss, cell, ',')) {
    if (!cell.empty() && cell.back() == '\r') cell.pop_back();
    cells.push_back(cell);
  }
  return cells;
}

double parse_double(const std::string& s) {
  char* end = nullptr;
  const double v = std::strtod(s.c_str(), &end);
  if (end == s.c_str() || *end != '\0') {
    throw InvalidArgument(fmt::format("cohort csv: '{}' is not a number", s));
  }
  return v;
}

std::uint8_t parse_binary(const std::string& s) {
  if (s == "0") return 0;
  if (s == "1") return 1;
  throw InvalidArgument(fmt::format("cohort csv: expected 0/1, got '{}'", s));
}

}  // namespace

Cohort read_cohort_csv(std::istream& in) {
  std::string line;
  if (!std::getline(in, line)) throw InvalidArgument("cohort csv: empty input");
  const std::vector<std::string> header = split_csv(line);
  if (header.size() < 2 || header[0] != "id" || header[1] != "y") {
    throw InvalidArgument("cohort csv: header must start with id,y");
  }
  std::size_t first_feature = header.size();
  for (std::size_t c = 2; c < header.size(); ++c) {
    if (header[c] == "x1") {
      first_feature = c;
      break;
    }
  }
  Cohort cohort;
  cohort.surrogate_names.assign(header.begin() + 2,
                                header.begin() + static_cast<std::ptrdiff_t>(first_feature));
  cohort.surrogates.resize(cohort.surrogate_names.size());
  const std::size_t p = header.size() - first_feature;

  std::vector<std::vector<double>> rows;
  while (std::getline(in, line)) {
    if (line.empty() || line == "\r") continue;
    const std::vector<std::string> cells = split_csv(line);
    if (cells.size() != header.size()) {
      throw InvalidArgument(fmt::format("cohort csv: row {} has {} cells, expected {}",
                                        rows.size() + 1, cells.size(), header.size()));
    }
    cohort.ids.push_back(std::stoll(cells[0]));
    cohort.outcomes.push_back(parse_binary(cells[1]));
    for (std::size_t k = 0; k < cohort.surrogates.size(); ++k) {
      cohort.surrogates[k].push_back(parse_binary(cells[2 + k]));
    }
    std::vector<double> row(p);
    for (std::size_t j = 0; j < p; ++j) row[j] = parse_double(cells[first_feature + j]);
    rows.push_back(std::move(row));
  }
  cohort.features.resize(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(p));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < p; ++j) {
      cohort.features(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
    }
  }
  cohort.check();
  return cohort;
}

nlohmann::json to_json(const CohortConfig& config) {
  nlohmann::json surrogates = nlohmann::json::array();
  for (const SurrogateTarget& t : config.surrogates) {
    surrogates.push_back({{"name", t.name},
                          {"sensitivity", t.spec.sensitivity},
                          {"specificity", t.spec.specificity}});
  }
  return {{"cohort_size", config.cohort_size},
          {"features", config.features},
          {"prevalence", config.prevalence},
          {"feature_freq_mean", config.feature_freq_mean},
          {"surrogates", surrogates},
          {"surrogate_mode", to_string(config.mode)},
          {"seed", config.seed}};
}

CohortConfig cohort_config_from_json(const nlohmann::json& j) {
  CohortConfig c;
  c.cohort_size = j.value("cohort_size", c.cohort_size);
  c.features = j.value("features", c.features);
  c.prevalence = j.value("prevalence", c.prevalence);
  c.feature_freq_mean = j.value("feature_freq_mean", c.feature_freq_mean);
  c.seed = j.value("seed", c.seed);
  if (j.contains("surrogate_mode")) {
    c.mode = parse_surrogate_mode(j.at("surrogate_mode").get<std::string>());
  }
  if (j.contains("surrogates")) {
    c.surrogates.clear();
    for (const auto& s : j.at("surrogates")) {
      c.surrogates.push_back({s.at("name").get<std::string>(),
                              {s.at("sensitivity").get<double>(),
                               s.at("specificity").get<double>()}});
    }
  }
  return c;
}

nlohmann::json metadata_json(const GeneratedCohort& g) {
  nlohmann::json realized = nlohmann::json::array();
  for (const RealizedSurrogate& r : g.realized) {
    realized.push_back({{"name", r.name},
                        {"sensitivity", r.sensitivity},
                        {"specificity", r.specificity},
                        {"positive_rate", r.positive_rate},
                        {"coefficient", r.coefficient}});
  }
  std::vector<double> beta(g.coefficients.data(), g.coefficients.data() + g.coefficients.size());
  std::vector<double> freqs(g.frequencies.data(), g.frequencies.data() + g.frequencies.size());
  return {{"config", to_json(g.config)},
          {"intercept", g.intercept},
          {"coefficients", beta},
          {"feature_frequencies", freqs},
          {"realized_prevalence", g.realized_prevalence},
          {"realized_surrogates", realized}};
}

}  // namespace sgs::cohort
