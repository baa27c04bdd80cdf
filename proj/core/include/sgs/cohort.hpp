#pragma once

// Synthetic cohorts for learning-curve experiments: long-tailed binary
// features, logistic outcomes and binary enrichment surrogates.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

#include "sgs/design_math.hpp"

namespace sgs::cohort {

using Binary = std::vector<std::uint8_t>;

struct Cohort {
  Eigen::MatrixXd features;  // N x p, column j aligned with coefficient j
  Binary outcomes;
  std::vector<Binary> surrogates;
  std::vector<std::string> surrogate_names;
  std::vector<std::int64_t> ids;

  std::size_t size() const { return outcomes.size(); }
  std::size_t surrogate_index(std::string_view name) const;
  std::span<const std::uint8_t> surrogate(std::string_view name) const;
  // Throws InvalidArgument if lengths disagree or values are not 0/1.
  void check() const;
};

enum class SurrogateMode {
  ConditionalZGivenY,  // Z drawn from Y with the target operating characteristics
  PaperYGivenZ,        // Z drawn first, Y | X, Z1, Z2 logistic
};

std::string_view to_string(SurrogateMode mode);
SurrogateMode parse_surrogate_mode(std::string_view text);

struct SurrogateTarget {
  std::string name;
  design::SurrogateSpec spec;
};

struct CohortConfig {
  std::int64_t cohort_size = 100000;
  int features = 250;
  double prevalence = 0.05;
  double feature_freq_mean = 1.0 / 6.0;
  std::vector<SurrogateTarget> surrogates = {{"z1", {0.40, 0.95}},
                                             {"z2", {0.67, 0.66}}};
  SurrogateMode mode = SurrogateMode::ConditionalZGivenY;
  std::uint64_t seed = 1;
};

void validate(const CohortConfig& config);

struct RealizedSurrogate {
  std::string name;
  double sensitivity = 0.0;
  double specificity = 0.0;
  double positive_rate = 0.0;
  double coefficient = 0.0;  // logistic coefficient (PaperYGivenZ only)
};

RealizedSurrogate realized_characteristics(std::string name,
                                           std::span<const std::uint8_t> z,
                                           std::span<const std::uint8_t> y);

struct GeneratedCohort {
  Cohort cohort;
  CohortConfig config;
  Eigen::VectorXd frequencies;
  Eigen::VectorXd coefficients;
  double intercept = 0.0;
  double realized_prevalence = 0.0;
  std::vector<RealizedSurrogate> realized;
};

struct FeatureDraw {
  Eigen::MatrixXd features;
  Eigen::VectorXd frequencies;
};

inline constexpr double kMinFeatureFrequency = 0.001;
inline constexpr double kMaxFeatureFrequency = 0.999;

// Column j ~ Bernoulli(p_j), p_j ~ Exponential(mean) clamped to
// [0.001, 0.999]. Each column draws from its own substream.
FeatureDraw generate_features(const CohortConfig& config);

// 20 most frequent columns get the cycled pattern (-0.75, -0.5, 0.25); the
// 10 remaining columns whose frequency is closest to `prevalence` get 1.
// Ties are broken by column index. Requires at least 30 columns.
Eigen::VectorXd assign_coefficients(const Eigen::VectorXd& frequencies,
                                    double prevalence);

inline constexpr int kFrequentFeatures = 20;
inline constexpr int kSignalFeatures = 10;

// Intercept b0 with mean(expit(b0 + eta_i)) within `tolerance` of target.
double calibrate_intercept(std::span<const double> linear_predictor,
                           double prevalence, double tolerance = 1e-6);
double calibrate_intercept(const Eigen::VectorXd& coefficients,
                           const Eigen::MatrixXd& features, double prevalence);

// Independent Bernoulli(expit(intercept + eta_i)) draws.
Binary generate_outcomes(std::span<const double> linear_predictor, double intercept,
                         std::uint64_t seed);

// Z | Y with P(Z=1|Y=1) = sens and P(Z=1|Y=0) = 1 - spec.
Binary draw_conditional_surrogate(std::span<const std::uint8_t> outcomes,
                                  const design::SurrogateSpec& spec,
                                  std::uint64_t seed, std::size_t surrogate_index);

// Attaches every configured surrogate. In ConditionalZGivenY mode outcomes
// must already exist. In PaperYGivenZ mode this also (re)generates the
// outcomes, since Y depends on Z.
std::vector<RealizedSurrogate> attach_surrogates(
    GeneratedCohort& generated, std::span<const double> feature_predictor);

GeneratedCohort generate_cohort(const CohortConfig& config);

// Continuous bi-normal cohort: Y ~ Bernoulli(prevalence), X | Y ~
// N(Y * case_mean, covariance); surrogates drawn conditionally on Y.
struct BinormalCohortConfig {
  std::int64_t cohort_size = 50000;
  double prevalence = 0.1;
  Eigen::VectorXd case_mean;
  Eigen::MatrixXd covariance;
  std::vector<SurrogateTarget> surrogates = {{"z1", {0.40, 0.95}}};
  std::uint64_t seed = 1;
};

GeneratedCohort generate_binormal_cohort(const BinormalCohortConfig& config);

// CSV with header id,y,<surrogate names...>,x1..xp. Feature values are
// printed with enough digits to round-trip.
void write_cohort_csv(std::ostream& out, const Cohort& cohort);
Cohort read_cohort_csv(std::istream& in);

nlohmann::json to_json(const CohortConfig& config);
CohortConfig cohort_config_from_json(const nlohmann::json& j);
nlohmann::json metadata_json(const GeneratedCohort& generated);

}  // namespace sgs::cohort
