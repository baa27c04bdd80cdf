#pragma once

// Closed-form calculators for surrogate-guided sampling designs.
//
// Conventions: a binary surrogate Z has sensitivity P(Z=1|Y=1) and
// specificity P(Z=0|Y=0); the allocation ratio R is the surrogate-positive
// share of the abstraction sample, P(Z=1|S=1). All functions are pure.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>

namespace sgs::design {

struct SurrogateSpec {
  double sensitivity = 0.5;
  double specificity = 0.5;
};

struct PopulationSpec {
  double prevalence = 0.1;
  std::int64_t cohort_size = 1;
};

enum class DesignKind { SRS, SGS, ROS, InverseSGS };

std::string_view to_string(DesignKind kind);
DesignKind parse_design_kind(std::string_view text);

struct DesignSpec {
  DesignKind kind = DesignKind::SRS;
  double ratio = 0.5;  // ignored for SRS and ROS
  std::int64_t budget = 0;
};

void validate(const SurrogateSpec& z);
void validate(const PopulationSpec& pop);
void validate(const DesignSpec& design);

// Design-evaluation entry points reject specificity < 0.5; the negated
// surrogate is strictly more useful there.
void require_usable_specificity(const SurrogateSpec& z);

// Marginal surrogate-positive rate P(Z=1).
double p_z(const PopulationSpec& pop, const SurrogateSpec& z);

struct LikelihoodRatios {
  double positive = 0.0;  // +inf when specificity == 1
  double negative = 0.0;  // +inf when specificity == 0
  bool perfect_specificity = false;
};

LikelihoodRatios likelihood_ratios(const SurrogateSpec& z);

// P(Y=1|Z=1) and P(Y=1|Z=0).
struct StratumCaseRates {
  double surrogate_positive = 0.0;
  double surrogate_negative = 0.0;
};

StratumCaseRates stratum_case_rates(const PopulationSpec& pop,
                                    const SurrogateSpec& z);

// Case/control odds of an SGS sample relative to an SRS sample. The sample
// size does not enter the closed form, so it is not a parameter.
double o_ratio_exact(const PopulationSpec& pop, const SurrogateSpec& z,
                     double ratio);

// Rare-outcome limit: R * LR+ + (1 - R) * LR-.
double o_ratio_rare_approx(const SurrogateSpec& z, double ratio);

struct SurfaceCell {
  SurrogateSpec surrogate;
  double ratio = 0.0;
  double prevalence = 0.0;
  double o_ratio = 0.0;
};

std::vector<SurfaceCell> o_ratio_surface(std::span<const SurrogateSpec> grid,
                                         double ratio,
                                         const PopulationSpec& pop);

// Cartesian grid, inclusive of both ends (within half a step).
std::vector<SurrogateSpec> surrogate_grid(double sens_from, double sens_to,
                                          double sens_step, double spec_from,
                                          double spec_to, double spec_step);

// Header `sensitivity,specificity,R,prevalence,o_ratio`, 6-decimal fixed.
void write_surface_csv(std::ostream& out, std::span<const SurfaceCell> cells);

// Per-stratum inclusion probabilities pi(Z=1), pi(Z=0) of an SGS (or
// inverse-SGS) design with budget n over a cohort of size N.
struct SamplingProbabilities {
  double surrogate_positive = 0.0;
  double surrogate_negative = 0.0;
};

SamplingProbabilities sampling_probabilities(const DesignSpec& design,
                                             double p_z, std::int64_t cohort_size);

// Expected number of true cases in the abstraction sample.
double expected_cases(const DesignSpec& design, const PopulationSpec& pop,
                      const SurrogateSpec& z);

// SRS budget that yields the same expected case count.
double srs_equivalent_budget(double cases, double prevalence);

// Standard normal CDF (libm erfc; absolute error well below 1e-12).
double normal_cdf(double x);

double auc_binormal(double case_mean, double control_mean, double case_var,
                    double control_var);

// Bi-normal feature model with control mean fixed at zero and shared
// covariance; `bias` and `coefficient_covariance` describe the estimator.
struct BinormalParams {
  Eigen::VectorXd case_mean;
  Eigen::MatrixXd covariance;
  Eigen::VectorXd coefficients;
  Eigen::VectorXd bias;
  Eigen::MatrixXd coefficient_covariance;
};

struct AucIndex {
  double numerator = 0.0;    // (mu1' (beta + B))^2
  double denominator = 0.0;  // 2[(beta+B)' S (beta+B) + tr(V S)] + mu1' V mu1
  double separation = 0.0;   // numerator / denominator
  double auc = 0.0;          // Phi(sqrt(separation))
};

AucIndex auc_index(const BinormalParams& params);

// Convenience: the zero-bias, zero-variance parameter set for the LDA truth
// beta = Sigma^{-1} mu1.
BinormalParams lda_truth(const Eigen::VectorXd& case_mean,
                         const Eigen::MatrixXd& covariance);

}  // namespace sgs::design
