#pragma once

// Penalized logistic regression (lasso and ridge) with per-coefficient
// penalty factors, cross-validated lambda selection on AUC, and the
// inverse-information covariance of the fitted coefficients.
//
// Objective on the internal (standardized) scale:
//   sum_i [log(1 + exp(eta_i)) - y_i eta_i] + lambda * sum_j f_j * pen(b_j)
// with pen(b) = |b| for L1 and b^2 / 2 for L2. The intercept is never
// penalized. Reported coefficients are on the original feature scale.

#include <cstdint>
#include <span>
#include <string>
#include <string_view>
#include <vector>

#include <Eigen/Dense>
#include <nlohmann/json_fwd.hpp>

namespace sgs::pglm {

enum class Norm { L1, L2 };

std::string_view to_string(Norm norm);
Norm parse_norm(std::string_view text);

struct PenaltySpec {
  Norm norm = Norm::L1;
  double lambda = 0.0;
  Eigen::VectorXd factors;  // empty means all ones
};

struct FitOptions {
  bool standardize = true;
  double tolerance = 1e-7;  // max coefficient change between iterations
  int max_iterations = 10000;
  // When positive, L1 fits also stop once no coordinate's Newton step moves
  // the objective by more than this fraction of the null deviance (glmnet's
  // rule, weighted by curvature). Zero keeps only the coefficient criterion.
  double deviance_tolerance = 0.0;
};

// Settings used for the many fits inside cross-validation.
inline FitOptions path_fit_options() {
  FitOptions o;
  o.deviance_tolerance = 1e-7;
  return o;
}

// x_std = (x - center) / scale. scale == 0 marks a constant column, whose
// coefficient is fixed at zero.
struct Standardization {
  Eigen::VectorXd center;
  Eigen::VectorXd scale;
};

struct FitResult {
  double intercept = 0.0;
  Eigen::VectorXd coefficients;
  PenaltySpec penalty;
  bool converged = false;
  int iterations = 0;
  double objective = 0.0;
  std::vector<double> objective_trace;  // one entry per outer iteration
  Standardization standardization;
  std::vector<std::string> feature_names;

  Eigen::Index nonzero() const;
};

FitResult fit(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y,
              const PenaltySpec& penalty, const FitOptions& options = {});

Eigen::VectorXd predict_linear(const FitResult& model, const Eigen::MatrixXd& x);
Eigen::VectorXd predict_probabilities(const FitResult& model, const Eigen::MatrixXd& x);

// Unpenalized negative log-likelihood and its gradient with respect to
// (intercept, beta), on the scale of `x` as given.
double negative_log_likelihood(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y,
                               double intercept, const Eigen::VectorXd& beta);
Eigen::VectorXd nll_gradient(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y,
                             double intercept, const Eigen::VectorXd& beta);

// Penalized objective of a fitted model, evaluated on its internal scale.
double penalized_objective(const FitResult& model, const Eigen::MatrixXd& x,
                           std::span<const std::uint8_t> y);

Standardization standardization_of(const Eigen::MatrixXd& x, bool standardize);

// Smallest lambda at which every penalized coefficient is zero (L1). For L2
// there is no such value; 1000 times the L1 value is used as the grid top.
double lambda_max(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y, Norm norm,
                  const Eigen::VectorXd& factors, const FitOptions& options = {});

// `count` log-spaced values from lambda_max down to lambda_max * min_ratio.
std::vector<double> lambda_grid(double lambda_max, int count = 50, double min_ratio = 1e-4);

// Warm-started fits along a descending grid. Once the deviance ratio passes
// 0.999 the remaining lambdas reuse the last fit.
std::vector<FitResult> fit_path(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y,
                                Norm norm, const Eigen::VectorXd& factors,
                                std::span<const double> lambdas,
                                const FitOptions& options = {});

struct CvOptions {
  int folds = 10;
  int grid_size = 50;
  double min_ratio = 1e-4;
  // Lower the fold count to the minority-class count when it is smaller.
  bool adapt_folds = false;
  std::uint64_t seed = 0;
  FitOptions fit = path_fit_options();
};

struct CvPoint {
  double lambda = 0.0;
  double mean_auc = 0.0;
  double se_auc = 0.0;
};

struct CvResult {
  double best_lambda = 0.0;
  std::size_t best_index = 0;
  int folds = 0;
  std::vector<CvPoint> curve;
  FitResult model;  // full-data fit at best_lambda
};

// Fold id per unit: cases and controls are each shuffled and dealt
// round-robin, so every fold gets both classes when each has >= folds units.
std::vector<int> stratified_folds(std::span<const std::uint8_t> y, int folds,
                                  std::uint64_t seed);

// Selects lambda by mean held-out AUC; ties go to the larger lambda.
CvResult cv_select_lambda(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y,
                          Norm norm, const Eigen::VectorXd& factors,
                          const CvOptions& options);

// (D' W D)^{-1} with D = [1, X_A], A the active columns (nonzero or
// unpenalized, non-constant), W = diag(p(1-p)) from the fitted model.
// Row/column 0 is the intercept; original feature scale.
struct CovarianceApprox {
  Eigen::MatrixXd matrix;
  std::vector<Eigen::Index> active;
};

CovarianceApprox coefficient_covariance(const FitResult& model, const Eigen::MatrixXd& x);

nlohmann::json to_json(const FitResult& model);
FitResult model_from_json(const nlohmann::json& j);

}  // namespace sgs::pglm
