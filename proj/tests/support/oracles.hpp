#pragma once

// Reference implementations used as test oracles. Each one is written
// independently of the library code it checks, and favours clarity over
// speed.

#include <cstdint>
#include <span>
#include <vector>

#include <Eigen/Dense>

#include "sgs/design_math.hpp"
#include "sgs/random.hpp"

namespace sgs::oracle {

// O(n^2) pair count; ties count 1/2 (or 0 when `strict`).
double brute_force_auc(std::span<const std::uint8_t> y, std::span<const double> score,
                       std::span<const double> weight = {}, bool strict = false);

// Plain Newton-Raphson for unpenalized logistic regression with an
// intercept, dense Hessian, no standardization. Returns [b0, beta...].
Eigen::VectorXd irls_logistic(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y,
                              int max_iterations = 100, double tolerance = 1e-12);

// Simpson integration of the standard normal density from -12 to x.
double normal_cdf_quadrature(double x);

// Simulates `units` (Y, Z) pairs and returns the case/control odds of an
// SGS sample (allocation R, taken in expectation from the simulated strata)
// divided by the odds of the whole simulated population, plus the standard
// error of its log by the delta method.
struct MonteCarloRatio {
  double value = 0.0;
  double log_se = 0.0;
};
MonteCarloRatio monte_carlo_o_ratio(double prevalence, const design::SurrogateSpec& z,
                                    double ratio, std::int64_t units, std::uint64_t seed);

// Max KKT violation of an L1 (or L2) logistic fit given on the standardized
// scale used by the fitter. Gradient is of the summed negative log
// likelihood.
double kkt_violation(const Eigen::MatrixXd& x_std, std::span<const std::uint8_t> y,
                     double b0, const Eigen::VectorXd& beta, double lambda,
                     const Eigen::VectorXd& factors, bool l1);

// Columns centered and scaled by the population standard deviation;
// constant columns become zero.
Eigen::MatrixXd standardize(const Eigen::MatrixXd& x);

}  // namespace sgs::oracle
