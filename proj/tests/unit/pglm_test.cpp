#include <cmath>
#include <limits>

#include <gtest/gtest.h>
#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "sgs/error.hpp"
#include "sgs/metrics.hpp"
#include "sgs/pglm.hpp"
#include "sgs/random.hpp"

namespace sgs::pglm {
namespace {

struct Data {
  Eigen::MatrixXd x;
  std::vector<std::uint8_t> y;
};

// Logistic data with the given true coefficients (intercept first).
Data simulate(int n, const Eigen::VectorXd& truth, std::uint64_t seed, bool binary = false) {
  Rng rng(seed);
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const auto p = truth.size() - 1;
  Data d;
  d.x.resize(n, p);
  d.y.resize(static_cast<std::size_t>(n));
  for (int i = 0; i < n; ++i) {
    double eta = truth[0];
    for (Eigen::Index j = 0; j < p; ++j) {
      d.x(i, j) = binary ? (u(rng) < 0.3 ? 1.0 : 0.0) : g(rng) * (1.0 + 0.5 * j);
      eta += truth[j + 1] * d.x(i, j);
    }
    d.y[static_cast<std::size_t>(i)] = u(rng) < 1.0 / (1.0 + std::exp(-eta)) ? 1 : 0;
  }
  return d;
}

Eigen::VectorXd internal_beta(const FitResult& m) {
  return m.coefficients.cwiseProduct(m.standardization.scale);
}

double internal_intercept(const FitResult& m) {
  return m.intercept + m.coefficients.dot(m.standardization.center);
}

TEST(Oracle, IrlsMatchesHandComputedFit) {
  // Binary x: the MLE reproduces the group rates 1/3 and 2/3.
  Eigen::MatrixXd x(6, 1);
  x << 0, 0, 0, 1, 1, 1;
  const std::vector<std::uint8_t> y = {0, 1, 0, 1, 1, 0};
  const Eigen::VectorXd b = oracle::irls_logistic(x, y);
  EXPECT_NEAR(b[0], std::log(0.5), 1e-12);
  EXPECT_NEAR(b[1], 2.0 * std::log(2.0), 1e-12);
}

TEST(Fit, UnpenalizedMatchesIrls) {
  Eigen::VectorXd truth(5);
  truth << -0.5, 0.8, -0.4, 0.3, 0.0;
  for (std::uint64_t seed = 1; seed <= 5; ++seed) {
    const Data d = simulate(300, truth, seed);
    const FitResult m = fit(d.x, d.y, {Norm::L1, 0.0, {}});
    ASSERT_TRUE(m.converged);
    const Eigen::VectorXd ref = oracle::irls_logistic(d.x, d.y);
    EXPECT_NEAR(m.intercept, ref[0], 1e-6);
    for (Eigen::Index j = 0; j < 4; ++j) EXPECT_NEAR(m.coefficients[j], ref[j + 1], 1e-6);
    const FitResult r = fit(d.x, d.y, {Norm::L2, 0.0, {}});
    for (Eigen::Index j = 0; j < 4; ++j) EXPECT_NEAR(r.coefficients[j], ref[j + 1], 1e-6);
  }
}

TEST(Fit, InfiniteLambdaGivesNullModel) {
  Eigen::VectorXd truth(4);
  truth << 0.2, 1.0, -1.0, 0.5;
  const Data d = simulate(200, truth, 3);
  const FitResult m = fit(d.x, d.y, {Norm::L1, std::numeric_limits<double>::infinity(), {}});
  EXPECT_EQ(m.nonzero(), 0);
  double mean = 0;
  for (auto v : d.y) mean += v;
  mean /= 200.0;
  EXPECT_NEAR(m.intercept, std::log(mean / (1 - mean)), 1e-9);
  const double top = lambda_max(d.x, d.y, Norm::L1, {});
  EXPECT_EQ(fit(d.x, d.y, {Norm::L1, top * 1.0001, {}}).nonzero(), 0);
  EXPECT_GT(fit(d.x, d.y, {Norm::L1, top * 0.9, {}}).nonzero(), 0);
}

TEST(Fit, UnpenalizedColumnSurvives) {
  Eigen::VectorXd truth(6);
  truth << -1.0, 0.0, 0.0, 0.0, 0.0, 1.2;
  const Data d = simulate(400, truth, 4);
  Eigen::VectorXd factors = Eigen::VectorXd::Ones(5);
  factors[4] = 0.0;
  const double top = lambda_max(d.x, d.y, Norm::L1, factors);
  for (double frac : {1.0, 0.5, 0.1}) {
    const FitResult m = fit(d.x, d.y, {Norm::L1, top * frac, factors});
    EXPECT_NE(m.coefficients[4], 0.0);
    const Eigen::MatrixXd xs = oracle::standardize(d.x);
    EXPECT_LT(oracle::kkt_violation(xs, d.y, internal_intercept(m), internal_beta(m), top * frac,
                                    factors, true),
              1e-5);
  }
  const FitResult big = fit(d.x, d.y, {Norm::L1, top * 1.01, factors});
  EXPECT_EQ(big.nonzero(), 1);
  const FitResult inf = fit(d.x, d.y, {Norm::L1, std::numeric_limits<double>::infinity(), factors});
  EXPECT_NEAR(inf.coefficients[4], big.coefficients[4], 1e-6);
}

TEST(Fit, KktOnRandomInstances) {
  Rng rng(50);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const int p = 2 + static_cast<int>(8 * u(rng));
    Eigen::VectorXd truth = Eigen::VectorXd::Zero(p + 1);
    for (int j = 0; j <= p; ++j) truth[j] = u(rng) < 0.5 ? 0.0 : 2.0 * u(rng) - 1.0;
    const Data d = simulate(80 + static_cast<int>(200 * u(rng)), truth, 500 + k, k % 2 == 0);
    Eigen::VectorXd factors = Eigen::VectorXd::Ones(p);
    if (k % 3 == 0) factors[0] = 0.0;
    if (k % 4 == 0) factors[p - 1] = 2.5;
    const Norm norm = k % 5 == 0 ? Norm::L2 : Norm::L1;
    const double lam = lambda_max(d.x, d.y, Norm::L1, factors) * (0.02 + 0.6 * u(rng));
    const FitResult m = fit(d.x, d.y, {norm, lam, factors});
    ASSERT_TRUE(m.converged) << k;
    const Eigen::MatrixXd xs = oracle::standardize(d.x);
    EXPECT_LT(oracle::kkt_violation(xs, d.y, internal_intercept(m), internal_beta(m), lam,
                                    factors, norm == Norm::L1),
              1e-5)
        << "instance " << k;
  }
}

TEST(Fit, ObjectiveTraceNonIncreasing) {
  Eigen::VectorXd truth(8);
  truth << -1, 1, -1, 0.5, 0, 0, 0.3, 0;
  const Data d = simulate(250, truth, 8, true);
  for (Norm norm : {Norm::L1, Norm::L2}) {
    const FitResult m = fit(d.x, d.y, {norm, 2.0, {}});
    for (std::size_t k = 1; k < m.objective_trace.size(); ++k) {
      EXPECT_LE(m.objective_trace[k], m.objective_trace[k - 1]);
    }
    EXPECT_NEAR(penalized_objective(m, d.x, d.y), m.objective, 1e-8 * std::abs(m.objective));
  }
}

TEST(Gradient, MatchesCentralDifferences) {
  Rng rng(60);
  std::normal_distribution<double> g(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    Eigen::VectorXd truth = Eigen::VectorXd::Zero(4);
    for (int j = 0; j < 4; ++j) truth[j] = g(rng);
    const Data d = simulate(40, truth, 600 + k);
    const double b0 = g(rng);
    Eigen::VectorXd beta(3);
    for (int j = 0; j < 3; ++j) beta[j] = 0.5 * g(rng);
    const Eigen::VectorXd grad = nll_gradient(d.x, d.y, b0, beta);
    const double h = 1e-5;
    for (int j = 0; j < 4; ++j) {
      double plus;
      double minus;
      if (j == 0) {
        plus = negative_log_likelihood(d.x, d.y, b0 + h, beta);
        minus = negative_log_likelihood(d.x, d.y, b0 - h, beta);
      } else {
        Eigen::VectorXd bp = beta;
        Eigen::VectorXd bm = beta;
        bp[j - 1] += h;
        bm[j - 1] -= h;
        plus = negative_log_likelihood(d.x, d.y, b0, bp);
        minus = negative_log_likelihood(d.x, d.y, b0, bm);
      }
      const double fd = (plus - minus) / (2 * h);
      EXPECT_LT(std::abs(fd - grad[j]) / std::max(1.0, std::abs(grad[j])), 1e-6);
    }
  }
}

TEST(Predict, ZeroModelAndMonotone) {
  FitResult m;
  m.coefficients = Eigen::VectorXd::Zero(3);
  const Eigen::VectorXd p = predict_probabilities(m, Eigen::MatrixXd::Random(5, 3));
  for (Eigen::Index i = 0; i < 5; ++i) EXPECT_DOUBLE_EQ(p[i], 0.5);
  m.coefficients << 0.7, 0.0, -0.2;
  Eigen::MatrixXd x = Eigen::MatrixXd::Zero(2, 3);
  x(1, 0) = 1.0;
  const Eigen::VectorXd q = predict_probabilities(m, x);
  EXPECT_GT(q[1], q[0]);
  EXPECT_THROW(predict_probabilities(m, Eigen::MatrixXd::Zero(2, 2)), InvalidArgument);
}

TEST(Predict, StrongSignalToy) {
  Rng rng(70);
  std::normal_distribution<double> g(0.0, 1.0);
  Eigen::MatrixXd x(200, 1);
  std::vector<std::uint8_t> y(200);
  for (int i = 0; i < 200; ++i) {
    x(i, 0) = g(rng);
    y[static_cast<std::size_t>(i)] = x(i, 0) > 0 ? 1 : 0;
  }
  const FitResult m = fit(x, y, {Norm::L1, 1.0, {}});
  const Eigen::VectorXd p = predict_probabilities(m, x);
  EXPECT_GT(metrics::auc_wilcoxon(y, std::span<const double>(p.data(), p.size())), 0.95);
}

TEST(Fit, SingleClassRejected) {
  const std::vector<std::uint8_t> y(10, 1);
  EXPECT_THROW(fit(Eigen::MatrixXd::Random(10, 2), y, {Norm::L1, 0.1, {}}), InvalidArgument);
}

TEST(Path, ContinuousOnFineGrid) {
  Eigen::VectorXd truth(6);
  truth << -0.5, 1.0, -0.7, 0.4, 0.0, 0.2;
  const Data d = simulate(500, truth, 9);
  const double top = lambda_max(d.x, d.y, Norm::L1, {});
  const auto grid = lambda_grid(top, 200, 1e-2);
  const auto path = fit_path(d.x, d.y, Norm::L1, {}, grid);
  std::vector<double> deltas;
  for (std::size_t k = 1; k < path.size(); ++k) {
    deltas.push_back((path[k].coefficients - path[k - 1].coefficients).cwiseAbs().maxCoeff());
  }
  for (std::size_t k = 1; k + 1 < deltas.size(); ++k) {
    const double neighbours = std::max(deltas[k - 1], deltas[k + 1]);
    EXPECT_LE(deltas[k], 10.0 * neighbours + 1e-6) << k;
  }
}

TEST(Path, MatchesColdFits) {
  Eigen::VectorXd truth(5);
  truth << 0.0, 0.9, -0.6, 0.0, 0.3;
  const Data d = simulate(300, truth, 10);
  const auto grid = lambda_grid(lambda_max(d.x, d.y, Norm::L1, {}), 10, 1e-2);
  const auto path = fit_path(d.x, d.y, Norm::L1, {}, grid);
  for (std::size_t k = 0; k < grid.size(); k += 3) {
    const FitResult cold = fit(d.x, d.y, {Norm::L1, grid[k], {}});
    EXPECT_NEAR((path[k].coefficients - cold.coefficients).cwiseAbs().maxCoeff(), 0.0, 1e-6);
  }
}

TEST(Cv, PureNoiseIsNearChance) {
  Eigen::VectorXd truth = Eigen::VectorXd::Zero(11);
  const Data train = simulate(400, truth, 11);
  const Data test = simulate(2000, truth, 12);
  CvOptions o;
  o.seed = 5;
  const CvResult cv = cv_select_lambda(train.x, train.y, Norm::L1, {}, o);
  EXPECT_EQ(cv.curve.size(), 50u);
  const Eigen::VectorXd p = predict_linear(cv.model, test.x);
  const double auc = metrics::auc_wilcoxon(test.y, std::span<const double>(p.data(), p.size()));
  EXPECT_NEAR(auc, 0.5, 0.05);
}

TEST(Cv, StrongFeatureRetainedAndDeterministic) {
  Eigen::VectorXd truth = Eigen::VectorXd::Zero(9);
  truth[3] = 2.0;
  const Data d = simulate(300, truth, 13);
  CvOptions o;
  o.seed = 6;
  const CvResult a = cv_select_lambda(d.x, d.y, Norm::L1, {}, o);
  EXPECT_NE(a.model.coefficients[2], 0.0);
  const CvResult b = cv_select_lambda(d.x, d.y, Norm::L1, {}, o);
  EXPECT_EQ(a.best_lambda, b.best_lambda);
  EXPECT_EQ(stratified_folds(d.y, 10, 6), stratified_folds(d.y, 10, 6));
  const double top = lambda_max(d.x, d.y, Norm::L1, {});
  EXPECT_NEAR(a.curve.front().lambda, top, 1e-12 * top);
  EXPECT_NEAR(a.curve.back().lambda, top * 1e-4, 1e-12 * top);
}

TEST(Cv, FoldsStratified) {
  std::vector<std::uint8_t> y(103, 0);
  for (int i = 0; i < 23; ++i) y[static_cast<std::size_t>(i * 4)] = 1;
  const auto folds = stratified_folds(y, 10, 3);
  for (int f = 0; f < 10; ++f) {
    int cases = 0;
    int controls = 0;
    for (std::size_t i = 0; i < y.size(); ++i) {
      if (folds[i] != f) continue;
      (y[i] ? cases : controls) += 1;
    }
    EXPECT_GE(cases, 2);
    EXPECT_GE(controls, 8);
  }
  std::vector<std::uint8_t> few(50, 0);
  few[0] = few[1] = 1;
  EXPECT_THROW(cv_select_lambda(Eigen::MatrixXd::Random(50, 2), few, Norm::L1, {}, CvOptions{}),
               InvalidArgument);
}

TEST(Covariance, InterceptOnly) {
  std::vector<std::uint8_t> y(400);
  for (std::size_t i = 0; i < y.size(); ++i) y[i] = i % 2;
  const Eigen::MatrixXd x = Eigen::MatrixXd::Random(400, 3);
  const FitResult m = fit(x, y, {Norm::L1, std::numeric_limits<double>::infinity(), {}});
  const CovarianceApprox c = coefficient_covariance(m, x);
  ASSERT_EQ(c.matrix.rows(), 1);
  EXPECT_NEAR(c.matrix(0, 0), 4.0 / 400.0, 1e-12);
}

TEST(Covariance, DoublingRowsHalvesVariance) {
  Eigen::VectorXd truth(4);
  truth << -0.3, 0.8, -0.5, 0.2;
  const Data d = simulate(300, truth, 14);
  const FitResult m = fit(d.x, d.y, {Norm::L1, 0.0, {}});
  Eigen::MatrixXd x2(600, 3);
  x2 << d.x, d.x;
  const CovarianceApprox one = coefficient_covariance(m, d.x);
  const CovarianceApprox two = coefficient_covariance(m, x2);
  EXPECT_LT((two.matrix * 2.0 - one.matrix).cwiseAbs().maxCoeff(), 1e-10);
  const Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(one.matrix);
  EXPECT_GT(eig.eigenvalues().minCoeff(), -1e-8);
  EXPECT_LT((one.matrix - one.matrix.transpose()).cwiseAbs().maxCoeff(), 1e-12);
}

TEST(Covariance, AgreesWithParametricBootstrap) {
  Eigen::VectorXd truth(6);
  truth << -1.0, 0.5, -0.4, 0.3, 0.2, -0.1;
  const Data d = simulate(2000, truth, 15);
  const FitResult m = fit(d.x, d.y, {Norm::L1, 0.0, {}});
  const CovarianceApprox c = coefficient_covariance(m, d.x);
  const Eigen::VectorXd p = predict_probabilities(m, d.x);
  Rng rng(16);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  const int reps = 1000;
  Eigen::MatrixXd draws(reps, 6);
  for (int r = 0; r < reps; ++r) {
    std::vector<std::uint8_t> y(2000);
    for (int i = 0; i < 2000; ++i) y[static_cast<std::size_t>(i)] = u(rng) < p[i];
    const FitResult b = fit(d.x, y, {Norm::L1, 0.0, {}});
    draws(r, 0) = b.intercept;
    draws.row(r).tail(5) = b.coefficients.transpose();
  }
  const Eigen::RowVectorXd mean = draws.colwise().mean();
  const Eigen::MatrixXd centered = draws.rowwise() - mean;
  const Eigen::MatrixXd boot = centered.transpose() * centered / (reps - 1);
  for (int j = 0; j < 6; ++j) {
    EXPECT_NEAR(c.matrix(j, j) / boot(j, j), 1.0, 0.15) << j;
  }
}

TEST(Covariance, SingularSuggestsRidge) {
  Eigen::VectorXd truth(3);
  truth << 0.0, 0.5, 0.0;
  Data d = simulate(200, truth, 17);
  d.x.col(1) = 2.0 * d.x.col(0);
  FitResult m = fit(d.x, d.y, {Norm::L2, 1.0, {}});
  try {
    coefficient_covariance(m, d.x);
    FAIL() << "expected SingularMatrix";
  } catch (const SingularMatrix& e) {
    EXPECT_NE(std::string(e.what()).find("ridge"), std::string::npos);
  }
}

TEST(Json, RoundTrip) {
  Eigen::VectorXd truth(4);
  truth << 0.1, 1.0, 0.0, -0.5;
  const Data d = simulate(200, truth, 18);
  FitResult m = fit(d.x, d.y, {Norm::L1, 3.0, {}});
  m.feature_names = {"a", "b", "c"};
  const FitResult back = model_from_json(to_json(m));
  EXPECT_EQ(back.coefficients, m.coefficients);
  EXPECT_EQ(back.intercept, m.intercept);
  EXPECT_EQ(back.feature_names, m.feature_names);
  EXPECT_EQ(back.penalty.lambda, m.penalty.lambda);
  EXPECT_EQ(predict_linear(back, d.x), predict_linear(m, d.x));
}

}  // namespace
}  // namespace sgs::pglm
