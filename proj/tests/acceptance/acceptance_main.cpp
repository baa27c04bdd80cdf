// Acceptance suite. Prints one PASS/FAIL line per criterion and exits
// non-zero if any criterion fails. Pass criterion names as arguments to run
// a subset.

#include <algorithm>
#include <chrono>
#include <cmath>
#include <fstream>
#include <functional>
#include <sstream>
#include <string>
#include <thread>
#include <vector>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "oracles.hpp"
#include "sgs/cohort.hpp"
#include "sgs/design_math.hpp"
#include "sgs/error.hpp"
#include "sgs/harness.hpp"
#include "sgs/metrics.hpp"
#include "sgs/pglm.hpp"
#include "sgs/random.hpp"
#include "sgs/sampler.hpp"
#include "sgs/textfeat.hpp"

namespace {

using namespace sgs;

struct Outcome {
  bool pass = false;
  std::string detail;
};

struct Criterion {
  std::string name;
  std::function<Outcome()> check;
};

double seconds_since(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

int worker_count() {
  return static_cast<int>(std::max(1u, std::thread::hardware_concurrency()));
}

harness::ExperimentConfig load_config(const std::string& name) {
  std::ifstream in(std::string(SGS_SOURCE_DIR) + "/configs/" + name);
  if (!in) throw Error("missing config " + name);
  return harness::experiment_config_from_json(nlohmann::json::parse(in));
}

Outcome o_ratio_monte_carlo() {
  const design::SurrogateSpec z{0.40, 0.95};
  const design::PopulationSpec pop{0.10, 1};
  const auto start = std::chrono::steady_clock::now();
  std::string detail;
  bool pass = true;
  const double expected[2] = {3.2964, 5.2706};
  const double ratios[2] = {0.50, 0.75};
  for (int k = 0; k < 2; ++k) {
    const double closed = design::o_ratio_exact(pop, z, ratios[k]);
    const auto mc = oracle::monte_carlo_o_ratio(0.10, z, ratios[k], 1000000, 101 + k);
    const double rel = std::abs(mc.value - closed) / closed;
    pass = pass && rel <= 0.02 && std::abs(closed - expected[k]) < 5e-5;
    detail += fmt::format("R={:.2f} closed={:.4f} mc={:.4f} rel={:.4f}; ", ratios[k], closed,
                          mc.value, rel);
  }
  const double elapsed = seconds_since(start);
  pass = pass && elapsed < 10.0;
  return {pass, detail + fmt::format("{:.2f}s", elapsed)};
}

// Cohort of 10^5 with prevalence 0.10 and Z1 = (0.40, 0.95) realized exactly.
cohort::Cohort exact_z1_cohort() {
  cohort::Cohort c;
  const std::size_t n = 100000;
  c.outcomes.assign(n, 0);
  c.surrogates.assign(1, cohort::Binary(n, 0));
  c.surrogate_names = {"z1"};
  c.features = Eigen::MatrixXd::Zero(static_cast<Eigen::Index>(n), 1);
  c.ids.resize(n);
  for (std::size_t i = 0; i < n; ++i) c.ids[i] = static_cast<std::int64_t>(i);
  for (std::size_t i = 0; i < 10000; ++i) {
    c.outcomes[i] = 1;
    c.surrogates[0][i] = i < 4000 ? 1 : 0;
  }
  for (std::size_t i = 10000; i < 14500; ++i) c.surrogates[0][i] = 1;
  return c;
}

Outcome expected_cases() {
  const cohort::Cohort c = exact_z1_cohort();
  auto count = [&](const sampling::Sample& s) {
    double k = 0;
    for (std::size_t u : s.units) k += c.outcomes[u];
    return k;
  };
  double sgs_total = 0;
  double srs_total = 0;
  const int reps = 1000;
  for (int r = 0; r < reps; ++r) {
    sgs_total += count(sampling::draw_sgs(c, "z1", 500, 0.75, derive_seed(11, 1, r)));
    srs_total += count(sampling::draw_srs(c, 1850, derive_seed(11, 2, r)));
  }
  const double sgs_mean = sgs_total / reps;
  const double srs_mean = srs_total / reps;
  const double budget = design::srs_equivalent_budget(
      design::expected_cases({design::DesignKind::SGS, 0.75, 500}, {0.10, 100000}, {0.40, 0.95}),
      0.10);
  const bool pass = std::abs(sgs_mean - 185.0) <= 3.0 && std::abs(srs_mean - 185.0) <= 3.0 &&
                    std::abs(budget - 1850.0) <= 5.0;
  return {pass, fmt::format("SGS 3:1 n=500 mean cases {:.2f}; SRS n=1850 mean cases {:.2f}; "
                            "SRS-equivalent budget {:.1f}",
                            sgs_mean, srs_mean, budget)};
}

Outcome rare_approximation() {
  Rng rng = make_rng(20240601, 0x61);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  double worst = 0.0;
  design::SurrogateSpec worst_z{};
  double worst_r = 0.0;
  int failures = 0;
  for (int k = 0; k < 100; ++k) {
    const design::SurrogateSpec z{0.01 + 0.98 * u(rng), 0.5 + 0.499 * u(rng)};
    const double r = 0.01 + 0.98 * u(rng);
    const double exact = design::o_ratio_exact({1e-4, 1}, z, r);
    const double rel = std::abs(design::o_ratio_rare_approx(z, r) - exact) / exact;
    failures += rel >= 0.01;
    if (rel > worst) {
      worst = rel;
      worst_z = z;
      worst_r = r;
    }
  }
  return {failures == 0,
          fmt::format("max relative gap {:.5f} at sens={:.3f} spec={:.4f} R={:.3f}; {} of 100 "
                      "specs at or above 1%",
                      worst, worst_z.sensitivity, worst_z.specificity, worst_r, failures)};
}

Outcome ipw_unbiased() {
  cohort::CohortConfig cfg;
  cfg.prevalence = 0.10;
  cfg.mode = cohort::SurrogateMode::PaperYGivenZ;
  cfg.seed = 31;
  const cohort::GeneratedCohort g = cohort::generate_cohort(cfg);
  const cohort::Cohort& c = g.cohort;
  // Fixed model: the data-generating linear predictor.
  Eigen::VectorXd eta = c.features * g.coefficients;
  for (std::size_t k = 0; k < g.realized.size(); ++k) {
    for (std::size_t i = 0; i < c.size(); ++i) {
      eta[static_cast<Eigen::Index>(i)] += g.realized[k].coefficient * c.surrogates[k][i];
    }
  }
  const double full = metrics::auc_wilcoxon(
      c.outcomes, std::span<const double>(eta.data(), static_cast<std::size_t>(eta.size())));
  double ipw = 0.0;
  double plain = 0.0;
  const int reps = 200;
  for (int r = 0; r < reps; ++r) {
    const sampling::Sample s = sampling::draw_sgs(c, "z1", 500, 0.5, derive_seed(41, 0, r));
    std::vector<std::uint8_t> y;
    std::vector<double> score;
    for (std::size_t u : s.units) {
      y.push_back(c.outcomes[u]);
      score.push_back(eta[static_cast<Eigen::Index>(u)]);
    }
    const auto rec = metrics::make_records(y, score, s.weights);
    ipw += metrics::auc_ipw(rec);
    plain += metrics::auc_wilcoxon(rec);
  }
  ipw /= reps;
  plain /= reps;
  const double bias_ipw = ipw - full;
  const double bias_plain = plain - full;
  return {std::abs(bias_ipw) <= 0.01 && std::abs(bias_plain) > std::abs(bias_ipw),
          fmt::format("full-cohort AUC {:.4f}; mean IPW {:.4f} (bias {:+.4f}); mean unweighted "
                      "{:.4f} (bias {:+.4f})",
                      full, ipw, bias_ipw, plain, bias_plain)};
}

Outcome theory_diagnostics() {
  // Closed form with V = 0, B = 0 on random positive-definite fixtures.
  Rng rng = make_rng(7, 0x62);
  std::normal_distribution<double> g(0.0, 1.0);
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const int p = 1 + k % 6;
    Eigen::MatrixXd a(p, p);
    Eigen::VectorXd mu(p);
    for (int i = 0; i < p; ++i) {
      mu[i] = 0.5 * g(rng);
      for (int j = 0; j < p; ++j) a(i, j) = g(rng);
    }
    const Eigen::MatrixXd s = a * a.transpose() + Eigen::MatrixXd::Identity(p, p);
    const double closed = design::normal_cdf(std::sqrt(mu.dot(s.ldlt().solve(mu)) / 2.0));
    worst = std::max(worst, std::abs(design::auc_index(design::lda_truth(mu, s)).auc - closed));
  }
  design::BinormalParams f;
  f.case_mean = Eigen::Vector2d(1.0, 0.0);
  f.covariance = Eigen::Matrix2d::Identity();
  f.coefficients = Eigen::Vector2d(1.0, 0.0);
  f.bias = Eigen::Vector2d::Zero();
  f.coefficient_covariance = Eigen::Matrix2d::Zero();
  const double before = design::auc_index(f).auc;
  f.coefficient_covariance = 0.1 * Eigen::Matrix2d::Identity();
  const double after = design::auc_index(f).auc;

  harness::ExperimentConfig cfg = load_config("theory_diagnostics.json");
  cfg.jobs = worker_count();
  const auto points = harness::run_theory_diagnostics(cfg);
  double worst_gap = 0.0;
  std::string gaps;
  for (const auto& pt : points) {
    if (pt.n != 5000) continue;
    worst_gap = std::max(worst_gap, std::abs(pt.gap));
    gaps += fmt::format(" {}:{:+.4f}", pt.design, pt.gap);
  }
  const bool pass = worst < 1e-10 && std::abs(before - 0.7602) < 5e-5 &&
                    std::abs(after - 0.7365) < 5e-5 && !gaps.empty() && worst_gap < 0.01;
  return {pass, fmt::format("closed-form max error {:.2e}; fixture {:.4f} -> {:.4f}; "
                            "empirical-index gap at n=5000, p=5:{}",
                            worst, before, after, gaps)};
}

struct Instance {
  Eigen::MatrixXd x;
  std::vector<std::uint8_t> y;
};

Instance logistic_instance(Rng& rng, int n, int p) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  Instance in;
  in.x.resize(n, p);
  in.y.resize(static_cast<std::size_t>(n));
  Eigen::VectorXd beta(p);
  for (int j = 0; j < p; ++j) beta[j] = 0.7 * g(rng);
  for (int i = 0; i < n; ++i) {
    double eta = -0.5;
    for (int j = 0; j < p; ++j) {
      in.x(i, j) = g(rng);
      eta += beta[j] * in.x(i, j);
    }
    in.y[static_cast<std::size_t>(i)] = u(rng) < 1.0 / (1.0 + std::exp(-eta)) ? 1 : 0;
  }
  return in;
}

Outcome solver_correctness() {
  Rng rng = make_rng(3, 0x63);
  double irls_gap = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Instance in = logistic_instance(rng, 200 + 20 * k, 2 + k % 6);
    const pglm::FitResult m = pglm::fit(in.x, in.y, {pglm::Norm::L1, 0.0, {}});
    const Eigen::VectorXd ref = oracle::irls_logistic(in.x, in.y);
    irls_gap = std::max(irls_gap, std::abs(m.intercept - ref[0]));
    for (Eigen::Index j = 0; j < m.coefficients.size(); ++j) {
      irls_gap = std::max(irls_gap, std::abs(m.coefficients[j] - ref[j + 1]));
    }
  }
  double kkt = 0.0;
  for (int k = 0; k < 20; ++k) {
    const Instance in = logistic_instance(rng, 150, 3 + k % 8);
    const Eigen::VectorXd factors = Eigen::VectorXd::Ones(in.x.cols());
    const double lam = pglm::lambda_max(in.x, in.y, pglm::Norm::L1, factors) * (0.05 + 0.04 * k);
    const pglm::FitResult m = pglm::fit(in.x, in.y, {pglm::Norm::L1, lam, factors});
    const Eigen::VectorXd beta = m.coefficients.cwiseProduct(m.standardization.scale);
    const double b0 = m.intercept + m.coefficients.dot(m.standardization.center);
    kkt = std::max(kkt, oracle::kkt_violation(oracle::standardize(in.x), in.y, b0, beta, lam,
                                              factors, true));
  }
  double fd = 0.0;
  std::normal_distribution<double> g(0.0, 1.0);
  for (int k = 0; k < 50; ++k) {
    const Instance in = logistic_instance(rng, 30, 3);
    const double b0 = g(rng);
    Eigen::VectorXd beta(3);
    for (int j = 0; j < 3; ++j) beta[j] = g(rng);
    const Eigen::VectorXd grad = pglm::nll_gradient(in.x, in.y, b0, beta);
    const double h = 1e-5;
    for (int j = 0; j < 4; ++j) {
      double b0p = b0;
      double b0m = b0;
      Eigen::VectorXd bp = beta;
      Eigen::VectorXd bm = beta;
      if (j == 0) {
        b0p += h;
        b0m -= h;
      } else {
        bp[j - 1] += h;
        bm[j - 1] -= h;
      }
      const double num = (pglm::negative_log_likelihood(in.x, in.y, b0p, bp) -
                          pglm::negative_log_likelihood(in.x, in.y, b0m, bm)) /
                         (2 * h);
      fd = std::max(fd, std::abs(num - grad[j]) / std::max(1.0, std::abs(grad[j])));
    }
  }
  return {irls_gap <= 1e-6 && kkt < 1e-5 && fd < 1e-6,
          fmt::format("max |coef - IRLS| {:.2e}; max KKT residual {:.2e}; max FD relative "
                      "error {:.2e}",
                      irls_gap, kkt, fd)};
}

Outcome metrics_oracles() {
  Rng rng = make_rng(5, 0x64);
  std::uniform_int_distribution<int> size(2, 200);
  std::uniform_real_distribution<double> u(0.0, 1.0);
  int mismatches = 0;
  for (int k = 0; k < 500; ++k) {
    const int n = size(rng);
    std::vector<std::uint8_t> y;
    std::vector<double> s;
    for (int i = 0; i < n; ++i) {
      y.push_back(u(rng) < 0.4 ? 1 : 0);
      s.push_back(k % 2 ? u(rng) : std::floor(8.0 * u(rng)));
    }
    y[0] = 1;
    y[1] = 0;
    mismatches += metrics::auc_wilcoxon(y, s) != oracle::brute_force_auc(y, s);
  }
  const std::vector<std::uint8_t> y = {1, 1, 0, 0};
  const std::vector<double> s = {0.9, 0.4, 0.5, 0.1};
  const std::vector<double> w = {1, 2, 1, 2};
  const double ipw = metrics::auc_ipw(metrics::make_records(y, s, w));
  return {mismatches == 0 && std::abs(ipw - 7.0 / 9.0) < 1e-15,
          fmt::format("{} of 500 instances differ from pair enumeration; IPW fixture {:.15f}",
                      mismatches, ipw)};
}

Outcome desk_learning_curve() {
  const harness::ExperimentConfig base = load_config("desk_lasso.json");
  std::string detail;
  bool pass = true;
  const auto start = std::chrono::steady_clock::now();
  for (std::uint64_t k = 0; k < 5; ++k) {
    harness::ExperimentConfig cfg = base;
    cfg.master_seed = base.master_seed + k;
    cfg.jobs = worker_count();
    const harness::CurveTable t = harness::run_learning_curve(cfg);
    auto find = [&](const std::string& design, std::int64_t n) -> const harness::CurvePoint* {
      for (const auto& p : t.points) {
        if (p.design == design && p.n == n && !p.dropped) return &p;
      }
      return nullptr;
    };
    detail += fmt::format("seed {}:", cfg.master_seed);
    for (std::int64_t n : base.abstraction_sizes) {
      const auto* srs = find("srs", n);
      const auto* z1 = find("sgs_1to1_z1", n);
      const auto* z2 = find("sgs_1to1_z2", n);
      if (!srs || !z1 || !z2) {
        pass = false;
        detail += fmt::format(" n={} missing;", n);
        continue;
      }
      pass = pass && z1->mean_auc > srs->mean_auc && z1->mean_auc > z2->mean_auc;
      detail += fmt::format(" n={} srs={:.3f} z1={:.3f} z2={:.3f};", n, srs->mean_auc,
                            z1->mean_auc, z2->mean_auc);
    }
    detail += ' ';
  }
  return {pass, detail + fmt::format("{:.0f}s", seconds_since(start))};
}

Outcome table_substitutes() {
  const double trapezoid = metrics::auc_binary_predictor(0.27, 0.99);
  harness::ExperimentConfig cfg = load_config("design_comparison.json");
  cfg.jobs = worker_count();
  const harness::ComparisonTable t = harness::run_design_comparison(cfg);
  bool pass = std::abs(trapezoid - 0.63) < 0.005;
  std::string detail = fmt::format("trapezoid AUC(0.27, 0.99) = {:.3f}; O_ratio {:.2f};",
                                   trapezoid, t.summary.o_ratio);
  for (std::int64_t n : cfg.abstraction_sizes) {
    double sgs = -1.0;
    double srs = -1.0;
    for (const auto& p : t.points) {
      if (p.n != n) continue;
      (p.design == "sgs" ? sgs : srs) = p.mean_auc;
    }
    pass = pass && sgs >= 0.0 && srs >= 0.0 && sgs >= srs;
    detail += fmt::format(" n={} sgs={:.3f} srs={:.3f};", n, sgs, srs);
  }
  return {pass, detail};
}

Outcome tfidf_fixture() {
  const text::Corpus c = {{"d1", "pain pain fracture", {}, std::nullopt},
                          {"d2", "pain", {}, std::nullopt}};
  const text::Vocabulary v = text::build_vocabulary(c, {0.0, 1.0, true});
  const Eigen::MatrixXd x(text::tfidf_matrix(c, v));
  const double value = x(0, v.index_of("fracture"));
  const bool zero = (x.col(v.index_of("pain")).array() == 0.0).all();
  return {std::abs(value - 0.8925) < 1e-4 && zero,
          fmt::format("X(d1, fracture) = {:.6f}; IDF-zero column all zero: {}", value, zero)};
}

// cohort -> sample -> fit -> evaluate, serialized to a string.
std::string pipeline_fingerprint(std::uint64_t seed) {
  cohort::CohortConfig cfg;
  cfg.cohort_size = 20000;
  cfg.features = 100;
  cfg.seed = seed;
  const cohort::GeneratedCohort g = cohort::generate_cohort(cfg);
  const sampling::Sample s = sampling::draw_sgs(g.cohort, "z1", 500, 0.5, derive_seed(seed, 1));
  Eigen::MatrixXd x(static_cast<Eigen::Index>(s.size()), g.cohort.features.cols());
  std::vector<std::uint8_t> y;
  for (std::size_t i = 0; i < s.size(); ++i) {
    x.row(static_cast<Eigen::Index>(i)) = g.cohort.features.row(static_cast<Eigen::Index>(s.units[i]));
    y.push_back(g.cohort.outcomes[s.units[i]]);
  }
  pglm::CvOptions o;
  o.seed = derive_seed(seed, 2);
  o.adapt_folds = true;
  const pglm::CvResult cv = pglm::cv_select_lambda(x, y, pglm::Norm::L1, {}, o);
  const Eigen::VectorXd score = pglm::predict_linear(cv.model, g.cohort.features);
  const auto rec = metrics::make_records(
      g.cohort.outcomes, std::span<const double>(score.data(), static_cast<std::size_t>(score.size())));
  const auto report = metrics::evaluate(rec, 0.0, 50, 0.95, derive_seed(seed, 3));
  std::ostringstream out;
  out << std::hexfloat << cv.best_lambda << ' ' << cv.model.intercept << ' '
      << report.auc << ' ' << report.auc_ci.lower << ' ' << report.auc_ci.upper;
  for (Eigen::Index j = 0; j < cv.model.coefficients.size(); ++j) out << ' ' << cv.model.coefficients[j];
  return out.str();
}

Outcome determinism() {
  const bool pipeline = pipeline_fingerprint(17) == pipeline_fingerprint(17);
  harness::ExperimentConfig cfg = load_config("desk_lasso.json");
  cfg.replicates = 4;
  cfg.abstraction_sizes = {300};
  std::ostringstream one;
  std::ostringstream many;
  cfg.jobs = 1;
  harness::write_curves_csv(one, harness::run_learning_curve(cfg));
  cfg.jobs = 4;
  harness::write_curves_csv(many, harness::run_learning_curve(cfg));
  const bool jobs = one.str() == many.str();
  return {pipeline && jobs, fmt::format("pipeline rerun identical: {}; learning curve with 1 and "
                                        "4 workers identical: {}",
                                        pipeline, jobs)};
}

}  // namespace

int main(int argc, char** argv) {
  const std::vector<Criterion> criteria = {
      {"o_ratio_monte_carlo", o_ratio_monte_carlo},
      {"expected_cases", expected_cases},
      {"rare_outcome_approximation", rare_approximation},
      {"ipw_auc_unbiased", ipw_unbiased},
      {"auc_index_diagnostics", theory_diagnostics},
      {"solver_correctness", solver_correctness},
      {"metrics_oracle_equivalence", metrics_oracles},
      {"desk_learning_curve", desk_learning_curve},
      {"table_substitutes", table_substitutes},
      {"tfidf_fixture", tfidf_fixture},
      {"determinism", determinism},
  };
  std::vector<std::string> only(argv + 1, argv + argc);
  int failed = 0;
  for (const Criterion& c : criteria) {
    if (!only.empty() && std::find(only.begin(), only.end(), c.name) == only.end()) continue;
    Outcome o;
    try {
      o = c.check();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    failed += !o.pass;
    fmt::print("{} {}: {}\n", o.pass ? "PASS" : "FAIL", c.name, o.detail);
    std::fflush(stdout);
  }
  return failed == 0 ? 0 : 1;
}
