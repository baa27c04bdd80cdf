#include "sgs/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <exception>
#include <fstream>
#include <mutex>
#include <numeric>
#include <ostream>
#include <thread>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "sgs/error.hpp"
#include "sgs/metrics.hpp"
#include "sgs/random.hpp"
#include "sgs/sampler.hpp"
#include "sgs/textfeat.hpp"

namespace sgs::harness {
namespace {

constexpr std::size_t kMaxFailureMessages = 8;

std::uint64_t cell_seed(std::uint64_t master, std::size_t replicate, std::size_t cell) {
  return derive_seed(derive_seed(master, streams::kReplicate, replicate), streams::kCell, cell);
}

pglm::CvOptions cv_options(const ModelConfig& m, std::uint64_t seed) {
  pglm::CvOptions o;
  o.folds = m.folds;
  o.grid_size = m.grid_size;
  o.min_ratio = m.min_ratio;
  o.adapt_folds = m.adapt_folds;
  o.seed = seed;
  o.fit.standardize = m.standardize;
  return o;
}

// Rows of `x` with the given surrogate columns appended (unpenalized).
struct ModelData {
  Eigen::MatrixXd x;
  std::vector<std::uint8_t> y;
  Eigen::VectorXd factors;
};

ModelData gather(const cohort::Cohort& c, std::span<const std::size_t> units) {
  const Eigen::Index p = c.features.cols();
  const auto k = static_cast<Eigen::Index>(c.surrogates.size());
  ModelData d;
  d.x.resize(static_cast<Eigen::Index>(units.size()), p + k);
  d.y.resize(units.size());
  for (std::size_t r = 0; r < units.size(); ++r) {
    const auto row = static_cast<Eigen::Index>(r);
    const auto u = static_cast<Eigen::Index>(units[r]);
    d.x.row(row).head(p) = c.features.row(u);
    for (Eigen::Index s = 0; s < k; ++s) {
      d.x(row, p + s) = c.surrogates[static_cast<std::size_t>(s)][units[r]];
    }
    d.y[r] = c.outcomes[units[r]];
  }
  d.factors = Eigen::VectorXd::Ones(p + k);
  d.factors.tail(k).setZero();
  return d;
}

struct CellResult {
  bool ok = false;
  double auc = 0.0;
  double abstracted = 0.0;
  std::string error;
};

double mean_of(const std::vector<double>& v) {
  return v.empty() ? 0.0 : std::accumulate(v.begin(), v.end(), 0.0) / static_cast<double>(v.size());
}

double standard_error(const std::vector<double>& v) {
  if (v.size() < 2) return 0.0;
  const double m = mean_of(v);
  double ss = 0.0;
  for (double x : v) ss += (x - m) * (x - m);
  return std::sqrt(ss / static_cast<double>(v.size() - 1) / static_cast<double>(v.size()));
}

}  // namespace

void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body) {
  const std::size_t workers =
      std::min<std::size_t>(count, static_cast<std::size_t>(std::max(1, jobs)));
  std::vector<std::exception_ptr> errors(count);
  if (workers <= 1) {
    for (std::size_t i = 0; i < count; ++i) {
      try {
        body(i);
      } catch (...) {
        errors[i] = std::current_exception();
      }
    }
  } else {
    std::atomic<std::size_t> next{0};
    std::vector<std::thread> pool;
    pool.reserve(workers);
    for (std::size_t w = 0; w < workers; ++w) {
      pool.emplace_back([&] {
        for (std::size_t i = next++; i < count; i = next++) {
          try {
            body(i);
          } catch (...) {
            errors[i] = std::current_exception();
          }
        }
      });
    }
    for (std::thread& t : pool) t.join();
  }
  for (const auto& e : errors) {
    if (e) std::rethrow_exception(e);
  }
}

CurveTable run_learning_curve(const ExperimentConfig& config) {
  validate(config);
  if (config.kind != ExperimentKind::LearningCurve) {
    throw InvalidArgument("run_learning_curve needs a learning_curve config");
  }
  const std::size_t arms = config.designs.size();
  const std::size_t sizes = config.abstraction_sizes.size();
  const std::size_t cells = arms * sizes;
  const auto reps = static_cast<std::size_t>(config.replicates);
  std::vector<std::vector<CellResult>> results(reps, std::vector<CellResult>(cells));

  std::optional<cohort::GeneratedCohort> fixed;
  if (config.reuse == CohortReuse::Fixed) {
    cohort::CohortConfig cc = config.cohort;
    cc.seed = derive_seed(config.master_seed, streams::kReplicate, 0xF1ED);
    fixed = cohort::generate_cohort(cc);
  }

  parallel_for(reps, config.jobs, [&](std::size_t r) {
    std::optional<cohort::GeneratedCohort> fresh;
    if (!fixed) {
      cohort::CohortConfig cc = config.cohort;
      cc.seed = derive_seed(config.master_seed, streams::kReplicate, r);
      fresh = cohort::generate_cohort(cc);
    }
    const cohort::Cohort& c = fixed ? fixed->cohort : fresh->cohort;
    const std::uint64_t rep_seed = derive_seed(config.master_seed, streams::kReplicate, r);

    // Validation set, then the development pool from the remaining units.
    const bool ipw = !config.ipw_validation_surrogate.empty();
    const sampling::Sample validation =
        ipw ? sampling::draw_sgs(c, config.ipw_validation_surrogate, config.validation_size,
                                 0.5, derive_seed(rep_seed, 0x7a1))
            : sampling::draw_srs(c, config.validation_size, derive_seed(rep_seed, 0x7a1));
    std::vector<std::uint8_t> in_validation(c.size(), 0);
    for (std::size_t u : validation.units) in_validation[u] = 1;
    std::vector<std::size_t> pool;
    pool.reserve(c.size() - validation.units.size());
    for (std::size_t u = 0; u < c.size(); ++u) {
      if (!in_validation[u]) pool.push_back(u);
    }
    const ModelData val = gather(c, validation.units);

    for (std::size_t a = 0; a < arms; ++a) {
      const DesignArm& arm = config.designs[a];
      for (std::size_t s = 0; s < sizes; ++s) {
        const std::size_t cell = a * sizes + s;
        const std::uint64_t seed = cell_seed(config.master_seed, r, cell);
        const std::int64_t n = config.abstraction_sizes[s];
        CellResult& out = results[r][cell];
        try {
          sampling::Sample dev;
          switch (arm.kind) {
            case design::DesignKind::SRS:
              dev = sampling::draw_srs(pool, n, seed);
              break;
            case design::DesignKind::SGS:
              dev = sampling::draw_sgs(pool, c.surrogate(arm.surrogate), n, arm.ratio, seed);
              break;
            case design::DesignKind::ROS:
              dev = sampling::random_oversample(sampling::draw_srs(pool, n, seed), c.outcomes,
                                                derive_seed(seed, 1));
              break;
            case design::DesignKind::InverseSGS:
              throw InvalidArgument("inverse-SGS is not a learning-curve design");
          }
          for (std::size_t u : dev.units) {
            if (in_validation[u]) throw Error("development sample overlaps validation");
          }
          const ModelData d = gather(c, dev.units);
          const pglm::CvResult cv = pglm::cv_select_lambda(
              d.x, d.y, config.model.norm, d.factors,
              cv_options(config.model, derive_seed(seed, 2)));
          const Eigen::VectorXd score = pglm::predict_linear(cv.model, val.x);
          const auto records = metrics::make_records(
              val.y, std::span<const double>(score.data(), static_cast<std::size_t>(score.size())),
              validation.weights);
          out.auc = ipw ? metrics::auc_ipw(records) : metrics::auc_wilcoxon(records);
          out.abstracted = static_cast<double>(dev.distinct_units());
          out.ok = true;
        } catch (const Error& e) {
          out.error = fmt::format("replicate {} design {} n={}: {}", r, arm.label, n, e.what());
        }
      }
    }
  });

  CurveTable table;
  for (std::size_t a = 0; a < arms; ++a) {
    for (std::size_t s = 0; s < sizes; ++s) {
      const std::size_t cell = a * sizes + s;
      CurvePoint pt;
      pt.design = config.designs[a].label;
      pt.surrogate =
          config.designs[a].kind == design::DesignKind::SGS ? config.designs[a].surrogate : "";
      pt.n = config.abstraction_sizes[s];
      std::vector<double> aucs;
      std::vector<double> abstracted;
      for (std::size_t r = 0; r < reps; ++r) {
        const CellResult& res = results[r][cell];
        if (res.ok) {
          aucs.push_back(res.auc);
          abstracted.push_back(res.abstracted);
        } else {
          ++pt.failures;
          if (table.failure_messages.size() < kMaxFailureMessages) {
            table.failure_messages.push_back(res.error);
          }
        }
      }
      pt.replicates = static_cast<int>(aucs.size());
      pt.mean_auc = mean_of(aucs);
      pt.se = standard_error(aucs);
      pt.mean_abstracted = mean_of(abstracted);
      pt.dropped = static_cast<double>(pt.failures) >
                   config.failure_tolerance * static_cast<double>(config.replicates);
      table.points.push_back(pt);
    }
  }
  return table;
}

ComparisonTable run_design_comparison(const ExperimentConfig& config) {
  text::Corpus corpus;
  if (config.corpus.path.empty()) {
    corpus = text::synthetic_radiology_corpus(config.corpus.synthetic);
  } else {
    std::ifstream in(config.corpus.path);
    if (!in) throw InvalidArgument(fmt::format("cannot open corpus '{}'", config.corpus.path));
    corpus = text::read_jsonl(in);
  }
  std::vector<std::string> codes = text::lumbar_fracture_codes();
  if (!config.corpus.code_set_path.empty()) {
    std::ifstream in(config.corpus.code_set_path);
    if (!in) {
      throw InvalidArgument(fmt::format("cannot open code set '{}'", config.corpus.code_set_path));
    }
    codes = text::read_code_set(in);
  }
  return run_design_comparison(config, corpus, codes);
}

ComparisonTable run_design_comparison(const ExperimentConfig& config, const text::Corpus& corpus,
                                      const std::vector<std::string>& code_set) {
  validate(config);
  for (const text::Document& d : corpus) {
    if (!d.label) throw InvalidArgument(fmt::format("document '{}' has no label", d.id));
  }
  const std::vector<std::uint8_t> z =
      text::build_icd_surrogate(corpus, code_set, config.corpus.icd_threshold);
  std::vector<std::uint8_t> y(corpus.size());
  for (std::size_t i = 0; i < corpus.size(); ++i) y[i] = *corpus[i].label;

  ComparisonTable table;
  MartSummary& sum = table.summary;
  sum.corpus_size = static_cast<std::int64_t>(corpus.size());
  const double p_z = static_cast<double>(std::count(z.begin(), z.end(), 1)) /
                     static_cast<double>(corpus.size());
  sum.corpus_surrogate_rate = p_z;

  // Marts: SGS development mart, then an SRS validation mart from the rest.
  const std::uint64_t mart_seed = derive_seed(config.master_seed, streams::kReplicate, 0x3A27);
  const auto frame = sampling::full_frame(corpus.size());
  const sampling::Sample dev = sampling::draw_sgs(frame, z, config.development_size,
                                                  config.development_ratio, mart_seed);
  std::vector<std::uint8_t> used(corpus.size(), 0);
  for (std::size_t u : dev.units) used[u] = 1;
  std::vector<std::size_t> rest;
  for (std::size_t u = 0; u < corpus.size(); ++u) {
    if (!used[u]) rest.push_back(u);
  }
  const sampling::Sample val =
      sampling::draw_srs(rest, config.mart_validation_size, derive_seed(mart_seed, 1));

  text::Corpus marts;
  for (std::size_t u : dev.units) marts.push_back(corpus[u]);
  for (std::size_t u : val.units) marts.push_back(corpus[u]);
  const text::Vocabulary vocab = text::build_vocabulary(marts, config.corpus.filter);
  const text::SparseMatrix tfidf = text::tfidf_matrix(marts, vocab);
  std::vector<std::uint8_t> mart_z;
  std::vector<std::uint8_t> mart_y;
  for (std::size_t u : dev.units) {
    mart_z.push_back(z[u]);
    mart_y.push_back(y[u]);
  }
  for (std::size_t u : val.units) {
    mart_z.push_back(z[u]);
    mart_y.push_back(y[u]);
  }
  const text::DesignMatrix dm = text::assemble_design_matrix(tfidf, vocab, mart_z);
  const auto n_dev = static_cast<Eigen::Index>(dev.units.size());
  const auto n_val = static_cast<Eigen::Index>(val.units.size());
  const Eigen::MatrixXd x_dev = dm.x.topRows(n_dev);
  const Eigen::MatrixXd x_val = dm.x.bottomRows(n_val);
  const std::vector<std::uint8_t> y_dev(mart_y.begin(), mart_y.begin() + n_dev);
  const std::vector<std::uint8_t> y_val(mart_y.begin() + n_dev, mart_y.end());
  const std::vector<std::uint8_t> z_val(mart_z.begin() + n_dev, mart_z.end());
  sum.features = dm.names.size();

  {
    const auto rec = metrics::make_records(
        y_val, std::vector<double>(z_val.begin(), z_val.end()));
    sum.sensitivity = metrics::ipw_rate(rec, metrics::RateKind::Sensitivity, 0.5);
    sum.specificity = metrics::ipw_rate(rec, metrics::RateKind::Specificity, 0.5);
    sum.surrogate_auc = metrics::auc_binary_predictor(sum.sensitivity, sum.specificity);
    sum.validation_prevalence = metrics::ipw_rate(rec, metrics::RateKind::Prevalence);
    sum.development_prevalence =
        static_cast<double>(std::count(y_dev.begin(), y_dev.end(), 1)) / static_cast<double>(n_dev);
    const design::SurrogateSpec zs{sum.sensitivity, sum.specificity};
    const design::LikelihoodRatios lr = design::likelihood_ratios(zs);
    sum.lr_positive = lr.positive;
    sum.lr_negative = lr.negative;
    try {
      sum.o_ratio = design::o_ratio_exact({sum.validation_prevalence, sum.corpus_size}, zs,
                                          config.development_ratio);
    } catch (const DesignError&) {
      sum.o_ratio = std::nan("");
    }
  }

  // Dev-mart rows are units of a new frame [0, n_dev); the sampler needs the
  // surrogate indexed by that frame.
  sampling::Sample dev_frame;
  dev_frame.units = sampling::full_frame(static_cast<std::size_t>(n_dev));
  dev_frame.weights = dev.weights;
  dev_frame.design = dev.design;
  const std::vector<std::uint8_t> z_dev(mart_z.begin(), mart_z.begin() + n_dev);

  enum Arm { kSgs = 0, kSrs = 1 };
  const std::size_t sizes = config.abstraction_sizes.size();
  const auto reps = static_cast<std::size_t>(config.replicates);
  std::vector<std::vector<CellResult>> results(reps, std::vector<CellResult>(2 * sizes));
  parallel_for(reps, config.jobs, [&](std::size_t r) {
    for (std::size_t s = 0; s < sizes; ++s) {
      for (int arm : {kSgs, kSrs}) {
        const std::size_t cell = s * 2 + static_cast<std::size_t>(arm);
        const std::uint64_t seed = cell_seed(config.master_seed, r, cell);
        const std::int64_t n = config.abstraction_sizes[s];
        CellResult& out = results[r][cell];
        try {
          sampling::Sample draw;
          if (arm == kSgs) {
            // Plain with-replacement resampling keeps the mart's SGS composition.
            Rng rng = make_rng(seed, streams::kBootstrap);
            for (std::int64_t k = 0; k < n; ++k) {
              draw.units.push_back(uniform_index(rng, static_cast<std::size_t>(n_dev)));
            }
          } else {
            draw = sampling::draw_inverse_sgs(dev_frame, z_dev, n, config.development_ratio, p_z,
                                              seed, sampling::Replacement::With);
          }
          Eigen::MatrixXd xs(static_cast<Eigen::Index>(draw.units.size()), x_dev.cols());
          std::vector<std::uint8_t> ys(draw.units.size());
          for (std::size_t k = 0; k < draw.units.size(); ++k) {
            xs.row(static_cast<Eigen::Index>(k)) = x_dev.row(static_cast<Eigen::Index>(draw.units[k]));
            ys[k] = y_dev[draw.units[k]];
          }
          const pglm::CvResult cv = pglm::cv_select_lambda(
              xs, ys, pglm::Norm::L1, dm.penalty_factors,
              cv_options(config.model, derive_seed(seed, 2)));
          const Eigen::VectorXd score = pglm::predict_linear(cv.model, x_val);
          out.auc = metrics::auc_wilcoxon(
              y_val, std::span<const double>(score.data(), static_cast<std::size_t>(score.size())));
          out.ok = true;
        } catch (const Error& e) {
          out.error = e.what();
        }
      }
    }
  });

  for (int arm : {kSgs, kSrs}) {
    for (std::size_t s = 0; s < sizes; ++s) {
      ComparisonPoint pt;
      pt.design = arm == kSgs ? "sgs" : "srs";
      pt.n = config.abstraction_sizes[s];
      std::vector<double> aucs;
      for (std::size_t r = 0; r < reps; ++r) {
        const CellResult& res = results[r][s * 2 + static_cast<std::size_t>(arm)];
        if (res.ok) {
          aucs.push_back(res.auc);
        } else {
          ++pt.failures;
        }
      }
      pt.replicates = static_cast<int>(aucs.size());
      if (!aucs.empty()) {
        pt.mean_auc = mean_of(aucs);
        pt.lower = metrics::quantile(aucs, 0.025);
        pt.upper = metrics::quantile(aucs, 0.975);
      }
      table.points.push_back(pt);
    }
  }
  return table;
}

std::vector<DiagnosticPoint> run_theory_diagnostics(const ExperimentConfig& config) {
  validate(config);
  const BinormalSetup& b = config.binormal;
  const auto p = static_cast<Eigen::Index>(b.case_mean.size());
  cohort::BinormalCohortConfig bc;
  bc.cohort_size = b.cohort_size;
  bc.prevalence = b.prevalence;
  bc.case_mean = Eigen::Map<const Eigen::VectorXd>(b.case_mean.data(), p);
  bc.covariance = b.covariance.empty()
                      ? Eigen::MatrixXd::Identity(p, p)
                      : Eigen::MatrixXd(Eigen::Map<const Eigen::Matrix<double, Eigen::Dynamic,
                                                                       Eigen::Dynamic, Eigen::RowMajor>>(
                            b.covariance.data(), p, p));
  bc.surrogates = b.surrogates;
  const design::BinormalParams truth = design::lda_truth(bc.case_mean, bc.covariance);
  const double truth_auc = design::auc_index(truth).auc;

  const std::size_t arms = config.designs.size();
  const std::size_t sizes = config.abstraction_sizes.size();
  const auto reps = static_cast<std::size_t>(config.replicates);
  struct Cell {
    bool ok = false;
    double empirical = 0.0;
    double index = 0.0;
  };
  std::vector<std::vector<Cell>> results(reps, std::vector<Cell>(arms * sizes));

  parallel_for(reps, config.jobs, [&](std::size_t r) {
    cohort::BinormalCohortConfig rc = bc;
    rc.seed = derive_seed(config.master_seed, streams::kReplicate, r);
    const cohort::GeneratedCohort g = cohort::generate_binormal_cohort(rc);
    const cohort::Cohort& c = g.cohort;
    const sampling::Sample validation =
        sampling::draw_srs(c, config.validation_size, derive_seed(rc.seed, 0x7a1));
    std::vector<std::uint8_t> in_validation(c.size(), 0);
    for (std::size_t u : validation.units) in_validation[u] = 1;
    std::vector<std::size_t> pool;
    for (std::size_t u = 0; u < c.size(); ++u) {
      if (!in_validation[u]) pool.push_back(u);
    }
    const ModelData val = gather(c, validation.units);
    const Eigen::MatrixXd x_val = val.x.leftCols(p);

    for (std::size_t a = 0; a < arms; ++a) {
      const DesignArm& arm = config.designs[a];
      for (std::size_t s = 0; s < sizes; ++s) {
        const std::size_t cell = a * sizes + s;
        const std::uint64_t seed = cell_seed(config.master_seed, r, cell);
        const std::int64_t n = config.abstraction_sizes[s];
        try {
          sampling::Sample dev;
          if (arm.kind == design::DesignKind::SGS) {
            dev = sampling::draw_sgs(pool, c.surrogate(arm.surrogate), n, arm.ratio, seed);
          } else if (arm.kind == design::DesignKind::SRS) {
            dev = sampling::draw_srs(pool, n, seed);
          } else {
            throw InvalidArgument("theory diagnostics supports SRS and SGS designs");
          }
          const ModelData d = gather(c, dev.units);
          pglm::PenaltySpec pen{pglm::Norm::L1, 0.0, d.factors};
          pglm::FitOptions opts;
          opts.standardize = false;
          const pglm::FitResult fit = pglm::fit(d.x, d.y, pen, opts);
          const pglm::CovarianceApprox cov = pglm::coefficient_covariance(fit, d.x);
          // Covariance rows for the p feature columns (intercept is row 0).
          Eigen::MatrixXd v = Eigen::MatrixXd::Zero(p, p);
          std::vector<Eigen::Index> pos(static_cast<std::size_t>(p), -1);
          for (std::size_t k = 0; k < cov.active.size(); ++k) {
            if (cov.active[k] < p) pos[static_cast<std::size_t>(cov.active[k])] = static_cast<Eigen::Index>(k) + 1;
          }
          for (Eigen::Index i = 0; i < p; ++i) {
            for (Eigen::Index j = 0; j < p; ++j) {
              const Eigen::Index pi = pos[static_cast<std::size_t>(i)];
              const Eigen::Index pj = pos[static_cast<std::size_t>(j)];
              if (pi > 0 && pj > 0) v(i, j) = cov.matrix(pi, pj);
            }
          }
          design::BinormalParams est = truth;
          est.coefficient_covariance = v;
          const Eigen::VectorXd beta_x = fit.coefficients.head(p);
          const Eigen::VectorXd score = x_val * beta_x;
          Cell& out = results[r][cell];
          out.empirical = metrics::auc_wilcoxon(
              val.y, std::span<const double>(score.data(), static_cast<std::size_t>(score.size())));
          out.index = design::auc_index(est).auc;
          out.ok = fit.converged;
        } catch (const Error&) {
        }
      }
    }
  });

  std::vector<DiagnosticPoint> points;
  for (std::size_t a = 0; a < arms; ++a) {
    for (std::size_t s = 0; s < sizes; ++s) {
      DiagnosticPoint pt;
      pt.design = config.designs[a].label;
      pt.surrogate =
          config.designs[a].kind == design::DesignKind::SGS ? config.designs[a].surrogate : "";
      pt.n = config.abstraction_sizes[s];
      pt.truth_auc = truth_auc;
      std::vector<double> emp;
      std::vector<double> idx;
      std::vector<double> gaps;
      for (std::size_t r = 0; r < reps; ++r) {
        const Cell& cell = results[r][a * sizes + s];
        if (!cell.ok) {
          ++pt.failures;
          continue;
        }
        emp.push_back(cell.empirical);
        idx.push_back(cell.index);
        gaps.push_back(cell.empirical - cell.index);
      }
      pt.replicates = static_cast<int>(emp.size());
      pt.empirical_auc = mean_of(emp);
      pt.index_auc = mean_of(idx);
      pt.gap = mean_of(gaps);

      // Fraction of replicates whose ordering of designs (pairwise, at this
      // n) agrees between the empirical AUC and the index.
      std::size_t agree = 0;
      std::size_t total = 0;
      for (std::size_t r = 0; r < reps; ++r) {
        for (std::size_t other = 0; other < arms; ++other) {
          if (other == a) continue;
          const Cell& mine = results[r][a * sizes + s];
          const Cell& theirs = results[r][other * sizes + s];
          if (!mine.ok || !theirs.ok) continue;
          ++total;
          if ((mine.empirical > theirs.empirical) == (mine.index > theirs.index)) ++agree;
        }
      }
      pt.rank_agreement = total ? static_cast<double>(agree) / static_cast<double>(total) : 1.0;
      points.push_back(pt);
    }
  }
  return points;
}

void write_curves_csv(std::ostream& out, const CurveTable& table) {
  out << "design,surrogate,n,mean_auc,se,replicates,failures\n";
  for (const CurvePoint& p : table.points) {
    if (p.dropped) continue;
    out << fmt::format("{},{},{},{:.6f},{:.6f},{},{}\n", p.design, p.surrogate, p.n, p.mean_auc,
                       p.se, p.replicates, p.failures);
  }
}

void write_comparison_csv(std::ostream& out, const ComparisonTable& table) {
  out << "design,n,mean_auc,lower,upper,replicates,failures\n";
  for (const ComparisonPoint& p : table.points) {
    out << fmt::format("{},{},{:.6f},{:.6f},{:.6f},{},{}\n", p.design, p.n, p.mean_auc, p.lower,
                       p.upper, p.replicates, p.failures);
  }
}

void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticPoint>& points) {
  out << "design,surrogate,n,empirical_auc,index_auc,gap,truth_auc,rank_agreement,replicates,"
         "failures\n";
  for (const DiagnosticPoint& p : points) {
    out << fmt::format("{},{},{},{:.6f},{:.6f},{:.6f},{:.6f},{:.4f},{},{}\n", p.design,
                       p.surrogate, p.n, p.empirical_auc, p.index_auc, p.gap, p.truth_auc,
                       p.rank_agreement, p.replicates, p.failures);
  }
}

nlohmann::json manifest_json(const ExperimentConfig& config) {
  return {{"experiment", to_string(config.kind)},
          {"name", config.name},
          {"config_hash", config_hash(config)},
          {"master_seed", config.master_seed},
          {"replicates", config.replicates},
          {"version", SGS_VERSION},
          {"config", to_json(config)}};
}

nlohmann::json to_json(const MartSummary& s) {
  return {{"corpus_size", s.corpus_size},
          {"corpus_surrogate_rate", s.corpus_surrogate_rate},
          {"features", s.features},
          {"sensitivity", s.sensitivity},
          {"specificity", s.specificity},
          {"surrogate_auc", s.surrogate_auc},
          {"lr_positive", s.lr_positive},
          {"lr_negative", s.lr_negative},
          {"o_ratio", s.o_ratio},
          {"validation_prevalence", s.validation_prevalence},
          {"development_prevalence", s.development_prevalence}};
}

}  // namespace sgs::harness
