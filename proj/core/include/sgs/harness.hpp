#pragma once

// Config-driven experiment engine: learning curves over abstraction sizes,
// the bootstrap design comparison on a labelled report corpus, and
// empirical-vs-theoretical AUC diagnostics on bi-normal cohorts.

#include <cstdint>
#include <functional>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include <nlohmann/json_fwd.hpp>

#include "sgs/cohort.hpp"
#include "sgs/design_math.hpp"
#include "sgs/pglm.hpp"
#include "sgs/synthetic_reports.hpp"

namespace sgs::harness {

enum class ExperimentKind { LearningCurve, DesignComparison, TheoryDiagnostics };

std::string_view to_string(ExperimentKind kind);
ExperimentKind parse_experiment_kind(std::string_view text);

struct DesignArm {
  std::string label;
  design::DesignKind kind = design::DesignKind::SRS;
  double ratio = 0.5;             // SGS only
  std::string surrogate = "z1";   // SGS only
};

struct ModelConfig {
  pglm::Norm norm = pglm::Norm::L1;
  int folds = 10;
  int grid_size = 50;
  double min_ratio = 1e-4;
  bool adapt_folds = true;
  bool standardize = true;
};

enum class CohortReuse { Fresh, Fixed };

struct CorpusSource {
  std::string path;  // JSONL; empty means synthetic
  text::SyntheticCorpusConfig synthetic;
  std::string code_set_path;  // empty means the built-in fracture codes
  std::int64_t icd_threshold = 1;
  text::FilterConfig filter;
};

struct BinormalSetup {
  std::int64_t cohort_size = 50000;
  double prevalence = 0.1;
  std::vector<double> case_mean = {0.5, 0.4, 0.3, 0.2, 0.1};
  // Either a full row-major matrix or empty for the identity.
  std::vector<double> covariance;
  std::vector<cohort::SurrogateTarget> surrogates = {{"z1", {0.40, 0.95}}};
};

struct ExperimentConfig {
  ExperimentKind kind = ExperimentKind::LearningCurve;
  std::string name = "experiment";

  // learning_curve
  cohort::CohortConfig cohort;
  CohortReuse reuse = CohortReuse::Fresh;
  std::vector<DesignArm> designs;
  std::vector<std::int64_t> abstraction_sizes;
  std::int64_t validation_size = 10000;
  // Validation drawn SGS 1:1 on this surrogate and scored with auc_ipw;
  // empty means SRS validation scored with auc_wilcoxon.
  std::string ipw_validation_surrogate;

  // design_comparison
  CorpusSource corpus;
  std::int64_t development_size = 500;
  double development_ratio = 0.5;
  std::int64_t mart_validation_size = 500;

  // theory_diagnostics
  BinormalSetup binormal;

  int replicates = 100;
  ModelConfig model;
  std::uint64_t master_seed = 1;
  double failure_tolerance = 0.2;
  int jobs = 1;
};

void validate(const ExperimentConfig& config);
ExperimentConfig experiment_config_from_json(const nlohmann::json& j);
nlohmann::json to_json(const ExperimentConfig& config);
// FNV-1a 64 of the canonical JSON form.
std::string config_hash(const ExperimentConfig& config);

struct CurvePoint {
  std::string design;
  std::string surrogate;
  std::int64_t n = 0;
  double mean_auc = 0.0;
  double se = 0.0;
  int replicates = 0;
  int failures = 0;
  bool dropped = false;
  double mean_abstracted = 0.0;  // distinct charts per replicate
};

struct CurveTable {
  std::vector<CurvePoint> points;  // config order: design-major, then size
  std::vector<std::string> failure_messages;  // first few, for diagnostics
};

CurveTable run_learning_curve(const ExperimentConfig& config);

struct ComparisonPoint {
  std::string design;  // "sgs" or "srs" (inverse-SGS resampling)
  std::int64_t n = 0;
  double mean_auc = 0.0;
  double lower = 0.0;
  double upper = 0.0;
  int replicates = 0;
  int failures = 0;
};

struct MartSummary {
  std::int64_t corpus_size = 0;
  double corpus_surrogate_rate = 0.0;
  std::size_t features = 0;  // text terms plus the surrogate column
  double sensitivity = 0.0;  // of Z, estimated on the validation mart
  double specificity = 0.0;
  double surrogate_auc = 0.0;
  double lr_positive = 0.0;
  double lr_negative = 0.0;
  double o_ratio = 0.0;
  double validation_prevalence = 0.0;
  double development_prevalence = 0.0;
};

struct ComparisonTable {
  MartSummary summary;
  std::vector<ComparisonPoint> points;
};

// Development mart: SGS of `development_size` at `development_ratio`;
// validation mart: disjoint SRS. For each size, `replicates` resamples per
// design are fitted with cross-validated lasso and scored on the validation
// mart.
ComparisonTable run_design_comparison(const ExperimentConfig& config);
ComparisonTable run_design_comparison(const ExperimentConfig& config, const text::Corpus& corpus,
                                      const std::vector<std::string>& code_set);

struct DiagnosticPoint {
  std::string design;
  std::string surrogate;
  std::int64_t n = 0;
  double empirical_auc = 0.0;
  double index_auc = 0.0;
  double gap = 0.0;  // mean of (empirical - index) per replicate
  double truth_auc = 0.0;
  double rank_agreement = 0.0;  // across designs at this n
  int replicates = 0;
  int failures = 0;
};

std::vector<DiagnosticPoint> run_theory_diagnostics(const ExperimentConfig& config);

// Runs body(0..count-1) on `jobs` threads. Exceptions are rethrown after
// all workers stop (first by index).
void parallel_for(std::size_t count, int jobs, const std::function<void(std::size_t)>& body);

void write_curves_csv(std::ostream& out, const CurveTable& table);
void write_comparison_csv(std::ostream& out, const ComparisonTable& table);
void write_diagnostics_csv(std::ostream& out, const std::vector<DiagnosticPoint>& points);

nlohmann::json manifest_json(const ExperimentConfig& config);
nlohmann::json to_json(const MartSummary& summary);

}  // namespace sgs::harness
