#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "sgs/error.hpp"
#include "sgs/harness.hpp"

namespace sgs::harness {
namespace {

std::string default_label(const DesignArm& arm) {
  switch (arm.kind) {
    case design::DesignKind::SGS:
      return fmt::format("sgs_r{:g}_{}", arm.ratio, arm.surrogate);
    case design::DesignKind::ROS:
      return "ros";
    case design::DesignKind::SRS:
      return "srs";
    case design::DesignKind::InverseSGS:
      return "inverse_sgs";
  }
  return "design";
}

nlohmann::json surrogates_json(const std::vector<cohort::SurrogateTarget>& targets) {
  nlohmann::json out = nlohmann::json::array();
  for (const auto& t : targets) {
    out.push_back({{"name", t.name},
                   {"sensitivity", t.spec.sensitivity},
                   {"specificity", t.spec.specificity}});
  }
  return out;
}

std::vector<cohort::SurrogateTarget> surrogates_from(const nlohmann::json& j) {
  std::vector<cohort::SurrogateTarget> out;
  for (const auto& s : j) {
    out.push_back({s.at("name").get<std::string>(),
                   {s.at("sensitivity").get<double>(), s.at("specificity").get<double>()}});
  }
  return out;
}

}  // namespace

std::string_view to_string(ExperimentKind kind) {
  switch (kind) {
    case ExperimentKind::LearningCurve:
      return "learning_curve";
    case ExperimentKind::DesignComparison:
      return "design_comparison";
    case ExperimentKind::TheoryDiagnostics:
      return "theory_diagnostics";
  }
  return "unknown";
}

ExperimentKind parse_experiment_kind(std::string_view text) {
  if (text == "learning_curve") return ExperimentKind::LearningCurve;
  if (text == "design_comparison") return ExperimentKind::DesignComparison;
  if (text == "theory_diagnostics") return ExperimentKind::TheoryDiagnostics;
  throw InvalidArgument(fmt::format("unknown experiment '{}'", text));
}

void validate(const ExperimentConfig& c) {
  if (c.replicates < 1) throw InvalidArgument("replicates must be at least 1");
  if (c.jobs < 1) throw InvalidArgument("jobs must be at least 1");
  if (!(c.failure_tolerance >= 0.0 && c.failure_tolerance <= 1.0)) {
    throw InvalidArgument("failure tolerance must lie in [0,1]");
  }
  if (c.model.folds < 2) throw InvalidArgument("model.folds must be at least 2");
  if (c.model.grid_size < 1) throw InvalidArgument("model.grid_size must be at least 1");
  for (std::int64_t n : c.abstraction_sizes) {
    if (n < 1) throw InvalidArgument("abstraction sizes must be positive");
  }
  switch (c.kind) {
    case ExperimentKind::LearningCurve:
      cohort::validate(c.cohort);
      if (c.designs.empty()) throw InvalidArgument("learning curve needs at least one design");
      if (c.abstraction_sizes.empty()) throw InvalidArgument("abstraction_sizes is empty");
      for (const DesignArm& arm : c.designs) {
        if (arm.kind == design::DesignKind::InverseSGS) {
          throw InvalidArgument("inverse-SGS is a resampling design; use design_comparison");
        }
        if (arm.kind == design::DesignKind::SGS) {
          design::validate(design::DesignSpec{arm.kind, arm.ratio, 1});
          bool known = false;
          for (const auto& s : c.cohort.surrogates) known = known || s.name == arm.surrogate;
          if (!known) {
            throw InvalidArgument(fmt::format("design '{}' uses unknown surrogate '{}'",
                                              arm.label, arm.surrogate));
          }
        }
      }
      if (c.validation_size < 2 || c.validation_size >= c.cohort.cohort_size) {
        throw InvalidArgument("validation size must be in [2, cohort size)");
      }
      break;
    case ExperimentKind::DesignComparison:
      if (c.abstraction_sizes.empty()) throw InvalidArgument("abstraction_sizes is empty");
      if (c.development_size < 2 || c.mart_validation_size < 2) {
        throw InvalidArgument("marts need at least two units");
      }
      design::validate(design::DesignSpec{design::DesignKind::SGS, c.development_ratio, 1});
      break;
    case ExperimentKind::TheoryDiagnostics: {
      if (c.abstraction_sizes.empty()) throw InvalidArgument("abstraction_sizes is empty");
      const auto p = c.binormal.case_mean.size();
      if (p == 0) throw InvalidArgument("binormal case_mean is empty");
      if (!c.binormal.covariance.empty() && c.binormal.covariance.size() != p * p) {
        throw InvalidArgument("binormal covariance must have p*p entries");
      }
      if (c.designs.empty()) throw InvalidArgument("theory diagnostics needs designs");
      break;
    }
  }
}

ExperimentConfig experiment_config_from_json(const nlohmann::json& j) {
  ExperimentConfig c;
  try {
    c.kind = parse_experiment_kind(j.value("experiment", std::string("learning_curve")));
    c.name = j.value("name", c.name);
    if (j.contains("cohort")) c.cohort = cohort::cohort_config_from_json(j.at("cohort"));
    if (j.contains("reuse")) {
      const auto r = j.at("reuse").get<std::string>();
      if (r == "fresh") {
        c.reuse = CohortReuse::Fresh;
      } else if (r == "fixed") {
        c.reuse = CohortReuse::Fixed;
      } else {
        throw InvalidArgument(fmt::format("reuse must be 'fresh' or 'fixed', got '{}'", r));
      }
    }
    if (j.contains("designs")) {
      for (const auto& d : j.at("designs")) {
        DesignArm arm;
        arm.kind = design::parse_design_kind(d.at("kind").get<std::string>());
        arm.ratio = d.value("ratio", arm.ratio);
        arm.surrogate = d.value("surrogate", arm.surrogate);
        arm.label = d.value("label", default_label(arm));
        c.designs.push_back(arm);
      }
    }
    c.abstraction_sizes = j.value("abstraction_sizes", c.abstraction_sizes);
    if (j.contains("validation")) {
      const auto& v = j.at("validation");
      c.validation_size = v.value("size", c.validation_size);
      c.ipw_validation_surrogate = v.value("ipw_surrogate", c.ipw_validation_surrogate);
    }
    if (j.contains("model")) {
      const auto& m = j.at("model");
      if (m.contains("norm")) c.model.norm = pglm::parse_norm(m.at("norm").get<std::string>());
      c.model.folds = m.value("folds", c.model.folds);
      c.model.grid_size = m.value("grid_size", c.model.grid_size);
      c.model.min_ratio = m.value("min_ratio", c.model.min_ratio);
      c.model.adapt_folds = m.value("adapt_folds", c.model.adapt_folds);
      c.model.standardize = m.value("standardize", c.model.standardize);
    }
    if (j.contains("corpus")) {
      const auto& k = j.at("corpus");
      c.corpus.path = k.value("path", c.corpus.path);
      c.corpus.code_set_path = k.value("code_set", c.corpus.code_set_path);
      c.corpus.icd_threshold = k.value("icd_threshold", c.corpus.icd_threshold);
      c.corpus.filter.min_fraction = k.value("min_fraction", c.corpus.filter.min_fraction);
      c.corpus.filter.max_fraction = k.value("max_fraction", c.corpus.filter.max_fraction);
      if (k.contains("synthetic")) {
        const auto& s = k.at("synthetic");
        auto& sc = c.corpus.synthetic;
        sc.documents = s.value("documents", sc.documents);
        sc.prevalence = s.value("prevalence", sc.prevalence);
        sc.icd_sensitivity = s.value("icd_sensitivity", sc.icd_sensitivity);
        sc.icd_specificity = s.value("icd_specificity", sc.icd_specificity);
        sc.signal = s.value("signal", sc.signal);
        sc.seed = s.value("seed", sc.seed);
      }
    }
    if (j.contains("marts")) {
      const auto& m = j.at("marts");
      c.development_size = m.value("development_size", c.development_size);
      c.development_ratio = m.value("development_ratio", c.development_ratio);
      c.mart_validation_size = m.value("validation_size", c.mart_validation_size);
    }
    if (j.contains("binormal")) {
      const auto& b = j.at("binormal");
      c.binormal.cohort_size = b.value("cohort_size", c.binormal.cohort_size);
      c.binormal.prevalence = b.value("prevalence", c.binormal.prevalence);
      c.binormal.case_mean = b.value("case_mean", c.binormal.case_mean);
      c.binormal.covariance = b.value("covariance", c.binormal.covariance);
      if (b.contains("surrogates")) c.binormal.surrogates = surrogates_from(b.at("surrogates"));
    }
    c.replicates = j.value("replicates", c.replicates);
    c.master_seed = j.value("master_seed", c.master_seed);
    c.failure_tolerance = j.value("failure_tolerance", c.failure_tolerance);
    c.jobs = j.value("jobs", c.jobs);
  } catch (const nlohmann::json::exception& e) {
    throw InvalidArgument(fmt::format("experiment config: {}", e.what()));
  }
  validate(c);
  return c;
}

nlohmann::json to_json(const ExperimentConfig& c) {
  nlohmann::json designs = nlohmann::json::array();
  for (const DesignArm& a : c.designs) {
    designs.push_back({{"label", a.label},
                       {"kind", design::to_string(a.kind)},
                       {"ratio", a.ratio},
                       {"surrogate", a.surrogate}});
  }
  const auto& sc = c.corpus.synthetic;
  return {
      {"experiment", to_string(c.kind)},
      {"name", c.name},
      {"cohort", cohort::to_json(c.cohort)},
      {"reuse", c.reuse == CohortReuse::Fresh ? "fresh" : "fixed"},
      {"designs", designs},
      {"abstraction_sizes", c.abstraction_sizes},
      {"validation", {{"size", c.validation_size}, {"ipw_surrogate", c.ipw_validation_surrogate}}},
      {"model",
       {{"norm", pglm::to_string(c.model.norm)},
        {"folds", c.model.folds},
        {"grid_size", c.model.grid_size},
        {"min_ratio", c.model.min_ratio},
        {"adapt_folds", c.model.adapt_folds},
        {"standardize", c.model.standardize}}},
      {"corpus",
       {{"path", c.corpus.path},
        {"code_set", c.corpus.code_set_path},
        {"icd_threshold", c.corpus.icd_threshold},
        {"min_fraction", c.corpus.filter.min_fraction},
        {"max_fraction", c.corpus.filter.max_fraction},
        {"synthetic",
         {{"documents", sc.documents},
          {"prevalence", sc.prevalence},
          {"icd_sensitivity", sc.icd_sensitivity},
          {"icd_specificity", sc.icd_specificity},
          {"signal", sc.signal},
          {"seed", sc.seed}}}}},
      {"marts",
       {{"development_size", c.development_size},
        {"development_ratio", c.development_ratio},
        {"validation_size", c.mart_validation_size}}},
      {"binormal",
       {{"cohort_size", c.binormal.cohort_size},
        {"prevalence", c.binormal.prevalence},
        {"case_mean", c.binormal.case_mean},
        {"covariance", c.binormal.covariance},
        {"surrogates", surrogates_json(c.binormal.surrogates)}}},
      {"replicates", c.replicates},
      {"master_seed", c.master_seed},
      {"failure_tolerance", c.failure_tolerance}};
}

std::string config_hash(const ExperimentConfig& config) {
  const std::string text = to_json(config).dump();
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char ch : text) {
    h ^= ch;
    h *= 0x100000001b3ULL;
  }
  return fmt::format("{:016x}", h);
}

}  // namespace sgs::harness
