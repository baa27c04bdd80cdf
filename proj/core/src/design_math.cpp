#include "sgs/design_math.hpp"

#include <cmath>
#include <fmt/format.h>
#include <limits>
#include <ostream>

#include "sgs/error.hpp"

namespace sgs {

SpecificityTooLow::SpecificityTooLow(double specificity)
    : DesignError(fmt::format(
          "surrogate specificity {:.4f} is below 0.5; negate the surrogate "
          "(use 1 - Z) to obtain specificity {:.4f}",
          specificity, 1.0 - specificity)) {}

namespace design {
namespace {

bool is_probability(double v) { return v >= 0.0 && v <= 1.0; }

}  // namespace

std::string_view to_string(DesignKind kind) {
  switch (kind) {
    case DesignKind::SRS: return "srs";
    case DesignKind::SGS: return "sgs";
    case DesignKind::ROS: return "ros";
    case DesignKind::InverseSGS: return "inverse_sgs";
  }
  return "unknown";
}

DesignKind parse_design_kind(std::string_view text) {
  if (text == "srs" || text == "SRS") return DesignKind::SRS;
  if (text == "sgs" || text == "SGS") return DesignKind::SGS;
  if (text == "ros" || text == "ROS") return DesignKind::ROS;
  if (text == "inverse_sgs" || text == "inverse-sgs" || text == "INVERSE_SGS")
    return DesignKind::InverseSGS;
  throw InvalidArgument(fmt::format("unknown design kind '{}'", text));
}

void validate(const SurrogateSpec& z) {
  if (!is_probability(z.sensitivity) || !is_probability(z.specificity)) {
    throw InvalidArgument(fmt::format(
        "surrogate sensitivity/specificity must lie in [0,1] (got {}, {})",
        z.sensitivity, z.specificity));
  }
}

void validate(const PopulationSpec& pop) {
  if (!(pop.prevalence > 0.0 && pop.prevalence < 1.0)) {
    throw InvalidArgument(
        fmt::format("prevalence must lie in (0,1) (got {})", pop.prevalence));
  }
  if (pop.cohort_size < 1) {
    throw InvalidArgument("cohort size must be at least 1");
  }
}

void validate(const DesignSpec& design) {
  if (design.budget < 1) throw InvalidArgument("abstraction budget must be positive");
  if (design.kind == DesignKind::SGS || design.kind == DesignKind::InverseSGS) {
    if (!(design.ratio > 0.0 && design.ratio < 1.0)) {
      throw DegenerateDesign(fmt::format(
          "allocation ratio R must lie strictly inside (0,1) so both strata "
          "are sampled (got {})",
          design.ratio));
    }
  }
}

void require_usable_specificity(const SurrogateSpec& z) {
  validate(z);
  if (z.specificity < 0.5) throw SpecificityTooLow(z.specificity);
}

double p_z(const PopulationSpec& pop, const SurrogateSpec& z) {
  validate(z);
  if (!is_probability(pop.prevalence)) {
    throw InvalidArgument("prevalence must lie in [0,1]");
  }
  return z.sensitivity * pop.prevalence +
         (1.0 - z.specificity) * (1.0 - pop.prevalence);
}

LikelihoodRatios likelihood_ratios(const SurrogateSpec& z) {
  validate(z);
  constexpr double inf = std::numeric_limits<double>::infinity();
  LikelihoodRatios lr;
  if (z.specificity == 1.0) {
    lr.positive = inf;
    lr.perfect_specificity = true;
  } else {
    lr.positive = z.sensitivity / (1.0 - z.specificity);
  }
  lr.negative = z.specificity == 0.0 ? inf : (1.0 - z.sensitivity) / z.specificity;
  return lr;
}

StratumCaseRates stratum_case_rates(const PopulationSpec& pop,
                                    const SurrogateSpec& z) {
  const double pz = p_z(pop, z);
  if (!(pz > 0.0 && pz < 1.0)) {
    throw DegenerateDesign(fmt::format(
        "P(Z=1) = {} leaves one surrogate stratum empty", pz));
  }
  return {z.sensitivity * pop.prevalence / pz,
          (1.0 - z.sensitivity) * pop.prevalence / (1.0 - pz)};
}

double o_ratio_exact(const PopulationSpec& pop, const SurrogateSpec& z,
                     double ratio) {
  require_usable_specificity(z);
  validate(pop);
  if (!is_probability(ratio)) throw InvalidArgument("R must lie in [0,1]");
  const double pz = p_z(pop, z);
  const double num = ratio * z.sensitivity + pz * (1.0 - ratio - z.sensitivity);
  const double den = ratio * (1.0 - z.specificity) + pz * (z.specificity - ratio);
  if (!(den > 0.0)) {
    throw DegenerateDesign(
        "expected SGS sample contains no controls (O_ratio denominator <= 0)");
  }
  return num / den;
}

double o_ratio_rare_approx(const SurrogateSpec& z, double ratio) {
  require_usable_specificity(z);
  if (!is_probability(ratio)) throw InvalidArgument("R must lie in [0,1]");
  const LikelihoodRatios lr = likelihood_ratios(z);
  if (lr.perfect_specificity) {
    if (ratio == 0.0) return lr.negative;
    return std::numeric_limits<double>::infinity();
  }
  return ratio * lr.positive + (1.0 - ratio) * lr.negative;
}

std::vector<SurfaceCell> o_ratio_surface(std::span<const SurrogateSpec> grid,
                                         double ratio,
                                         const PopulationSpec& pop) {
  std::vector<SurfaceCell> cells;
  cells.reserve(grid.size());
  for (const SurrogateSpec& z : grid) {
    cells.push_back({z, ratio, pop.prevalence, o_ratio_exact(pop, z, ratio)});
  }
  return cells;
}

std::vector<SurrogateSpec> surrogate_grid(double sens_from, double sens_to,
                                          double sens_step, double spec_from,
                                          double spec_to, double spec_step) {
  if (!(sens_step > 0.0) || !(spec_step > 0.0)) {
    throw InvalidArgument("grid steps must be positive");
  }
  auto axis = [](double from, double to, double step) {
    std::vector<double> values;
    const auto count = static_cast<long>(std::floor((to - from) / step + 0.5));
    for (long i = 0; i <= count; ++i) values.push_back(from + static_cast<double>(i) * step);
    return values;
  };
  std::vector<SurrogateSpec> grid;
  for (double spec : axis(spec_from, spec_to, spec_step)) {
    for (double sens : axis(sens_from, sens_to, sens_step)) {
      grid.push_back({sens, spec});
    }
  }
  return grid;
}

void write_surface_csv(std::ostream& out, std::span<const SurfaceCell> cells) {
  out << "sensitivity,specificity,R,prevalence,o_ratio\n";
  for (const SurfaceCell& c : cells) {
    out << fmt::format("{:.6f},{:.6f},{:.6f},{:.6f},{:.6f}\n",
                       c.surrogate.sensitivity, c.surrogate.specificity, c.ratio,
                       c.prevalence, c.o_ratio);
  }
}

SamplingProbabilities sampling_probabilities(const DesignSpec& design,
                                             double pz, std::int64_t cohort_size) {
  if (design.kind != DesignKind::SGS && design.kind != DesignKind::InverseSGS) {
    throw InvalidArgument("sampling probabilities are defined for SGS designs only");
  }
  validate(design);
  if (!(pz > 0.0 && pz < 1.0)) {
    throw DegenerateDesign(fmt::format("P(Z=1) = {} leaves a stratum empty", pz));
  }
  if (cohort_size < 1) throw InvalidArgument("cohort size must be positive");
  const double fraction =
      static_cast<double>(design.budget) / static_cast<double>(cohort_size);
  const double positive_share =
      design.kind == DesignKind::SGS ? design.ratio : 1.0 - design.ratio;
  SamplingProbabilities pi{positive_share / pz * fraction,
                           (1.0 - positive_share) / (1.0 - pz) * fraction};
  if (pi.surrogate_positive > 1.0) {
    throw InfeasibleDesign(fmt::format(
        "budget n={} exceeds the expected surrogate-positive stratum "
        "(pi(Z=1) = {:.4f} > 1)",
        design.budget, pi.surrogate_positive));
  }
  if (pi.surrogate_negative > 1.0) {
    throw InfeasibleDesign(fmt::format(
        "budget n={} exceeds the expected surrogate-negative stratum "
        "(pi(Z=0) = {:.4f} > 1)",
        design.budget, pi.surrogate_negative));
  }
  return pi;
}

double expected_cases(const DesignSpec& design, const PopulationSpec& pop,
                      const SurrogateSpec& z) {
  validate(pop);
  validate(design);
  const auto n = static_cast<double>(design.budget);
  switch (design.kind) {
    case DesignKind::SRS:
    case DesignKind::ROS:
      if (design.budget > pop.cohort_size) {
        throw InfeasibleDesign(fmt::format("budget n={} exceeds cohort size N={}",
                                           design.budget, pop.cohort_size));
      }
      return n * pop.prevalence;
    case DesignKind::SGS:
    case DesignKind::InverseSGS: {
      require_usable_specificity(z);
      (void)sampling_probabilities(design, p_z(pop, z), pop.cohort_size);
      const StratumCaseRates rates = stratum_case_rates(pop, z);
      const double share =
          design.kind == DesignKind::SGS ? design.ratio : 1.0 - design.ratio;
      return n * (share * rates.surrogate_positive +
                  (1.0 - share) * rates.surrogate_negative);
    }
  }
  return 0.0;
}

double srs_equivalent_budget(double cases, double prevalence) {
  if (!(prevalence > 0.0)) throw InvalidArgument("prevalence must be positive");
  return cases / prevalence;
}

double normal_cdf(double x) { return 0.5 * std::erfc(-x / std::sqrt(2.0)); }

double auc_binormal(double case_mean, double control_mean, double case_var,
                    double control_var) {
  const double total = case_var + control_var;
  if (!(total > 0.0)) {
    throw InvalidArgument("bi-normal AUC needs positive total variance");
  }
  return normal_cdf(std::abs(case_mean - control_mean) / std::sqrt(total));
}

AucIndex auc_index(const BinormalParams& params) {
  const Eigen::Index p = params.case_mean.size();
  const bool dims_ok = params.covariance.rows() == p && params.covariance.cols() == p &&
                       params.coefficients.size() == p && params.bias.size() == p &&
                       params.coefficient_covariance.rows() == p &&
                       params.coefficient_covariance.cols() == p;
  if (!dims_ok) throw InvalidArgument("auc_index: parameter dimensions disagree");

  const Eigen::VectorXd shifted = params.coefficients + params.bias;
  const Eigen::MatrixXd& sigma = params.covariance;
  const Eigen::MatrixXd& v = params.coefficient_covariance;
  const double mean_gap = params.case_mean.dot(shifted);

  AucIndex out;
  out.numerator = mean_gap * mean_gap;
  out.denominator = 2.0 * (shifted.dot(sigma * shifted) + (v * sigma).trace()) +
                    params.case_mean.dot(v * params.case_mean);
  if (!(out.denominator > 0.0)) {
    throw DegenerateDesign("auc_index: linear-predictor variance is zero");
  }
  out.separation = out.numerator / out.denominator;
  out.auc = normal_cdf(std::sqrt(out.separation));
  return out;
}

BinormalParams lda_truth(const Eigen::VectorXd& case_mean,
                         const Eigen::MatrixXd& covariance) {
  const Eigen::Index p = case_mean.size();
  BinormalParams params;
  params.case_mean = case_mean;
  params.covariance = covariance;
  params.coefficients = covariance.ldlt().solve(case_mean);
  params.bias = Eigen::VectorXd::Zero(p);
  params.coefficient_covariance = Eigen::MatrixXd::Zero(p, p);
  return params;
}

}  // namespace design
}  // namespace sgs
