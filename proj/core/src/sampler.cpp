#include "sgs/sampler.hpp"

#include <algorithm>
#include <cmath>
#include <numeric>
#include <ostream>
#include <unordered_set>

#include <fmt/format.h>

#include "sgs/error.hpp"
#include "sgs/random.hpp"

namespace sgs::sampling {
namespace {

struct Strata {
  std::vector<std::size_t> positive;
  std::vector<std::size_t> negative;
};

Strata split(std::span<const std::size_t> frame, std::span<const std::uint8_t> surrogate) {
  Strata s;
  for (std::size_t unit : frame) {
    if (unit >= surrogate.size()) {
      throw InvalidArgument(fmt::format("unit {} outside surrogate column", unit));
    }
    (surrogate[unit] ? s.positive : s.negative).push_back(unit);
  }
  return s;
}

void take(Rng& rng, const std::vector<std::size_t>& stratum, std::size_t k,
          std::vector<std::size_t>& out) {
  for (std::size_t pos : sample_without_replacement(rng, stratum.size(), k)) {
    out.push_back(stratum[pos]);
  }
}

}  // namespace

std::size_t Sample::distinct_units() const {
  std::unordered_set<std::size_t> seen(units.begin(), units.end());
  return seen.size();
}

std::vector<std::size_t> full_frame(std::size_t population) {
  std::vector<std::size_t> frame(population);
  std::iota(frame.begin(), frame.end(), std::size_t{0});
  return frame;
}

Sample draw_srs(std::span<const std::size_t> frame, std::int64_t n, std::uint64_t seed) {
  if (n < 1) throw InvalidArgument("sample size must be positive");
  if (static_cast<std::size_t>(n) > frame.size()) {
    throw InfeasibleDesign(
        fmt::format("SRS of {} units from a frame of {}", n, frame.size()));
  }
  Rng rng = make_rng(seed, 0);
  Sample s;
  s.design = {design::DesignKind::SRS, 0.0, n};
  s.seed = seed;
  std::vector<std::size_t> all(frame.begin(), frame.end());
  take(rng, all, static_cast<std::size_t>(n), s.units);
  s.weights.assign(s.units.size(),
                   static_cast<double>(frame.size()) / static_cast<double>(n));
  return s;
}

Sample draw_srs(const cohort::Cohort& cohort, std::int64_t n, std::uint64_t seed) {
  const auto frame = full_frame(cohort.size());
  return draw_srs(frame, n, seed);
}

Sample draw_sgs(std::span<const std::size_t> frame, std::span<const std::uint8_t> surrogate,
                std::int64_t n, double ratio, std::uint64_t seed) {
  const design::DesignSpec spec{design::DesignKind::SGS, ratio, n};
  design::validate(spec);
  const Strata strata = split(frame, surrogate);
  const auto n_pos = static_cast<std::size_t>(std::llround(static_cast<double>(n) * ratio));
  const std::size_t n_neg = static_cast<std::size_t>(n) - n_pos;
  if (n_pos > strata.positive.size()) {
    throw InfeasibleDesign(fmt::format(
        "surrogate-positive stratum (Z=1) has {} units but the design needs {}",
        strata.positive.size(), n_pos));
  }
  if (n_neg > strata.negative.size()) {
    throw InfeasibleDesign(fmt::format(
        "surrogate-negative stratum (Z=0) has {} units but the design needs {}",
        strata.negative.size(), n_neg));
  }
  const double frame_pz =
      static_cast<double>(strata.positive.size()) / static_cast<double>(frame.size());
  const design::SamplingProbabilities pi = design::sampling_probabilities(
      spec, frame_pz, static_cast<std::int64_t>(frame.size()));

  Sample s;
  s.design = spec;
  s.seed = seed;
  s.units.reserve(static_cast<std::size_t>(n));
  Rng rng_pos = make_rng(seed, 1);
  Rng rng_neg = make_rng(seed, 2);
  take(rng_pos, strata.positive, n_pos, s.units);
  take(rng_neg, strata.negative, n_neg, s.units);
  s.weights.reserve(s.units.size());
  for (std::size_t i = 0; i < s.units.size(); ++i) {
    s.weights.push_back(i < n_pos ? 1.0 / pi.surrogate_positive
                                  : 1.0 / pi.surrogate_negative);
  }
  return s;
}

Sample draw_sgs(const cohort::Cohort& cohort, std::string_view surrogate_name,
                std::int64_t n, double ratio, std::uint64_t seed) {
  const auto frame = full_frame(cohort.size());
  return draw_sgs(frame, cohort.surrogate(surrogate_name), n, ratio, seed);
}

Sample random_oversample(const Sample& sample, std::span<const std::uint8_t> outcomes,
                         std::uint64_t seed) {
  std::vector<std::size_t> cases;
  std::size_t controls = 0;
  for (std::size_t i = 0; i < sample.units.size(); ++i) {
    if (outcomes[sample.units[i]]) {
      cases.push_back(i);
    } else {
      ++controls;
    }
  }
  if (cases.empty()) throw DegenerateDesign("cannot oversample: sample has no cases");
  Sample out = sample;
  out.design.kind = design::DesignKind::ROS;
  out.seed = seed;
  if (cases.size() >= controls) return out;
  Rng rng = make_rng(seed, 3);
  const std::size_t extra = controls - cases.size();
  for (std::size_t r = 0; r < extra; ++r) {
    const std::size_t pick = cases[uniform_index(rng, cases.size())];
    out.units.push_back(sample.units[pick]);
    out.weights.push_back(sample.weights[pick]);
  }
  return out;
}

Sample draw_inverse_sgs(const Sample& frame, std::span<const std::uint8_t> surrogate,
                        std::int64_t n, double ratio, double p_z, std::uint64_t seed,
                        Replacement replacement) {
  if (n < 1) throw InvalidArgument("sample size must be positive");
  if (!(ratio > 0.0 && ratio < 1.0) || !(p_z > 0.0 && p_z < 1.0)) {
    throw DegenerateDesign("inverse-SGS needs R and p_z strictly inside (0,1)");
  }
  if (frame.units.empty()) throw InvalidArgument("inverse-SGS frame is empty");
  Sample s;
  s.design = {design::DesignKind::InverseSGS, ratio, n};
  s.seed = seed;
  const double total_weight =
      std::accumulate(frame.weights.begin(), frame.weights.end(), 0.0);

  if (replacement == Replacement::With) {
    const double w_pos = p_z / ratio;
    const double w_neg = (1.0 - p_z) / (1.0 - ratio);
    std::vector<double> cumulative(frame.units.size());
    double acc = 0.0;
    for (std::size_t i = 0; i < frame.units.size(); ++i) {
      acc += surrogate[frame.units[i]] ? w_pos : w_neg;
      cumulative[i] = acc;
    }
    Rng rng = make_rng(seed, 4);
    s.units.reserve(static_cast<std::size_t>(n));
    for (std::int64_t r = 0; r < n; ++r) {
      const double u = uniform01(rng) * acc;
      auto it = std::upper_bound(cumulative.begin(), cumulative.end(), u);
      if (it == cumulative.end()) --it;
      s.units.push_back(frame.units[static_cast<std::size_t>(it - cumulative.begin())]);
    }
  } else {
    const Strata strata = split(frame.units, surrogate);
    const auto n_pos = static_cast<std::size_t>(std::llround(static_cast<double>(n) * p_z));
    const std::size_t n_neg = static_cast<std::size_t>(n) - n_pos;
    if (n_pos > strata.positive.size() || n_neg > strata.negative.size()) {
      throw InfeasibleDesign(fmt::format(
          "inverse-SGS needs {} positive / {} negative units, frame has {} / {}", n_pos,
          n_neg, strata.positive.size(), strata.negative.size()));
    }
    Rng rng_pos = make_rng(seed, 5);
    Rng rng_neg = make_rng(seed, 6);
    take(rng_pos, strata.positive, n_pos, s.units);
    take(rng_neg, strata.negative, n_neg, s.units);
  }
  s.weights.assign(s.units.size(), total_weight / static_cast<double>(n));
  return s;
}

Sample bootstrap(const Sample& sample, std::uint64_t seed) {
  Sample out;
  out.design = sample.design;
  out.seed = seed;
  const std::size_t n = sample.units.size();
  out.units.reserve(n);
  out.weights.reserve(n);
  Rng rng = make_rng(seed, streams::kBootstrap);
  for (std::size_t r = 0; r < n; ++r) {
    const std::size_t pick = uniform_index(rng, n);
    out.units.push_back(sample.units[pick]);
    out.weights.push_back(sample.weights[pick]);
  }
  return out;
}

void write_sample_csv(std::ostream& out, const Sample& sample, const cohort::Cohort& cohort,
                      std::string_view surrogate_name) {
  const auto z = cohort.surrogate(surrogate_name);
  const std::string_view design = design::to_string(sample.design.kind);
  out << "unit_id,z,y,weight,design,seed\n";
  for (std::size_t i = 0; i < sample.units.size(); ++i) {
    const std::size_t u = sample.units[i];
    out << fmt::format("{},{},{},{},{},{}\n", cohort.ids[u], z[u], cohort.outcomes[u],
                       sample.weights[i], design, sample.seed);
  }
}

}  // namespace sgs::sampling
