#pragma once

// Abstraction-sample designs over a cohort: SRS, surrogate-guided sampling,
// random oversampling of cases and inverse-SGS resampling. Unit indices
// always refer to rows of the cohort the sample was drawn from.

#include <cstdint>
#include <iosfwd>
#include <span>
#include <string_view>
#include <vector>

#include "sgs/cohort.hpp"
#include "sgs/design_math.hpp"

namespace sgs::sampling {

struct Sample {
  std::vector<std::size_t> units;  // ROS may repeat units
  std::vector<double> weights;     // inverse inclusion probabilities
  design::DesignSpec design;
  std::uint64_t seed = 0;

  std::size_t size() const { return units.size(); }
  // Number of charts that had to be abstracted.
  std::size_t distinct_units() const;
};

// Rows [0, N) as a frame.
std::vector<std::size_t> full_frame(std::size_t population);

// n distinct units uniformly from `frame`; weights |frame| / n.
Sample draw_srs(std::span<const std::size_t> frame, std::int64_t n, std::uint64_t seed);
Sample draw_srs(const cohort::Cohort& cohort, std::int64_t n, std::uint64_t seed);

// round(n R) units from the Z=1 part of `frame`, the rest from Z=0, each
// without replacement. `surrogate` is indexed by cohort row. Weights are the
// inverse per-stratum probabilities with p_z and N taken from the frame.
Sample draw_sgs(std::span<const std::size_t> frame, std::span<const std::uint8_t> surrogate,
                std::int64_t n, double ratio, std::uint64_t seed);
Sample draw_sgs(const cohort::Cohort& cohort, std::string_view surrogate_name,
                std::int64_t n, double ratio, std::uint64_t seed);

// Replicates cases (uniformly, with replacement) until they match the
// controls. Weights are copied from the replicated unit.
Sample random_oversample(const Sample& sample, std::span<const std::uint8_t> outcomes,
                         std::uint64_t seed);

enum class Replacement { With, Without };

// Resamples an SGS-collected frame back toward SRS composition. Z=1 units
// are selected in proportion to p_z / R and Z=0 units to (1-p_z)/(1-R).
// With replacement: n independent weighted draws. Without replacement:
// round(n p_z) surrogate positives and the remainder negatives, uniformly
// within stratum.
Sample draw_inverse_sgs(const Sample& frame, std::span<const std::uint8_t> surrogate,
                        std::int64_t n, double ratio, double p_z, std::uint64_t seed,
                        Replacement replacement = Replacement::With);

// Ordinary bootstrap of a sample (n draws with replacement, weights kept).
Sample bootstrap(const Sample& sample, std::uint64_t seed);

// CSV `unit_id,z,y,weight,design,seed`.
void write_sample_csv(std::ostream& out, const Sample& sample, const cohort::Cohort& cohort,
                      std::string_view surrogate_name);

}  // namespace sgs::sampling
