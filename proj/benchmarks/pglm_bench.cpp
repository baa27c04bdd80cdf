#include <benchmark/benchmark.h>

#include "sgs/cohort.hpp"
#include "sgs/pglm.hpp"
#include "sgs/sampler.hpp"

namespace {

struct Data {
  Eigen::MatrixXd x;
  std::vector<std::uint8_t> y;
};

// Desk-scale development sample: SGS 1:1 on Z1 from a 20000 x 100 cohort.
Data desk_sample(std::int64_t n) {
  sgs::cohort::CohortConfig c;
  c.cohort_size = 20000;
  c.features = 100;
  const auto g = sgs::cohort::generate_cohort(c);
  const auto s = sgs::sampling::draw_sgs(g.cohort, "z1", n, 0.5, 3);
  Data d;
  d.x.resize(n, g.cohort.features.cols());
  for (std::size_t i = 0; i < s.size(); ++i) {
    d.x.row(static_cast<Eigen::Index>(i)) =
        g.cohort.features.row(static_cast<Eigen::Index>(s.units[i]));
    d.y.push_back(g.cohort.outcomes[s.units[i]]);
  }
  return d;
}

void BM_LassoFit(benchmark::State& state) {
  const Data d = desk_sample(state.range(0));
  const double lam = 0.05 * sgs::pglm::lambda_max(d.x, d.y, sgs::pglm::Norm::L1, {});
  for (auto _ : state) {
    benchmark::DoNotOptimize(sgs::pglm::fit(d.x, d.y, {sgs::pglm::Norm::L1, lam, {}}));
  }
}
BENCHMARK(BM_LassoFit)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_LassoPath(benchmark::State& state) {
  const Data d = desk_sample(state.range(0));
  const auto grid =
      sgs::pglm::lambda_grid(sgs::pglm::lambda_max(d.x, d.y, sgs::pglm::Norm::L1, {}));
  for (auto _ : state) {
    benchmark::DoNotOptimize(sgs::pglm::fit_path(d.x, d.y, sgs::pglm::Norm::L1, {}, grid,
                                                 sgs::pglm::path_fit_options()));
  }
}
BENCHMARK(BM_LassoPath)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_CrossValidatedLasso(benchmark::State& state) {
  const Data d = desk_sample(state.range(0));
  sgs::pglm::CvOptions o;
  o.adapt_folds = true;
  for (auto _ : state) {
    benchmark::DoNotOptimize(sgs::pglm::cv_select_lambda(d.x, d.y, sgs::pglm::Norm::L1, {}, o));
  }
}
BENCHMARK(BM_CrossValidatedLasso)->Arg(300)->Arg(1000)->Unit(benchmark::kMillisecond);

void BM_RidgeFit(benchmark::State& state) {
  const Data d = desk_sample(500);
  for (auto _ : state) {
    benchmark::DoNotOptimize(sgs::pglm::fit(d.x, d.y, {sgs::pglm::Norm::L2, 1.0, {}}));
  }
}
BENCHMARK(BM_RidgeFit)->Unit(benchmark::kMillisecond);

}  // namespace
