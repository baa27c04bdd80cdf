#include "sgs/pglm.hpp"

#include <algorithm>
#include <cassert>
#include <cmath>
#include <limits>
#include <numeric>

#include <fmt/format.h>
#include <nlohmann/json.hpp>

#include "sgs/error.hpp"
#include "sgs/metrics.hpp"
#include "sgs/random.hpp"

namespace sgs::pglm {
namespace {

constexpr double kMinWeight = 1e-5;
constexpr double kDevianceRatioStop = 0.999;
constexpr int kMaxHalvings = 40;
constexpr int kMaxExpansions = 10;
constexpr double kInnerStart = 1e-7;
constexpr double kInnerFloor = 1e-16;
constexpr double kDevianceChangeStop = 1e-5;
constexpr int kMaxInnerSweeps = 10000;

double softplus(double x) { return x > 0.0 ? x + std::log1p(std::exp(-x)) : std::log1p(std::exp(x)); }
double expit(double x) { return 1.0 / (1.0 + std::exp(-x)); }

double soft_threshold(double g, double t) {
  if (g > t) return g - t;
  if (g < -t) return g + t;
  return 0.0;
}

Eigen::VectorXd to_vector(std::span<const std::uint8_t> y) {
  Eigen::VectorXd v(static_cast<Eigen::Index>(y.size()));
  for (std::size_t i = 0; i < y.size(); ++i) {
    if (y[i] > 1) throw InvalidArgument("outcomes must be 0 or 1");
    v[static_cast<Eigen::Index>(i)] = y[i];
  }
  return v;
}

double nll_of(const Eigen::VectorXd& eta, const Eigen::VectorXd& y) {
  double s = 0.0;
  for (Eigen::Index i = 0; i < eta.size(); ++i) s += softplus(eta[i]) - y[i] * eta[i];
  return s;
}

Eigen::VectorXd resolve_factors(const Eigen::VectorXd& factors, Eigen::Index p) {
  if (factors.size() == 0) return Eigen::VectorXd::Ones(p);
  if (factors.size() != p) {
    throw InvalidArgument(fmt::format("{} penalty factors for {} features", factors.size(), p));
  }
  if ((factors.array() < 0.0).any() || !factors.allFinite()) {
    throw InvalidArgument("penalty factors must be finite and nonnegative");
  }
  return factors;
}

struct State {
  double b0 = 0.0;
  Eigen::VectorXd b;
  Eigen::VectorXd eta;
};

struct SparseColumn {
  std::vector<Eigen::Index> rows;
  std::vector<double> values;
};

struct SolveInfo {
  bool converged = false;
  int iterations = 0;
  double objective = 0.0;
  std::vector<double> trace;
};

// Standardized problem shared by all lambdas of a path.
class Problem {
 public:
  Problem(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y, Norm norm,
          const Eigen::VectorXd& factors, const FitOptions& options)
      : norm_(norm), options_(options) {
    if (static_cast<std::size_t>(x.rows()) != y.size()) {
      throw InvalidArgument(fmt::format("{} feature rows for {} outcomes", x.rows(), y.size()));
    }
    if (x.rows() < 2) throw InvalidArgument("fitting needs at least two observations");
    if (!x.allFinite()) throw InvalidArgument("features must be finite");
    y_ = to_vector(y);
    const double cases = y_.sum();
    if (cases == 0.0 || cases == static_cast<double>(y_.size())) {
      throw InvalidArgument("outcomes contain a single class");
    }
    factors_ = resolve_factors(factors, x.cols());
    std_ = standardization_of(x, options.standardize);
    xs_ = x;
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (std_.scale[j] > 0.0) {
        xs_.col(j).array() = (xs_.col(j).array() - std_.center[j]) / std_.scale[j];
      } else {
        xs_.col(j).setZero();
      }
    }
    null_nll_ = nll_of(null_state().eta, y_);
    columns_.resize(static_cast<std::size_t>(x.cols()));
    for (Eigen::Index j = 0; j < x.cols(); ++j) {
      if (!is_free(j)) continue;
      SparseColumn& col = columns_[static_cast<std::size_t>(j)];
      for (Eigen::Index i = 0; i < x.rows(); ++i) {
        if (x(i, j) != 0.0) {
          col.rows.push_back(i);
          col.values.push_back(x(i, j));
        }
      }
    }
  }

  Eigen::Index n() const { return xs_.rows(); }
  Eigen::Index p() const { return xs_.cols(); }
  const Standardization& standardization() const { return std_; }
  const Eigen::VectorXd& factors() const { return factors_; }
  const Eigen::MatrixXd& xs() const { return xs_; }
  const Eigen::VectorXd& y() const { return y_; }
  bool is_free(Eigen::Index j) const { return std_.scale[j] > 0.0; }

  State null_state() const {
    State s;
    const double m = y_.mean();
    s.b0 = std::log(m / (1.0 - m));
    s.b = Eigen::VectorXd::Zero(p());
    s.eta = Eigen::VectorXd::Constant(n(), s.b0);
    return s;
  }

  double null_nll() const { return null_nll_; }

  double penalty(double lambda, const Eigen::VectorXd& b) const {
    if (std::isinf(lambda) || lambda == 0.0) return 0.0;
    if (norm_ == Norm::L1) return lambda * (factors_.array() * b.array().abs()).sum();
    return 0.5 * lambda * (factors_.array() * b.array().square()).sum();
  }

  double objective(double lambda, const State& s) const {
    return nll_of(s.eta, y_) + penalty(lambda, s.b);
  }

  // lambda = +inf holds every penalized coefficient at zero.
  SolveInfo solve(double lambda, State& s) const {
    return norm_ == Norm::L1 ? solve_l1(lambda, s) : solve_l2(lambda, s);
  }

  // Max over penalized columns of |x_j'(y - p)| / f_j at the given state.
  double max_penalized_gradient(const State& s) const {
    Eigen::VectorXd r = y_ - s.eta.unaryExpr([](double e) { return expit(e); });
    double best = 0.0;
    for (Eigen::Index j = 0; j < p(); ++j) {
      if (!is_free(j) || factors_[j] == 0.0) continue;
      best = std::max(best, std::abs(xs_.col(j).dot(r)) / factors_[j]);
    }
    return best;
  }

 private:
  bool held_at_zero(double lambda, Eigen::Index j) const {
    return !is_free(j) || (std::isinf(lambda) && factors_[j] > 0.0);
  }

  // Change of the linear predictor for a coefficient step.
  Eigen::VectorXd direction(double db0, const Eigen::VectorXd& db) const {
    double offset = db0;
    Eigen::VectorXd deta = Eigen::VectorXd::Zero(n());
    for (Eigen::Index j = 0; j < p(); ++j) {
      if (db[j] == 0.0) continue;
      const double ds = db[j] / std_.scale[j];
      const SparseColumn& col = columns_[static_cast<std::size_t>(j)];
      for (std::size_t k = 0; k < col.rows.size(); ++k) deta[col.rows[k]] += ds * col.values[k];
      offset -= ds * std_.center[j];
    }
    deta.array() += offset;
    return deta;
  }

  // Accepts a damped step along (db0, db); returns false when no decrease
  // is possible (the current point is optimal to working precision).
  bool line_search(double lambda, State& s, double db0, const Eigen::VectorXd& db,
                   double& f_current, double& step) const {
    const Eigen::VectorXd deta = direction(db0, db);
    double t = 1.0;
    for (int h = 0; h < kMaxHalvings; ++h, t *= 0.5) {
      State trial;
      trial.b0 = s.b0 + t * db0;
      trial.b = s.b + t * db;
      trial.eta = s.eta + t * deta;
      const double f = objective(lambda, trial);
      if (f <= f_current) {
        assert(f <= f_current);
        s = std::move(trial);
        f_current = f;
        step = t;
        if (t == 1.0) expand(lambda, s, db0, db, deta, f_current, step);
        return true;
      }
    }
    return false;
  }

  // Near separation the quadratic model undershoots; keep doubling an
  // accepted full step while the objective still decreases.
  void expand(double lambda, State& s, double db0, const Eigen::VectorXd& db,
              const Eigen::VectorXd& deta, double& f_current, double& step) const {
    for (int k = 0; k < kMaxExpansions; ++k) {
      State trial;
      trial.b0 = s.b0 + step * db0;
      trial.b = s.b + step * db;
      trial.eta = s.eta + step * deta;
      const double f = objective(lambda, trial);
      if (!(f < f_current)) return;
      s = std::move(trial);
      f_current = f;
      step *= 2.0;
    }
  }

  SolveInfo solve_l1(double lambda, State& s) const {
    SolveInfo info;
    // Both loops measure movement as c_j * d_j^2 against the null deviance.
    // Without a deviance tolerance the inner threshold tightens with the
    // previous outer step so the outer loop keeps Newton's rate.
    const double outer_tol = options_.deviance_tolerance * null_nll_;
    double inner_tol = outer_tol > 0.0 ? outer_tol : kInnerStart * null_nll_;
    double f = objective(lambda, s);
    const Eigen::Index nn = n();
    Eigen::VectorXd w(nn);
    Eigen::VectorXd rho(nn);
    std::vector<double> wx(static_cast<std::size_t>(p()));
    std::vector<double> xwx(static_cast<std::size_t>(p()));
    std::vector<Eigen::Index> active;
    for (int it = 1; it <= options_.max_iterations; ++it) {
      info.iterations = it;
      for (Eigen::Index i = 0; i < nn; ++i) {
        const double pr = expit(s.eta[i]);
        w[i] = std::max(pr * (1.0 - pr), kMinWeight);
        rho[i] = y_[i] - pr;
      }
      // Working residual r = rho + shift * w; centering of a column only
      // touches the scalar shift, so updates cost O(nnz) per column.
      const double wsum = w.sum();
      double rho_sum = rho.sum();
      double shift = 0.0;
      std::fill(xwx.begin(), xwx.end(), -1.0);
      auto moments = [&](Eigen::Index j) {
        const auto jj = static_cast<std::size_t>(j);
        if (xwx[jj] < 0.0) {
          const SparseColumn& col = columns_[jj];
          double a = 0.0;
          double q = 0.0;
          for (std::size_t k = 0; k < col.rows.size(); ++k) {
            const double t = w[col.rows[k]] * col.values[k];
            a += t;
            q += t * col.values[k];
          }
          const double m = std_.center[j];
          const double sc = std_.scale[j];
          wx[jj] = a;
          xwx[jj] = (q - 2.0 * m * a + m * m * wsum) / (sc * sc);
        }
        return xwx[jj];
      };

      double nb0 = s.b0;
      Eigen::VectorXd nb = s.b;
      auto update = [&](Eigen::Index j) -> double {
        const auto jj = static_cast<std::size_t>(j);
        const SparseColumn& col = columns_[jj];
        const double c = moments(j);
        const double m = std_.center[j];
        const double sc = std_.scale[j];
        double xr = 0.0;
        for (std::size_t k = 0; k < col.rows.size(); ++k) xr += col.values[k] * rho[col.rows[k]];
        const double dot = (xr + shift * wx[jj] - m * (rho_sum + shift * wsum)) / sc;
        const double old = nb[j];
        // Unpenalized columns stay unpenalized at lambda = inf (inf * 0 is NaN).
        const double threshold = factors_[j] == 0.0 ? 0.0 : lambda * factors_[j];
        if (old == 0.0 && std::abs(dot) <= threshold) return 0.0;
        const double updated = soft_threshold(dot + c * old, threshold) / c;
        const double d = updated - old;
        if (d != 0.0) {
          const double ds = d / sc;
          for (std::size_t k = 0; k < col.rows.size(); ++k) {
            rho[col.rows[k]] -= ds * w[col.rows[k]] * col.values[k];
          }
          rho_sum -= ds * wx[jj];
          shift += ds * m;
          nb[j] = updated;
        }
        return c * d * d;
      };
      auto update_intercept = [&]() {
        const double d = (rho_sum + shift * wsum) / wsum;
        nb0 += d;
        shift -= d;
        return wsum * d * d;
      };

      for (int sweeps = 0; sweeps < kMaxInnerSweeps;) {
        double max_full = update_intercept();
        active.clear();
        for (Eigen::Index j = 0; j < p(); ++j) {
          if (held_at_zero(lambda, j)) continue;
          max_full = std::max(max_full, update(j));
          if (nb[j] != 0.0) active.push_back(j);
        }
        ++sweeps;
        if (max_full < inner_tol) break;
        while (sweeps < kMaxInnerSweeps) {
          double max_active = update_intercept();
          for (Eigen::Index j : active) max_active = std::max(max_active, update(j));
          ++sweeps;
          if (max_active < inner_tol) break;
        }
      }

      const double db0 = nb0 - s.b0;
      const Eigen::VectorXd db = nb - s.b;
      double step = 0.0;
      if (!line_search(lambda, s, db0, db, f, step)) {
        info.converged = true;
        break;
      }
      info.trace.push_back(f);
      double change = step * std::abs(db0);
      double scaled = wsum * db0 * db0;
      for (Eigen::Index j = 0; j < p(); ++j) {
        if (db[j] == 0.0) continue;
        change = std::max(change, step * std::abs(db[j]));
        scaled = std::max(scaled, moments(j) * db[j] * db[j]);
      }
      scaled *= step * step;
      if (change < options_.tolerance || scaled < outer_tol) {
        info.converged = true;
        break;
      }
      if (outer_tol == 0.0) {
        inner_tol = std::clamp(1e-3 * scaled, kInnerFloor * null_nll_, kInnerStart * null_nll_);
      }
    }
    info.objective = f;
    return info;
  }

  SolveInfo solve_l2(double lambda, State& s) const {
    SolveInfo info;
    std::vector<Eigen::Index> cols;
    for (Eigen::Index j = 0; j < p(); ++j) {
      if (!held_at_zero(lambda, j)) cols.push_back(j);
    }
    const auto q = static_cast<Eigen::Index>(cols.size());
    const double ridge = std::isinf(lambda) ? 0.0 : lambda;
    double f = objective(lambda, s);
    Eigen::MatrixXd xa(n(), q);
    for (Eigen::Index k = 0; k < q; ++k) xa.col(k) = xs_.col(cols[static_cast<std::size_t>(k)]);
    Eigen::MatrixXd h(q + 1, q + 1);
    Eigen::VectorXd g(q + 1);
    Eigen::VectorXd w(n());
    Eigen::VectorXd r(n());
    for (int it = 1; it <= options_.max_iterations; ++it) {
      info.iterations = it;
      for (Eigen::Index i = 0; i < n(); ++i) {
        const double pr = expit(s.eta[i]);
        w[i] = std::max(pr * (1.0 - pr), kMinWeight);
        r[i] = y_[i] - pr;
      }
      const Eigen::MatrixXd xw = xa.array().colwise() * w.array().sqrt();
      h.setZero();
      h(0, 0) = w.sum();
      h.block(1, 0, q, 1) = xa.transpose() * w;
      h.block(0, 1, 1, q) = h.block(1, 0, q, 1).transpose();
      h.block(1, 1, q, q).selfadjointView<Eigen::Lower>().rankUpdate(xw.transpose());
      h.block(1, 1, q, q) = h.block(1, 1, q, q).selfadjointView<Eigen::Lower>();
      g[0] = r.sum();
      g.tail(q) = xa.transpose() * r;
      for (Eigen::Index k = 0; k < q; ++k) {
        const Eigen::Index j = cols[static_cast<std::size_t>(k)];
        h(k + 1, k + 1) += ridge * factors_[j];
        g[k + 1] -= ridge * factors_[j] * s.b[j];
      }
      Eigen::LDLT<Eigen::MatrixXd> ldlt(h);
      if (ldlt.info() != Eigen::Success) {
        throw NumericalError("ridge Newton system could not be factorized");
      }
      const Eigen::VectorXd delta = ldlt.solve(g);
      Eigen::VectorXd db = Eigen::VectorXd::Zero(p());
      for (Eigen::Index k = 0; k < q; ++k) db[cols[static_cast<std::size_t>(k)]] = delta[k + 1];
      double step = 0.0;
      if (!line_search(lambda, s, delta[0], db, f, step)) {
        info.converged = true;
        break;
      }
      info.trace.push_back(f);
      if (step * delta.cwiseAbs().maxCoeff() < options_.tolerance) {
        info.converged = true;
        break;
      }
    }
    info.objective = f;
    return info;
  }

  Norm norm_;
  FitOptions options_;
  Eigen::VectorXd y_;
  Eigen::VectorXd factors_;
  Standardization std_;
  Eigen::MatrixXd xs_;
  // Raw (unstandardized) nonzeros of each free column.
  std::vector<SparseColumn> columns_;
  double null_nll_ = 0.0;
};

FitResult make_result(const Problem& prob, const State& s, const SolveInfo& info, Norm norm,
                      double lambda) {
  FitResult out;
  const Standardization& st = prob.standardization();
  out.coefficients = Eigen::VectorXd::Zero(prob.p());
  out.intercept = s.b0;
  for (Eigen::Index j = 0; j < prob.p(); ++j) {
    if (st.scale[j] > 0.0 && s.b[j] != 0.0) {
      out.coefficients[j] = s.b[j] / st.scale[j];
      out.intercept -= out.coefficients[j] * st.center[j];
    }
  }
  out.penalty = {norm, lambda, prob.factors()};
  out.converged = info.converged;
  out.iterations = info.iterations;
  out.objective = info.objective;
  out.objective_trace = info.trace;
  out.standardization = st;
  return out;
}

// Internal-scale coefficients of a reported model.
Eigen::VectorXd internal_coefficients(const FitResult& m) {
  Eigen::VectorXd b = m.coefficients;
  if (m.standardization.scale.size() == b.size()) b.array() *= m.standardization.scale.array();
  return b;
}

}  // namespace

std::string_view to_string(Norm norm) { return norm == Norm::L1 ? "l1" : "l2"; }

Norm parse_norm(std::string_view text) {
  if (text == "l1" || text == "L1" || text == "lasso") return Norm::L1;
  if (text == "l2" || text == "L2" || text == "ridge") return Norm::L2;
  throw InvalidArgument(fmt::format("unknown penalty norm '{}'", text));
}

Eigen::Index FitResult::nonzero() const {
  return (coefficients.array() != 0.0).count();
}

Standardization standardization_of(const Eigen::MatrixXd& x, bool standardize) {
  Standardization st;
  const Eigen::Index p = x.cols();
  if (!standardize) {
    st.center = Eigen::VectorXd::Zero(p);
    st.scale = Eigen::VectorXd::Ones(p);
    return st;
  }
  st.center = x.colwise().mean().transpose();
  st.scale.resize(p);
  const double n = static_cast<double>(x.rows());
  for (Eigen::Index j = 0; j < p; ++j) {
    const double var = (x.col(j).array() - st.center[j]).square().sum() / n;
    st.scale[j] = var > 1e-24 * std::max(1.0, st.center[j] * st.center[j]) ? std::sqrt(var) : 0.0;
  }
  return st;
}

FitResult fit(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y,
              const PenaltySpec& penalty, const FitOptions& options) {
  if (!(penalty.lambda >= 0.0)) throw InvalidArgument("lambda must be nonnegative");
  const Problem prob(x, y, penalty.norm, penalty.factors, options);
  State s = prob.null_state();
  const SolveInfo info = prob.solve(penalty.lambda, s);
  return make_result(prob, s, info, penalty.norm, penalty.lambda);
}

Eigen::VectorXd predict_linear(const FitResult& model, const Eigen::MatrixXd& x) {
  if (x.cols() != model.coefficients.size()) {
    throw InvalidArgument(fmt::format("model has {} coefficients but data has {} columns",
                                      model.coefficients.size(), x.cols()));
  }
  Eigen::VectorXd eta = Eigen::VectorXd::Constant(x.rows(), model.intercept);
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    if (model.coefficients[j] != 0.0) eta.noalias() += model.coefficients[j] * x.col(j);
  }
  return eta;
}

Eigen::VectorXd predict_probabilities(const FitResult& model, const Eigen::MatrixXd& x) {
  return predict_linear(model, x).unaryExpr([](double e) { return expit(e); });
}

double negative_log_likelihood(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y,
                               double intercept, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = (x * beta).array() + intercept;
  return nll_of(eta, to_vector(y));
}

Eigen::VectorXd nll_gradient(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y,
                             double intercept, const Eigen::VectorXd& beta) {
  const Eigen::VectorXd eta = (x * beta).array() + intercept;
  const Eigen::VectorXd resid =
      eta.unaryExpr([](double e) { return expit(e); }) - to_vector(y);
  Eigen::VectorXd g(beta.size() + 1);
  g[0] = resid.sum();
  g.tail(beta.size()) = x.transpose() * resid;
  return g;
}

double penalized_objective(const FitResult& model, const Eigen::MatrixXd& x,
                           std::span<const std::uint8_t> y) {
  const double nll = negative_log_likelihood(x, y, model.intercept, model.coefficients);
  const Eigen::VectorXd b = internal_coefficients(model);
  const Eigen::VectorXd f = resolve_factors(model.penalty.factors, b.size());
  const double lambda = model.penalty.lambda;
  if (model.penalty.norm == Norm::L1) return nll + lambda * (f.array() * b.array().abs()).sum();
  return nll + 0.5 * lambda * (f.array() * b.array().square()).sum();
}

double lambda_max(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y, Norm norm,
                  const Eigen::VectorXd& factors, const FitOptions& options) {
  const Problem prob(x, y, Norm::L1, factors, options);
  State s = prob.null_state();
  prob.solve(std::numeric_limits<double>::infinity(), s);
  const double top = prob.max_penalized_gradient(s);
  return norm == Norm::L1 ? top : 1e3 * top;
}

std::vector<double> lambda_grid(double top, int count, double min_ratio) {
  if (count < 1) throw InvalidArgument("lambda grid needs at least one value");
  if (!(min_ratio > 0.0 && min_ratio <= 1.0)) {
    throw InvalidArgument("lambda grid ratio must lie in (0,1]");
  }
  if (!(top > 0.0)) return std::vector<double>(static_cast<std::size_t>(count), 0.0);
  std::vector<double> grid(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    const double frac = count == 1 ? 0.0 : static_cast<double>(k) / (count - 1);
    grid[static_cast<std::size_t>(k)] = top * std::pow(min_ratio, frac);
  }
  return grid;
}

namespace {

std::vector<FitResult> run_path(const Problem& prob, Norm norm,
                                std::span<const double> lambdas) {
  std::vector<FitResult> path;
  path.reserve(lambdas.size());
  State s = prob.null_state();
  const double null_dev = prob.null_nll();
  bool saturated = false;
  double previous_ratio = 0.0;
  for (double lambda : lambdas) {
    if (saturated) {
      FitResult copy = path.back();
      copy.penalty.lambda = lambda;
      path.push_back(std::move(copy));
      continue;
    }
    const SolveInfo info = prob.solve(lambda, s);
    path.push_back(make_result(prob, s, info, norm, lambda));
    const double dev = nll_of(s.eta, prob.y());
    const double ratio = null_dev > 0.0 ? 1.0 - dev / null_dev : 0.0;
    // Same early exit as glmnet: near-saturated fit or a stalled deviance ratio.
    if (ratio > kDevianceRatioStop) saturated = true;
    if (path.size() >= 5 && ratio > 0.0 && ratio - previous_ratio < kDevianceChangeStop * ratio) {
      saturated = true;
    }
    previous_ratio = ratio;
  }
  return path;
}

}  // namespace

std::vector<FitResult> fit_path(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y,
                                Norm norm, const Eigen::VectorXd& factors,
                                std::span<const double> lambdas, const FitOptions& options) {
  for (std::size_t k = 1; k < lambdas.size(); ++k) {
    if (lambdas[k] > lambdas[k - 1]) throw InvalidArgument("lambda path must be descending");
  }
  const Problem prob(x, y, norm, factors, options);
  return run_path(prob, norm, lambdas);
}

std::vector<int> stratified_folds(std::span<const std::uint8_t> y, int folds,
                                  std::uint64_t seed) {
  if (folds < 2) throw InvalidArgument("cross-validation needs at least two folds");
  std::vector<std::size_t> cases;
  std::vector<std::size_t> controls;
  for (std::size_t i = 0; i < y.size(); ++i) (y[i] ? cases : controls).push_back(i);
  Rng rng = make_rng(seed, streams::kFolds);
  std::shuffle(cases.begin(), cases.end(), rng);
  std::shuffle(controls.begin(), controls.end(), rng);
  std::vector<int> id(y.size());
  std::size_t k = 0;
  for (std::size_t i : cases) id[i] = static_cast<int>(k++ % static_cast<std::size_t>(folds));
  for (std::size_t i : controls) id[i] = static_cast<int>(k++ % static_cast<std::size_t>(folds));
  return id;
}

CvResult cv_select_lambda(const Eigen::MatrixXd& x, std::span<const std::uint8_t> y,
                          Norm norm, const Eigen::VectorXd& factors,
                          const CvOptions& options) {
  const auto cases = static_cast<int>(std::count(y.begin(), y.end(), std::uint8_t{1}));
  const int controls = static_cast<int>(y.size()) - cases;
  const int minority = std::min(cases, controls);
  int folds = options.folds;
  if (options.adapt_folds) folds = std::min(folds, minority);
  if (folds < 2) {
    throw InvalidArgument(fmt::format(
        "cross-validation needs at least 2 cases and 2 controls (have {} / {})", cases,
        controls));
  }
  if (minority < folds) {
    throw InvalidArgument(fmt::format(
        "{}-fold cross-validation impossible: only {} units in the minority class", folds,
        minority));
  }

  const Problem full(x, y, norm, factors, options.fit);
  State s = full.null_state();
  full.solve(std::numeric_limits<double>::infinity(), s);
  double top = full.max_penalized_gradient(s);
  if (norm == Norm::L2) top *= 1e3;
  const std::vector<double> grid = lambda_grid(top, options.grid_size, options.min_ratio);
  std::vector<FitResult> full_path = run_path(full, norm, grid);

  const std::vector<int> fold_id = stratified_folds(y, folds, options.seed);
  const std::size_t g = grid.size();
  std::vector<std::vector<double>> auc(g, std::vector<double>(static_cast<std::size_t>(folds)));
  for (int k = 0; k < folds; ++k) {
    std::vector<Eigen::Index> train;
    std::vector<Eigen::Index> test;
    for (std::size_t i = 0; i < y.size(); ++i) {
      (fold_id[i] == k ? test : train).push_back(static_cast<Eigen::Index>(i));
    }
    const Eigen::MatrixXd x_train = x(train, Eigen::all);
    const Eigen::MatrixXd x_test = x(test, Eigen::all);
    std::vector<std::uint8_t> y_train;
    std::vector<std::uint8_t> y_test;
    for (Eigen::Index i : train) y_train.push_back(y[static_cast<std::size_t>(i)]);
    for (Eigen::Index i : test) y_test.push_back(y[static_cast<std::size_t>(i)]);
    const Problem prob(x_train, y_train, norm, factors, options.fit);
    const std::vector<FitResult> path = run_path(prob, norm, grid);
    for (std::size_t l = 0; l < g; ++l) {
      const Eigen::VectorXd score = predict_linear(path[l], x_test);
      auc[l][static_cast<std::size_t>(k)] = metrics::auc_wilcoxon(
          y_test, std::span<const double>(score.data(), static_cast<std::size_t>(score.size())));
    }
  }

  CvResult out;
  out.folds = folds;
  out.curve.resize(g);
  double best = -1.0;
  for (std::size_t l = 0; l < g; ++l) {
    const auto& a = auc[l];
    const double mean = std::accumulate(a.begin(), a.end(), 0.0) / folds;
    double ss = 0.0;
    for (double v : a) ss += (v - mean) * (v - mean);
    const double se = folds > 1 ? std::sqrt(ss / (folds - 1) / folds) : 0.0;
    out.curve[l] = {grid[l], mean, se};
    if (mean > best) {
      best = mean;
      out.best_index = l;
    }
  }
  out.best_lambda = grid[out.best_index];
  out.model = std::move(full_path[out.best_index]);
  return out;
}

CovarianceApprox coefficient_covariance(const FitResult& model, const Eigen::MatrixXd& x) {
  if (x.cols() != model.coefficients.size()) {
    throw InvalidArgument("covariance: column count does not match the model");
  }
  const Eigen::VectorXd f = resolve_factors(model.penalty.factors, x.cols());
  const Standardization st = standardization_of(x, true);
  CovarianceApprox out;
  for (Eigen::Index j = 0; j < x.cols(); ++j) {
    if (st.scale[j] > 0.0 && (model.coefficients[j] != 0.0 || f[j] == 0.0)) {
      out.active.push_back(j);
    }
  }
  const auto q = static_cast<Eigen::Index>(out.active.size());
  Eigen::MatrixXd d(x.rows(), q + 1);
  d.col(0).setOnes();
  for (Eigen::Index k = 0; k < q; ++k) d.col(k + 1) = x.col(out.active[static_cast<std::size_t>(k)]);
  const Eigen::VectorXd pr = predict_probabilities(model, x);
  const Eigen::VectorXd w = pr.array() * (1.0 - pr.array());
  const Eigen::MatrixXd info = d.transpose() * (d.array().colwise() * w.array()).matrix();
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> eig(info);
  const double top = eig.eigenvalues().maxCoeff();
  const double bottom = eig.eigenvalues().minCoeff();
  if (eig.info() != Eigen::Success || !(top > 0.0) || bottom <= 1e-12 * top) {
    throw SingularMatrix(
        "information matrix on the active set is singular; refit with a ridge (L2) "
        "penalty or drop collinear columns");
  }
  out.matrix = eig.eigenvectors() * eig.eigenvalues().cwiseInverse().asDiagonal() *
               eig.eigenvectors().transpose();
  out.matrix = 0.5 * (out.matrix + out.matrix.transpose());
  return out;
}

nlohmann::json to_json(const FitResult& m) {
  nlohmann::json coefs = nlohmann::json::object();
  for (Eigen::Index j = 0; j < m.coefficients.size(); ++j) {
    if (m.coefficients[j] != 0.0) coefs[std::to_string(j)] = m.coefficients[j];
  }
  auto vec = [](const Eigen::VectorXd& v) {
    return std::vector<double>(v.data(), v.data() + v.size());
  };
  return {{"intercept", m.intercept},
          {"coefficients", coefs},
          {"num_features", m.coefficients.size()},
          {"penalty",
           {{"norm", to_string(m.penalty.norm)},
            {"lambda", m.penalty.lambda},
            {"factors", vec(m.penalty.factors)}}},
          {"feature_names", m.feature_names},
          {"standardization",
           {{"center", vec(m.standardization.center)}, {"scale", vec(m.standardization.scale)}}},
          {"converged", m.converged},
          {"iterations", m.iterations},
          {"objective", m.objective}};
}

FitResult model_from_json(const nlohmann::json& j) {
  FitResult m;
  const auto p = j.at("num_features").get<Eigen::Index>();
  m.intercept = j.at("intercept").get<double>();
  m.coefficients = Eigen::VectorXd::Zero(p);
  for (const auto& [key, value] : j.at("coefficients").items()) {
    const Eigen::Index idx = std::stoll(key);
    if (idx < 0 || idx >= p) throw InvalidArgument("model coefficient index out of range");
    m.coefficients[idx] = value.get<double>();
  }
  auto vec = [](const nlohmann::json& a) {
    const auto v = a.get<std::vector<double>>();
    return Eigen::VectorXd(Eigen::Map<const Eigen::VectorXd>(v.data(), static_cast<Eigen::Index>(v.size())));
  };
  const auto& pen = j.at("penalty");
  m.penalty.norm = parse_norm(pen.at("norm").get<std::string>());
  m.penalty.lambda = pen.at("lambda").get<double>();
  m.penalty.factors = vec(pen.at("factors"));
  m.feature_names = j.value("feature_names", std::vector<std::string>{});
  if (j.contains("standardization")) {
    m.standardization.center = vec(j["standardization"].at("center"));
    m.standardization.scale = vec(j["standardization"].at("scale"));
  }
  m.converged = j.value("converged", false);
  m.iterations = j.value("iterations", 0);
  m.objective = j.value("objective", 0.0);
  return m;
}

}  // namespace sgs::pglm
