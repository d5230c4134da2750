#include "diter/perron.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "diter/errors.hpp"
#include "diter/vector_ops.hpp"

namespace diter {

namespace {

constexpr double kDivergenceFactor = 10.0;
constexpr double kTargetSafety = 2.0;

double resolve_rho(const PerronProblem& prob) {
  if (prob.rho) {
    if (!(*prob.rho > 0.0) || !std::isfinite(*prob.rho)) {
      throw std::invalid_argument("perron: rho must be positive");
    }
    return *prob.rho;
  }
  const RhoEstimate est = estimate_rho(prob.matrix);
  if (!est.converged) {
    throw NonConvergenceError("perron: spectral radius estimate did not settle (residual " +
                              std::to_string(est.residual) + ")");
  }
  return est.rho;
}

void require_no_empty_column(const SparseColumnMatrix& m) {
  if (m.size() == 0) throw std::invalid_argument("perron: empty matrix");
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (m.out_degree(static_cast<NodeId>(j)) == 0) {
      throw std::invalid_argument("perron: matrix has an empty column " +
                                  std::to_string(j));
    }
  }
}

std::vector<double> scaled_initial_fluid(const SparseColumnMatrix& m, double rho) {
  const UniformVector e{m.size()};
  std::vector<double> f = m.multiply(e.dense());
  for (double& v : f) v = v / rho - e.value();
  return f;
}

}  // namespace

RhoEstimate estimate_rho(const SparseColumnMatrix& m, std::uint64_t max_iter,
                         double tol) {
  const std::size_t n = m.size();
  if (n == 0) throw std::invalid_argument("estimate_rho: empty matrix");

  RhoEstimate out;
  std::vector<double> y(n, 1.0 / static_cast<double>(n));
  std::vector<double> z(n);
  double prev_ratio = std::numeric_limits<double>::quiet_NaN();
  double prev_est = std::numeric_limits<double>::quiet_NaN();
  for (std::uint64_t it = 1; it <= max_iter; ++it) {
    m.multiply(y, z);
    const double mass = sum(z);
    if (!(mass > 0.0)) {
      throw std::domain_error("estimate_rho: iterate vanished (nilpotent matrix?)");
    }
    // y is kept at unit mass, so the growth ratio is the new mass.
    const double ratio = mass;
    const double est = std::isnan(prev_ratio) ? ratio : std::sqrt(ratio * prev_ratio);
    for (std::size_t i = 0; i < n; ++i) y[i] = z[i] / mass;

    out.rho = est;
    out.iterations = it;
    if (!std::isnan(prev_est)) {
      out.residual = std::abs(est - prev_est) / est;
      if (out.residual <= tol) {
        out.converged = true;
        break;
      }
    } else {
      out.residual = std::numeric_limits<double>::infinity();
    }
    prev_ratio = ratio;
    prev_est = est;
  }
  return out;
}

bool LeftEigenvectorWeights::is_valid_for(const SparseColumnMatrix& m,
                                          double rho) const {
  if (v.size() != m.size()) return false;
  for (const double w : v) {
    if (!(w > 0.0)) return false;
  }
  double residual = 0.0;
  for (std::size_t j = 0; j < m.size(); ++j) {
    const auto rows = m.rows_of(static_cast<NodeId>(j));
    const auto vals = m.values_of(static_cast<NodeId>(j));
    double dot = 0.0;
    for (std::size_t k = 0; k < rows.size(); ++k) dot += v[rows[k]] * vals[k];
    residual += std::abs(dot / rho - v[j]);
  }
  return residual <= 1e-8 * l1_norm(v);
}

double LeftEigenvectorWeights::norm(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += std::abs(x[i] * v[i]);
  return s;
}

double LeftEigenvectorWeights::weighted_sum(std::span<const double> x) const {
  double s = 0.0;
  for (std::size_t i = 0; i < x.size(); ++i) s += x[i] * v[i];
  return s;
}

PerronResult perron_solve(const PerronProblem& prob, const SelectionPolicy& policy,
                          double target, std::uint64_t max_cycles) {
  require_no_empty_column(prob.matrix);
  const double rho = resolve_rho(prob);

  DiffusionState state(scaled_initial_fluid(prob.matrix, rho));
  SelectionPolicy absolute = policy;
  absolute.use_absolute_value = true;

  StoppingRule stop;
  stop.estimate = StoppingEstimate::ResidualL1;
  stop.target = target / kTargetSafety;
  stop.max_cycles = max_cycles;
  stop.divergence_factor = kDivergenceFactor;

  PerronResult result;
  result.rho = rho;
  result.estimate_is_heuristic = !prob.matrix.is_column_stochastic() || rho != 1.0;
  result.report = run_cycles(state, DiffusionOperator{prob.matrix, 1.0 / rho},
                             absolute, stop);
  const double e = UniformVector{prob.matrix.size()}.value();
  for (double& x : result.report.x) x += e;
  normalize_sum(result.report.x);
  return result;
}

VNormTrace v_norm_trace(const PerronProblem& prob, const LeftEigenvectorWeights& weights,
                        const SelectionPolicy& policy, std::uint64_t steps) {
  require_no_empty_column(prob.matrix);
  const double rho = resolve_rho(prob);
  if (weights.v.size() != prob.matrix.size()) {
    throw std::invalid_argument("v_norm_trace: weight dimension mismatch");
  }

  DiffusionState state(scaled_initial_fluid(prob.matrix, rho));
  VNormTrace trace;
  trace.norm.push_back(weights.norm(state.fluid));
  trace.sigma.push_back(weights.weighted_sum(state.fluid));
  if (steps == 0) return trace;

  SelectionPolicy absolute = policy;
  absolute.use_absolute_value = true;
  StoppingRule stop;
  stop.target = 0.0;
  stop.max_diffusions = steps;
  stop.max_cycles = std::numeric_limits<std::uint64_t>::max();

  run_cycles(state, DiffusionOperator{prob.matrix, 1.0 / rho}, absolute, stop,
             [&](const DiffusionState& s, NodeId) {
               trace.norm.push_back(weights.norm(s.fluid));
               trace.sigma.push_back(weights.weighted_sum(s.fluid));
             });
  return trace;
}

}  // namespace diter
