#include "diter/diffusion.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "diter/errors.hpp"
#include "diter/vector_ops.hpp"

namespace diter {

namespace {

inline void diffuse_unchecked(DiffusionState& state, const DiffusionOperator& op,
                              NodeId i) {
  const double f = state.fluid[i];
  state.history[i] += f;
  state.fluid[i] = 0.0;
  ++state.diffusions;

  const auto rows = op.matrix.rows_of(i);
  if (rows.empty()) {
    if (op.dangling_to_uniform) {
      const std::size_t n = state.fluid.size();
      const double share = op.scale * f / static_cast<double>(n);
      for (double& v : state.fluid) v += share;
      state.links_processed += n;
    }
    return;
  }
  const auto vals = op.matrix.values_of(i);
  const double g = op.scale * f;
  for (std::size_t k = 0; k < rows.size(); ++k) {
    state.fluid[rows[k]] += g * vals[k];
  }
  state.links_processed += rows.size();
}

void check_dimensions(const DiffusionState& state, const SparseColumnMatrix& m) {
  if (state.history.size() != m.size() || state.fluid.size() != m.size()) {
    throw std::invalid_argument("diffusion state does not match matrix dimension");
  }
}

// y = op.P . x, dangling columns included when the operator spreads them.
std::vector<double> apply_operator(const DiffusionOperator& op,
                                   std::span<const double> x) {
  std::vector<double> y = op.matrix.multiply(x);
  const std::size_t n = op.matrix.size();
  double dangling_mass = 0.0;
  if (op.dangling_to_uniform) {
    for (std::size_t j = 0; j < n; ++j) {
      if (op.matrix.out_degree(static_cast<NodeId>(j)) == 0) dangling_mass += x[j];
    }
  }
  const double spread = dangling_mass / static_cast<double>(n);
  for (double& v : y) v = op.scale * (v + spread);
  return y;
}

}  // namespace

void SelectionPolicy::validate() const {
  if (!(r0 > 0.0) || !std::isfinite(r0)) {
    throw std::invalid_argument("selection policy: r0 must be positive");
  }
  if (!(decay > 0.0 && decay < 1.0)) {
    throw std::invalid_argument("selection policy: decay must lie in (0, 1)");
  }
}

void diffuse_node(DiffusionState& state, const SparseColumnMatrix& m, NodeId i) {
  diffuse_node(state, DiffusionOperator{m}, i);
}

void diffuse_node(DiffusionState& state, const DiffusionOperator& op, NodeId i) {
  check_dimensions(state, op.matrix);
  if (i >= op.matrix.size()) {
    throw std::out_of_range("diffuse_node: node " + std::to_string(i) +
                            " out of range");
  }
  diffuse_unchecked(state, op, i);
}

std::vector<double> di_plus_initial_fluid(const SparseColumnMatrix& m) {
  const UniformVector e{m.size()};
  std::vector<double> f = m.multiply(e.dense());
  const double ev = e.value();
  for (double& v : f) v -= ev;
  return f;
}

DiffusionState init_di_plus(const SparseColumnMatrix& m) {
  return DiffusionState(di_plus_initial_fluid(m));
}

SolverReport run_cycles(DiffusionState& state, const SparseColumnMatrix& m,
                        const SelectionPolicy& policy, const StoppingRule& stop,
                        const DiffusionObserver& observer) {
  return run_cycles(state, DiffusionOperator{m}, policy, stop, observer);
}

SolverReport run_cycles(DiffusionState& state, const DiffusionOperator& op,
                        const SelectionPolicy& policy, const StoppingRule& stop,
                        const DiffusionObserver& observer) {
  using Clock = std::chrono::steady_clock;
  const auto started = Clock::now();

  policy.validate();
  check_dimensions(state, op.matrix);
  const SparseColumnMatrix& m = op.matrix;
  const std::size_t n = m.size();
  const auto col_ptr = m.col_ptr();
  const double links = static_cast<double>(std::max<std::size_t>(m.nnz(), 1));
  const double inv_links = 1.0 / links;
  const bool residual_rule = stop.estimate == StoppingEstimate::ResidualL1;

  SolverReport report;
  const std::uint64_t links_at_start = state.links_processed;
  const std::uint64_t diffusions_at_start = state.diffusions;
  const auto cost = [&] {
    return static_cast<double>(state.links_processed - links_at_start) / links;
  };

  const double initial_norm = l1_norm(state.fluid);
  double estimate = residual_rule ? stop.residual_scale * initial_norm
                                  : std::numeric_limits<double>::infinity();
  if (initial_norm == 0.0) estimate = 0.0;
  report.trace.push_back({0.0, estimate});
  bool converged = estimate <= stop.target;

  std::vector<double> snapshot;
  std::uint64_t links_at_snapshot = state.links_processed;
  if (!residual_rule) snapshot = state.history;

  double r = policy.r0;
  bool capped = false;
  while (!converged && !capped && report.cycles < stop.max_cycles) {
    const double base = r * inv_links;
    for (std::size_t i = 0; i < n; ++i) {
      const double f = state.fluid[i];
      const std::size_t out = col_ptr[i + 1] - col_ptr[i];
      const double threshold = base * static_cast<double>(std::max<std::size_t>(out, 1));
      const bool selected =
          policy.use_absolute_value ? std::abs(f) > threshold : f > threshold;
      if (!selected) continue;
      diffuse_unchecked(state, op, static_cast<NodeId>(i));
      if (observer) observer(state, static_cast<NodeId>(i));
      if (stop.max_diffusions != 0 &&
          state.diffusions - diffusions_at_start >= stop.max_diffusions) {
        capped = true;
        break;
      }
    }
    r *= policy.decay;
    ++report.cycles;

    const double norm = l1_norm(state.fluid);
    if (stop.divergence_factor > 0.0 &&
        !(norm <= stop.divergence_factor * initial_norm)) {
      throw DivergenceError("residual fluid grew from " + std::to_string(initial_norm) +
                            " to " + std::to_string(norm));
    }
    if (residual_rule) {
      estimate = stop.residual_scale * norm;
      report.trace.push_back({cost(), estimate});
    } else if (norm == 0.0) {
      estimate = 0.0;
      report.trace.push_back({cost(), estimate});
    } else if (static_cast<double>(state.links_processed - links_at_snapshot) >= links) {
      estimate = l1_distance(state.history, snapshot);
      snapshot = state.history;
      links_at_snapshot = state.links_processed;
      report.trace.push_back({cost(), estimate});
    }
    converged = estimate <= stop.target;
  }

  report.x = state.history;
  report.converged = converged;
  report.error_estimate = estimate;
  report.diffusions = state.diffusions - diffusions_at_start;
  report.links_processed = state.links_processed - links_at_start;
  report.iterations = cost();
  report.seconds = std::chrono::duration<double>(Clock::now() - started).count();
  return report;
}

double check_identity(const DiffusionState& state, const SparseColumnMatrix& m,
                      std::span<const double> f0) {
  return check_identity(state, DiffusionOperator{m}, f0);
}

double check_identity(const DiffusionState& state, const DiffusionOperator& op,
                      std::span<const double> f0) {
  check_dimensions(state, op.matrix);
  if (f0.size() != state.size()) {
    throw std::invalid_argument("check_identity: f0 dimension mismatch");
  }
  const std::vector<double> ph = apply_operator(op, state.history);
  double residual = 0.0;
  for (std::size_t i = 0; i < state.size(); ++i) {
    residual += std::abs(state.history[i] + state.fluid[i] - ph[i] - f0[i]);
  }
  return residual;
}

SolverReport solve_stationary(const SparseColumnMatrix& m,
                              const SelectionPolicy& policy,
                              const StoppingRule& stop) {
  DiffusionState state = init_di_plus(m);
  StoppingRule inner = stop;
  inner.target = stop.target / 2.0;
  SolverReport report = run_cycles(state, m, policy, inner);
  const double e = UniformVector{m.size()}.value();
  for (double& v : report.x) v += e;
  normalize_sum(report.x);
  return report;
}

}  // namespace diter
