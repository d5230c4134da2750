#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "diter/report.hpp"
#include "diter/sparse_graph.hpp"

namespace diter {

// History H and residual fluid F of a D-iteration, plus cost counters.
// The invariant H + F = P.H + F0 holds after every diffusion.
struct DiffusionState {
  std::vector<double> history;
  std::vector<double> fluid;
  std::uint64_t links_processed = 0;
  std::uint64_t diffusions = 0;

  DiffusionState() = default;
  explicit DiffusionState(std::vector<double> initial_fluid)
      : history(initial_fluid.size(), 0.0), fluid(std::move(initial_fluid)) {}

  std::size_t size() const { return fluid.size(); }
};

// e = (1/N, ..., 1/N), kept implicit.
struct UniformVector {
  std::size_t n = 0;

  double value() const { return 1.0 / static_cast<double>(n); }
  std::vector<double> dense() const { return std::vector<double>(n, value()); }
};

// Node selection for one sweep: node i is diffused when its fluid exceeds
// r * max(#out_i, 1) / L, with r = r0 * decay^cycle.
struct SelectionPolicy {
  double r0 = 1.0;
  double decay = 0.25;
  // false: select on F_i > threshold (fluids are non-negative).
  // true:  select on |F_i| > threshold (signed fluids).
  bool use_absolute_value = true;

  static SelectionPolicy positive(double r0 = 1.0, double decay = 0.25) {
    return {r0, decay, false};
  }
  static SelectionPolicy absolute(double r0 = 1.0, double decay = 0.25) {
    return {r0, decay, true};
  }

  // Throws std::invalid_argument unless r0 > 0 and 0 < decay < 1.
  void validate() const;
};

enum class StoppingEstimate {
  // scale * |F|, evaluated after every cycle.
  ResidualL1,
  // |H - H_snapshot|, evaluated at the first cycle end after at least one
  // iteration's worth (L links) of work since the previous snapshot.
  IterationDelta,
};

struct StoppingRule {
  StoppingEstimate estimate = StoppingEstimate::ResidualL1;
  double target = 1e-10;
  double residual_scale = 1.0;
  std::uint64_t max_cycles = 100000;
  // Hard cap on diffusions, 0 for none. The run reports non-convergence
  // when the cap is hit first.
  std::uint64_t max_diffusions = 0;
  // Throw DivergenceError when |F| exceeds this multiple of its initial
  // value at a cycle end. 0 disables the check.
  double divergence_factor = 0.0;
};

// The matrix a diffusion pushes fluid through: scale * P, where an empty
// column optionally spreads scale * f / N to every node instead of
// dropping the fluid.
struct DiffusionOperator {
  const SparseColumnMatrix& matrix;
  double scale = 1.0;
  bool dangling_to_uniform = false;
};

using DiffusionObserver = std::function<void(const DiffusionState&, NodeId)>;

// H_i += f; F_i = 0; F_j += f * p_ji for every stored p_ji of column i.
void diffuse_node(DiffusionState& state, const SparseColumnMatrix& m, NodeId i);
void diffuse_node(DiffusionState& state, const DiffusionOperator& op, NodeId i);

// P.e - e, whose entries sum to zero when P is column-stochastic.
std::vector<double> di_plus_initial_fluid(const SparseColumnMatrix& m);
DiffusionState init_di_plus(const SparseColumnMatrix& m);

// Repeated ascending sweeps under `policy` until `stop` is met. The
// report's x holds the raw history H; iterations is links_processed / L.
SolverReport run_cycles(DiffusionState& state, const DiffusionOperator& op,
                        const SelectionPolicy& policy, const StoppingRule& stop,
                        const DiffusionObserver& observer = {});
SolverReport run_cycles(DiffusionState& state, const SparseColumnMatrix& m,
                        const SelectionPolicy& policy, const StoppingRule& stop,
                        const DiffusionObserver& observer = {});

// |H + F - P.H - f0| in L1.
double check_identity(const DiffusionState& state, const SparseColumnMatrix& m,
                      std::span<const double> f0);
double check_identity(const DiffusionState& state, const DiffusionOperator& op,
                      std::span<const double> f0);

// Stationary vector of a column-stochastic matrix: DI+ from P.e - e, then
// X = H + e scaled to sum one. |F| is not a bound on the error of X, so the
// residual target is halved.
SolverReport solve_stationary(const SparseColumnMatrix& m,
                              const SelectionPolicy& policy,
                              const StoppingRule& stop);

}  // namespace diter
