#pragma once

#include <cstdint>
#include <functional>
#include <span>
#include <vector>

#include "diter/report.hpp"
#include "diter/sparse_graph.hpp"

namespace diter {

// y = A.x for some square operator A.
using LinearAction = std::function<void(std::span<const double>, std::span<double>)>;

struct PowerState {
  std::vector<double> x;
  double relaxation = 1.0;
  std::uint64_t iterations = 0;

  // Starts from e = (1/N, ..., 1/N).
  static PowerState uniform(std::size_t n, double relaxation = 1.0);
};

// X <- (1 - w) X + w A.X. Returns |X_new - X_old| in L1.
double power_step(PowerState& state, const SparseRowMatrix& m);
double power_step(PowerState& state, const LinearAction& op);

// Relaxation used by power_solve: 1 for d < 1, 0.5 for d = 1.
double relaxation_for(double damping);

// Iterates from e until the error estimate falls to `target`:
// |dX| d / (1 - d) for d < 1, |dX| for d = 1. Iterations count full
// products. Non-convergence is reported, not thrown.
SolverReport power_solve(const LinearAction& op, std::size_t n, double damping,
                         double target, std::uint64_t max_iter);
SolverReport power_solve(const SparseRowMatrix& m, double damping, double target,
                         std::uint64_t max_iter);

}  // namespace diter
