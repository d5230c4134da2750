#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "diter/diffusion.hpp"
#include "diter/report.hpp"
#include "diter/sparse_graph.hpp"

namespace diter {

// Dominant eigenvector problem P.X = rho X for a non-negative irreducible
// matrix. When rho is unset it is estimated by the power method.
struct PerronProblem {
  const SparseColumnMatrix& matrix;
  std::optional<double> rho;
};

struct RhoEstimate {
  double rho = 0.0;
  // Relative change of the estimate over the last iteration.
  double residual = 0.0;
  bool converged = false;
  std::uint64_t iterations = 0;
};

// Power method from e. Each step takes the geometric mean of the last two
// growth ratios |P.y| / |y|, which cancels period-2 oscillation.
RhoEstimate estimate_rho(const SparseColumnMatrix& m, std::uint64_t max_iter = 10000,
                         double tol = 1e-13);

// Positive left eigenvector V of P' = P / rho, used as the weight of the
// norm |X|_V = sum_i |x_i v_i|.
struct LeftEigenvectorWeights {
  enum class Source { Oracle, User };

  std::vector<double> v;
  Source source = Source::User;

  // True when every entry is positive and |V^t P' - V^t| <= 1e-8 |V|.
  bool is_valid_for(const SparseColumnMatrix& m, double rho) const;
  double norm(std::span<const double> x) const;
  double weighted_sum(std::span<const double> x) const;
};

struct PerronResult {
  SolverReport report;  // x normalized to sum one, all entries positive
  double rho = 0.0;
  // |F| is only a heuristic error estimate when P' is not stochastic.
  bool estimate_is_heuristic = true;
};

// DI+ on (P', P'.e - e); X = H + e. The diffusion stops at |F| <= target/2.
// Throws NonConvergenceError when rho has to be estimated and the estimate
// does not settle, DivergenceError when |F| exceeds ten times its start.
PerronResult perron_solve(const PerronProblem& prob, const SelectionPolicy& policy,
                          double target, std::uint64_t max_cycles = 100000);

struct VNormTrace {
  std::vector<double> norm;   // |F_n|_V, index 0 is the initial fluid
  std::vector<double> sigma;  // sum_i F_i v_i
};

// Records |F_n|_V after each of up to `steps` diffusions of the DI+ run.
VNormTrace v_norm_trace(const PerronProblem& prob, const LeftEigenvectorWeights& weights,
                        const SelectionPolicy& policy, std::uint64_t steps);

}  // namespace diter
