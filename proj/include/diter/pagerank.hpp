#pragma once

#include <cstdint>
#include <span>
#include <vector>

#include "diter/diffusion.hpp"
#include "diter/power_iteration.hpp"
#include "diter/report.hpp"
#include "diter/sparse_graph.hpp"

namespace diter {

// PageRank on the link matrix P_g (1/out-degree columns, dangling columns
// empty) with damping d. The operator solved is
//   P = d Pbar_g + (1 - d)/N J,
// where Pbar_g replaces every empty column of P_g by e.
struct PageRankProblem {
  const SparseColumnMatrix& graph;
  double damping = 0.85;
  // Random completion was applied before building `graph`.
  bool completed = false;

  void validate() const;
};

// How DI+ treats dangling columns while diffusing.
enum class DanglingMode {
  // Diffuse on d P_g: fluid reaching a dangling node leaves the system and
  // the result is recovered by normalizing H + e.
  Drop,
  // Diffuse on d Pbar_g: a dangling node spreads its fluid uniformly.
  Uniform,
};

// X -> d P_g.X + d (sum of X over dangling nodes) e + (1 - d) sum(X) e,
// without materializing J or the dangling completion.
class PageRankOperator {
 public:
  PageRankOperator(const SparseColumnMatrix& graph, double damping);

  std::size_t size() const { return rows_.size(); }
  double damping() const { return damping_; }
  std::span<const NodeId> dangling() const { return dangling_; }

  void apply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> apply(std::span<const double> x) const;

  LinearAction action() const;

 private:
  SparseRowMatrix rows_;
  double damping_;
  std::vector<NodeId> dangling_;
};

PageRankOperator build_full_operator(const PageRankProblem& prob);

// Ties the limits of the dropped and uniform-dangling DI+ runs together:
//   H' + e = scale (H + e),  scale = (1 - d + d f) / (1 - d + d f1),
// with f1 = 1 - sum(P_g.e), f2 = sum(H' - P_g.H'), f = f1 + f2.
struct RescalingCertificate {
  double f1 = 0.0;
  double f2 = 0.0;
  double f = 0.0;
  double scale = 1.0;
};

struct PageRankOptions {
  SelectionPolicy policy{};
  double target = 1e-10;
  std::uint64_t max_cycles = 100000;
  DanglingMode dangling = DanglingMode::Drop;
};

struct PageRankResult {
  SolverReport report;  // x normalized to sum one
  RescalingCertificate certificate;
  std::vector<double> history;  // raw H at the end of the run
};

// F0 = d P_g.e - d sum(P_g.e) e; sums to zero for any P_g.
std::vector<double> pagerank_initial_fluid(const PageRankProblem& prob);

// DI+ with the absolute-value selection rule (the policy flag is forced).
// Error estimate |F| / (1 - d) for d < 1; |dX| per iteration of work at
// d = 1, where empty columns are rejected with UndefinedMethodError.
PageRankResult di_plus_pagerank(const PageRankProblem& prob,
                                const PageRankOptions& opts);

// Classic D-iteration on (d Pbar_g, (1 - d) e) with the positive selection
// rule. Returns X = H / sum(H). Throws UndefinedMethodError at d = 1.
PageRankResult di_pagerank(const PageRankProblem& prob, const PageRankOptions& opts);

// Power iteration on the full operator.
SolverReport pi_pagerank(const PageRankProblem& prob, double target,
                         std::uint64_t max_iter);

// Certificate computed from a converged uniform-dangling limit H'.
RescalingCertificate rescaling_certificate(const PageRankProblem& prob,
                                           std::span<const double> h_complete);

// max_i |(H' + e)_i - scale (H + e)_i| for converged dropped-dangling H and
// uniform-dangling H'.
double verify_rescaling(const PageRankProblem& prob,
                        std::span<const double> h_incomplete,
                        std::span<const double> h_complete);

}  // namespace diter
