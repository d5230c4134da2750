#include "diter/pagerank.hpp"

#include <algorithm>
#include <cmath>
#include <stdexcept>

#include "diter/errors.hpp"
#include "diter/vector_ops.hpp"

namespace diter {

namespace {

bool has_empty_column(const SparseColumnMatrix& m) {
  for (std::size_t j = 0; j < m.size(); ++j) {
    if (m.out_degree(static_cast<NodeId>(j)) == 0) return true;
  }
  return false;
}

StoppingRule stopping_rule_for(double d, const PageRankOptions& opts) {
  StoppingRule stop;
  stop.target = opts.target;
  stop.max_cycles = opts.max_cycles;
  if (d < 1.0) {
    stop.estimate = StoppingEstimate::ResidualL1;
    stop.residual_scale = 1.0 / (1.0 - d);
  } else {
    stop.estimate = StoppingEstimate::IterationDelta;
  }
  return stop;
}

}  // namespace

void PageRankProblem::validate() const {
  if (!(damping > 0.0 && damping <= 1.0)) {
    throw std::invalid_argument("PageRank damping must lie in (0, 1]");
  }
  if (graph.size() == 0) throw std::invalid_argument("PageRank graph is empty");
  for (const double v : graph.values()) {
    if (v > 1.0) throw std::invalid_argument("PageRank graph entries must lie in [0, 1]");
  }
}

// ---------------------------------------------------------------------------

PageRankOperator::PageRankOperator(const SparseColumnMatrix& graph, double damping)
    : rows_(graph), damping_(damping) {
  for (std::size_t j = 0; j < graph.size(); ++j) {
    if (graph.out_degree(static_cast<NodeId>(j)) == 0) {
      dangling_.push_back(static_cast<NodeId>(j));
    }
  }
}

void PageRankOperator::apply(std::span<const double> x, std::span<double> y) const {
  rows_.multiply(x, y);
  double dangling_mass = 0.0;
  for (const NodeId j : dangling_) dangling_mass += x[j];
  const double n = static_cast<double>(size());
  const double uniform = (damping_ * dangling_mass + (1.0 - damping_) * sum(x)) / n;
  for (double& v : y) v = damping_ * v + uniform;
}

std::vector<double> PageRankOperator::apply(std::span<const double> x) const {
  std::vector<double> y(size());
  apply(x, y);
  return y;
}

LinearAction PageRankOperator::action() const {
  return [this](std::span<const double> x, std::span<double> y) { apply(x, y); };
}

PageRankOperator build_full_operator(const PageRankProblem& prob) {
  prob.validate();
  return PageRankOperator(prob.graph, prob.damping);
}

// ---------------------------------------------------------------------------

std::vector<double> pagerank_initial_fluid(const PageRankProblem& prob) {
  const double d = prob.damping;
  const UniformVector e{prob.graph.size()};
  std::vector<double> f = prob.graph.multiply(e.dense());
  const double mass = sum(f);
  const double shift = d * mass * e.value();
  for (double& v : f) v = d * v - shift;
  return f;
}

RescalingCertificate rescaling_certificate(const PageRankProblem& prob,
                                           std::span<const double> h_complete) {
  const SparseColumnMatrix& pg = prob.graph;
  const double d = prob.damping;
  const UniformVector e{pg.size()};

  RescalingCertificate c;
  c.f1 = 1.0 - sum(pg.multiply(e.dense()));
  const std::vector<double> ph = pg.multiply(h_complete);
  double f2 = 0.0;
  for (std::size_t i = 0; i < ph.size(); ++i) f2 += h_complete[i] - ph[i];
  c.f2 = f2;
  c.f = c.f1 + c.f2;
  c.scale = d < 1.0 ? (1.0 - d + d * c.f) / (1.0 - d + d * c.f1) : 1.0;
  return c;
}

double verify_rescaling(const PageRankProblem& prob,
                        std::span<const double> h_incomplete,
                        std::span<const double> h_complete) {
  if (h_incomplete.size() != prob.graph.size() ||
      h_complete.size() != prob.graph.size()) {
    throw std::invalid_argument("verify_rescaling: dimension mismatch");
  }
  const RescalingCertificate c = rescaling_certificate(prob, h_complete);
  const double e = UniformVector{prob.graph.size()}.value();
  double worst = 0.0;
  for (std::size_t i = 0; i < h_complete.size(); ++i) {
    const double lhs = h_complete[i] + e;
    const double rhs = c.scale * (h_incomplete[i] + e);
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return worst;
}

// ---------------------------------------------------------------------------

PageRankResult di_plus_pagerank(const PageRankProblem& prob,
                                const PageRankOptions& opts) {
  prob.validate();
  const double d = prob.damping;
  if (d == 1.0 && has_empty_column(prob.graph)) {
    throw UndefinedMethodError(
        "DI+ at d = 1 needs a graph without dangling nodes; apply completion first");
  }

  DiffusionState state(pagerank_initial_fluid(prob));
  SelectionPolicy policy = opts.policy;
  policy.use_absolute_value = true;
  const DiffusionOperator op{prob.graph, d, opts.dangling == DanglingMode::Uniform};

  PageRankResult result;
  result.report = run_cycles(state, op, policy, stopping_rule_for(d, opts));
  result.history = std::move(result.report.x);

  const double e = UniformVector{prob.graph.size()}.value();
  std::vector<double> x = result.history;
  for (double& v : x) v += e;
  normalize_sum(x);

  std::vector<double> h_complete = x;
  for (double& v : h_complete) v -= e;
  result.certificate = rescaling_certificate(prob, h_complete);
  result.report.x = std::move(x);
  return result;
}

PageRankResult di_pagerank(const PageRankProblem& prob, const PageRankOptions& opts) {
  prob.validate();
  const double d = prob.damping;
  if (d == 1.0) {
    throw UndefinedMethodError("DI is not defined at d = 1");
  }

  const UniformVector e{prob.graph.size()};
  DiffusionState state(std::vector<double>(prob.graph.size(), (1.0 - d) * e.value()));
  SelectionPolicy policy = opts.policy;
  policy.use_absolute_value = false;
  const DiffusionOperator op{prob.graph, d, true};

  PageRankResult result;
  result.report = run_cycles(state, op, policy, stopping_rule_for(d, opts));
  result.history = result.report.x;
  if (sum(result.report.x) > 0.0) {
    normalize_sum(result.report.x);
  } else {
    result.report.x = e.dense();  // nothing diffused yet
  }

  std::vector<double> h_complete = result.report.x;
  for (double& v : h_complete) v -= e.value();
  result.certificate = rescaling_certificate(prob, h_complete);
  return result;
}

SolverReport pi_pagerank(const PageRankProblem& prob, double target,
                         std::uint64_t max_iter) {
  const PageRankOperator op = build_full_operator(prob);
  return power_solve(op.action(), op.size(), prob.damping, target, max_iter);
}

}  // namespace diter
