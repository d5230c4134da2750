#include "diter/power_iteration.hpp"

#include <chrono>
#include <cmath>
#include <stdexcept>

namespace diter {

PowerState PowerState::uniform(std::size_t n, double relaxation) {
  if (n == 0) throw std::invalid_argument("PowerState: empty dimension");
  PowerState s;
  s.x.assign(n, 1.0 / static_cast<double>(n));
  s.relaxation = relaxation;
  return s;
}

double power_step(PowerState& state, const SparseRowMatrix& m) {
  return power_step(state, [&m](std::span<const double> x, std::span<double> y) {
    m.multiply(x, y);
  });
}

double power_step(PowerState& state, const LinearAction& op) {
  const double w = state.relaxation;
  if (!(w > 0.0 && w <= 1.0)) {
    throw std::invalid_argument("power_step: relaxation must lie in (0, 1]");
  }
  std::vector<double> next(state.x.size());
  op(state.x, next);
  double delta = 0.0;
  for (std::size_t i = 0; i < next.size(); ++i) {
    const double v = w == 1.0 ? next[i] : (1.0 - w) * state.x[i] + w * next[i];
    delta += std::abs(v - state.x[i]);
    state.x[i] = v;
  }
  ++state.iterations;
  return delta;
}

double relaxation_for(double damping) { return damping < 1.0 ? 1.0 : 0.5; }

SolverReport power_solve(const LinearAction& op, std::size_t n, double damping,
                         double target, std::uint64_t max_iter) {
  if (!(damping > 0.0 && damping <= 1.0)) {
    throw std::invalid_argument("power_solve: damping must lie in (0, 1]");
  }
  using Clock = std::chrono::steady_clock;
  const auto started = Clock::now();

  PowerState state = PowerState::uniform(n, relaxation_for(damping));
  const double bound_factor = damping < 1.0 ? damping / (1.0 - damping) : 1.0;

  SolverReport report;
  double estimate = 0.0;
  bool converged = false;
  while (!converged && state.iterations < max_iter) {
    estimate = power_step(state, op) * bound_factor;
    report.trace.push_back({static_cast<double>(state.iterations), estimate});
    converged = estimate <= target;
  }

  report.x = std::move(state.x);
  report.iterations = static_cast<double>(state.iterations);
  report.cycles = state.iterations;
  report.error_estimate = estimate;
  report.converged = converged;
  report.seconds = std::chrono::duration<double>(Clock::now() - started).count();
  return report;
}

SolverReport power_solve(const SparseRowMatrix& m, double damping, double target,
                         std::uint64_t max_iter) {
  return power_solve(
      [&m](std::span<const double> x, std::span<double> y) { m.multiply(x, y); },
      m.size(), damping, target, max_iter);
}

}  // namespace diter
