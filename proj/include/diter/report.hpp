#pragma once

#include <cstdint>
#include <vector>

namespace diter {

// One sample of the error-vs-cost curve. Cost is in iterations (full
// products, or links processed / L for diffusion methods).
struct TracePoint {
  double cost = 0.0;
  double estimate = 0.0;
};

struct SolverReport {
  // Solution vector. Raw history H from run_cycles; normalized X from
  // every higher-level solve.
  std::vector<double> x;
  double iterations = 0.0;
  double seconds = 0.0;
  double error_estimate = 0.0;
  bool converged = false;

  std::uint64_t diffusions = 0;
  std::uint64_t links_processed = 0;
  std::uint64_t cycles = 0;
  std::vector<TracePoint> trace;
};

}  // namespace diter
