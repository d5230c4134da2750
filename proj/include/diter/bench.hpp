#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include "diter/diffusion.hpp"
#include "diter/report.hpp"
#include "diter/sparse_graph.hpp"

namespace diter {

enum class Method { PI, DI, DIPlus };

// "pi", "di", "di+"
std::string_view method_name(Method m);
// "PI", "DI", "DI+"
std::string_view method_label(Method m);
std::optional<Method> parse_method(std::string_view name);

struct SyntheticSpec {
  std::size_t n = 1000;
  double avg_degree = 13.0;
  double exponent = 2.1;

  friend bool operator==(const SyntheticSpec&, const SyntheticSpec&) = default;
};

// Parses "n,deg,exp".
SyntheticSpec parse_synthetic_spec(std::string_view text);

// Power-law out-degrees (inverse-CDF Pareto draws scaled to n * avg_degree
// links) with preferentially attached destinations. No self-loops, no
// duplicate links. Deterministic per seed.
EdgeList generate_synthetic(std::size_t n, double avg_degree, double exponent,
                            std::uint64_t seed);

enum class TargetRule { Fixed, InverseN };
enum class ReportFormat { Csv, Markdown };

struct BenchConfig {
  // Edge-list path or synthetic generator parameters.
  std::variant<std::string, SyntheticSpec> graph = SyntheticSpec{};
  std::vector<Method> methods{Method::PI, Method::DI, Method::DIPlus};
  std::vector<double> dampings{0.5, 0.85, 0.99};
  TargetRule target_rule = TargetRule::InverseN;
  double target = 1e-3;
  std::uint64_t seed = 1;
  std::uint64_t max_cycles = 1000000;
  SelectionPolicy policy{};
  ReportFormat format = ReportFormat::Markdown;
  bool complete = true;
  unsigned jobs = 1;

  void validate() const;
};

// One (method, d) cell of a comparison table.
struct BenchCell {
  Method method = Method::PI;
  double damping = 0.0;
  bool defined = true;
  bool converged = false;
  double iterations = 0.0;
  double seconds = 0.0;
  double error = 0.0;
  double target = 0.0;
  // Present only when PI ran for the same d.
  std::optional<double> gain_iter;
  std::optional<double> gain_time;

  std::vector<double> x;
  std::vector<TracePoint> trace;
};

struct BenchResult {
  GraphStats stats;
  double target = 0.0;
  std::vector<BenchCell> cells;

  bool all_converged() const;
};

// Loads or generates the graph, completes it when asked, and runs every
// (d, method) cell. Converged cells of one d must agree on X within the
// sum of their targets when d < 1, else AgreementError.
BenchResult run_bench(const BenchConfig& cfg);
// Same, on an already prepared link matrix.
BenchResult run_bench(const SparseColumnMatrix& graph, const BenchConfig& cfg);

// Graph for a config: load or generate, then complete when flagged.
EdgeList prepare_graph(const BenchConfig& cfg);

std::string emit_report(std::span<const BenchCell> cells, const GraphStats& stats,
                        ReportFormat format);
std::string emit_stats(const GraphStats& stats);
// Columns: method,d,cost,estimate
std::string emit_trace_csv(std::span<const BenchCell> cells);

// Shortest round-trip decimal, always with a fractional part ("1.0").
std::string format_full(double v);

}  // namespace diter
