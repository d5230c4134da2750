#include "diter/bench.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <future>
#include <map>
#include <sstream>
#include <stdexcept>

#include "diter/errors.hpp"
#include "diter/pagerank.hpp"
#include "diter/vector_ops.hpp"

namespace diter {

std::string_view method_name(Method m) {
  switch (m) {
    case Method::PI: return "pi";
    case Method::DI: return "di";
    case Method::DIPlus: return "di+";
  }
  return "?";
}

std::string_view method_label(Method m) {
  switch (m) {
    case Method::PI: return "PI";
    case Method::DI: return "DI";
    case Method::DIPlus: return "DI+";
  }
  return "?";
}

std::optional<Method> parse_method(std::string_view name) {
  if (name == "pi") return Method::PI;
  if (name == "di") return Method::DI;
  if (name == "di+" || name == "diplus") return Method::DIPlus;
  return std::nullopt;
}

void BenchConfig::validate() const {
  if (methods.empty()) throw std::invalid_argument("bench: no methods selected");
  if (dampings.empty()) throw std::invalid_argument("bench: no damping factors");
  for (const double d : dampings) {
    if (!(d > 0.0 && d <= 1.0)) {
      throw std::invalid_argument("bench: damping " + format_full(d) + " outside (0, 1]");
    }
  }
  if (target_rule == TargetRule::Fixed && !(target > 0.0)) {
    throw std::invalid_argument("bench: target must be positive");
  }
  policy.validate();
}

bool BenchResult::all_converged() const {
  return std::all_of(cells.begin(), cells.end(),
                     [](const BenchCell& c) { return !c.defined || c.converged; });
}

EdgeList prepare_graph(const BenchConfig& cfg) {
  EdgeList edges;
  if (const auto* path = std::get_if<std::string>(&cfg.graph)) {
    edges = load_edge_list_file(*path);
  } else {
    const auto& spec = std::get<SyntheticSpec>(cfg.graph);
    edges = generate_synthetic(spec.n, spec.avg_degree, spec.exponent, cfg.seed);
  }
  if (cfg.complete) edges = complete_graph(edges, cfg.seed);
  return edges;
}

namespace {

BenchCell run_cell(const SparseColumnMatrix& graph, const BenchConfig& cfg, Method method,
                   double d, double target) {
  BenchCell cell;
  cell.method = method;
  cell.damping = d;
  cell.target = target;

  const PageRankProblem prob{graph, d, cfg.complete};
  PageRankOptions opts;
  opts.policy = cfg.policy;
  opts.target = target;
  opts.max_cycles = cfg.max_cycles;

  SolverReport report;
  try {
    switch (method) {
      case Method::PI:
        report = pi_pagerank(prob, target, cfg.max_cycles);
        break;
      case Method::DI:
        report = di_pagerank(prob, opts).report;
        break;
      case Method::DIPlus:
        report = di_plus_pagerank(prob, opts).report;
        break;
    }
  } catch (const UndefinedMethodError&) {
    cell.defined = false;
    return cell;
  }
  cell.converged = report.converged;
  cell.iterations = report.iterations;
  cell.seconds = report.seconds;
  cell.error = report.error_estimate;
  cell.x = std::move(report.x);
  cell.trace = std::move(report.trace);
  return cell;
}

void attach_gains(std::vector<BenchCell>& cells) {
  for (BenchCell& cell : cells) {
    const auto pi = std::find_if(cells.begin(), cells.end(), [&](const BenchCell& c) {
      return c.method == Method::PI && c.damping == cell.damping && c.defined;
    });
    if (pi == cells.end() || !cell.defined) continue;
    if (cell.iterations > 0.0) cell.gain_iter = pi->iterations / cell.iterations;
    if (cell.seconds > 0.0) cell.gain_time = pi->seconds / cell.seconds;
  }
}

void check_agreement(const std::vector<BenchCell>& cells) {
  for (std::size_t a = 0; a < cells.size(); ++a) {
    for (std::size_t b = a + 1; b < cells.size(); ++b) {
      const BenchCell& x = cells[a];
      const BenchCell& y = cells[b];
      // At d = 1 the estimates are heuristics and the fixed point need not
      // be unique, so only d < 1 cells are compared.
      if (x.damping != y.damping || x.damping >= 1.0 || !x.defined || !y.defined ||
          !x.converged || !y.converged) {
        continue;
      }
      const double gap = l1_distance(x.x, y.x);
      if (gap > x.target + y.target) {
        throw AgreementError(std::string(method_label(x.method)) + " and " +
                             std::string(method_label(y.method)) + " disagree at d=" +
                             format_full(x.damping) + ": |dX| = " + format_full(gap));
      }
    }
  }
}

}  // namespace

BenchResult run_bench(const BenchConfig& cfg) {
  cfg.validate();
  const EdgeList edges = prepare_graph(cfg);
  const SparseColumnMatrix graph = build_stochastic(edges);
  return run_bench(graph, cfg);
}

BenchResult run_bench(const SparseColumnMatrix& graph, const BenchConfig& cfg) {
  cfg.validate();
  BenchResult result;
  result.stats = compute_stats(graph);
  result.target = cfg.target_rule == TargetRule::InverseN
                      ? 1.0 / static_cast<double>(graph.size())
                      : cfg.target;

  std::vector<std::pair<double, Method>> plan;
  for (const double d : cfg.dampings) {
    for (const Method m : cfg.methods) plan.emplace_back(d, m);
  }

  if (cfg.jobs <= 1) {
    for (const auto& [d, m] : plan) {
      result.cells.push_back(run_cell(graph, cfg, m, d, result.target));
    }
  } else {
    // Cells are independent solves over the shared read-only matrix.
    std::vector<std::future<BenchCell>> pending;
    std::size_t next = 0;
    while (next < plan.size() || !pending.empty()) {
      while (next < plan.size() && pending.size() < cfg.jobs) {
        const auto [d, m] = plan[next++];
        pending.push_back(std::async(std::launch::async, [&graph, &cfg, m, d, &result] {
          return run_cell(graph, cfg, m, d, result.target);
        }));
      }
      result.cells.push_back(pending.front().get());
      pending.erase(pending.begin());
    }
  }

  attach_gains(result.cells);
  check_agreement(result.cells);
  return result;
}

// ---------------------------------------------------------------------------
// Report formatting

std::string format_full(double v) {
  char buf[64];
  const auto [ptr, ec] = std::to_chars(buf, buf + sizeof(buf), v);
  std::string s(buf, ec == std::errc() ? ptr : buf);
  if (s.find_first_of(".eEn") == std::string::npos) s += ".0";
  return s;
}

namespace {

std::string fixed(double v, int decimals) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), "%.*f", decimals, v);
  return buf;
}

std::string d_label(double d) {
  std::string s = format_full(d);
  if (s.size() > 2 && s.ends_with(".0")) s.resize(s.size() - 2);
  return s;
}

}  // namespace

std::string emit_stats(const GraphStats& s) {
  const double n = static_cast<double>(std::max<std::size_t>(s.n, 1));
  std::ostringstream out;
  out << "| N | L/N | D/N | E/N | O/N | max_in | max_out |\n"
      << "|---|---|---|---|---|---|---|\n"
      << "| " << s.n << " | " << fixed(static_cast<double>(s.links) / n, 1) << " | "
      << fixed(static_cast<double>(s.dangling) / n, 3) << " | "
      << fixed(static_cast<double>(s.zero_in_degree) / n, 3) << " | "
      << fixed(static_cast<double>(s.self_loops) / n, 3) << " | " << s.max_in << " | "
      << s.max_out << " |\n";
  return out.str();
}

std::string emit_report(std::span<const BenchCell> cells, const GraphStats& stats,
                        ReportFormat format) {
  std::ostringstream out;
  if (format == ReportFormat::Csv) {
    out << "method,d,iterations,time_s,error,gain_iter,gain_time\n";
    for (const BenchCell& c : cells) {
      out << method_name(c.method) << ',' << d_label(c.damping) << ',';
      if (!c.defined) {
        out << "undefined,undefined,undefined,,\n";
        continue;
      }
      out << format_full(c.iterations) << ',' << format_full(c.seconds) << ','
          << format_full(c.error) << ',' << (c.gain_iter ? format_full(*c.gain_iter) : "")
          << ',' << (c.gain_time ? format_full(*c.gain_time) : "") << '\n';
    }
    return out.str();
  }

  out << emit_stats(stats);
  std::vector<double> order;
  for (const BenchCell& c : cells) {
    if (std::find(order.begin(), order.end(), c.damping) == order.end()) {
      order.push_back(c.damping);
    }
  }
  bool any_unconverged = false;
  for (const double d : order) {
    out << "\n| d=" << d_label(d) << " | nb iter | gain | time (s) | gain |\n"
        << "|---|---|---|---|---|\n";
    for (const BenchCell& c : cells) {
      if (c.damping != d) continue;
      out << "| " << method_label(c.method) << " | ";
      if (!c.defined) {
        out << "undefined | x | undefined | x |\n";
        continue;
      }
      const bool reference = c.method == Method::PI;
      out << (reference ? fixed(c.iterations, 0) : fixed(c.iterations, 1));
      if (!c.converged) {
        out << '*';
        any_unconverged = true;
      }
      out << " | ";
      if (reference || !c.gain_iter) {
        out << 'x';
      } else {
        out << "×" << fixed(*c.gain_iter, 1);
      }
      out << " | " << fixed(c.seconds, 2) << " | ";
      if (reference || !c.gain_time) {
        out << 'x';
      } else {
        out << "×" << fixed(*c.gain_time, 1);
      }
      out << " |\n";
    }
  }
  if (any_unconverged) out << "\n* did not reach the target error\n";
  return out.str();
}

std::string emit_trace_csv(std::span<const BenchCell> cells) {
  std::ostringstream out;
  out << "method,d,cost,estimate\n";
  for (const BenchCell& c : cells) {
    for (const TracePoint& p : c.trace) {
      out << method_name(c.method) << ',' << d_label(c.damping) << ','
          << format_full(p.cost) << ',' << format_full(p.estimate) << '\n';
    }
  }
  return out.str();
}

}  // namespace diter
