// Command-line front end: graph statistics, single solves, and PI / DI / DI+
// comparison tables.

#include <cstdio>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "diter/bench.hpp"
#include "diter/errors.hpp"
#include "diter/pagerank.hpp"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitNotConverged = 2;

struct GraphOptions {
  std::string path;
  std::string synthetic;
  bool complete = false;
  std::uint64_t seed = 1;

  void attach(CLI::App& app) {
    app.add_option("graph", path, "Edge-list file (\"-\" for stdin)");
    app.add_option("--synthetic", synthetic, "Generate a power-law graph: n,deg,exp");
    app.add_flag("--complete", complete,
                 "Add random links to dangling and 0 in-degree nodes");
    app.add_option("--seed", seed, "Seed for completion and generation");
  }

  diter::BenchConfig config() const {
    if (path.empty() == synthetic.empty()) {
      throw CLI::ValidationError("graph", "give exactly one of <graph> or --synthetic");
    }
    diter::BenchConfig cfg;
    if (!synthetic.empty()) {
      cfg.graph = diter::parse_synthetic_spec(synthetic);
    } else {
      cfg.graph = path;
    }
    cfg.complete = complete;
    cfg.seed = seed;
    return cfg;
  }

  diter::EdgeList load() const {
    diter::BenchConfig cfg = config();
    if (path == "-") {
      diter::EdgeList edges = diter::load_edge_list(std::cin);
      return complete ? diter::complete_graph(edges, seed) : edges;
    }
    return diter::prepare_graph(cfg);
  }
};

struct PolicyOptions {
  double r0 = 1.0;
  double decay = 0.25;
  std::uint64_t max_cycles = 1000000;
  std::optional<double> target;
  bool target_inv_n = false;

  void attach(CLI::App& app) {
    app.add_option("--r0", r0, "Initial selection threshold factor");
    app.add_option("--decay", decay, "Threshold decay per cycle, in (0, 1)");
    app.add_option("--max-cycles", max_cycles, "Cycle (or PI iteration) limit");
    auto* t = app.add_option("--target", target, "Target error");
    app.add_flag("--target-inv-n", target_inv_n, "Target error 1/N")->excludes(t);
  }
};

void write_output(const std::string& path, const std::string& text) {
  if (path.empty() || path == "-") {
    std::cout << text;
    return;
  }
  std::ofstream out(path);
  if (!out) throw std::runtime_error("cannot write " + path);
  out << text;
}

int run_stats(const GraphOptions& g) {
  const diter::SparseColumnMatrix m = diter::build_stochastic(g.load());
  const diter::GraphStats s = diter::compute_stats(m);
  std::cout << "N=" << s.n << " L=" << s.links << " D=" << s.dangling
            << " E=" << s.zero_in_degree << " O=" << s.self_loops << " max_in=" << s.max_in
            << " max_out=" << s.max_out << "\n\n"
            << diter::emit_stats(s);
  return kExitOk;
}

int run_solve(const GraphOptions& g, const PolicyOptions& p, const std::string& method_text,
              double d, const std::string& dangling, const std::string& output) {
  const auto method = diter::parse_method(method_text);
  if (!method) throw CLI::ValidationError("--method", "expected pi, di or di+");

  const diter::SparseColumnMatrix m = diter::build_stochastic(g.load());
  const double target = p.target ? *p.target
                        : p.target_inv_n ? 1.0 / static_cast<double>(m.size())
                                         : 1e-10;
  const diter::PageRankProblem prob{m, d, g.complete};
  diter::PageRankOptions opts;
  opts.policy = {p.r0, p.decay, true};
  opts.target = target;
  opts.max_cycles = p.max_cycles;
  opts.dangling = dangling == "uniform" ? diter::DanglingMode::Uniform
                                        : diter::DanglingMode::Drop;

  diter::SolverReport report;
  switch (*method) {
    case diter::Method::PI: report = diter::pi_pagerank(prob, target, p.max_cycles); break;
    case diter::Method::DI: report = diter::di_pagerank(prob, opts).report; break;
    case diter::Method::DIPlus: report = diter::di_plus_pagerank(prob, opts).report; break;
  }

  std::ostringstream values;
  char buf[32];
  for (const double v : report.x) {
    std::snprintf(buf, sizeof(buf), "%.17g\n", v);
    values << buf;
  }
  write_output(output, values.str());

  std::ostream& summary = output.empty() || output == "-" ? std::cerr : std::cout;
  summary << "method=" << diter::method_name(*method) << " d=" << diter::format_full(d)
          << " N=" << m.size() << " L=" << m.nnz()
          << " iterations=" << diter::format_full(report.iterations)
          << " time_s=" << diter::format_full(report.seconds)
          << " error=" << diter::format_full(report.error_estimate)
          << " target=" << diter::format_full(target)
          << " converged=" << (report.converged ? "yes" : "no") << '\n';
  return report.converged ? kExitOk : kExitNotConverged;
}

int run_bench_cmd(const GraphOptions& g, const PolicyOptions& p,
                  const std::vector<std::string>& methods, const std::vector<double>& dampings,
                  const std::string& format, const std::string& trace, const std::string& output,
                  unsigned jobs) {
  diter::BenchConfig cfg = g.config();
  cfg.methods.clear();
  for (const auto& name : methods) {
    const auto m = diter::parse_method(name);
    if (!m) throw CLI::ValidationError("--methods", "unknown method " + name);
    cfg.methods.push_back(*m);
  }
  cfg.dampings = dampings;
  cfg.target_rule = p.target ? diter::TargetRule::Fixed : diter::TargetRule::InverseN;
  if (p.target) cfg.target = *p.target;
  cfg.max_cycles = p.max_cycles;
  cfg.policy = {p.r0, p.decay, true};
  cfg.format = format == "csv" ? diter::ReportFormat::Csv : diter::ReportFormat::Markdown;
  cfg.jobs = jobs;

  diter::BenchResult result;
  if (g.path == "-") {
    diter::EdgeList edges = g.load();
    result = diter::run_bench(diter::build_stochastic(edges), cfg);
  } else {
    result = diter::run_bench(cfg);
  }
  write_output(output, diter::emit_report(result.cells, result.stats, cfg.format));
  if (!trace.empty()) write_output(trace, diter::emit_trace_csv(result.cells));
  return result.all_converged() ? kExitOk : kExitNotConverged;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"PageRank and stationary-vector solvers: PI, DI and DI+"};
  app.require_subcommand(1);

  GraphOptions stats_graph;
  auto* stats = app.add_subcommand("stats", "Print graph statistics");
  stats_graph.attach(*stats);

  GraphOptions solve_graph;
  PolicyOptions solve_policy;
  std::string solve_method;
  double solve_d = 0.85;
  std::string solve_dangling = "drop";
  std::string solve_output;
  auto* solve = app.add_subcommand("solve", "Solve PageRank with one method");
  solve_graph.attach(*solve);
  solve_policy.attach(*solve);
  solve->add_option("--method", solve_method, "pi, di or di+")->required();
  solve->add_option("--d", solve_d, "Damping factor in (0, 1]")->required();
  solve->add_option("--dangling", solve_dangling, "DI+ dangling handling")
      ->check(CLI::IsMember({"drop", "uniform"}));
  solve->add_option("--output", solve_output, "Write X here instead of stdout");

  GraphOptions bench_graph;
  PolicyOptions bench_policy;
  std::vector<std::string> bench_methods{"pi", "di", "di+"};
  std::vector<double> bench_d{0.5, 0.85, 0.99};
  std::string bench_format = "markdown";
  std::string bench_trace;
  std::string bench_output;
  unsigned bench_jobs = 1;
  auto* bench = app.add_subcommand("bench", "Compare methods across damping factors");
  bench_graph.attach(*bench);
  bench_policy.attach(*bench);
  bench->add_option("--methods", bench_methods, "Comma-separated subset of pi,di,di+")
      ->delimiter(',');
  bench->add_option("--d-list", bench_d, "Comma-separated damping factors")->delimiter(',');
  bench->add_option("--format", bench_format, "csv or markdown")
      ->check(CLI::IsMember({"csv", "markdown"}));
  bench->add_option("--trace", bench_trace, "Write the error-vs-cost trace CSV here");
  bench->add_option("--output", bench_output, "Write the report here instead of stdout");
  bench->add_option("--jobs", bench_jobs, "Cells solved concurrently");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  try {
    if (*stats) return run_stats(stats_graph);
    if (*solve) {
      return run_solve(solve_graph, solve_policy, solve_method, solve_d, solve_dangling,
                       solve_output);
    }
    if (*bench) {
      return run_bench_cmd(bench_graph, bench_policy, bench_methods, bench_d, bench_format,
                           bench_trace, bench_output, bench_jobs);
    }
  } catch (const CLI::Error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kExitUsage;
  }
  return kExitUsage;
}
