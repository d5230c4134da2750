#include <algorithm>
#include <charconv>
#include <cmath>
#include <stdexcept>
#include <string>

#include "diter/bench.hpp"
#include "diter/splitmix64.hpp"

namespace diter {

namespace {

constexpr double kIntraHostShare = 0.98;
constexpr double kMinHostSize = 8.0;
constexpr double kMaxHostSize = 256.0;
constexpr double kHostExponent = 2.0;
constexpr std::size_t kMaxAttempts = 64;

}  // namespace

SyntheticSpec parse_synthetic_spec(std::string_view text) {
  SyntheticSpec spec;
  const auto bad = [&] {
    return std::invalid_argument("synthetic spec must look like n,deg,exp: \"" +
                                 std::string(text) + "\"");
  };
  const auto c1 = text.find(',');
  if (c1 == std::string_view::npos) throw bad();
  const auto c2 = text.find(',', c1 + 1);
  if (c2 == std::string_view::npos) throw bad();

  const std::string_view n_part = text.substr(0, c1);
  const std::string deg_part(text.substr(c1 + 1, c2 - c1 - 1));
  const std::string exp_part(text.substr(c2 + 1));

  auto [ptr, ec] = std::from_chars(n_part.data(), n_part.data() + n_part.size(), spec.n);
  if (ec != std::errc() || ptr != n_part.data() + n_part.size()) throw bad();
  try {
    std::size_t used = 0;
    spec.avg_degree = std::stod(deg_part, &used);
    if (used != deg_part.size()) throw bad();
    spec.exponent = std::stod(exp_part, &used);
    if (used != exp_part.size()) throw bad();
  } catch (const std::logic_error&) {
    throw bad();
  }
  return spec;
}

EdgeList generate_synthetic(std::size_t n, double avg_degree, double exponent,
                            std::uint64_t seed) {
  if (n < 2) throw std::invalid_argument("generate_synthetic: n must be at least 2");
  if (!(avg_degree >= 1.0) || avg_degree > static_cast<double>(n - 1)) {
    throw std::invalid_argument("generate_synthetic: avg_degree must lie in [1, n-1]");
  }
  if (!(exponent > 1.0)) {
    throw std::invalid_argument("generate_synthetic: exponent must exceed 1");
  }

  SplitMix64 rng(seed);

  // Pareto weights by inverse CDF: w = (1 - u)^(-1 / (exponent - 1)) >= 1.
  std::vector<double> weight(n);
  double weight_sum = 0.0;
  for (double& w : weight) {
    w = std::pow(1.0 - rng.next_unit(), -1.0 / (exponent - 1.0));
    weight_sum += w;
  }
  const double links = std::round(avg_degree * static_cast<double>(n));
  const double max_degree = static_cast<double>(n - 1);
  std::vector<std::size_t> degree(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double k = std::round(weight[i] * links / weight_sum);
    degree[i] = static_cast<std::size_t>(std::clamp(k, 1.0, max_degree));
  }

  // Nodes are grouped into hosts: contiguous id blocks with Pareto sizes.
  // Most links stay inside the source's host, the rest go anywhere.
  std::vector<std::size_t> host_of(n);
  std::vector<std::vector<NodeId>> host_pool;
  for (std::size_t pos = 0; pos < n;) {
    const double raw = kMinHostSize * std::pow(1.0 - rng.next_unit(), -1.0 / (kHostExponent - 1.0));
    const auto size = static_cast<std::size_t>(
        std::clamp(std::round(raw), kMinHostSize, kMaxHostSize));
    const std::size_t end = std::min(n, pos + size);
    host_pool.emplace_back();
    for (; pos < end; ++pos) {
      host_of[pos] = host_pool.size() - 1;
      host_pool.back().push_back(static_cast<NodeId>(pos));
    }
  }
  std::vector<std::size_t> host_size(host_pool.size());
  for (std::size_t h = 0; h < host_pool.size(); ++h) host_size[h] = host_pool[h].size();

  // Preferential attachment: every node starts with one ticket in its
  // host pool and in the global pool, and earns one more in each per
  // link received.
  std::vector<NodeId> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = static_cast<NodeId>(i);

  EdgeList out;
  out.n = n;
  out.edges.reserve(static_cast<std::size_t>(links) + n);
  std::vector<std::uint8_t> taken(n, 0);
  std::vector<NodeId> chosen;
  for (std::size_t src = 0; src < n; ++src) {
    const std::size_t host = host_of[src];
    const auto& local = host_pool[host];
    chosen.clear();
    taken[src] = 1;
    std::size_t taken_local = 1;
    const std::size_t want = degree[src];
    while (chosen.size() < want) {
      const bool intra = taken_local < host_size[host] && rng.next_unit() < kIntraHostShare;
      const std::vector<NodeId>& from = intra ? local : pool;
      NodeId dst = from[rng.next() % from.size()];
      for (std::size_t attempt = 0; taken[dst] && attempt < kMaxAttempts; ++attempt) {
        dst = from[rng.next() % from.size()];
      }
      while (taken[dst]) dst = static_cast<NodeId>(rng.next() % n);
      taken[dst] = 1;
      if (host_of[dst] == host) ++taken_local;
      chosen.push_back(dst);
    }
    taken[src] = 0;
    for (const NodeId dst : chosen) {
      taken[dst] = 0;
      out.edges.push_back({static_cast<NodeId>(src), dst});
      pool.push_back(dst);
      host_pool[host_of[dst]].push_back(dst);
    }
  }
  return out;
}

}  // namespace diter
