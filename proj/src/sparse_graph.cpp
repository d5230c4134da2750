#include "diter/sparse_graph.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>
#include <stdexcept>
#include <string>
#include <string_view>

#include "diter/errors.hpp"
#include "diter/splitmix64.hpp"

namespace diter {

namespace {

constexpr double kStochasticTolerance = 1e-12;

std::string_view trim(std::string_view s) {
  const auto is_space = [](char c) {
    return c == ' ' || c == '\t' || c == '\r' || c == '\n' || c == '\v' ||
           c == '\f';
  };
  while (!s.empty() && is_space(s.front())) s.remove_prefix(1);
  while (!s.empty() && is_space(s.back())) s.remove_suffix(1);
  return s;
}

std::string at_line(std::size_t line) {
  return "line " + std::to_string(line) + ": ";
}

// Reads one unsigned decimal token from the front of `s`. Returns false on
// a malformed token; sets `overflow` when the digits do not fit.
bool take_uint(std::string_view& s, std::uint64_t& value, bool& overflow) {
  s = trim(s);
  const char* first = s.data();
  const char* last = s.data() + s.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ptr == first) return false;
  if (ptr != last && *ptr != ' ' && *ptr != '\t') return false;
  overflow = ec == std::errc::result_out_of_range;
  s.remove_prefix(static_cast<std::size_t>(ptr - first));
  return true;
}

}  // namespace

// ---------------------------------------------------------------------------
// SparseColumnMatrix

SparseColumnMatrix::SparseColumnMatrix(std::size_t n,
                                       std::vector<std::size_t> col_ptr,
                                       std::vector<NodeId> row_idx,
                                       std::vector<double> values)
    : n_(n),
      col_ptr_(std::move(col_ptr)),
      row_idx_(std::move(row_idx)),
      values_(std::move(values)) {
  if (col_ptr_.size() != n_ + 1 || col_ptr_.front() != 0 ||
      col_ptr_.back() != values_.size() || row_idx_.size() != values_.size()) {
    throw std::invalid_argument("SparseColumnMatrix: inconsistent CSC arrays");
  }
  bool stochastic = n_ > 0;
  for (std::size_t j = 0; j < n_; ++j) {
    if (col_ptr_[j + 1] < col_ptr_[j]) {
      throw std::invalid_argument("SparseColumnMatrix: col_ptr decreasing");
    }
    double sum = 0.0;
    for (std::size_t k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) {
      if (row_idx_[k] >= n_) {
        throw std::invalid_argument("SparseColumnMatrix: row index out of range");
      }
      if (k > col_ptr_[j] && row_idx_[k] <= row_idx_[k - 1]) {
        throw std::invalid_argument("SparseColumnMatrix: rows not strictly increasing");
      }
      if (!(values_[k] >= 0.0) || !std::isfinite(values_[k])) {
        throw std::invalid_argument("SparseColumnMatrix: negative or non-finite value");
      }
      sum += values_[k];
    }
    if (col_ptr_[j + 1] == col_ptr_[j] ||
        std::abs(sum - 1.0) > kStochasticTolerance) {
      stochastic = false;
    }
  }
  column_stochastic_ = stochastic;
}

SparseColumnMatrix SparseColumnMatrix::from_triplets(
    std::size_t n, std::vector<Triplet> triplets) {
  for (const auto& t : triplets) {
    if (t.row >= n || t.col >= n) {
      throw std::invalid_argument("from_triplets: index out of range");
    }
  }
  std::sort(triplets.begin(), triplets.end(),
            [](const Triplet& a, const Triplet& b) {
              return a.col != b.col ? a.col < b.col : a.row < b.row;
            });
  std::vector<std::size_t> col_ptr(n + 1, 0);
  std::vector<NodeId> rows;
  std::vector<double> values;
  rows.reserve(triplets.size());
  values.reserve(triplets.size());
  for (std::size_t k = 0; k < triplets.size();) {
    const Triplet& t = triplets[k];
    double v = 0.0;
    std::size_t end = k;
    while (end < triplets.size() && triplets[end].col == t.col &&
           triplets[end].row == t.row) {
      v += triplets[end].value;
      ++end;
    }
    if (v != 0.0) {
      rows.push_back(t.row);
      values.push_back(v);
      ++col_ptr[t.col + 1];
    }
    k = end;
  }
  for (std::size_t j = 0; j < n; ++j) col_ptr[j + 1] += col_ptr[j];
  return SparseColumnMatrix(n, std::move(col_ptr), std::move(rows),
                            std::move(values));
}

double SparseColumnMatrix::at(NodeId i, NodeId j) const {
  const auto rows = rows_of(j);
  const auto it = std::lower_bound(rows.begin(), rows.end(), i);
  if (it == rows.end() || *it != i) return 0.0;
  return values_of(j)[static_cast<std::size_t>(it - rows.begin())];
}

void SparseColumnMatrix::multiply(std::span<const double> x,
                                  std::span<double> y) const {
  std::fill(y.begin(), y.end(), 0.0);
  for (std::size_t j = 0; j < n_; ++j) {
    const double xj = x[j];
    if (xj == 0.0) continue;
    for (std::size_t k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) {
      y[row_idx_[k]] += values_[k] * xj;
    }
  }
}

std::vector<double> SparseColumnMatrix::multiply(
    std::span<const double> x) const {
  std::vector<double> y(n_);
  multiply(x, y);
  return y;
}

std::vector<Triplet> SparseColumnMatrix::triplets() const {
  std::vector<Triplet> out;
  out.reserve(nnz());
  for (std::size_t j = 0; j < n_; ++j) {
    for (std::size_t k = col_ptr_[j]; k < col_ptr_[j + 1]; ++k) {
      out.push_back({row_idx_[k], static_cast<NodeId>(j), values_[k]});
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// SparseRowMatrix

SparseRowMatrix::SparseRowMatrix(const SparseColumnMatrix& m)
    : n_(m.size()),
      row_ptr_(m.size() + 1, 0),
      col_idx_(m.nnz()),
      values_(m.nnz()) {
  const auto col_ptr = m.col_ptr();
  const auto row_idx = m.row_idx();
  const auto vals = m.values();
  for (const NodeId r : row_idx) ++row_ptr_[r + 1];
  for (std::size_t i = 0; i < n_; ++i) row_ptr_[i + 1] += row_ptr_[i];
  std::vector<std::size_t> next(row_ptr_.begin(), row_ptr_.end() - 1);
  // Scanning columns in order leaves each row sorted by column.
  for (std::size_t j = 0; j < n_; ++j) {
    for (std::size_t k = col_ptr[j]; k < col_ptr[j + 1]; ++k) {
      const std::size_t dst = next[row_idx[k]]++;
      col_idx_[dst] = static_cast<NodeId>(j);
      values_[dst] = vals[k];
    }
  }
}

void SparseRowMatrix::multiply(std::span<const double> x,
                               std::span<double> y) const {
  for (std::size_t i = 0; i < n_; ++i) {
    double sum = 0.0;
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      sum += values_[k] * x[col_idx_[k]];
    }
    y[i] = sum;
  }
}

SparseColumnMatrix SparseRowMatrix::to_columns() const {
  std::vector<std::size_t> col_ptr(n_ + 1, 0);
  std::vector<NodeId> row_idx(values_.size());
  std::vector<double> vals(values_.size());
  for (const NodeId c : col_idx_) ++col_ptr[c + 1];
  for (std::size_t j = 0; j < n_; ++j) col_ptr[j + 1] += col_ptr[j];
  std::vector<std::size_t> next(col_ptr.begin(), col_ptr.end() - 1);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t k = row_ptr_[i]; k < row_ptr_[i + 1]; ++k) {
      const std::size_t dst = next[col_idx_[k]]++;
      row_idx[dst] = static_cast<NodeId>(i);
      vals[dst] = values_[k];
    }
  }
  return SparseColumnMatrix(n_, std::move(col_ptr), std::move(row_idx),
                            std::move(vals));
}

// ---------------------------------------------------------------------------
// Edge lists

EdgeList load_edge_list(std::istream& in) {
  using Kind = EdgeListError::Kind;
  constexpr std::uint64_t kMaxId = std::numeric_limits<NodeId>::max() - 1;

  EdgeList out;
  std::uint64_t declared_n = 0;
  bool have_header = false;
  bool seen_data = false;
  std::uint64_t max_id = 0;

  std::string raw;
  std::size_t line_no = 0;
  while (std::getline(in, raw)) {
    ++line_no;
    std::string_view line = trim(raw);
    if (line.empty() || line.front() == '#') continue;

    if (line.front() == 'N') {
      if (seen_data) {
        throw EdgeListError(Kind::Malformed, line_no,
                            at_line(line_no) + "dimension header must come first");
      }
      line.remove_prefix(1);
      bool overflow = false;
      std::uint64_t n = 0;
      if (line.empty() || (line.front() != ' ' && line.front() != '\t') ||
          !take_uint(line, n, overflow) || !trim(line).empty()) {
        throw EdgeListError(Kind::Malformed, line_no,
                            at_line(line_no) + "expected \"N <count>\"");
      }
      if (overflow || n > kMaxId + 1) {
        throw EdgeListError(Kind::IdOverflow, line_no,
                            at_line(line_no) + "dimension too large");
      }
      if (n == 0) {
        throw EdgeListError(Kind::Malformed, line_no,
                            at_line(line_no) + "dimension must be at least 1");
      }
      declared_n = n;
      have_header = true;
      seen_data = true;
      continue;
    }
    seen_data = true;

    std::uint64_t src = 0;
    std::uint64_t dst = 0;
    bool overflow_src = false;
    bool overflow_dst = false;
    if (!take_uint(line, src, overflow_src) ||
        !take_uint(line, dst, overflow_dst) || !trim(line).empty()) {
      throw EdgeListError(Kind::Malformed, line_no,
                          at_line(line_no) + "expected two node ids, got \"" +
                              std::string(trim(raw)) + "\"");
    }
    if (overflow_src || overflow_dst || src > kMaxId || dst > kMaxId) {
      throw EdgeListError(Kind::IdOverflow, line_no,
                          at_line(line_no) + "node id too large");
    }
    if (have_header && (src >= declared_n || dst >= declared_n)) {
      throw EdgeListError(Kind::IdOverflow, line_no,
                          at_line(line_no) + "node id exceeds declared dimension " +
                              std::to_string(declared_n));
    }
    max_id = std::max({max_id, src, dst});
    out.edges.push_back({static_cast<NodeId>(src), static_cast<NodeId>(dst)});
  }

  if (!have_header && out.edges.empty()) {
    throw EdgeListError(Kind::EmptyInput, 0, "edge list is empty");
  }
  out.n = have_header ? declared_n : max_id + 1;
  return out;
}

EdgeList load_edge_list_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw std::runtime_error("cannot open " + path);
  return load_edge_list(in);
}

SparseColumnMatrix build_stochastic(const EdgeList& edges) {
  const std::size_t n = edges.n;
  std::vector<std::size_t> col_ptr(n + 1, 0);
  for (const Edge& e : edges.edges) {
    if (e.src >= n || e.dst >= n) {
      throw std::invalid_argument("build_stochastic: node id out of range");
    }
    ++col_ptr[e.src + 1];
  }
  for (std::size_t j = 0; j < n; ++j) col_ptr[j + 1] += col_ptr[j];

  std::vector<NodeId> dst(edges.edges.size());
  std::vector<std::size_t> next(col_ptr.begin(), col_ptr.end() - 1);
  for (const Edge& e : edges.edges) dst[next[e.src]++] = e.dst;

  // Sort and deduplicate each column in place, then compact.
  std::vector<std::size_t> out_ptr(n + 1, 0);
  std::vector<NodeId> rows;
  std::vector<double> values;
  rows.reserve(dst.size());
  values.reserve(dst.size());
  for (std::size_t j = 0; j < n; ++j) {
    auto first = dst.begin() + static_cast<std::ptrdiff_t>(col_ptr[j]);
    auto last = dst.begin() + static_cast<std::ptrdiff_t>(col_ptr[j + 1]);
    std::sort(first, last);
    last = std::unique(first, last);
    const auto k = static_cast<std::size_t>(last - first);
    const double w = k > 0 ? 1.0 / static_cast<double>(k) : 0.0;
    for (auto it = first; it != last; ++it) {
      rows.push_back(*it);
      values.push_back(w);
    }
    out_ptr[j + 1] = rows.size();
  }
  return SparseColumnMatrix(n, std::move(out_ptr), std::move(rows),
                            std::move(values));
}

EdgeList complete_graph(const EdgeList& edges, std::uint64_t seed) {
  const std::size_t n = edges.n;
  if (n < 2) {
    throw std::invalid_argument("complete_graph: need at least 2 nodes");
  }
  std::vector<std::size_t> out_deg(n, 0);
  std::vector<std::size_t> in_deg(n, 0);
  for (const Edge& e : edges.edges) {
    if (e.src >= n || e.dst >= n) {
      throw std::invalid_argument("complete_graph: node id out of range");
    }
    ++out_deg[e.src];
    ++in_deg[e.dst];
  }

  EdgeList out = edges;
  SplitMix64 rng(seed);
  for (std::size_t i = 0; i < n; ++i) {
    if (out_deg[i] == 0) {
      const auto dst = rng.next_excluding(n, i);
      out.edges.push_back({static_cast<NodeId>(i), static_cast<NodeId>(dst)});
    }
  }
  for (std::size_t i = 0; i < n; ++i) {
    if (in_deg[i] == 0) {
      const auto src = rng.next_excluding(n, i);
      out.edges.push_back({static_cast<NodeId>(src), static_cast<NodeId>(i)});
    }
  }
  return out;
}

GraphStats compute_stats(const SparseColumnMatrix& m) {
  const std::size_t n = m.size();
  GraphStats s;
  s.n = n;
  s.links = m.nnz();

  std::vector<std::size_t> in_deg(n, 0);
  for (std::size_t j = 0; j < n; ++j) {
    const auto col = static_cast<NodeId>(j);
    const std::size_t out = m.out_degree(col);
    if (out == 0) ++s.dangling;
    s.max_out = std::max(s.max_out, out);
    const auto rows = m.rows_of(col);
    const auto vals = m.values_of(col);
    for (std::size_t k = 0; k < rows.size(); ++k) {
      ++in_deg[rows[k]];
      if (rows[k] == col && vals[k] != 0.0) ++s.self_loops;
    }
  }
  for (std::size_t i = 0; i < n; ++i) s.max_in = std::max(s.max_in, in_deg[i]);

  // Least fixed point: start from in-degree 0 nodes and admit a node once
  // every in-neighbour is admitted. A self-loop counts as an in-neighbour
  // that can never be admitted first, so such nodes stay out.
  std::vector<std::size_t> pending = in_deg;
  std::vector<NodeId> work;
  for (std::size_t i = 0; i < n; ++i) {
    if (pending[i] == 0) work.push_back(static_cast<NodeId>(i));
  }
  while (!work.empty()) {
    const NodeId u = work.back();
    work.pop_back();
    ++s.zero_in_degree;
    for (const NodeId v : m.rows_of(u)) {
      if (v != u && --pending[v] == 0) work.push_back(v);
    }
  }
  return s;
}

}  // namespace diter
