#pragma once

#include <cstddef>
#include <cstdint>
#include <istream>
#include <span>
#include <string>
#include <utility>
#include <vector>

namespace diter {

using NodeId = std::uint32_t;

struct Edge {
  NodeId src = 0;
  NodeId dst = 0;

  friend bool operator==(const Edge&, const Edge&) = default;
};

// Directed graph as read from disk. Duplicates are kept here and removed
// when a matrix is built.
struct EdgeList {
  std::size_t n = 0;
  std::vector<Edge> edges;

  friend bool operator==(const EdgeList&, const EdgeList&) = default;
};

struct Triplet {
  NodeId row = 0;
  NodeId col = 0;
  double value = 0.0;
};

class SparseRowMatrix;

// Column-compressed non-negative square matrix. Column j holds the links
// leaving node j; row indices inside a column are strictly increasing.
class SparseColumnMatrix {
 public:
  SparseColumnMatrix() = default;

  // Takes ownership of CSC arrays. Throws std::invalid_argument when the
  // arrays are inconsistent, unsorted, or hold negative values.
  SparseColumnMatrix(std::size_t n, std::vector<std::size_t> col_ptr,
                     std::vector<NodeId> row_idx, std::vector<double> values);

  // Duplicated coordinates are summed.
  static SparseColumnMatrix from_triplets(std::size_t n,
                                          std::vector<Triplet> triplets);

  std::size_t size() const { return n_; }
  std::size_t nnz() const { return values_.size(); }
  bool is_column_stochastic() const { return column_stochastic_; }

  std::size_t out_degree(NodeId j) const {
    return col_ptr_[j + 1] - col_ptr_[j];
  }
  std::span<const NodeId> rows_of(NodeId j) const {
    return {row_idx_.data() + col_ptr_[j], out_degree(j)};
  }
  std::span<const double> values_of(NodeId j) const {
    return {values_.data() + col_ptr_[j], out_degree(j)};
  }

  std::span<const std::size_t> col_ptr() const { return col_ptr_; }
  std::span<const NodeId> row_idx() const { return row_idx_; }
  std::span<const double> values() const { return values_; }

  // Returns 0.0 for entries that are not stored.
  double at(NodeId i, NodeId j) const;

  // y = P.x
  void multiply(std::span<const double> x, std::span<double> y) const;
  std::vector<double> multiply(std::span<const double> x) const;

  // Every (i, j, value) in column-major order.
  std::vector<Triplet> triplets() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> col_ptr_{0};
  std::vector<NodeId> row_idx_;
  std::vector<double> values_;
  bool column_stochastic_ = false;
};

// Row-compressed mirror of a SparseColumnMatrix carrying the same doubles.
// Used by power iteration, which computes P.x one row at a time.
class SparseRowMatrix {
 public:
  SparseRowMatrix() = default;
  explicit SparseRowMatrix(const SparseColumnMatrix& m);

  std::size_t size() const { return n_; }
  std::size_t nnz() const { return values_.size(); }

  std::size_t in_degree(NodeId i) const { return row_ptr_[i + 1] - row_ptr_[i]; }
  std::span<const NodeId> cols_of(NodeId i) const {
    return {col_idx_.data() + row_ptr_[i], in_degree(i)};
  }
  std::span<const double> values_of(NodeId i) const {
    return {values_.data() + row_ptr_[i], in_degree(i)};
  }

  void multiply(std::span<const double> x, std::span<double> y) const;

  SparseColumnMatrix to_columns() const;

 private:
  std::size_t n_ = 0;
  std::vector<std::size_t> row_ptr_{0};
  std::vector<NodeId> col_idx_;
  std::vector<double> values_;
};

// Summary statistics of a link matrix.
struct GraphStats {
  std::size_t n = 0;
  std::size_t links = 0;           // L: stored entries
  std::size_t dangling = 0;        // D: empty columns
  std::size_t zero_in_degree = 0;  // E: recursive 0 in-degree closure
  std::size_t self_loops = 0;      // O: non-zero diagonal entries
  std::size_t max_in = 0;
  std::size_t max_out = 0;

  friend bool operator==(const GraphStats&, const GraphStats&) = default;
};

// Parses "src dst" lines. Lines starting with '#' and blank lines are
// skipped; an optional first line "N <n>" fixes the dimension.
EdgeList load_edge_list(std::istream& in);
EdgeList load_edge_list_file(const std::string& path);

// Column j gets 1/k at each distinct destination of node j (k distinct
// destinations). Out-degree-0 nodes give empty columns.
SparseColumnMatrix build_stochastic(const EdgeList& edges);

// Adds one random outgoing link to each dangling node, then one random
// incoming link to each node with no incoming link. Both passes look at
// the degrees of the input graph and visit nodes in ascending order.
EdgeList complete_graph(const EdgeList& edges, std::uint64_t seed);

GraphStats compute_stats(const SparseColumnMatrix& m);

}  // namespace diter
