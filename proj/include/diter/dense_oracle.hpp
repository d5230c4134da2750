#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <vector>

#include "diter/sparse_graph.hpp"

// Brute-force dense reference computations. They use dense products and
// direct elimination, never the diffusion or sparse code paths, so that
// agreement with the solvers carries information. Not for production use.
namespace diter::oracle {

inline constexpr std::size_t kMaxDenseDimension = 256;

// n x n row-major matrix, n <= kMaxDenseDimension.
class DenseMatrix {
 public:
  explicit DenseMatrix(std::size_t n);
  DenseMatrix(std::size_t n, std::vector<double> row_major);

  static DenseMatrix identity(std::size_t n);
  static DenseMatrix from_sparse(const SparseColumnMatrix& m);

  std::size_t size() const { return n_; }
  double& operator()(std::size_t i, std::size_t j) { return data_[i * n_ + j]; }
  double operator()(std::size_t i, std::size_t j) const { return data_[i * n_ + j]; }

  std::vector<double> multiply(std::span<const double> x) const;
  DenseMatrix transpose() const;

 private:
  std::size_t n_;
  std::vector<double> data_;
};

// Limit of P^k.e for a column-stochastic P, normalized to sum one. Falls
// back to the lazy chain (I + P)/2 when the plain iteration does not
// settle (periodic chains). Throws NonConvergenceError if neither does.
std::vector<double> dense_stationary(const DenseMatrix& p, std::uint64_t max_iter = 200000,
                                     double tol = 1e-14);

// Stationary vector by solving (I - P) x = 0 with one row replaced by
// sum(x) = 1. Requires a unique stationary vector.
std::vector<double> dense_stationary_direct(const DenseMatrix& p);

// Gaussian elimination with partial pivoting. Throws SingularMatrixError.
std::vector<double> dense_linear_solve(DenseMatrix a, std::vector<double> b);

struct DenseEigenpair {
  double rho = 0.0;
  std::vector<double> right;  // sum one, positive
  std::vector<double> left;   // sum one, positive
};

// Dominant eigenpair of a non-negative irreducible matrix.
DenseEigenpair dense_dominant_eigenpair(const DenseMatrix& m,
                                        std::uint64_t max_iter = 200000,
                                        double tol = 1e-14);

// PageRank X = d Pbar_g X + (1 - d)/N sum(X) 1 with sum(X) = 1, from the
// raw link matrix P_g. Direct solve for d < 1; dense_stationary of Pbar_g
// at d = 1.
std::vector<double> dense_pagerank(const SparseColumnMatrix& pg, double d);

// Pbar_g as a dense matrix: empty columns replaced by 1/N.
DenseMatrix dense_completed(const SparseColumnMatrix& pg);

}  // namespace diter::oracle
