#include "diter/dense_oracle.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include "diter/errors.hpp"

namespace diter::oracle {

namespace {

void check_dimension(std::size_t n) {
  if (n == 0 || n > kMaxDenseDimension) {
    throw std::invalid_argument("DenseMatrix: dimension " + std::to_string(n) +
                                " outside [1, " + std::to_string(kMaxDenseDimension) + "]");
  }
}

double total(const std::vector<double>& x) {
  double s = 0.0;
  for (const double v : x) s += v;
  return s;
}

void scale_to_unit_sum(std::vector<double>& x) {
  const double s = total(x);
  for (double& v : x) v /= s;
}

double distance(const std::vector<double>& a, const std::vector<double>& b) {
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

// Fixed point of x <- normalize(A.x + shift x) from e. Returns false if
// the step delta never drops to tol.
bool shifted_power(const DenseMatrix& a, double shift, std::uint64_t max_iter, double tol,
                   std::vector<double>& x) {
  const std::size_t n = a.size();
  x.assign(n, 1.0 / static_cast<double>(n));
  for (std::uint64_t it = 0; it < max_iter; ++it) {
    std::vector<double> y = a.multiply(x);
    for (std::size_t i = 0; i < n; ++i) y[i] += shift * x[i];
    scale_to_unit_sum(y);
    const double delta = distance(x, y);
    x = std::move(y);
    if (delta <= tol) return true;
  }
  return false;
}

}  // namespace

DenseMatrix::DenseMatrix(std::size_t n) : n_(n), data_(n * n, 0.0) {
  check_dimension(n);
}

DenseMatrix::DenseMatrix(std::size_t n, std::vector<double> row_major)
    : n_(n), data_(std::move(row_major)) {
  check_dimension(n);
  if (data_.size() != n * n) {
    throw std::invalid_argument("DenseMatrix: expected n*n values");
  }
}

DenseMatrix DenseMatrix::identity(std::size_t n) {
  DenseMatrix m(n);
  for (std::size_t i = 0; i < n; ++i) m(i, i) = 1.0;
  return m;
}

DenseMatrix DenseMatrix::from_sparse(const SparseColumnMatrix& s) {
  DenseMatrix m(s.size());
  for (const Triplet& t : s.triplets()) m(t.row, t.col) = t.value;
  return m;
}

std::vector<double> DenseMatrix::multiply(std::span<const double> x) const {
  std::vector<double> y(n_, 0.0);
  for (std::size_t i = 0; i < n_; ++i) {
    double s = 0.0;
    for (std::size_t j = 0; j < n_; ++j) s += data_[i * n_ + j] * x[j];
    y[i] = s;
  }
  return y;
}

DenseMatrix DenseMatrix::transpose() const {
  DenseMatrix t(n_);
  for (std::size_t i = 0; i < n_; ++i) {
    for (std::size_t j = 0; j < n_; ++j) t(j, i) = (*this)(i, j);
  }
  return t;
}

std::vector<double> dense_stationary(const DenseMatrix& p, std::uint64_t max_iter,
                                     double tol) {
  for (std::size_t j = 0; j < p.size(); ++j) {
    double s = 0.0;
    for (std::size_t i = 0; i < p.size(); ++i) s += p(i, j);
    if (std::abs(s - 1.0) > 1e-10) {
      throw std::invalid_argument("dense_stationary: column " + std::to_string(j) +
                                  " does not sum to one");
    }
  }
  std::vector<double> x;
  if (shifted_power(p, 0.0, max_iter / 2, tol, x)) return x;
  // Lazy chain (I + P)/2: same stationary vector, aperiodic.
  if (shifted_power(p, 1.0, max_iter - max_iter / 2, tol, x)) return x;
  throw NonConvergenceError("dense_stationary: no convergence");
}

std::vector<double> dense_stationary_direct(const DenseMatrix& p) {
  const std::size_t n = p.size();
  DenseMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = (i == j ? 1.0 : 0.0) - p(i, j);
  }
  for (std::size_t j = 0; j < n; ++j) a(n - 1, j) = 1.0;
  std::vector<double> b(n, 0.0);
  b[n - 1] = 1.0;
  return dense_linear_solve(std::move(a), std::move(b));
}

std::vector<double> dense_linear_solve(DenseMatrix a, std::vector<double> b) {
  const std::size_t n = a.size();
  if (b.size() != n) throw std::invalid_argument("dense_linear_solve: size mismatch");

  double scale = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) scale = std::max(scale, std::abs(a(i, j)));
  }
  const double tiny = scale * static_cast<double>(n) * std::numeric_limits<double>::epsilon();

  for (std::size_t k = 0; k < n; ++k) {
    std::size_t pivot = k;
    for (std::size_t i = k + 1; i < n; ++i) {
      if (std::abs(a(i, k)) > std::abs(a(pivot, k))) pivot = i;
    }
    if (!(std::abs(a(pivot, k)) > tiny)) {
      throw SingularMatrixError("dense_linear_solve: matrix is singular at column " +
                                std::to_string(k));
    }
    if (pivot != k) {
      for (std::size_t j = 0; j < n; ++j) std::swap(a(k, j), a(pivot, j));
      std::swap(b[k], b[pivot]);
    }
    for (std::size_t i = k + 1; i < n; ++i) {
      const double factor = a(i, k) / a(k, k);
      if (factor == 0.0) continue;
      a(i, k) = 0.0;
      for (std::size_t j = k + 1; j < n; ++j) a(i, j) -= factor * a(k, j);
      b[i] -= factor * b[k];
    }
  }

  std::vector<double> x(n);
  for (std::size_t k = n; k-- > 0;) {
    double s = b[k];
    for (std::size_t j = k + 1; j < n; ++j) s -= a(k, j) * x[j];
    x[k] = s / a(k, k);
  }
  return x;
}

DenseEigenpair dense_dominant_eigenpair(const DenseMatrix& m, std::uint64_t max_iter,
                                        double tol) {
  const std::size_t n = m.size();
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) {
      if (m(i, j) < 0.0) throw std::invalid_argument("dense_dominant_eigenpair: negative entry");
    }
  }

  // Spectral radius from the geometric mean of consecutive growth ratios.
  std::vector<double> y(n, 1.0 / static_cast<double>(n));
  double prev_ratio = std::numeric_limits<double>::quiet_NaN();
  double prev_est = std::numeric_limits<double>::quiet_NaN();
  double rho = 0.0;
  bool settled = false;
  for (std::uint64_t it = 0; it < max_iter && !settled; ++it) {
    std::vector<double> z = m.multiply(y);
    const double ratio = total(z);
    if (!(ratio > 0.0)) throw NonConvergenceError("dense_dominant_eigenpair: iterate vanished");
    rho = std::isnan(prev_ratio) ? ratio : std::sqrt(ratio * prev_ratio);
    settled = !std::isnan(prev_est) && std::abs(rho - prev_est) <= 1e-14 * rho;
    for (std::size_t i = 0; i < n; ++i) y[i] = z[i] / ratio;
    prev_ratio = ratio;
    prev_est = rho;
  }

  // Vectors from the shifted matrix M + rho I, which has the same Perron
  // vectors and no other eigenvalue on its spectral circle.
  DenseEigenpair out;
  if (!shifted_power(m, rho, max_iter, tol, out.right) ||
      !shifted_power(m.transpose(), rho, max_iter, tol, out.left)) {
    throw NonConvergenceError("dense_dominant_eigenpair: eigenvectors did not settle");
  }
  out.rho = total(m.multiply(out.right));
  return out;
}

DenseMatrix dense_completed(const SparseColumnMatrix& pg) {
  DenseMatrix p = DenseMatrix::from_sparse(pg);
  const std::size_t n = p.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (pg.out_degree(static_cast<NodeId>(j)) != 0) continue;
    for (std::size_t i = 0; i < n; ++i) p(i, j) = 1.0 / static_cast<double>(n);
  }
  return p;
}

std::vector<double> dense_pagerank(const SparseColumnMatrix& pg, double d) {
  if (!(d > 0.0 && d <= 1.0)) throw std::invalid_argument("dense_pagerank: bad damping");
  const DenseMatrix p = dense_completed(pg);
  if (d == 1.0) return dense_stationary(p);
  const std::size_t n = p.size();
  DenseMatrix a(n);
  for (std::size_t i = 0; i < n; ++i) {
    for (std::size_t j = 0; j < n; ++j) a(i, j) = (i == j ? 1.0 : 0.0) - d * p(i, j);
  }
  std::vector<double> b(n, (1.0 - d) / static_cast<double>(n));
  return dense_linear_solve(std::move(a), std::move(b));
}

}  // namespace diter::oracle
