#pragma once

#include <algorithm>
#include <cmath>
#include <span>
#include <stdexcept>
#include <vector>

namespace diter {

inline double sum(std::span<const double> x) {
  double s = 0.0;
  for (const double v : x) s += v;
  return s;
}

inline double l1_norm(std::span<const double> x) {
  double s = 0.0;
  for (const double v : x) s += std::abs(v);
  return s;
}

inline double l1_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("l1_distance: size mismatch");
  double s = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) s += std::abs(a[i] - b[i]);
  return s;
}

inline double linf_distance(std::span<const double> a, std::span<const double> b) {
  if (a.size() != b.size()) throw std::invalid_argument("linf_distance: size mismatch");
  double m = 0.0;
  for (std::size_t i = 0; i < a.size(); ++i) m = std::max(m, std::abs(a[i] - b[i]));
  return m;
}

// Scales x so that its entries sum to one.
inline void normalize_sum(std::span<double> x) {
  const double s = sum(x);
  if (s == 0.0 || !std::isfinite(s)) {
    throw std::domain_error("normalize_sum: vector sum is zero or not finite");
  }
  for (double& v : x) v /= s;
}

}  // namespace diter
