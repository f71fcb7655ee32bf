#pragma once

#include <cmath>
#include <string>

#include "meissner/errors.hpp"

namespace meissner {

/// Uniform grid on [0, rho_max] in units of the cylinder radius.
///
/// The cylinder boundary rho = 1 must coincide with a grid node: all field
/// and normalization integrals run over the node range [0, boundary_index()].
class RadialGrid {
 public:
  static RadialGrid make(int n, double rho_max) {
    if (n < 2) throw DomainError("RadialGrid: need at least 2 nodes");
    if (!(rho_max >= 1.0) || !std::isfinite(rho_max))
      throw DomainError("RadialGrid: rho_max must be finite and >= 1");
    const double m_real = static_cast<double>(n - 1) / rho_max;
    const long long m = std::llround(m_real);
    if (m < 1 || std::abs(m * rho_max - static_cast<double>(n - 1)) > 1e-9)
      throw DomainError(
          "RadialGrid: rho=1 does not fall on a node (need (n-1)/rho_max "
          "integral); got n=" + std::to_string(n) +
          ", rho_max=" + std::to_string(rho_max));
    return RadialGrid(n, rho_max, static_cast<int>(m));
  }

  /// Smallest n' >= n such that make(n', rho_max) is valid.
  static int snap_nodes(int n, double rho_max) {
    long long m = static_cast<long long>(std::ceil((n - 1) / rho_max - 1e-12));
    for (;; ++m) {
      const long long np = std::llround(m * rho_max) + 1;
      if (np < n) continue;
      if (std::abs(m * rho_max - static_cast<double>(np - 1)) <= 1e-9)
        return static_cast<int>(np);
      if (m > static_cast<long long>(n) + 1000000)
        throw DomainError("RadialGrid: cannot place rho=1 on a node for this rho_max");
    }
  }

  int size() const { return n_; }
  double rho_max() const { return rho_max_; }
  double spacing() const { return rho_max_ / (n_ - 1); }
  /// Index of the node at rho = 1 (the cylinder surface).
  int boundary_index() const { return boundary_; }
  double node(int i) const { return (i * rho_max_) / (n_ - 1); }

  friend bool operator==(const RadialGrid& a, const RadialGrid& b) {
    return a.n_ == b.n_ && a.rho_max_ == b.rho_max_;
  }
  friend bool operator!=(const RadialGrid& a, const RadialGrid& b) { return !(a == b); }

 private:
  RadialGrid(int n, double rho_max, int boundary)
      : n_(n), rho_max_(rho_max), boundary_(boundary) {}

  int n_;
  double rho_max_;
  int boundary_;
};

}  // namespace meissner
