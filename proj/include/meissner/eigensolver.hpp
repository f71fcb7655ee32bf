#pragma once

// Ground states of the radial operators
//
//   Q(k) u = -u'' - u'/rho + |k + rho alpha(rho)|^2 / rho^2 u = eps u
//
// on [0, rho_max] with the measure rho drho. Second-order finite volumes:
// fluxes rho u' are differenced at cell faces, which keeps the discrete
// operator symmetric with respect to the cell masses (d^2/8 for the axis
// cell, rho_i d otherwise). The k = 0 sector uses the regularity condition
// u'(0) = 0, all other sectors a Dirichlet axis node; the far boundary is
// Dirichlet (the confining alpha^2 tail makes the choice immaterial once
// rho_max is past the classical turning point).
//
// The lowest eigenpair comes from shifted inverse power iteration on the
// symmetrized tridiagonal system, re-shifted by the Rayleigh quotient after
// five sweeps, with guarded pivots in the factorization.

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>
#include <vector>

#include "meissner/errors.hpp"
#include "meissner/profiles.hpp"
#include "meissner/quadrature.hpp"

namespace meissner {

/// sqrt of the reference Gaussian density at the surface for flux 1/2;
/// the floor entering the decay-slope constant kDecaySlope = 0.8779/2.
inline constexpr double kGaussianSqrtFloor = 0.8779;

enum class FarBoundary { dirichlet, neumann };

struct EigenOptions {
  double tol = 1e-12;  ///< on the eigenvalue change, relative to max(1, |eps|)
  int max_iter = 200;
  FarBoundary far = FarBoundary::dirichlet;
};

namespace detail {

struct Tridiag {
  std::vector<double> diag, off;  // off[j] couples unknowns j and j+1
  std::vector<double> weight;     // cell masses of the unknowns
  int first_node;                 // grid index of unknown 0
};

inline Tridiag assemble_operator(const AlphaProfile& alpha, int k, FarBoundary far) {
  const RadialGrid& grid = alpha.grid;
  const int n = grid.size();
  const double d = grid.spacing();
  const int lo = (k == 0) ? 0 : 1;
  const int hi = (far == FarBoundary::dirichlet) ? n - 2 : n - 1;
  if (hi <= lo) throw DomainError("assemble_operator: grid too small");
  const int m = hi - lo + 1;

  const auto V = [&](int i) {
    const double rho = grid.node(i);
    if (k == 0) return alpha.alpha[i] * alpha.alpha[i];
    const double q = k + rho * alpha.alpha[i];
    return q * q / (rho * rho);
  };
  const auto weight = [&](int i) {
    if (i == 0) return d * d / 8.0;
    if (i == n - 1 && far == FarBoundary::neumann)
      return 0.5 * d * grid.node(i) - d * d / 8.0;
    return grid.node(i) * d;
  };

  Tridiag t;
  t.first_node = lo;
  t.diag.resize(m);
  t.off.resize(m - 1);
  t.weight.resize(m);
  for (int j = 0; j < m; ++j) {
    const int i = lo + j;
    t.weight[j] = weight(i);
    double flux = 0.0;
    if (i > 0) flux += grid.node(i) - 0.5 * d;   // inner face
    if (i < n - 1) flux += grid.node(i) + 0.5 * d;  // outer face
    t.diag[j] = flux / (d * t.weight[j]) + V(i);
  }
  for (int j = 0; j + 1 < m; ++j) {
    const int i = lo + j;
    const double face = grid.node(i) + 0.5 * d;
    t.off[j] = -face / (d * std::sqrt(t.weight[j] * t.weight[j + 1]));
  }
  return t;
}

/// (T - sigma) x = rhs by LU without pivoting; tiny pivots are nudged, which
/// is harmless inside inverse iteration.
inline void solve_shifted(const Tridiag& t, double sigma, std::vector<double>& x) {
  const int m = static_cast<int>(t.diag.size());
  static thread_local std::vector<double> piv, work;
  piv.resize(m);
  work.resize(m);
  double scale = std::abs(sigma);
  for (double v : t.diag) scale = std::max(scale, std::abs(v));
  const double tiny = scale * 1e-14 + 1e-300;

  piv[0] = t.diag[0] - sigma;
  if (std::abs(piv[0]) < tiny) piv[0] = piv[0] < 0 ? -tiny : tiny;
  work[0] = x[0];
  for (int j = 1; j < m; ++j) {
    const double l = t.off[j - 1] / piv[j - 1];
    piv[j] = t.diag[j] - sigma - l * t.off[j - 1];
    if (std::abs(piv[j]) < tiny) piv[j] = piv[j] < 0 ? -tiny : tiny;
    work[j] = x[j] - l * work[j - 1];
  }
  x[m - 1] = work[m - 1] / piv[m - 1];
  for (int j = m - 2; j >= 0; --j) x[j] = (work[j] - t.off[j] * x[j + 1]) / piv[j];
}

inline void apply(const Tridiag& t, const std::vector<double>& x, std::vector<double>& y) {
  const int m = static_cast<int>(t.diag.size());
  for (int j = 0; j < m; ++j) {
    double v = t.diag[j] * x[j];
    if (j > 0) v += t.off[j - 1] * x[j - 1];
    if (j + 1 < m) v += t.off[j] * x[j + 1];
    y[j] = v;
  }
}

struct EigenPair {
  double value;
  std::vector<double> vec;  // in the symmetrized basis
  double residual;
};

inline EigenPair lowest_eigenpair(const Tridiag& t, const EigenOptions& opts) {
  const int m = static_cast<int>(t.diag.size());
  std::vector<double> v(m, 1.0 / std::sqrt(static_cast<double>(m)));
  std::vector<double> y(m);
  double sigma = 0.0, lambda = std::numeric_limits<double>::infinity();
  for (int it = 0; it < opts.max_iter; ++it) {
    solve_shifted(t, sigma, v);
    double nrm = 0.0;
    for (double q : v) nrm += q * q;
    nrm = std::sqrt(nrm);
    for (double& q : v) q /= nrm;
    apply(t, v, y);
    const double rq = std::inner_product(v.begin(), v.end(), y.begin(), 0.0);
    if (std::abs(rq - lambda) < opts.tol * std::max(1.0, std::abs(rq))) {
      lambda = rq;
      double rr = 0.0;
      for (int j = 0; j < m; ++j) {
        const double r = y[j] - rq * v[j];
        rr += r * r;
      }
      return EigenPair{lambda, std::move(v), std::sqrt(rr)};
    }
    lambda = rq;
    if (it >= 4) sigma = rq;
  }
  throw ConvergenceError("lowest_eigenpair: inverse iteration stalled", lambda);
}

inline double sector_energy(const AlphaProfile& alpha, int k, const EigenOptions& opts) {
  return lowest_eigenpair(assemble_operator(alpha, k, opts.far), opts).value;
}

}  // namespace detail

/// Lowest eigenpair of Q(k); the wavefunction is sign-fixed positive and
/// cylinder-normalized (2 int_0^1 phi^2 rho drho = 1).
inline GroundState ground_state(const AlphaProfile& alpha, int sector_k = 0,
                                const EigenOptions& opts = {}) {
  const RadialGrid& grid = alpha.grid;
  const int n = grid.size();
  const int bi = grid.boundary_index();
  const double d = grid.spacing();

  const detail::Tridiag t = detail::assemble_operator(alpha, sector_k, opts.far);
  detail::EigenPair pair = detail::lowest_eigenpair(t, opts);
  if (pair.value < -1e-10)
    throw InvariantError("ground_state: negative eigenvalue " +
                         std::to_string(pair.value) + " signals a discretization fault");

  double peak = 0.0;
  for (double q : pair.vec) peak = std::abs(q) > std::abs(peak) ? q : peak;
  const double flip = peak < 0 ? -1.0 : 1.0;

  std::vector<double> u(n, 0.0);
  for (std::size_t j = 0; j < pair.vec.size(); ++j)
    u[t.first_node + j] = flip * pair.vec[j] / std::sqrt(t.weight[j]);

  std::vector<double> f(bi + 1);
  for (int i = 0; i <= bi; ++i) f[i] = u[i] * u[i] * grid.node(i);
  const double mass = 2.0 * trapezoid(f, d);
  const double inv = 1.0 / std::sqrt(mass);
  for (double& q : u) q *= inv;

  std::vector<double> ft(n - bi);
  for (int i = bi; i < n; ++i) ft[i - bi] = u[i] * u[i] * grid.node(i);
  const double tail = 2.0 * trapezoid(ft, d);

  double sigma;
  if (bi + 1 < n)
    sigma = u[bi] != 0.0 ? -(u[bi + 1] - u[bi - 1]) / (2.0 * d * u[bi]) : 0.0;
  else
    sigma = u[bi] != 0.0 ? -(u[bi] - u[bi - 1]) / (d * u[bi]) : 0.0;

  std::vector<double> g(n);
  for (int i = 0; i < n; ++i) g[i] = u[i] * u[i];
  return GroundState{grid,  std::move(u), pair.value, DensityProfile(grid, std::move(g)),
                     sector_k, tail,       sigma,      pair.residual};
}

/// Reference solution for uniform induction with flux a = lambda R^2 < 1/2:
/// density h(rho) = a/(1 - e^{-a}) e^{-a rho^2}, energy 2a.
inline GroundState gaussian_reference(double a_flux, const RadialGrid& grid) {
  if (!(a_flux > 0.0) || !(a_flux < 0.5))
    throw DomainError("gaussian_reference: flux must lie in (0, 1/2), got " +
                      std::to_string(a_flux));
  const int n = grid.size();
  const int bi = grid.boundary_index();
  const double norm = a_flux / (1.0 - std::exp(-a_flux));
  std::vector<double> h(n), phi(n);
  for (int i = 0; i < n; ++i) {
    const double rho = grid.node(i);
    h[i] = norm * std::exp(-a_flux * rho * rho);
    phi[i] = std::sqrt(h[i]);
  }
  std::vector<double> ft(n - bi);
  for (int i = bi; i < n; ++i) ft[i - bi] = h[i] * grid.node(i);
  const double tail = 2.0 * trapezoid(ft, grid.spacing());
  return GroundState{grid, std::move(phi), 2.0 * a_flux, DensityProfile(grid, std::move(h)),
                     0,    tail,           a_flux,       0.0};
}

/// Density g = phi^2 under the cylinder normalization.
inline DensityProfile density_g(const GroundState& gs) { return gs.g; }

/// Relative discrete eigenresidual ||(Q(k) - eps) phi|| / ||phi|| in the
/// symmetrized basis; independent of how the pair was obtained.
inline double eigen_residual(const AlphaProfile& alpha, const std::vector<double>& phi,
                             double energy, int sector_k = 0,
                             FarBoundary far = FarBoundary::dirichlet) {
  const detail::Tridiag t = detail::assemble_operator(alpha, sector_k, far);
  const int m = static_cast<int>(t.diag.size());
  std::vector<double> psi(m), y(m);
  for (int j = 0; j < m; ++j)
    psi[j] = phi[t.first_node + j] * std::sqrt(t.weight[j]);
  detail::apply(t, psi, y);
  double rr = 0.0, nn = 0.0;
  for (int j = 0; j < m; ++j) {
    const double r = y[j] - energy * psi[j];
    rr += r * r;
    nn += psi[j] * psi[j];
  }
  return std::sqrt(rr / nn);
}

/// Sector of the lowest ground energy over k in [k_lo, k_hi]; ties go to the
/// smaller |k|. The range must contain {-1, 0}.
inline int sector_check(const AlphaProfile& alpha, int k_lo, int k_hi,
                        const EigenOptions& opts = {}) {
  if (k_lo > -1 || k_hi < 0)
    throw DomainError("sector_check: range must contain k = -1 and k = 0");
  int best_k = 0;
  double best = detail::sector_energy(alpha, 0, opts);
  for (int a = 1; -a >= k_lo || a <= k_hi; ++a) {
    for (const int k : {-a, a}) {
      if (k < k_lo || k > k_hi || k == 0) continue;
      const double e = detail::sector_energy(alpha, k, opts);
      if (e < best) {
        best = e;
        best_k = k;
      }
    }
  }
  return best_k;
}

/// Pointwise comparison of a computed density against the reference Gaussian.
struct ComparisonReport {
  std::vector<double> margin;  ///< g - h on the cylinder nodes
  double min_margin;
  double min_sqrt_g;
  bool pointwise_ok;  ///< min_margin >= -eps_pointwise
  bool floor_ok;      ///< min_sqrt_g >= 0.8779 - eps_floor
};

inline ComparisonReport comparison_check(const DensityProfile& g, const DensityProfile& h,
                                         double eps_pointwise = 1e-6,
                                         double eps_floor = 1e-4) {
  if (g.grid() != h.grid())
    throw GridMismatchError("comparison_check: grids differ");
  const int bi = g.grid().boundary_index();
  ComparisonReport rep;
  rep.margin.resize(bi + 1);
  rep.min_margin = std::numeric_limits<double>::infinity();
  rep.min_sqrt_g = std::numeric_limits<double>::infinity();
  for (int i = 0; i <= bi; ++i) {
    rep.margin[i] = g[i] - h[i];
    rep.min_margin = std::min(rep.min_margin, rep.margin[i]);
    rep.min_sqrt_g = std::min(rep.min_sqrt_g, std::sqrt(g[i]));
  }
  rep.pointwise_ok = rep.min_margin >= -eps_pointwise;
  rep.floor_ok = rep.min_sqrt_g >= kGaussianSqrtFloor - eps_floor;
  return rep;
}

}  // namespace meissner
