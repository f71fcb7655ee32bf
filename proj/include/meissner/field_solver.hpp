#pragma once

// Solvers for the magnetic-induction boundary problem inside the cylinder:
//
//   (A B)(rho) = b_ext - kappa^2 int_rho^1 du g(u)/u int_0^u dv v B(v)
//
// with B(1) = b_ext and B extended by b_ext outside the surface. The fixed
// point of A is found by relaxed Picard iteration: the linear part C of A has
// positive spectrum with largest eigenvalue ~ kappa^2 max(g)/j01^2 (j01 the
// first zero of J0), so plain iteration diverges once that exceeds one. A
// power-iteration estimate mu of the spectral radius selects the Richardson
// factor omega = 2/(2 + 1.05 mu); omega = 1 is kept in the contractive regime.
//
// A piecewise-constant-density solver (slab-wise I0/K0 solutions joined by
// continuity of B and of the flux integral) and the analytic constant-density
// solution provide independent routes to the same profile.

#include <algorithm>
#include <cmath>
#include <string>
#include <vector>

#include "meissner/bessel.hpp"
#include "meissner/errors.hpp"
#include "meissner/profiles.hpp"
#include "meissner/quadrature.hpp"

namespace meissner {

/// Exponential decay slope of Theorem-type certificates: half the density
/// floor sqrt(h(1)) = 0.8779 of the reference Gaussian at flux 1/2.
inline constexpr double kDecaySlope = 0.4389;

namespace detail {

/// J(rho_i) = int_rho_i^1 du g(u)/u int_0^u dv v B(v), trapezoid, two passes.
/// The 1/u factor is benign: the inner integral is O(u^2), so the integrand
/// vanishes at the axis and the first cell uses that limit.
inline std::vector<double> contraction_tail(const std::vector<double>& b,
                                            const DensityProfile& g) {
  const RadialGrid& grid = g.grid();
  const int bi = grid.boundary_index();
  const double d = grid.spacing();

  std::vector<double> vb(bi + 1);
  for (int i = 0; i <= bi; ++i) vb[i] = grid.node(i) * b[i];
  const std::vector<double> inner = cumulative_trapezoid(vb, d);

  std::vector<double> f(bi + 1);
  f[0] = 0.0;
  for (int i = 1; i <= bi; ++i) f[i] = g[i] * inner[i] / grid.node(i);
  std::vector<double> F = cumulative_trapezoid(f, d);
  for (int i = 0; i <= bi; ++i) F[i] = F[bi] - F[i];
  return F;
}

inline void require_kappa(double kappa, const char* fn) {
  if (!(kappa >= 0.0) || !std::isfinite(kappa))
    throw DomainError(std::string(fn) + ": kappa must be finite and >= 0");
}

}  // namespace detail

/// One application of the shielding operator A.
inline FieldProfile apply_contraction(const FieldProfile& b_in, const DensityProfile& g,
                                      double kappa) {
  detail::require_kappa(kappa, "apply_contraction");
  if (b_in.grid != g.grid())
    throw GridMismatchError("apply_contraction: field and density grids differ");
  const int bi = b_in.grid.boundary_index();
  const std::vector<double> tail = detail::contraction_tail(b_in.b, g);
  FieldProfile out = b_in;
  for (int i = 0; i <= bi; ++i) out.b[i] = b_in.boundary_b - kappa * kappa * tail[i];
  for (int i = bi + 1; i < b_in.grid.size(); ++i) out.b[i] = b_in.boundary_b;
  return out;
}

/// Largest eigenvalue of the linear part C of A (power iteration).
inline double picard_spectral_estimate(const DensityProfile& g, double kappa) {
  detail::require_kappa(kappa, "picard_spectral_estimate");
  if (kappa == 0.0) return 0.0;
  const int bi = g.grid().boundary_index();
  std::vector<double> v(g.grid().size(), 0.0);
  for (int i = 0; i <= bi; ++i) v[i] = 1.0;
  double mu = 0.0;
  for (int it = 0; it < 200; ++it) {
    std::vector<double> w = detail::contraction_tail(v, g);
    double nw = 0.0;
    for (int i = 0; i <= bi; ++i) nw = std::max(nw, std::abs(w[i]));
    nw *= kappa * kappa;
    if (nw == 0.0) return 0.0;
    if (std::abs(nw - mu) <= 1e-6 * std::max(nw, 1e-30)) return nw;
    mu = nw;
    const double inv = 1.0 / nw * kappa * kappa;
    for (int i = 0; i <= bi; ++i) v[i] = w[i] * inv;
  }
  return mu;
}

/// Bounds and surface-inward monotonicity required of any shielded profile.
inline void check_field_invariants(const FieldProfile& p, double eps_mono_rel = 1e-8) {
  const int bi = p.grid.boundary_index();
  const double eps = eps_mono_rel * std::abs(p.boundary_b);
  if (std::abs(p.b[bi] - p.boundary_b) > 1e-12 * std::max(1.0, std::abs(p.boundary_b)))
    throw InvariantError("field profile: surface value != boundary_b");
  double run_max = p.b[0];
  for (int i = 0; i <= bi; ++i) {
    if (p.b[i] < -eps || p.b[i] > p.boundary_b + eps)
      throw InvariantError("field profile: value outside [0, boundary_b] at node " +
                           std::to_string(i));
    if (run_max > p.b[i] + eps)
      throw InvariantError("field profile: not monotone toward the surface at node " +
                           std::to_string(i));
    run_max = std::max(run_max, p.b[i]);
  }
}

/// Fixed point of A by relaxed Picard iteration from the constant profile.
/// relaxation = 0 selects the factor automatically from the spectral estimate.
inline FieldProfile solve_picard(const DensityProfile& g, double kappa, double boundary_b,
                                 double tol, int max_iter, double relaxation = 0.0) {
  detail::require_kappa(kappa, "solve_picard");
  if (!(boundary_b > 0.0) || !std::isfinite(boundary_b))
    throw DomainError("solve_picard: boundary_b must be positive");
  if (!(tol > 0.0)) throw DomainError("solve_picard: tol must be positive");
  if (relaxation < 0.0 || relaxation > 1.0)
    throw DomainError("solve_picard: relaxation must lie in (0,1] or 0 for auto");

  double omega = relaxation;
  if (omega == 0.0) {
    const double mu = picard_spectral_estimate(g, kappa);
    omega = (mu <= 0.9) ? 1.0 : 2.0 / (2.0 + 1.05 * mu);
  }

  const RadialGrid& grid = g.grid();
  const int bi = grid.boundary_index();
  FieldProfile b = constant_field(grid, boundary_b);
  double res = 0.0;
  for (int it = 0; it < max_iter; ++it) {
    const std::vector<double> tail = detail::contraction_tail(b.b, g);
    res = 0.0;
    for (int i = 0; i <= bi; ++i) {
      const double ab = boundary_b - kappa * kappa * tail[i];
      res = std::max(res, std::abs(ab - b.b[i]));
    }
    if (res < tol) {
      b.provenance = FieldProvenance::picard;
      check_field_invariants(b);
      return b;
    }
    for (int i = 0; i <= bi; ++i) {
      const double ab = boundary_b - kappa * kappa * tail[i];
      b.b[i] += omega * (ab - b.b[i]);
    }
  }
  throw ConvergenceError("solve_picard: no fixed point within " +
                             std::to_string(max_iter) + " iterations (residual " +
                             std::to_string(res) + ")",
                         res);
}

/// B(rho) = b_ext I0(kappa sqrt(s) rho)/I0(kappa sqrt(s)) for constant density s.
inline FieldProfile analytic_constant_g(double s, double kappa, double boundary_b,
                                        const RadialGrid& grid) {
  if (!(s > 0.0)) throw DomainError("analytic_constant_g: s must be positive");
  detail::require_kappa(kappa, "analytic_constant_g");
  const double z = kappa * std::sqrt(s);
  const int bi = grid.boundary_index();
  FieldProfile out = constant_field(grid, boundary_b, FieldProvenance::analytic_constant_g);
  const double log_surface = bessel_i0_log(z);
  for (int i = 0; i <= bi; ++i)
    out.b[i] = boundary_b * std::exp(bessel_i0_log(z * grid.node(i)) - log_surface);
  return out;
}

/// Exact solution of the field equation with the density frozen to its value
/// at the top of each slab [1-(j+1)delta, 1-j delta]. Within a slab the
/// solution is alpha I0 + beta K0; B and the flux integral (1/rho)int v B dv
/// are continuous across slab edges, and regularity at the axis removes the
/// K0 component of the innermost slab. Evaluation uses exponentially scaled
/// Bessel functions, so only the slab width enters the exponents.
inline FieldProfile solve_piecewise_bessel(const DensityProfile& g, double step_delta,
                                           double kappa, double boundary_b) {
  detail::require_kappa(kappa, "solve_piecewise_bessel");
  if (!(step_delta > 0.0) || !(step_delta < 1.0))
    throw DomainError("solve_piecewise_bessel: step_delta must lie in (0,1)");
  const RadialGrid& grid = g.grid();
  const int bi = grid.boundary_index();
  const double d = grid.spacing();

  const auto g_at = [&](double rho) {
    const double x = rho / d;
    const int i = std::min(static_cast<int>(x), grid.size() - 2);
    const double t = x - i;
    return std::max((1.0 - t) * g[i] + t * g[i + 1], 0.0);
  };

  // ascending slab edges 0 = e_0 < ... < e_last = 1
  std::vector<double> edges;
  const int nfull = static_cast<int>(std::floor(1.0 / step_delta + 1e-12));
  for (int j = nfull; j >= 0; --j) edges.push_back(1.0 - j * step_delta);
  if (edges.front() > 1e-12) edges.insert(edges.begin(), 0.0);
  edges.front() = 0.0;
  edges.back() = 1.0;

  FieldProfile out = constant_field(grid, boundary_b, FieldProvenance::bessel_piecewise);
  double B = 1.0, at = 0.0;  // B and a-tilde carried along the bottom edges
  int node = 0;
  for (std::size_t j = 0; j + 1 < edges.size(); ++j) {
    const double be = edges[j], te = edges[j + 1];
    const double c = g_at(te);
    const double z = kappa * std::sqrt(c);
    if (z * (te - be) > 600.0)
      throw DomainError("solve_piecewise_bessel: slab too wide for scaled evaluation");
    if (z == 0.0) {
      while (node <= bi && grid.node(node) <= te + 1e-12) out.b[node++] = B;
      at = te > 0.0 ? (be * at + 0.5 * B * (te * te - be * be)) / te : 0.0;
      continue;
    }
    const double sc = kappa * std::sqrt(c);
    double ah, bh;
    if (be == 0.0) {
      ah = B;
      bh = 0.0;
    } else {
      const double x = z * be;
      ah = x * (B * detail::k1_scaled(x) + at * sc * detail::k0_scaled(x));
      bh = x * (B * detail::i1_scaled(x) - at * sc * detail::i0_scaled(x));
    }
    while (node <= bi && grid.node(node) <= te + 1e-12) {
      const double rho = grid.node(node);
      const double x = z * rho;
      double v = ah * detail::i0_scaled(x) * std::exp(z * (rho - be));
      if (bh != 0.0 && x > 0.0)
        v += bh * detail::k0_scaled(x) * std::exp(-z * (rho - be));
      out.b[node++] = v;
    }
    const double xt = z * te;
    const double grow = std::exp(z * (te - be));
    const double Bt = ah * detail::i0_scaled(xt) * grow +
                      (bh != 0.0 ? bh * detail::k0_scaled(xt) / grow : 0.0);
    at = (ah * detail::i1_scaled(xt) * grow -
          (bh != 0.0 ? bh * detail::k1_scaled(xt) / grow : 0.0)) / sc;
    B = Bt;
  }
  const double scale = boundary_b / B;
  for (int i = 0; i <= bi; ++i) out.b[i] *= scale;
  return out;
}

/// a(rho) = (1/rho) int_0^rho v B(v) dv on the full grid; a(0) = 0.
inline std::vector<double> vector_potential(const FieldProfile& b) {
  const RadialGrid& grid = b.grid;
  std::vector<double> vb(grid.size());
  for (int i = 0; i < grid.size(); ++i) vb[i] = grid.node(i) * b.b[i];
  std::vector<double> a = cumulative_trapezoid(vb, grid.spacing());
  a[0] = 0.0;
  for (int i = 1; i < grid.size(); ++i) a[i] /= grid.node(i);
  return a;
}

inline AlphaProfile alpha_from_field(const FieldProfile& b) {
  return AlphaProfile{b.grid, vector_potential(b)};
}

/// Exponential-decay certificate at a probe radius b_point in (0, 1].
struct DecayCertificate {
  double b_point;
  double field_value;
  double integral_bound;  ///< b_ext exp(-kappa int_b^1 sqrt(g)/2)
  double linear_bound;    ///< b_ext exp(-kDecaySlope kappa (1-b_point))
  bool asymptotic_ok;     ///< kappa * b_point above the ratio threshold

  bool chain_holds(double rel = 1e-12) const {
    return field_value <= integral_bound * (1.0 + rel) &&
           integral_bound <= linear_bound * (1.0 + rel);
  }
};

inline DecayCertificate decay_certificate(const FieldProfile& b, const DensityProfile& g,
                                          double b_point, double kappa) {
  detail::require_kappa(kappa, "decay_certificate");
  if (b.grid != g.grid())
    throw GridMismatchError("decay_certificate: field and density grids differ");
  if (!(b_point > 0.0) || !(b_point <= 1.0))
    throw DomainError("decay_certificate: b_point must lie in (0, 1]");
  const RadialGrid& grid = b.grid;
  const int bi = grid.boundary_index();
  const double d = grid.spacing();

  const auto lerp = [&](const std::vector<double>& v, double rho) {
    const double x = rho / d;
    const int i = std::min(static_cast<int>(x), grid.size() - 2);
    const double t = x - i;
    return (1.0 - t) * v[i] + t * v[i + 1];
  };

  std::vector<double> sq(bi + 1);
  for (int i = 0; i <= bi; ++i) sq[i] = std::sqrt(g[i]);
  int j = static_cast<int>(std::ceil(b_point / d - 1e-12));
  j = std::min(j, bi);
  double integral = 0.0;
  if (grid.node(j) > b_point)
    integral += 0.5 * (grid.node(j) - b_point) * (lerp(sq, b_point) + sq[j]);
  for (int i = j; i < bi; ++i) integral += 0.5 * d * (sq[i] + sq[i + 1]);

  static const double p_half = ratio_threshold(0.5);
  DecayCertificate cert;
  cert.b_point = b_point;
  cert.field_value = lerp(b.b, b_point);
  cert.integral_bound = b.boundary_b * std::exp(-0.5 * kappa * integral);
  cert.linear_bound = b.boundary_b * std::exp(-kDecaySlope * kappa * (1.0 - b_point));
  cert.asymptotic_ok = kappa * b_point > p_half;
  return cert;
}

}  // namespace meissner
