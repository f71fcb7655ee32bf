#pragma once

// Physics post-processing: ground-energy sweeps, the zero-field magnetization
// slope tau, critical fields, phase classification, the penetration depth in
// SI units, and the azimuthal screening current.

#include <algorithm>
#include <cmath>
#include <span>
#include <string>
#include <vector>

#include "meissner/errors.hpp"
#include "meissner/self_consistent.hpp"

namespace meissner {

// CODATA 2018
inline constexpr double kHbar = 1.054571817e-34;          // J s
inline constexpr double kElectronMass = 9.1093837015e-31;  // kg
inline constexpr double kElementaryCharge = 1.602176634e-19;  // C
inline constexpr double kMu0 = 1.25663706212e-6;           // H/m
inline constexpr double kEps0 = 8.8541878128e-12;          // F/m
inline constexpr double kLightSpeed = 299792458.0;         // m/s

/// Dimensionful inputs; defaults describe paired electrons at d = 1e27 m^-3
/// in a 10 cm cylinder.
struct PhysicalParams {
  double particle_mass = 2.0 * kElectronMass;
  double charge = 2.0 * kElementaryCharge;
  double density = 1e27;   ///< particles per m^3
  double radius = 0.1;     ///< m
  double vacuum_mu0 = kMu0;
  double vacuum_eps0 = kEps0;
  double light_c = kLightSpeed;

  void validate() const {
    for (double v : {particle_mass, charge, density, radius, vacuum_mu0, vacuum_eps0, light_c})
      if (!(v > 0.0) || !std::isfinite(v))
        throw DomainError("PhysicalParams: all parameters must be positive and finite");
  }
};

struct PenetrationDepth {
  double delta;  ///< m
  double kappa;  ///< radius / delta
};

/// delta = sqrt(eps0 m c^2 / (d e^2)); independent of the sample size.
inline PenetrationDepth penetration_depth(const PhysicalParams& p) {
  p.validate();
  const double delta = std::sqrt(p.vacuum_eps0 * p.particle_mass * p.light_c * p.light_c /
                                 (p.density * p.charge * p.charge));
  return {delta, p.radius / delta};
}

enum class Phase { expelled, surface_decay, penetrating };

inline const char* to_string(Phase ph) {
  switch (ph) {
    case Phase::expelled: return "expelled";
    case Phase::surface_decay: return "surface-decay";
    case Phase::penetrating: return "penetrating";
  }
  return "?";
}

struct PhaseReport {
  double applied_H;  // all fields in A/m
  double H0;
  double HcR;
  double Hc0;
  Phase phase;
  double boundary_Bf;  ///< boundary induction H - H0, clamped at 0 (A/m)
};

struct CriticalFields {
  double H0, HcR, Hc0;  // A/m
};

/// Converts the dimensionless zero-field slope tau = d eps/d b to SI fields:
/// the magnetic moment per particle is tau hbar e/(2m), H0 = d times that,
/// and the finite-size window is H_c(R) = hbar/(e R^2 mu0).
inline CriticalFields critical_fields(const PhysicalParams& p, double tau_dimensionless) {
  p.validate();
  if (!(tau_dimensionless >= 0.0))
    throw DomainError("critical_fields: tau must be nonnegative");
  const double moment = tau_dimensionless * kHbar * p.charge / (2.0 * p.particle_mass);
  const double H0 = p.density * moment;
  const double HcR = kHbar / (p.charge * p.radius * p.radius * p.vacuum_mu0);
  return {H0, HcR, H0 + HcR};
}

/// Three-regime classification; H = H0 counts as expelled, H = H0 + HcR as
/// penetrating.
inline PhaseReport phase_classify(double applied_H, double H0, double HcR) {
  if (!(H0 >= 0.0) || !(HcR >= 0.0))
    throw DomainError("phase_classify: H0 and HcR must be nonnegative");
  PhaseReport r;
  r.applied_H = applied_H;
  r.H0 = H0;
  r.HcR = HcR;
  r.Hc0 = H0 + HcR;
  if (applied_H <= H0) {
    r.phase = Phase::expelled;
    r.boundary_Bf = 0.0;
  } else if (applied_H < H0 + HcR) {
    r.phase = Phase::surface_decay;
    r.boundary_Bf = applied_H - H0;
  } else {
    r.phase = Phase::penetrating;
    r.boundary_Bf = applied_H - H0;
  }
  return r;
}

/// Grid with the same spacing but rho_max stretched past the classical
/// turning point of the flux-b confinement, so weak-field eigensolves are not
/// polluted by the far Dirichlet wall.
inline RadialGrid grid_for_flux(double b, const RadialGrid& base) {
  const double a = 0.5 * b;
  const double needed = 4.0 / std::sqrt(a);
  if (base.rho_max() >= needed) return base;
  const int per_unit = static_cast<int>(std::llround((base.size() - 1) / base.rho_max()));
  const int stretched = static_cast<int>(std::ceil(needed - 1e-12));
  return RadialGrid::make(per_unit * stretched + 1, static_cast<double>(stretched));
}

struct EnergyPoint {
  double b;
  double energy;
  bool converged;
};

/// Ground energy per particle along a boundary-field sweep; each point is a
/// full self-consistent solve. Points that fail to converge are kept and
/// flagged. Result is sorted by b.
inline std::vector<EnergyPoint> energy_sweep(double kappa, std::span<const double> b_values,
                                             const RadialGrid& base_grid, double tol,
                                             int max_iter = 500, double mixing = 0.5) {
  std::vector<EnergyPoint> out;
  out.reserve(b_values.size());
  for (double b : b_values) {
    if (!(b > 0.0) || !(b < 1.0))
      throw DomainError("energy_sweep: b values must lie in (0,1)");
    const RadialGrid grid = grid_for_flux(b, base_grid);
    const SelfConsistentSolution sol = iterate(kappa, b, grid, tol, max_iter, mixing);
    out.push_back({b, sol.ground.energy, sol.converged});
  }
  std::sort(out.begin(), out.end(),
            [](const EnergyPoint& x, const EnergyPoint& y) { return x.b < y.b; });
  return out;
}

/// Zero-field slope d eps/d b by a Richardson-extrapolated one-sided
/// difference on the two smallest sweep points (which must sit in ratio 2).
/// b = 0 itself is a degenerate limit, so the slope is approached from above.
inline double magnetization_tau(std::span<const EnergyPoint> curve, double tol_slope = 1e-6) {
  if (curve.size() < 3)
    throw DomainError("magnetization_tau: need at least 3 sweep points near b = 0");
  std::vector<EnergyPoint> pts(curve.begin(), curve.end());
  std::sort(pts.begin(), pts.end(),
            [](const EnergyPoint& x, const EnergyPoint& y) { return x.b < y.b; });
  const EnergyPoint& p1 = pts[0];
  const EnergyPoint& p2 = pts[1];
  if (std::abs(p2.b - 2.0 * p1.b) > 1e-9)
    throw DomainError("magnetization_tau: two smallest points must sit at b and 2b");
  if (!p1.converged || !p2.converged)
    throw DomainError("magnetization_tau: smallest sweep points did not converge");
  const double tau = 2.0 * (p1.energy / p1.b) - p2.energy / p2.b;
  if (tau < -tol_slope)
    throw InvariantError("magnetization_tau: slope " + std::to_string(tau) +
                         " below -tol; minimax requires tau >= 0");
  return std::max(tau, 0.0);
}

/// Dimensionless London current j_theta = -g a; nonpositive (diamagnetic).
inline std::vector<double> current_profile(const SelfConsistentSolution& sol) {
  const std::vector<double> a = vector_potential(sol.field);
  std::vector<double> j(a.size());
  const std::vector<double>& g = sol.ground.g.values();
  for (std::size_t i = 0; i < a.size(); ++i) j[i] = -g[i] * a[i];
  return j;
}

/// max over interior nodes of |(1/rho) d(rho a)/d rho - B|, central FD.
inline double curl_consistency_residual(const FieldProfile& b, std::span<const double> a) {
  const RadialGrid& grid = b.grid;
  const double d = grid.spacing();
  double worst = 0.0;
  for (int i = 1; i + 1 < grid.size(); ++i) {
    const double lhs = (grid.node(i + 1) * a[i + 1] - grid.node(i - 1) * a[i - 1]) /
                       (2.0 * d * grid.node(i));
    worst = std::max(worst, std::abs(lhs - b.b[i]));
  }
  return worst;
}

/// max over interior cylinder nodes of |dB/d rho + kappa^2 j_theta|.
inline double ampere_consistency_residual(const FieldProfile& b, std::span<const double> j,
                                          double kappa) {
  const RadialGrid& grid = b.grid;
  const double d = grid.spacing();
  const int bi = grid.boundary_index();
  double worst = 0.0;
  for (int i = 1; i < bi; ++i) {
    const double db = (b.b[i + 1] - b.b[i - 1]) / (2.0 * d);
    worst = std::max(worst, std::abs(db + kappa * kappa * j[i]));
  }
  return worst;
}

}  // namespace meissner
