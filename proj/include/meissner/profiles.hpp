#pragma once

#include <cmath>
#include <string>
#include <utility>
#include <vector>

#include "meissner/errors.hpp"
#include "meissner/grid.hpp"
#include "meissner/quadrature.hpp"

namespace meissner {

enum class FieldProvenance { initial, picard, bessel_piecewise, analytic_constant_g };

inline const char* to_string(FieldProvenance p) {
  switch (p) {
    case FieldProvenance::initial: return "initial";
    case FieldProvenance::picard: return "picard";
    case FieldProvenance::bessel_piecewise: return "bessel-piecewise";
    case FieldProvenance::analytic_constant_g: return "analytic";
  }
  return "?";
}

/// Magnetic induction per node, in units of hbar/(e R^2). Nodes beyond the
/// cylinder surface carry the uniform outside value boundary_b.
struct FieldProfile {
  RadialGrid grid;
  std::vector<double> b;
  double boundary_b;
  FieldProvenance provenance = FieldProvenance::initial;
};

inline FieldProfile constant_field(const RadialGrid& grid, double boundary_b,
                                   FieldProvenance prov = FieldProvenance::initial) {
  return FieldProfile{grid, std::vector<double>(grid.size(), boundary_b), boundary_b, prov};
}

/// Nonnegative particle density per node. Negative samples are rejected here;
/// the unit cylinder average 2 int_0^1 g rho drho = 1 holds for densities
/// produced by the eigensolver but is not required of solver inputs.
class DensityProfile {
 public:
  DensityProfile(RadialGrid grid, std::vector<double> g)
      : grid_(grid), g_(std::move(g)) {
    if (static_cast<int>(g_.size()) != grid_.size())
      throw GridMismatchError("DensityProfile: value count != grid size");
    for (double v : g_)
      if (!(v >= 0.0) || !std::isfinite(v))
        throw DomainError("DensityProfile: density must be finite and >= 0");
  }

  const RadialGrid& grid() const { return grid_; }
  const std::vector<double>& values() const { return g_; }
  double operator[](int i) const { return g_[i]; }

  /// 2 int_0^1 g rho drho by trapezoid.
  double cylinder_mass() const {
    const int bi = grid_.boundary_index();
    std::vector<double> f(bi + 1);
    for (int i = 0; i <= bi; ++i) f[i] = g_[i] * grid_.node(i);
    return 2.0 * trapezoid(f, grid_.spacing());
  }

 private:
  RadialGrid grid_;
  std::vector<double> g_;
};

inline DensityProfile constant_density(const RadialGrid& grid, double s) {
  return DensityProfile(grid, std::vector<double>(grid.size(), s));
}

/// Dimensionless gauge function alpha(rho) entering the radial potential;
/// alpha(0) = 0 and alpha is continuous by construction.
struct AlphaProfile {
  RadialGrid grid;
  std::vector<double> alpha;
};

inline AlphaProfile make_alpha(const RadialGrid& grid, std::vector<double> values) {
  if (static_cast<int>(values.size()) != grid.size())
    throw GridMismatchError("AlphaProfile: value count != grid size");
  if (values[0] != 0.0)
    throw DomainError("AlphaProfile: alpha(0) must vanish");
  return AlphaProfile{grid, std::move(values)};
}

/// alpha for a uniform induction b: alpha(rho) = (b/2) rho.
inline AlphaProfile homogeneous_alpha(const RadialGrid& grid, double b) {
  std::vector<double> a(grid.size());
  for (int i = 0; i < grid.size(); ++i) a[i] = 0.5 * b * grid.node(i);
  return AlphaProfile{grid, std::move(a)};
}

/// Radial ground state: cylinder-normalized wavefunction, its energy in units
/// of hbar^2/(2 m R^2), the derived density, and diagnostics (mass outside the
/// cylinder, emergent surface logarithmic derivative, discrete eigenresidual).
struct GroundState {
  RadialGrid grid;
  std::vector<double> phi;
  double energy;
  DensityProfile g;
  int sector_k;
  double tail_mass;
  double emergent_sigma;
  double residual;
};

}  // namespace meissner
