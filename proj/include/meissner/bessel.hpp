#pragma once

// Modified Bessel functions I0, I1 (and internal K0, K1) on the nonnegative
// real axis, double precision.
//
// Evaluation strategy:
//   * z <= 40: ascending power series. All terms are positive, so the sum
//     carries no cancellation and is accurate to a few ulp.
//   * z > 40: large-argument expansion e^z/sqrt(2 pi z) * S(z) truncated at
//     8 terms. The first omitted term at z = 40 is ~1e-13 relative, so the
//     jump across the switch is far below the 1e-12 accuracy target.
//   * K0/K1 (used by the piecewise-Bessel field solver): ascending series up
//     to z = 9, thereafter the alternating large-argument expansion with 18
//     terms (worst relative error ~2e-8 right at the switch, decaying like
//     e^{-2z} beyond; the K-component is always the subdominant mode there).
//
// Exponentially scaled variants (i0_scaled = e^{-z} I0 etc.) are provided for
// overflow-free work with ratios and products.

#include <cmath>
#include <limits>
#include <string>

#include "meissner/errors.hpp"

namespace meissner {

enum class BesselMethod { series, asymptotic };

struct BesselEval {
  double value;
  BesselMethod method;
};

namespace detail {

inline constexpr double kSeriesSwitch = 40.0;
inline constexpr double kKSwitch = 9.0;
inline constexpr double kTwoPi = 6.2831853071795864769;
inline constexpr double kEulerGamma = 0.57721566490153286061;

inline void require_nonneg(double z, const char* fn) {
  if (!(z >= 0.0) || !std::isfinite(z))
    throw DomainError(std::string(fn) + ": argument must be finite and >= 0, got " +
                      std::to_string(z));
}

inline double i0_series(double z) {
  const double q = 0.25 * z * z;
  double term = 1.0, sum = 1.0;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * k);
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

inline double i1_series(double z) {
  const double q = 0.25 * z * z;
  double term = 0.5 * z, sum = term;
  for (int k = 1; k < 200; ++k) {
    term *= q / (static_cast<double>(k) * (k + 1));
    sum += term;
    if (term < sum * 1e-17) break;
  }
  return sum;
}

/// S(z) with I_nu(z) ~ e^z/sqrt(2 pi z) * S(z); mu = 4 nu^2, 8 terms.
inline double i_asymptotic_sum(double z, double mu) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 8; ++k) {
    const double tk = 2.0 * k - 1.0;
    term *= (tk * tk - mu) / (8.0 * z * k);
    sum += term;
  }
  return sum;
}

inline double i0_asymptotic(double z) {
  return std::exp(z) / std::sqrt(kTwoPi * z) * i_asymptotic_sum(z, 0.0);
}
inline double i1_asymptotic(double z) {
  return std::exp(z) / std::sqrt(kTwoPi * z) * i_asymptotic_sum(z, 4.0);
}

inline double i0_scaled(double z) {
  if (z <= kSeriesSwitch) return std::exp(-z) * i0_series(z);
  return i_asymptotic_sum(z, 0.0) / std::sqrt(kTwoPi * z);
}
inline double i1_scaled(double z) {
  if (z <= kSeriesSwitch) return std::exp(-z) * i1_series(z);
  return i_asymptotic_sum(z, 4.0) / std::sqrt(kTwoPi * z);
}

/// S_K(z) with K_nu(z) ~ sqrt(pi/2z) e^{-z} S_K(z); 18 terms.
inline double k_asymptotic_sum(double z, double mu) {
  double term = 1.0, sum = 1.0;
  for (int k = 1; k <= 18; ++k) {
    const double tk = 2.0 * k - 1.0;
    term *= (mu - tk * tk) / (8.0 * z * k);
    sum += term;
  }
  return sum;
}

inline double k0_series(double z) {
  const double q = 0.25 * z * z;
  double term = 1.0, i0 = 1.0, sum = 0.0, hk = 0.0;
  for (int k = 1; k < 80; ++k) {
    term *= q / (static_cast<double>(k) * k);
    hk += 1.0 / k;
    i0 += term;
    sum += term * hk;
    if (term < 1e-18 * i0) break;
  }
  return -(std::log(0.5 * z) + kEulerGamma) * i0 + sum;
}

inline double k1_series(double z) {
  const double q = 0.25 * z * z;
  // I1 part
  double t = 0.5 * z, i1 = t;
  for (int k = 1; k < 80; ++k) {
    t *= q / (static_cast<double>(k) * (k + 1));
    i1 += t;
    if (t < 1e-18 * i1) break;
  }
  // sum_k [psi(k+1)+psi(k+2)] q^k / (k! (k+1)!)
  double term = 1.0, sum = 0.0;
  double psi1 = -kEulerGamma, psi2 = 1.0 - kEulerGamma;
  for (int k = 0; k < 80; ++k) {
    sum += (psi1 + psi2) * term;
    term *= q / (static_cast<double>(k + 1) * (k + 2));
    psi1 += 1.0 / (k + 1);
    psi2 += 1.0 / (k + 2);
    if (term < 1e-18) break;
  }
  return 1.0 / z + std::log(0.5 * z) * i1 - 0.25 * z * sum;
}

/// e^{+z} K0(z); +inf at z = 0.
inline double k0_scaled(double z) {
  if (z == 0.0) return std::numeric_limits<double>::infinity();
  if (z <= kKSwitch) return std::exp(z) * k0_series(z);
  return std::sqrt(kTwoPi / (4.0 * z)) * k_asymptotic_sum(z, 0.0);
}

/// e^{+z} K1(z); +inf at z = 0.
inline double k1_scaled(double z) {
  if (z == 0.0) return std::numeric_limits<double>::infinity();
  if (z <= kKSwitch) return std::exp(z) * k1_series(z);
  return std::sqrt(kTwoPi / (4.0 * z)) * k_asymptotic_sum(z, 4.0);
}

}  // namespace detail

inline BesselEval bessel_i0_eval(double z) {
  detail::require_nonneg(z, "bessel_i0");
  if (z <= detail::kSeriesSwitch) return {detail::i0_series(z), BesselMethod::series};
  return {detail::i0_asymptotic(z), BesselMethod::asymptotic};
}

inline double bessel_i0(double z) { return bessel_i0_eval(z).value; }

inline BesselEval bessel_i1_eval(double z) {
  detail::require_nonneg(z, "bessel_i1");
  if (z <= detail::kSeriesSwitch) return {detail::i1_series(z), BesselMethod::series};
  return {detail::i1_asymptotic(z), BesselMethod::asymptotic};
}

inline double bessel_i1(double z) { return bessel_i1_eval(z).value; }

/// ln I0(z); overflow-safe for any finite z >= 0.
inline double bessel_i0_log(double z) {
  detail::require_nonneg(z, "bessel_i0_log");
  if (z <= detail::kSeriesSwitch) return std::log(detail::i0_series(z));
  return z - 0.5 * std::log(detail::kTwoPi * z) +
         std::log(detail::i_asymptotic_sum(z, 0.0));
}

/// I1(z)/I0(z); monotone increasing from 0 to 1 on z >= 0.
inline double bessel_ratio_i1_i0(double z) {
  detail::require_nonneg(z, "bessel_ratio_i1_i0");
  if (z <= detail::kSeriesSwitch)
    return detail::i1_series(z) / detail::i0_series(z);
  return detail::i_asymptotic_sum(z, 4.0) / detail::i_asymptotic_sum(z, 0.0);
}

/// Smallest p with I1(z)/I0(z) >= target for all z >= p (bisection, |dz| < 1e-8).
inline double ratio_threshold(double target) {
  if (!(target > 0.0) || !(target < 1.0))
    throw DomainError("ratio_threshold: target must lie in (0,1), got " +
                      std::to_string(target));
  double lo = 0.0, hi = 1.0;
  while (bessel_ratio_i1_i0(hi) < target) {
    lo = hi;
    hi *= 2.0;
    if (hi > 1e12)
      throw DomainError("ratio_threshold: target unreachable");  // ratio -> 1
  }
  while (hi - lo > 1e-8) {
    const double mid = 0.5 * (lo + hi);
    (bessel_ratio_i1_i0(mid) < target ? lo : hi) = mid;
  }
  return 0.5 * (lo + hi);
}

}  // namespace meissner
