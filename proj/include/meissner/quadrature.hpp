#pragma once

#include <span>
#include <vector>

namespace meissner {

/// Composite trapezoid of uniformly spaced samples.
inline double trapezoid(std::span<const double> f, double dx) {
  if (f.size() < 2) return 0.0;
  double s = 0.5 * (f.front() + f.back());
  for (std::size_t i = 1; i + 1 < f.size(); ++i) s += f[i];
  return s * dx;
}

/// Cumulative trapezoid; out[0] = 0, out[i] = integral up to node i.
inline std::vector<double> cumulative_trapezoid(std::span<const double> f, double dx) {
  std::vector<double> out(f.size(), 0.0);
  for (std::size_t i = 1; i < f.size(); ++i)
    out[i] = out[i - 1] + 0.5 * dx * (f[i - 1] + f[i]);
  return out;
}

}  // namespace meissner
