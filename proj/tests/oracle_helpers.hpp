#pragma once

// Independent long-double oracles used to freeze expected values. These stay
// deliberately naive (plain power series, plain quadrature) and must not
// share code with the library implementation they check.

#include <cmath>
#include <functional>
#include <vector>

namespace oracle {

inline long double i0_series(long double z, int terms = 60) {
  const long double q = 0.25L * z * z;
  long double term = 1.0L, sum = 1.0L;
  for (int k = 1; k <= terms; ++k) {
    term *= q / (static_cast<long double>(k) * k);
    sum += term;
  }
  return sum;
}

inline long double i1_series(long double z, int terms = 60) {
  const long double q = 0.25L * z * z;
  long double term = 0.5L * z, sum = term;
  for (int k = 1; k <= terms; ++k) {
    term *= q / (static_cast<long double>(k) * (k + 1));
    sum += term;
  }
  return sum;
}

/// Composite Simpson on [a, b]; n must be even.
inline long double simpson(const std::function<long double(long double)>& f,
                           long double a, long double b, int n = 2000) {
  const long double h = (b - a) / n;
  long double s = f(a) + f(b);
  for (int i = 1; i < n; ++i) s += f(a + i * h) * ((i % 2) ? 4.0L : 2.0L);
  return s * h / 3.0L;
}

}  // namespace oracle
