// Test-only reference computations, deliberately independent of the
// library's adaptive machinery: fixed-panel composite Simpson (optionally
// Richardson-extrapolated) and dense-grid brute force sups.
#pragma once

#include <cmath>
#include <functional>

namespace oracles {

inline double composite_simpson(const std::function<double(double)>& f,
                                double a, double b, int panels) {
  const double h = (b - a) / panels;
  double acc = f(a) + f(b);
  for (int i = 1; i < panels; ++i) {
    acc += f(a + i * h) * (i % 2 ? 4.0 : 2.0);
  }
  return acc * h / 3.0;
}

inline double simpson_richardson(const std::function<double(double)>& f,
                                 double a, double b, int panels) {
  const double fine = composite_simpson(f, a, b, panels);
  const double coarse = composite_simpson(f, a, b, panels / 2);
  return fine + (fine - coarse) / 15.0;
}

// sup over [lo, hi] sampled at n+1 equispaced points.
inline double dense_sup(const std::function<double(double)>& f, double lo,
                        double hi, int n) {
  double best = -1e308;
  for (int i = 0; i <= n; ++i) {
    best = std::max(best, f(lo + (hi - lo) * i / n));
  }
  return best;
}

// The standard bump exp(-1/(1-x^2)), un-normalized.
inline double bump(double x) {
  const double q = 1.0 - x * x;
  return q <= 0.0 ? 0.0 : std::exp(-1.0 / q);
}

}  // namespace oracles
