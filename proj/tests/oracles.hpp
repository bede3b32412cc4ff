#pragma once

// Reference implementations written from the definitions alone, sharing no
// code with the library.

#include <cmath>

#include "swelab/estimates.hpp"
#include "swelab/field.hpp"

namespace oracle {

// Floating comparisons over the whole box, no pruning.
inline long naive_count(const swelab::CountQuery& q) {
  using swelab::CountVariant;
  const double lo = double(q.K) / std::pow(2.0, q.threshold_exponent);
  const double hi = double(q.K) * std::pow(2.0, q.threshold_exponent);
  const int r = int(std::ceil(hi)) + 1;
  long c = 0;
  for (int a = -r; a <= r; ++a)
    for (int b = -r; b <= r; ++b) {
      const double nk = std::hypot(a, b);
      if (nk < lo - 1e-12 || nk > hi + 1e-12) continue;
      const double nkl = std::hypot(a + q.l.k1, b + q.l.k2);
      double v = 0;
      switch (q.variant) {
        case CountVariant::minus: v = nkl - nk; break;
        case CountVariant::plus: v = nkl + nk; break;
        case CountVariant::zero: v = nkl; break;
        case CountVariant::linear: v = q.ux * a + q.uy * b + q.sigma * nk; break;
      }
      if (std::abs(v - q.mu) <= 1.0) ++c;
    }
  return c;
}

// Bump from its plateau/support description.
inline double bump(double r) {
  if (r <= 0.875) return 1.0;
  if (r >= 1.125) return 0.0;
  const double x = (r - 0.875) / 0.25;
  return 1.0 - x * x * x * (10.0 - 15.0 * x + 6.0 * x * x);
}

inline double block(swelab::Mode n, long K) {
  if (K == 1) return bump(n.norm());
  return bump(n.norm() / double(K)) - bump(n.norm() / double(K / 2));
}

}  // namespace oracle
