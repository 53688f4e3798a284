#pragma once

#include <Eigen/Dense>
#include <cmath>
#include <limits>

namespace hopfheat {

template <class S>
struct Rule {
  Eigen::Array<S, Eigen::Dynamic, 1> x, w;
};

// Gauss-Legendre nodes/weights on [a, b] (Newton on the Legendre recurrence).
template <class S>
Rule<S> gauss_legendre(int n, S a = S(-1), S b = S(1)) {
  Rule<S> rule;
  rule.x.resize(n);
  rule.w.resize(n);
  const S pi = S(3.141592653589793238462643383279502884L);
  const S xm = (b + a) / S(2), xl = (b - a) / S(2);
  const int m = (n + 1) / 2;
  for (int i = 0; i < m; ++i) {
    S z = std::cos(pi * (S(i) + S(0.75)) / (S(n) + S(0.5)));
    S pp = S(0);
    for (int it = 0; it < 100; ++it) {
      S p1 = S(1), p2 = S(0);
      for (int j = 1; j <= n; ++j) {
        const S p3 = p2;
        p2 = p1;
        p1 = (S(2 * j - 1) * z * p2 - S(j - 1) * p3) / S(j);
      }
      pp = S(n) * (z * p1 - p2) / (z * z - S(1));
      const S dz = p1 / pp;
      z -= dz;
      if (std::abs(dz) < S(4) * std::numeric_limits<S>::epsilon()) break;
    }
    // recompute the derivative at the converged node
    S p1 = S(1), p2 = S(0);
    for (int j = 1; j <= n; ++j) {
      const S p3 = p2;
      p2 = p1;
      p1 = (S(2 * j - 1) * z * p2 - S(j - 1) * p3) / S(j);
    }
    pp = S(n) * (z * p1 - p2) / (z * z - S(1));
    rule.x(i) = xm - xl * z;
    rule.x(n - 1 - i) = xm + xl * z;
    rule.w(i) = S(2) * xl / ((S(1) - z * z) * pp * pp);
    rule.w(n - 1 - i) = rule.w(i);
  }
  return rule;
}

// Composite Gauss-Legendre: `panels` equal panels on [a, b], `order` nodes each.
template <class S>
Rule<S> composite_gauss_legendre(int panels, int order, S a, S b) {
  const Rule<S> ref = gauss_legendre<S>(order);
  Rule<S> rule;
  rule.x.resize(panels * order);
  rule.w.resize(panels * order);
  const S h = (b - a) / S(panels);
  for (int p = 0; p < panels; ++p) {
    const S lo = a + S(p) * h;
    rule.x.segment(p * order, order) = lo + (ref.x + S(1)) * (h / S(2));
    rule.w.segment(p * order, order) = ref.w * (h / S(2));
  }
  return rule;
}

}  // namespace hopfheat
