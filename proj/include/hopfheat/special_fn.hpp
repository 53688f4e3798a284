#pragma once

#include <cmath>
#include <complex>
#include <limits>
#include <stdexcept>
#include <type_traits>

namespace hopfheat {

struct DomainError : std::domain_error {
  using std::domain_error::domain_error;
};

struct JacobiIndex {
  int k = 0;
  int n = 0;
};

namespace detail {

template <class T> struct real_of { using type = T; };
template <class S> struct real_of<std::complex<S>> { using type = S; };
template <class T> using real_of_t = typename real_of<T>::type;

template <class S> constexpr S pi_v = S(3.141592653589793238462643383279502884L);

// truncation threshold: 1e-16 for double, tighter for wider types
template <class S> constexpr S trunc_eps() {
  return std::numeric_limits<S>::epsilon() / S(2);
}

}  // namespace detail

// P_k^{(0,b)}(x) by the three-term recurrence in k.
template <class S>
S jacobi_eval(int k, int b, S x) {
  if (k < 0 || b < 0) throw DomainError("jacobi_eval: k and n must be non-negative");
  if (std::abs(x) > S(1) + S(1e-12)) throw DomainError("jacobi_eval: |x| > 1");
  if (k == 0) return S(1);
  S pm2 = S(1);
  S pm1 = (S(b + 2) * x - S(b)) / S(2);
  for (int j = 2; j <= k; ++j) {
    const S c = S(2 * j + b);
    const S a1 = S(2) * S(j) * S(j + b) * (c - S(2));
    const S a2 = (c - S(1)) * (c * (c - S(2)) * x - S(b) * S(b));
    const S a4 = S(2) * S(j - 1) * S(j + b - 1) * c;
    const S p = (a2 * pm1 - a4 * pm2) / a1;
    pm2 = pm1;
    pm1 = p;
  }
  return pm1;
}

inline double jacobi_eval(JacobiIndex idx, double x) { return jacobi_eval<double>(idx.k, idx.n, x); }

// Streams P_0, P_1, ... at fixed (b, x); used by the spectral sums.
template <class S>
class JacobiRecurrence {
 public:
  JacobiRecurrence(int b, S x) : b_(b), x_(x) {}
  // value of P_k for the current k, then advance
  S next() {
    S p;
    if (k_ == 0) {
      p = S(1);
    } else if (k_ == 1) {
      p = (S(b_ + 2) * x_ - S(b_)) / S(2);
    } else {
      const S c = S(2 * k_ + b_);
      const S a1 = S(2) * S(k_) * S(k_ + b_) * (c - S(2));
      const S a2 = (c - S(1)) * (c * (c - S(2)) * x_ - S(b_) * S(b_));
      const S a4 = S(2) * S(k_ - 1) * S(k_ + b_ - 1) * c;
      p = (a2 * p1_ - a4 * p2_) / a1;
    }
    p2_ = p1_;
    p1_ = p;
    ++k_;
    return p;
  }

 private:
  int b_;
  S x_;
  int k_ = 0;
  S p1_ = S(0), p2_ = S(0);
};

// max_{[-1,1]} |P_k^{(0,b)}| = C(k+b, k), attained at x = -1 (Szego 7.32.1)
inline double jacobi_sup_bound(JacobiIndex idx) {
  const int k = idx.k, b = std::abs(idx.n);
  const int m = std::min(k, b);
  double c = 1.0;
  for (int j = 1; j <= m; ++j) c = c * double(k + b - m + j) / double(j);
  return c;
}

namespace detail {

template <class T>
T x_over_sin(T x) {
  using S = real_of_t<T>;
  if (std::abs(x) < S(1e-4)) {
    const T x2 = x * x;
    return T(1) + x2 / S(6) + S(7) * x2 * x2 / S(360);
  }
  return x / std::sin(x);
}

// e^c cosh z and e^c sinh(z)/z without forming e^z alone
template <class T>
T cosh_e(T z, T c) {
  return (std::exp(c + z) + std::exp(c - z)) / real_of_t<T>(2);
}
template <class T>
T shc_e(T z, T c) {
  using S = real_of_t<T>;
  if (std::abs(z) < S(1e-2)) {
    const T z2 = z * z;
    return std::exp(c) * (T(1) + z2 / S(6) * (T(1) + z2 / S(20) * (T(1) + z2 / S(42))));
  }
  return (std::exp(c + z) - std::exp(c - z)) / (S(2) * z);
}

// Running stop rule: three consecutive terms below eps * accumulated |sum|.
template <class S>
struct StopRule {
  S abs_sum = S(0);
  int quiet = 0;
  bool update(S mag) {
    abs_sum += mag;
    if (mag <= trunc_eps<S>() * abs_sum) ++quiet;
    else quiet = 0;
    return quiet >= 3;
  }
};

// e^{-g} * sum_k (d + 2k pi) e^{-(d + 2k pi)^2 / 4t} / sin d, for d in the strip
// 0 <= Re d <= pi. Pairs of terms are combined analytically near d = 0 and d = pi so
// that the 1/sin d is removable and the exponent never overflows.
template <class T, class S = real_of_t<T>>
T theta_ratio_direct(S t, T d, S g) {
  const S pi = pi_v<S>;
  const S four_t = S(4) * t, two_t = S(2) * t;
  if (std::abs(d) < S(0.5)) {
    T acc = std::exp(-d * d / four_t - g);
    StopRule<S> stop;
    stop.update(std::abs(acc));
    for (int k = 1; k < 100000; ++k) {
      const S a = S(2) * pi * S(k);
      const T z = d * a / two_t;
      const T c = -(d * d + a * a) / four_t - g;
      const T term = S(2) * (cosh_e(z, c) - (a * a / two_t) * shc_e(z, c));
      acc += term;
      if (stop.update(std::abs(term))) break;
    }
    return x_over_sin(d) * acc;
  }
  if (std::abs(pi - d) < S(0.5)) {
    const T e = pi - d;
    T acc = T(0);
    StopRule<S> stop;
    for (int k = 0; k < 100000; ++k) {
      const S b = S(2 * k + 1) * pi;
      const T z = b * e / two_t;
      const T c = -(b * b + e * e) / four_t - g;
      const T term = S(2) * ((b * b / two_t) * shc_e(z, c) - cosh_e(z, c));
      acc += term;
      if (stop.update(std::abs(term))) break;
    }
    return x_over_sin(e) * acc;
  }
  T acc = d * std::exp(-d * d / four_t - g);
  StopRule<S> stop;
  stop.update(std::abs(acc));
  for (int k = 1; k < 100000; ++k) {
    const T up = d + S(2) * pi * S(k), dn = d - S(2) * pi * S(k);
    const T term = up * std::exp(-up * up / four_t - g) + dn * std::exp(-dn * dn / four_t - g);
    acc += term;
    if (stop.update(std::abs(term))) break;
  }
  return acc / std::sin(d);
}

// Same quantity from the Poisson-dual series
//   sum_k (d+2k pi) e^{-(d+2k pi)^2/4t} = (2t sqrt(4 pi t)/pi) sum_{m>=1} m e^{-m^2 t} sin(m d).
template <class T, class S = real_of_t<T>>
T theta_ratio_dual(S t, T d, S g) {
  const S pi = pi_v<S>;
  const S pref = S(2) * t * std::sqrt(S(4) * pi * t) / pi;
  const T w = std::cos(d);
  const S im = std::abs(std::imag(T(d)));
  T acc = T(0);
  StopRule<S> stop;
  const int m_peak = int(im / (S(2) * t)) + 1;
  if (im < S(1)) {
    // sin(m d)/sin d = U_{m-1}(cos d)
    T u2 = T(0), u1 = T(1);
    for (int m = 1; m < 100000; ++m) {
      const T term = S(m) * std::exp(-S(m) * S(m) * t - g) * u1;
      acc += term;
      if (stop.update(std::abs(term)) && m > m_peak) break;
      const T u = S(2) * w * u1 - u2;
      u2 = u1;
      u1 = u;
    }
    return pref * acc;
  }
  if constexpr (!std::is_same_v<T, S>) {
    const T iu = T(0, 1);
    for (int m = 1; m < 100000; ++m) {
      const T a = std::exp(iu * S(m) * d - S(m) * S(m) * t - g);
      const T b = std::exp(-iu * S(m) * d - S(m) * S(m) * t - g);
      const T term = S(m) * (a - b) / (S(2) * iu);
      acc += term;
      if (stop.update(std::abs(term)) && m > m_peak) break;
    }
  }
  return pref * acc / std::sin(d);
}

}  // namespace detail

template <class S>
S theta_sum_direct(S t, S d) {
  if (!(t > S(0))) throw DomainError("theta_sum_direct: t must be positive");
  return detail::theta_ratio_direct<S>(t, d, S(0)) * std::sin(d);
}

template <class S>
S theta_sum_dual(S t, S d) {
  if (!(t > S(0))) throw DomainError("theta_sum_dual: t must be positive");
  return detail::theta_ratio_dual<S>(t, d, S(0)) * std::sin(d);
}

inline double theta_sum_direct(double t, double d) { return theta_sum_direct<double>(t, d); }
inline double theta_sum_dual(double t, double d) { return theta_sum_dual<double>(t, d); }

}  // namespace hopfheat
