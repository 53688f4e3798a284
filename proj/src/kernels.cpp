#include "hopfheat/kernels.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numbers>

#include "hopfheat/quadrature.hpp"

namespace hopfheat {

namespace {

constexpr double kPi = std::numbers::pi;

template <class S>
SeriesValue<S> spectral_pass(S t, S r, S theta, S rate, const EvalPolicy& policy, S fixed_scale,
                             S* max_scale) {
  using std::abs;
  const S c = std::cos(r), x = std::cos(S(2) * r);
  const S tol = S(policy.tol);
  const S tiny = std::numeric_limits<S>::min();
  SeriesValue<S> out;
  S cn = S(1);
  int quiet = 0;
  S prev_shell = std::numeric_limits<S>::infinity();
  auto threshold = [&](S sum) {
    const S scale = fixed_scale > S(0) ? fixed_scale : abs(sum);
    *max_scale = std::max(*max_scale, scale);
    return std::max(tol * scale, tiny);
  };
  // per-shell factors advanced by recurrence instead of exp/cos calls
  const S cos_theta = std::cos(theta);
  S cos_prev = cos_theta, cosn = S(1);                 // cos((n-1) theta), cos(n theta)
  S base = S(1);                                       // e^{-(2n + rate n^2) t}
  const S base_step0 = std::exp(-(S(2) + rate) * t);  // base_{n+1}/base_n = base_step0 e^{-2 rate n t}
  const S base_ratio = std::exp(-S(2) * rate * t);
  S base_step = base_step0;
  S step0 = std::exp(-S(8) * t);                       // e^{-4t(n+2)} at n = 0
  const S step0_ratio = std::exp(-S(4) * t);
  const S step_ratio = std::exp(-S(8) * t);
  for (int n = 0;; ++n) {
    if (n > policy.max_index)
      throw PolicyError("spectral series did not converge within |n| <= max_index; use the integral form");
    const S mult = n == 0 ? S(1) : S(2);
    S ek = base;
    S step = step0;
    S binom = S(1);
    JacobiRecurrence<S> P(n, x);
    S shell = S(0), prev_bound = std::numeric_limits<S>::infinity();
    for (int k = 0;; ++k) {
      if (k > policy.max_index)
        throw PolicyError("spectral series did not converge within k <= max_index; use the integral form");
      const S pk = P.next();
      const S w = mult * S(2 * k + n + 1) * ek;
      const S term = w * cosn * cn * pk;
      out.value += term;
      out.abs_sum += abs(term);
      ++out.terms;
      // |cos^n r P_k^{(0,n)}(cos 2r)| <= min(1, cos^n r * sup|P_k^{(0,n)}|)
      const S bound = w * std::min(S(1), cn * binom);
      shell += bound;
      if (bound < threshold(out.value) && bound <= prev_bound) break;
      prev_bound = bound;
      ek *= step;
      step *= step_ratio;
      binom = binom * S(k + 1 + n) / S(k + 1);
    }
    if (shell < threshold(out.value)) ++quiet;
    else quiet = 0;
    if (quiet >= 3 && shell <= prev_shell) break;
    prev_shell = shell;
    if (c == S(0)) break;  // cos^n r vanishes for every n >= 1
    cn *= c;
    const S cos_next = S(2) * cos_theta * cosn - cos_prev;
    cos_prev = cosn;
    cosn = cos_next;
    base *= base_step;
    base_step *= base_ratio;
    step0 *= step0_ratio;
  }
  return out;
}

}  // namespace

template <class S>
SeriesValue<S> spectral_sum(S t, S r, S theta, S rate, const EvalPolicy& policy) {
  if (!(t > S(0))) throw DomainError("spectral series: t must be positive");
  S max_scale = S(0);
  auto v = spectral_pass<S>(t, r, theta, rate, policy, S(0), &max_scale);
  // Thresholds were taken relative to partial sums; if the final value came out much
  // smaller than them (cancellation), redo relative to the final value.
  if (std::abs(v.value) < S(0.01) * max_scale) {
    S unused = S(0);
    v = spectral_pass<S>(t, r, theta, rate, policy, std::abs(v.value) / S(2), &unused);
  }
  return v;
}

template SeriesValue<double> spectral_sum<double>(double, double, double, double, const EvalPolicy&);
template SeriesValue<long double> spectral_sum<long double>(long double, long double, long double,
                                                            long double, const EvalPolicy&);

namespace {

double series_value(double t, double r, double theta, double rate, const EvalPolicy& policy) {
  using L = long double;
  switch (policy.precision) {
    case Precision::Double:
      return spectral_sum<double>(t, r, theta, rate, policy).value;
    case Precision::Extended:
      return double(spectral_sum<L>(t, r, theta, rate, policy).value);
    case Precision::Auto:
      break;
  }
  const auto v = spectral_sum<double>(t, r, theta, rate, policy);
  // each term carries ~1 ulp of its own magnitude; switch to the wider type when that
  // would eat into the requested tolerance
  if (v.abs_sum * 1e-16 > std::max(policy.tol, 1e-12) * std::abs(v.value))
    return double(spectral_sum<L>(t, r, theta, rate, policy).value);
  return v.value;
}

void check_coords(double t, double r, double theta) {
  if (!(t > 0)) throw DomainError("t must be positive");
  if (!(r >= 0 && r <= kPi / 2)) throw DomainError("r must lie in [0, pi/2]");
  if (!std::isfinite(theta)) throw DomainError("theta must be finite");
}

// reduce an angle to [0, pi] using 2 pi periodicity and evenness
double fold_angle(double a) {
  a = std::remainder(a, 2 * kPi);
  return std::abs(a);
}

bool use_dual(double t, const EvalPolicy& policy, ThetaForm form) {
  if (form == ThetaForm::Direct) return false;
  if (form == ThetaForm::Dual) return true;
  return t >= policy.t_switch;
}

double q_prefactor(double t) { return std::sqrt(kPi) * std::exp(t) / (4 * t * std::sqrt(t)); }

template <class T>
T theta_ratio(double t, T d, double g, bool dual) {
  return dual ? detail::theta_ratio_dual<T>(t, d, g) : detail::theta_ratio_direct<T>(t, d, g);
}

}  // namespace

double eigen_term(SpectralIndex idx, double r, double theta) {
  const int n = std::abs(idx.n);
  const double pk = jacobi_eval<double>(idx.k, n, std::cos(2 * r));
  const double mult = n == 0 ? 1.0 : 2.0;
  return mult * (2.0 * idx.k + n + 1) * std::cos(n * theta) * std::pow(std::cos(r), n) * pk;
}

double p_series(double t, double r, double theta, const EvalPolicy& policy) {
  check_coords(t, r, theta);
  return series_value(t, r, fold_angle(theta), 0.0, policy);
}

KernelValue p_eval(double t, double r, double theta, Method method, const EvalPolicy& policy) {
  check_coords(t, r, theta);
  if (method == Method::Auto) method = t >= 0.05 ? Method::Series : Method::Integral;
  if (method == Method::Series) return {p_series(t, r, theta, policy), "series"};
  return {p_integral(t, r, theta, policy), "integral"};
}

double q_of_delta(double t, double delta, const EvalPolicy& policy, ThetaForm form) {
  if (!(t > 0)) throw DomainError("t must be positive");
  if (!(delta >= 0 && delta <= kPi)) throw DomainError("delta must lie in [0, pi]");
  if (form == ThetaForm::Spectral) throw DomainError("spectral form needs (r, theta), not delta alone");
  return q_prefactor(t) * theta_ratio<double>(t, delta, 0.0, use_dual(t, policy, form));
}

double log_q_of_delta(double t, double delta, const EvalPolicy& policy) {
  if (!(t > 0)) throw DomainError("t must be positive");
  if (!(delta >= 0 && delta <= kPi)) throw DomainError("delta must lie in [0, pi]");
  const double g = -delta * delta / (4 * t);
  const double ratio = theta_ratio<double>(t, delta, g, use_dual(t, policy, ThetaForm::Auto));
  return std::log(q_prefactor(t)) + std::log(ratio) + g;
}

double q_eval(double t, double x, const EvalPolicy& policy, ThetaForm form) {
  if (!(t > 0)) throw DomainError("t must be positive");
  if (!(x > -1)) throw DomainError("q(t, x) requires x > -1");
  if (x <= 1) return q_of_delta(t, std::acos(x), policy, form);
  // x > 1: arccos x = i acosh x, and the ratio is real there
  const std::complex<double> d(0.0, std::acosh(x));
  return q_prefactor(t) * theta_ratio<std::complex<double>>(t, d, 0.0, use_dual(t, policy, form)).real();
}

double q_t_from_coords(double t, const PairCoords& pc, const EvalPolicy& policy, ThetaForm form) {
  if (form == ThetaForm::Spectral) {
    check_coords(t, pc.r, pc.theta);
    return series_value(t, pc.r, pc.theta, 1.0, policy);
  }
  return q_of_delta(t, pc.delta, policy, form);
}

double q_t_kernel(double t, const GroupElement& x, const GroupElement& y, const EvalPolicy& policy,
                  ThetaForm form) {
  return q_t_from_coords(t, pair_coords(x, y), policy, form);
}

double q_tilde(double t, double r, const EvalPolicy& policy) {
  check_coords(t, r, 0.0);
  const double x = std::cos(2 * r);
  auto pass = [&](double fixed_scale, double* max_scale) {
    JacobiRecurrence<double> P(0, x);
    double sum = 0, prev = std::numeric_limits<double>::infinity();
    for (int k = 0;; ++k) {
      if (k > policy.max_index) throw PolicyError("q_tilde: series did not converge");
      const double w = (2.0 * k + 1) * std::exp(-4.0 * k * (k + 1) * t);
      sum += w * P.next();
      const double scale = fixed_scale > 0 ? fixed_scale : std::abs(sum);
      *max_scale = std::max(*max_scale, scale);
      if (w < std::max(policy.tol * scale, std::numeric_limits<double>::min()) && w <= prev) break;
      prev = w;
    }
    return sum;
  };
  double max_scale = 0, unused = 0;
  double v = pass(0.0, &max_scale);
  if (std::abs(v) < 0.5 * max_scale) v = pass(std::abs(v) / 2, &unused);
  return v;
}

double q_t_fiber_average(double t, const GroupElement& x, const GroupElement& y, int nodes,
                         const EvalPolicy& policy) {
  double acc = 0;
  for (int i = 0; i < nodes; ++i) {
    const auto xs = x * GroupElement::exp_z(2 * kPi * i / nodes);
    for (int j = 0; j < nodes; ++j) acc += q_t_kernel(t, xs, y * GroupElement::exp_z(2 * kPi * j / nodes), policy);
  }
  return acc / (double(nodes) * nodes);
}

IntegralValue p_integral_detailed(double t, double r, double theta, const EvalPolicy& policy,
                                  Contour contour) {
  using C = std::complex<double>;
  check_coords(t, r, theta);
  policy.validate();
  theta = fold_angle(theta);
  const bool dual = use_dual(t, policy, ThetaForm::Auto);
  const double cr = std::cos(r);
  const double shift = contour == Contour::Shifted ? theta : 0.0;
  const double rest = theta - shift;  // imaginary offset left in the Gaussian
  const C iu(0, 1);
  // integrand without the (4 pi t)^{-1/2} q-prefactor; e^{-u^2/4t} is folded into the sum
  auto G = [&](double u) -> C {
    const C w = cr * std::cosh(C(u, -shift));
    const C d = std::acos(w);
    const C ratio = theta_ratio<C>(t, d, u * u / (4 * t), dual);
    if (rest == 0.0) return ratio;
    return std::exp((rest * rest - 2.0 * iu * u * rest) / (4 * t)) * ratio;
  };
  const double scale = std::abs(G(0.0));
  double U = policy.y_cut * std::sqrt(t) + theta;
  const double stride = std::max(1.0, std::sqrt(t));
  const double floor = 1e-3 * policy.tol * scale;
  while (std::abs(G(U)) > floor || std::abs(G(U - 0.5 * stride)) > floor) {
    U += stride;
    if (U > 1000) throw PolicyError("p_integral: integrand not below tolerance at the cut; enlarge y_cut");
  }
  const double wavelength = theta > 0 ? 4 * kPi * t / theta : std::numeric_limits<double>::infinity();
  const double width = std::min({0.5, std::sqrt(t), wavelength / 2});
  constexpr int order = 16;
  const int panels = std::max(int(std::ceil(2 * U / width)), (policy.quad_nodes + order - 1) / order);
  const auto rule = composite_gauss_legendre<double>(panels, order, -U, U);
  C acc = 0;
  for (Eigen::Index i = 0; i < rule.x.size(); ++i) acc += rule.w(i) * G(rule.x(i));
  acc *= q_prefactor(t) / std::sqrt(4 * kPi * t);
  return {acc.real(), acc.imag(), U, int(rule.x.size())};
}

double p_integral(double t, double r, double theta, const EvalPolicy& policy) {
  return p_integral_detailed(t, r, theta, policy).value;
}

double convolution_check(double t, double r, double theta, const EvalPolicy& policy) {
  check_coords(t, r, theta);
  const double lhs = q_of_delta(t, std::acos(std::cos(r) * std::cos(theta)), policy);
  const double L = (policy.y_cut + 1) * std::sqrt(t);
  const double width = std::min(0.25, std::sqrt(t) / 2);
  constexpr int order = 16;
  const int panels = std::max(int(std::ceil(2 * L / width)), (policy.quad_nodes + order - 1) / order);
  const auto rule = composite_gauss_legendre<double>(panels, order, theta - L, theta + L);
  double acc = 0;
  for (Eigen::Index i = 0; i < rule.x.size(); ++i) {
    const double phi = rule.x(i), s = theta - phi;
    acc += rule.w(i) * std::exp(-s * s / (4 * t)) * p_series(t, r, fold_angle(phi), policy);
  }
  acc /= std::sqrt(4 * kPi * t);
  return std::abs(lhs - acc);
}

double eigen_residual(SpectralIndex idx, double r, double theta, double h) {
  using L = long double;
  if (!(h > 0)) throw DomainError("eigen_residual: step must be positive");
  if (r < 4 * h || r > kPi / 2 - 4 * h) throw DomainError("eigen_residual: r must be at least 4h inside (0, pi/2)");
  // stencil evaluated in extended precision so the residual is the O(h^2) truncation
  // error rather than cancellation noise of order eps/h^2
  const int n = std::abs(idx.n);
  const L mult = n == 0 ? 1 : 2;
  auto f = [&](L rr, L th) {
    return mult * L(2 * idx.k + n + 1) * std::cos(L(n) * th) * std::pow(std::cos(rr), L(n)) *
           jacobi_eval<L>(idx.k, n, std::cos(L(2) * rr));
  };
  const L R = r, T = theta, H = h;
  const L f0 = f(R, T);
  const L frp = f(R + H, T), frm = f(R - H, T);
  const L ftp = f(R, T + H), ftm = f(R, T - H);
  const L d_rr = (frp - 2 * f0 + frm) / (H * H);
  const L d_r = (frp - frm) / (2 * H);
  const L d_tt = (ftp - 2 * f0 + ftm) / (H * H);
  const L tr = std::tan(R);
  const L lap = d_rr + 2 / std::tan(2 * R) * d_r + tr * tr * d_tt;
  return double(std::abs(lap - L(idx.lambda()) * f0));
}

}  // namespace hopfheat
