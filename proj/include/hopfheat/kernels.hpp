#pragma once

#include <string>

#include "hopfheat/policy.hpp"
#include "hopfheat/special_fn.hpp"
#include "hopfheat/su2.hpp"

namespace hopfheat {

struct SpectralIndex {
  int k = 0;
  int n = 0;
  // eigenvalue of the sub-Laplacian
  double lambda() const { return -(4.0 * k * (k + std::abs(n) + 1) + 2.0 * std::abs(n)); }
  // eigenvalue of the round Laplacian on S^3
  double lambda_prime() const { return lambda() - double(n) * n; }
  double weight() const { return 2.0 * k + std::abs(n) + 1; }
};

// p_{k,n} as a function of the pair coordinates: 2(2k+n+1) cos(n theta) cos^n r P_k^{(0,n)}(cos 2r),
// with the factor 2 dropped for n = 0.
double eigen_term(SpectralIndex idx, double r, double theta);

template <class S>
struct SeriesValue {
  S value = S(0);
  S abs_sum = S(0);  // sum of |terms|; abs_sum / |value| is the condition number
  long terms = 0;
};

// sum_{n in Z} sum_k (2k+|n|+1) e^{(lambda_{k,n} - rate n^2) t} cos(n theta) cos^{|n|} r P_k^{(0,|n|)}(cos 2r).
// rate = 0 gives the subelliptic kernel p, rate = 1 the round kernel q_t in spectral form.
template <class S>
SeriesValue<S> spectral_sum(S t, S r, S theta, S rate, const EvalPolicy& policy);

enum class Method { Auto, Series, Integral };
enum class ThetaForm { Auto, Direct, Dual, Spectral };

struct KernelValue {
  double value = 0;
  std::string method;
};

double p_series(double t, double r, double theta, const EvalPolicy& policy = {});
KernelValue p_eval(double t, double r, double theta, Method method = Method::Auto,
                   const EvalPolicy& policy = {});

// q(t, cos delta) for delta in [0, pi]; the representation follows policy.t_switch unless forced.
double q_of_delta(double t, double delta, const EvalPolicy& policy = {}, ThetaForm form = ThetaForm::Auto);
// log q(t, cos delta), finite even where q underflows
double log_q_of_delta(double t, double delta, const EvalPolicy& policy = {});
// q(t, x) for x > -1, including the continuation to x > 1
double q_eval(double t, double x, const EvalPolicy& policy = {}, ThetaForm form = ThetaForm::Auto);

// q_t on S^3 from the pair coordinates: theta-function form, or the spectral form with lambda'.
double q_t_from_coords(double t, const PairCoords& pc, const EvalPolicy& policy = {},
                       ThetaForm form = ThetaForm::Auto);
double q_t_kernel(double t, const GroupElement& x, const GroupElement& y, const EvalPolicy& policy = {},
                  ThetaForm form = ThetaForm::Auto);

// Quotient kernel on S^2 as a function of r.
double q_tilde(double t, double r, const EvalPolicy& policy = {});

// (1/2pi)^2 double integral of q_t(x exp(sZ), y exp(s'Z)) over both fibers, trapezoid rule
double q_t_fiber_average(double t, const GroupElement& x, const GroupElement& y, int nodes = 64,
                         const EvalPolicy& policy = {});

enum class Contour { Shifted, Real };

struct IntegralValue {
  double value = 0;
  double imag = 0;  // imaginary part of the computed integral; zero up to rounding
  double cut = 0;   // half-width of the integration range actually used
  int nodes = 0;
};

// p(t, r, theta) = (4 pi t)^{-1/2} int e^{-(y + i theta)^2 / 4t} q(t, cos r cosh y) dy.
// Contour::Shifted integrates along y = u - i theta, where the integrand carries no
// e^{theta^2/4t} cancellation; Contour::Real is the literal real-line integral.
IntegralValue p_integral_detailed(double t, double r, double theta, const EvalPolicy& policy = {},
                                  Contour contour = Contour::Shifted);
double p_integral(double t, double r, double theta, const EvalPolicy& policy = {});

// |q(t, cos r cos theta) - int zeta(t, theta - phi) p(t, r, phi) dphi|
double convolution_check(double t, double r, double theta, const EvalPolicy& policy = {});

// |Delta p_{k,n} - lambda p_{k,n}| with Delta = d_rr + 2 cot 2r d_r + tan^2 r d_thth by
// central differences of step h.
double eigen_residual(SpectralIndex idx, double r, double theta, double h);

}  // namespace hopfheat
