#pragma once

#include <Eigen/Geometry>
#include <cmath>
#include <complex>
#include <cstdint>
#include <vector>

#include "hopfheat/policy.hpp"

namespace hopfheat {

// A point of SU(2) as a unit quaternion q0 + q1 i + q2 j + q3 k, read as the matrix
// [[a, b], [-conj b, conj a]] with a = q0 + i q3, b = q2 + i q1.
template <class S>
class BasicGroupElement {
 public:
  using Quat = Eigen::Quaternion<S>;

  BasicGroupElement() : q_(S(1), S(0), S(0), S(0)) {}
  BasicGroupElement(S q0, S q1, S q2, S q3) : q_(q0, q1, q2, q3) { q_.normalize(); }
  explicit BasicGroupElement(const Quat& q) : q_(q.normalized()) {}

  static BasicGroupElement identity() { return {}; }
  static BasicGroupElement exp_x(S s) { return {std::cos(s), S(0), std::sin(s), S(0)}; }
  static BasicGroupElement exp_y(S s) { return {std::cos(s), std::sin(s), S(0), S(0)}; }
  static BasicGroupElement exp_z(S s) { return {std::cos(s), S(0), S(0), std::sin(s)}; }

  S q0() const { return q_.w(); }
  S q1() const { return q_.x(); }
  S q2() const { return q_.y(); }
  S q3() const { return q_.z(); }
  std::complex<S> alpha() const { return {q_.w(), q_.z()}; }
  std::complex<S> beta() const { return {q_.y(), q_.x()}; }
  Eigen::Matrix<S, 4, 1> coeffs() const { return {q_.w(), q_.x(), q_.y(), q_.z()}; }
  const Quat& quat() const { return q_; }

  BasicGroupElement inverse() const { return BasicGroupElement(q_.conjugate()); }
  friend BasicGroupElement operator*(const BasicGroupElement& a, const BasicGroupElement& b) {
    return BasicGroupElement(a.q_ * b.q_);
  }

 private:
  Quat q_;
};

using GroupElement = BasicGroupElement<double>;

template <class S>
BasicGroupElement<S> mul(const BasicGroupElement<S>& a, const BasicGroupElement<S>& b) {
  return a * b;
}

template <class S>
struct BasicPairCoords {
  S r = S(0);      // horizontal pseudo-distance, [0, pi/2]
  S theta = S(0);  // vertical pseudo-distance, [0, pi]
  S delta = S(0);  // round distance on S^3, [0, pi]
};
using PairCoords = BasicPairCoords<double>;

// Coordinates of g = x^{-1} y. Written with atan2 so that they stay accurate near 0
// (arccos of a number near 1 loses half the digits).
template <class S>
BasicPairCoords<S> pair_coords(const BasicGroupElement<S>& x, const BasicGroupElement<S>& y) {
  const auto q = x.quat().conjugate() * y.quat();
  const S na = std::hypot(q.w(), q.z());
  const S nb = std::hypot(q.x(), q.y());
  BasicPairCoords<S> pc;
  pc.r = std::atan2(nb, na);
  pc.theta = std::abs(std::atan2(q.z(), q.w()));
  pc.delta = std::atan2(std::sqrt(q.x() * q.x() + q.y() * q.y() + q.z() * q.z()), q.w());
  return pc;
}

struct TriangleCheck {
  bool delta = true;
  bool r = true;
  bool theta = true;
  bool all() const { return delta && r && theta; }
  explicit operator bool() const { return all(); }
};

TriangleCheck triangle_check(const GroupElement& x, const GroupElement& y, const GroupElement& z);

struct HaarSample {
  std::vector<GroupElement> points;
  std::vector<double> weights;
  std::uint64_t seed = 0;
  std::size_t size() const { return points.size(); }
};

HaarSample haar_sample(std::size_t n, std::uint64_t seed);

// Product rule in the chart a = cos r e^{i phi1}, b = sin r e^{i phi2}: Gauss-Legendre in
// r, trapezoid in the two angles, density sin r cos r / (2 pi^2).
HaarSample haar_quadrature(const EvalPolicy& policy = {});

// Hopf map onto the sphere of radius 1/2.
template <class S>
Eigen::Matrix<S, 3, 1> hopf_project(const BasicGroupElement<S>& x) {
  const auto a = x.alpha(), b = x.beta();
  const auto ab = std::conj(a) * b;
  return {(std::norm(a) - std::norm(b)) / S(2), ab.real(), ab.imag()};
}

// Angle between two points of R^3 (great-circle distance after scaling to radius 1).
template <class S>
S sphere_angle(const Eigen::Matrix<S, 3, 1>& u, const Eigen::Matrix<S, 3, 1>& v) {
  return std::atan2(u.cross(v).norm(), u.dot(v));
}

// x * exp(step (cos(direction) X + sin(direction) Y))
template <class S>
BasicGroupElement<S> horizontal_step(const BasicGroupElement<S>& x, S direction, S step) {
  const BasicGroupElement<S> g(std::cos(step), std::sin(step) * std::sin(direction),
                               std::sin(step) * std::cos(direction), S(0));
  return x * g;
}

struct Fiber {
  GroupElement base;
  GroupElement at(double s) const { return base * GroupElement::exp_z(s); }
};

inline Fiber fiber(const GroupElement& x) { return {x}; }

}  // namespace hopfheat
