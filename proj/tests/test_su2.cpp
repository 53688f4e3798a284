#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "hopfheat/su2.hpp"

using namespace hopfheat;

namespace {

constexpr double kPi = std::numbers::pi;

double dist4(const GroupElement& a, const GroupElement& b) { return (a.coeffs() - b.coeffs()).norm(); }

// the SU(2) matrix [[alpha, -conj(beta)], [beta, conj(alpha)]]
Eigen::Matrix2cd as_matrix(const GroupElement& g) {
  Eigen::Matrix2cd m;
  m << g.alpha(), -std::conj(g.beta()), g.beta(), std::conj(g.alpha());
  return m;
}

}  // namespace

TEST_CASE("mul: group laws") {
  const HaarSample s = haar_sample(50, 3);
  const GroupElement e;
  for (const auto& g : s.points) {
    CHECK(dist4(mul(e, g), g) <= 1e-15);
    CHECK(dist4(mul(g, g.inverse()), e) <= 1e-15);
    CHECK(std::abs(g.coeffs().norm() - 1) <= 1e-15);
  }
  const auto g = mul(GroupElement::exp_x(0.3), GroupElement::exp_x(0.4));
  CHECK(dist4(g, GroupElement::exp_x(0.7)) <= 1e-15);
  CHECK(dist4(mul(GroupElement::exp_z(1.1), GroupElement::exp_z(-0.4)), GroupElement::exp_z(0.7)) <= 1e-15);
}

TEST_CASE("mul: products stay on the unit sphere") {
  const HaarSample s = haar_sample(1000, 5);
  GroupElement acc;
  for (const auto& g : s.points) acc = acc * g;
  CHECK(std::abs(acc.coeffs().norm() - 1) <= 1e-12);
}

TEST_CASE("identification is a group isomorphism onto SU(2) matrices") {
  const HaarSample s = haar_sample(20, 11);
  for (std::size_t i = 0; i + 1 < s.size(); i += 2) {
    const auto& a = s.points[i];
    const auto& b = s.points[i + 1];
    CHECK((as_matrix(a * b) - as_matrix(a) * as_matrix(b)).norm() <= 1e-14);
    CHECK(std::abs(as_matrix(a).determinant() - 1.0) <= 1e-14);
    CHECK((as_matrix(a).adjoint() * as_matrix(a) - Eigen::Matrix2cd::Identity()).norm() <= 1e-14);
    // alpha(x^{-1} y) is the upper-left entry of the matrix product
    CHECK(std::abs((a.inverse() * b).alpha() - (as_matrix(a).adjoint() * as_matrix(b))(0, 0)) <= 1e-15);
  }
}

TEST_CASE("pair_coords: examples") {
  const GroupElement e;
  const auto g = haar_sample(1, 9).points[0];
  const auto same = pair_coords(g, g);
  CHECK(same.r == 0);
  CHECK(same.theta == 0);
  CHECK(same.delta == 0);
  const auto fz = pair_coords(e, GroupElement::exp_z(0.7));
  CHECK(std::abs(fz.r) <= 1e-15);
  CHECK(std::abs(fz.theta - 0.7) <= 1e-15);
  CHECK(std::abs(fz.delta - 0.7) <= 1e-15);
  const auto fx = pair_coords(e, GroupElement::exp_x(0.5));
  CHECK(std::abs(fx.r - 0.5) <= 1e-15);
  CHECK(fx.theta == 0);
  CHECK(std::abs(fx.delta - 0.5) <= 1e-15);
}

TEST_CASE("pair_coords: chart exp(r(cos p X + sin p Y)) exp(zZ) has alpha = cos r e^{iz}") {
  std::mt19937_64 gen(4);
  std::uniform_real_distribution<double> ur(0, kPi / 2), up(-kPi, kPi);
  for (int i = 0; i < 200; ++i) {
    const double r = ur(gen), p = up(gen), z = up(gen);
    const auto g = horizontal_step(GroupElement(), p, r) * GroupElement::exp_z(z);
    const auto pc = pair_coords(GroupElement(), g);
    CHECK(std::abs(pc.r - r) <= 1e-12);
    if (r < kPi / 2 - 1e-6) CHECK(std::abs(pc.theta - std::abs(z)) <= 1e-12);
  }
}

TEST_CASE("pair_coords: ranges and delta = arccos(cos r cos theta)") {
  const HaarSample s = haar_sample(20000, 1);
  for (std::size_t i = 0; i + 1 < s.size(); i += 2) {
    const auto pc = pair_coords(s.points[i], s.points[i + 1]);
    REQUIRE(pc.r >= 0);
    REQUIRE(pc.r <= kPi / 2);
    REQUIRE(pc.theta >= 0);
    REQUIRE(pc.theta <= kPi);
    REQUIRE(pc.delta >= 0);
    REQUIRE(pc.delta <= kPi);
    REQUIRE(std::abs(std::cos(pc.delta) - std::cos(pc.r) * std::cos(pc.theta)) <= 1e-12);
  }
}

TEST_CASE("invariance: delta bi-invariant, r and theta left-invariant, all symmetric") {
  const HaarSample s = haar_sample(30000, 2);
  double bi = 0, left = 0, sym = 0;
  for (std::size_t i = 0; i + 2 < s.size(); i += 3) {
    const auto& g = s.points[i];
    const auto& x = s.points[i + 1];
    const auto& y = s.points[i + 2];
    const auto pc = pair_coords(x, y);
    const auto l = pair_coords(g * x, g * y);
    const auto rr = pair_coords(x * g, y * g);
    const auto back = pair_coords(y, x);
    bi = std::max({bi, std::abs(l.delta - pc.delta), std::abs(rr.delta - pc.delta)});
    left = std::max({left, std::abs(l.r - pc.r), std::abs(l.theta - pc.theta)});
    sym = std::max({sym, std::abs(back.r - pc.r), std::abs(back.theta - pc.theta), std::abs(back.delta - pc.delta)});
  }
  CHECK(bi <= 1e-12);
  CHECK(left <= 1e-12);
  CHECK(sym <= 1e-12);
}

TEST_CASE("triangle_check: examples") {
  const auto x = haar_sample(1, 17).points[0];
  CHECK(triangle_check(x, x, x).all());
  const GroupElement e;
  const auto a = GroupElement::exp_z(0.3), b = GroupElement::exp_z(0.6);
  CHECK(triangle_check(e, a, b).all());
  CHECK(std::abs(pair_coords(e, b).theta - pair_coords(e, a).theta - pair_coords(a, b).theta) <= 1e-15);
}

TEST_CASE("triangle inequality: delta and r on 10^5 random triples") {
  const HaarSample s = haar_sample(300000, 42);
  long fail_delta = 0, fail_r = 0, fail_theta = 0;
  for (std::size_t i = 0; i + 2 < s.size(); i += 3) {
    const auto c = triangle_check(s.points[i], s.points[i + 1], s.points[i + 2]);
    fail_delta += !c.delta;
    fail_r += !c.r;
    fail_theta += !c.theta;
  }
  CHECK(fail_delta == 0);
  CHECK(fail_r == 0);
  // theta(x, y) = |arg alpha(x^{-1} y)| is not subadditive; random triples hit violations
  CHECK(fail_theta > 0);
}

TEST_CASE("triangle inequality fails for theta: explicit counterexample") {
  // y and z differ from x only horizontally, yet z has a vertical offset from x
  const GroupElement x;
  const auto y = GroupElement::exp_x(0.4);
  const auto z = y * GroupElement::exp_y(0.5);
  CHECK(pair_coords(x, y).theta == 0);
  CHECK(pair_coords(y, z).theta == 0);
  CHECK(pair_coords(x, z).theta > 0.2);
  const auto c = triangle_check(x, y, z);
  CHECK(c.delta);
  CHECK(c.r);
  CHECK_FALSE(c.theta);
}

TEST_CASE("haar_sample") {
  const auto one = haar_sample(1, 123);
  REQUIRE(one.size() == 1);
  CHECK(std::abs(one.points[0].coeffs().norm() - 1) <= 1e-15);
  CHECK(one.weights[0] == 1.0);

  const HaarSample s = haar_sample(100000, 42);
  CHECK(s.seed == 42);
  long double sum_w = 0;
  double m0 = 0, mcos = 0;
  for (std::size_t i = 0; i < s.size(); ++i) {
    sum_w += s.weights[i];
    m0 += s.points[i].q0();
    mcos += std::cos(pair_coords(GroupElement(), s.points[i]).delta);
  }
  m0 /= s.size();
  mcos /= s.size();
  const double se = std::sqrt(0.25 / s.size());  // Var q0 = 1/4 on S^3
  CHECK(std::abs(double(sum_w) - 1) <= 1e-12);
  CHECK(std::abs(m0) <= 3 * se);
  CHECK(std::abs(mcos) <= 3 * se);

  // determinism
  const HaarSample again = haar_sample(100, 42);
  for (std::size_t i = 0; i < again.size(); ++i) CHECK(dist4(again.points[i], s.points[i]) == 0);
}

TEST_CASE("haar_quadrature") {
  const HaarSample q = haar_quadrature();
  double w = 0, c = 0, c2 = 0;
  for (std::size_t i = 0; i < q.size(); ++i) {
    w += q.weights[i];
    const double cd = std::cos(pair_coords(GroupElement(), q.points[i]).delta);
    c += q.weights[i] * cd;
    c2 += q.weights[i] * cd * cd;
    REQUIRE(q.weights[i] >= 0);
  }
  CHECK(std::abs(w - 1) <= 1e-12);
  CHECK(std::abs(c) <= 1e-10);
  CHECK(std::abs(c2 - 0.25) <= 1e-12);  // E[q0^2] = 1/4
}

TEST_CASE("hopf_project") {
  const Eigen::Vector3d north(0.5, 0, 0);
  CHECK((hopf_project(GroupElement()) - north).norm() <= 1e-16);
  for (double z : {-2.0, 0.3, 1.7, 3.1}) CHECK((hopf_project(GroupElement::exp_z(z)) - north).norm() <= 1e-15);
  const HaarSample s = haar_sample(20000, 8);
  double worst = 0, radius = 0;
  for (std::size_t i = 0; i + 1 < s.size(); i += 2) {
    const auto& x = s.points[i];
    const auto& y = s.points[i + 1];
    const Eigen::Vector3d px = hopf_project(x), py = hopf_project(y);
    radius = std::max(radius, std::abs(px.norm() - 0.5));
    worst = std::max(worst, std::abs(sphere_angle<double>(px, py) - 2 * pair_coords(x, y).r));
  }
  CHECK(radius <= 1e-15);
  // the angle between the images (distance on the unit sphere) is 2r
  CHECK(worst <= 1e-12);
}

TEST_CASE("horizontal_step") {
  const auto g = horizontal_step(GroupElement(), 0.0, 0.1);
  CHECK(dist4(g, GroupElement::exp_x(0.1)) <= 1e-16);
  CHECK(dist4(horizontal_step(GroupElement(), kPi / 2, 0.1), GroupElement::exp_y(0.1)) <= 1e-16);

  // two steps in different directions: vertical offset theta = O(h^2)
  const auto x = haar_sample(1, 21).points[0];
  auto theta_two = [&](double h) { return pair_coords(x, horizontal_step(horizontal_step(x, 0.2, h), 1.4, h)).theta; };
  const double t1 = theta_two(1e-2), t2 = theta_two(5e-3), t3 = theta_two(2.5e-3);
  CHECK(t1 / t2 == doctest::Approx(4.0).epsilon(1e-3));
  CHECK(t2 / t3 == doctest::Approx(4.0).epsilon(1e-3));
  CHECK(pair_coords(x, horizontal_step(x, 0.7, 1e-2)).theta <= 1e-15);

  // velocity orthogonal to the fiber direction x k
  const auto s = haar_sample(10, 5);
  for (const auto& p : s.points)
    for (double dir : {0.0, 1.0, 2.5}) {
      const double h = 1e-5;
      const Eigen::Vector4d v = (horizontal_step(p, dir, h).coeffs() - horizontal_step(p, dir, -h).coeffs()) / (2 * h);
      const Eigen::Vector4d fiber_dir = (p * GroupElement(0, 0, 0, 1)).coeffs();
      CHECK(std::abs(v.dot(fiber_dir)) <= 1e-8);
      CHECK(std::abs(v.norm() - 1) <= 1e-8);
    }
}

TEST_CASE("fibers: r vanishes exactly on fibers, delta equals theta along them") {
  const HaarSample s = haar_sample(200, 13);
  std::mt19937_64 gen(1);
  std::uniform_real_distribution<double> us(-kPi, kPi);
  for (const auto& x : s.points) {
    const Fiber f = fiber(x);
    const double a = us(gen), b = us(gen);
    const auto pc = pair_coords(f.at(a), f.at(b));
    CHECK(pc.r <= 1e-12);
    CHECK(std::abs(pc.delta - pc.theta) <= 1e-12);
    // a horizontal displacement leaves the fiber
    CHECK(pair_coords(x, horizontal_step(x, a, 1e-3)).r == doctest::Approx(1e-3).epsilon(1e-9));
  }
  // converse: r(x, y) = 0 forces y = x exp(sZ) with s = arg alpha(x^{-1} y)
  for (std::size_t i = 0; i < s.size(); ++i) {
    const auto& x = s.points[i];
    const auto y = x * GroupElement::exp_z(us(gen));
    const auto g = x.inverse() * y;
    CHECK(std::abs(g.beta()) <= 1e-12);
    CHECK(dist4(fiber(x).at(std::arg(g.alpha())), y) <= 1e-12);
  }
}
