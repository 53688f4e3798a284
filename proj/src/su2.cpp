#include "hopfheat/su2.hpp"

#include <numbers>
#include <random>

#include "hopfheat/quadrature.hpp"

namespace hopfheat {

TriangleCheck triangle_check(const GroupElement& x, const GroupElement& y, const GroupElement& z) {
  constexpr double slack = 1e-12;
  const auto xy = pair_coords(x, y), yz = pair_coords(y, z), xz = pair_coords(x, z);
  TriangleCheck tc;
  tc.delta = xz.delta <= xy.delta + yz.delta + slack;
  tc.r = xz.r <= xy.r + yz.r + slack;
  tc.theta = xz.theta <= xy.theta + yz.theta + slack;
  return tc;
}

HaarSample haar_sample(std::size_t n, std::uint64_t seed) {
  HaarSample s;
  s.seed = seed;
  s.points.reserve(n);
  std::mt19937_64 gen(seed);
  std::normal_distribution<double> normal;
  while (s.points.size() < n) {
    const double a = normal(gen), b = normal(gen), c = normal(gen), d = normal(gen);
    if (a * a + b * b + c * c + d * d < 1e-20) continue;
    s.points.emplace_back(a, b, c, d);
  }
  s.weights.assign(n, 1.0 / double(n));
  return s;
}

HaarSample haar_quadrature(const EvalPolicy& policy) {
  policy.validate();
  constexpr double pi = std::numbers::pi;
  const int nr = policy.haar_r_nodes, na = policy.haar_angle_nodes;
  const auto rule = gauss_legendre<double>(nr, 0.0, pi / 2);
  HaarSample s;
  s.points.reserve(std::size_t(nr) * na * na);
  s.weights.reserve(std::size_t(nr) * na * na);
  double total = 0;
  for (int i = 0; i < nr; ++i) {
    const double r = rule.x(i);
    const double w = rule.w(i) * std::sin(r) * std::cos(r) / (2 * pi * pi) * (2 * pi / na) * (2 * pi / na);
    for (int a = 0; a < na; ++a) {
      const double p1 = 2 * pi * a / na;
      for (int b = 0; b < na; ++b) {
        const double p2 = 2 * pi * b / na;
        s.points.emplace_back(std::cos(r) * std::cos(p1), std::sin(r) * std::sin(p2),
                              std::sin(r) * std::cos(p2), std::cos(r) * std::sin(p1));
        s.weights.push_back(w);
        total += w;
      }
    }
  }
  for (auto& w : s.weights) w /= total;
  return s;
}

}  // namespace hopfheat
