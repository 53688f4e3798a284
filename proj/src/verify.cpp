#include "hopfheat/verify.hpp"

#include <algorithm>
#include <chrono>
#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <sstream>

#include "hopfheat/io.hpp"
#include "hopfheat/kernels.hpp"
#include "hopfheat/parallel.hpp"
#include "hopfheat/rigidity.hpp"

namespace hopfheat {

namespace {

constexpr double kPi = std::numbers::pi;
using json = nlohmann::json;

struct CheckSpec {
  std::string name;
  double threshold;
};

struct SuiteSpec {
  std::string name;
  std::size_t default_n;
  std::vector<CheckSpec> checks;
};

const std::vector<SuiteSpec>& suite_specs() {
  static const std::vector<SuiteSpec> specs = {
      {"heat-kernel-axioms",
       20,
       {{"positivity", 0},
        {"symmetry-p", 1e-12},
        {"symmetry-qt", 1e-12},
        {"symmetry-qtilde", 1e-12},
        {"mass-p", 1e-6},
        {"mass-qt", 1e-6},
        {"mass-qtilde", 1e-6},
        {"ck-p", 1e-5},
        {"ck-qt", 1e-5},
        {"ck-qtilde", 1e-5}}},
      {"cross-representations",
       20,
       {{"series-vs-integral", 1e-8},
        {"integral-imaginary", 1e-10},
        {"theta-dual", 1e-10},
        {"qt-theta-vs-spectral", 1e-10},
        {"convolution-t0.5", 1e-8},
        {"convolution-t1", 1e-8},
        {"convolution-t0.1", 1e-6},
        {"qtilde-fiber-average", 1e-10}}},
      {"eigen-structure",
       5,
       {{"eigenvalues", 0},
        {"eigen-residual", 1e-5},
        {"eigen-orthogonality", 1e-6},
        {"theta-fiber-average", 1e-10},
        {"jacobi-endpoint", 1e-12}}},
      {"small-time", 20, {{"ldp", 0.01}, {"ldp-t1e-6", 0.01}, {"q-leading-term", 1e-12}}},
      {"volume-growth", 100000, {{"slope-s3", 0.1}, {"slope-quotient", 0.1}}},
      {"rigidity",
       500,
       {{"gram-pd", 0},
        {"isometry-s3", 1e-9},
        {"isometry-s2", 1e-9},
        {"base-point-independence", 1e-9},
        {"commuting-diagram", 1e-10},
        {"surjectivity", 0.1},
        {"hopf-consistency", 1e-10}}},
      {"submersion",
       100,
       {{"horizontal-single", 1e-6},
        {"horizontal-polyline", 1e-3},
        {"horizontal-refinement", 0.25},
        {"fiber-step", 1e-12},
        {"fiber-geodesic", 1e-10},
        {"geodesic-midpoint", 1e-12},
        {"theta-fiber-average", 1e-10}}},
  };
  return specs;
}

const SuiteSpec& find_spec(const std::string& name) {
  for (const auto& s : suite_specs())
    if (s.name == name) return s;
  throw ConfigError("unknown suite '" + name + "'");
}

// Residual of a check plus an optional human-readable note.
struct Outcome {
  double residual = 0;
  std::string note;
};

class Runner {
 public:
  Runner(const SuiteSpec& spec, const SuiteConfig& cfg) : spec_(spec), cfg_(cfg) {}

  void run(const std::string& name, const std::function<Outcome()>& fn) {
    CheckResult c;
    c.name = name;
    c.threshold = threshold(name);
    try {
      const Outcome o = fn();
      c.residual = o.residual;
      c.note = o.note;
      c.passed = std::isfinite(o.residual) && o.residual <= c.threshold;
    } catch (const std::exception& e) {
      c.error = e.what();
      c.passed = false;
      c.residual = std::numeric_limits<double>::infinity();
    }
    checks_.push_back(std::move(c));
  }

  std::vector<CheckResult> take() { return std::move(checks_); }

 private:
  double threshold(const std::string& name) const {
    if (auto it = cfg_.tol_overrides.find(name); it != cfg_.tol_overrides.end()) return it->second;
    for (const auto& c : spec_.checks)
      if (c.name == name) return c.threshold;
    throw std::logic_error("check '" + name + "' missing from suite table");
  }

  const SuiteSpec& spec_;
  const SuiteConfig& cfg_;
  std::vector<CheckResult> checks_;
};

double rel(double a, double b) { return std::abs(a - b) / std::max(std::abs(b), 1e-300); }

std::string fmt(double v) {
  std::ostringstream os;
  os.precision(6);
  os << v;
  return os.str();
}

// ---------------------------------------------------------------- heat-kernel axioms

using CoordKernel = std::function<double(double t, const PairCoords&)>;

struct AxiomKernels {
  CoordKernel p, qt, qtilde;
};

AxiomKernels axiom_kernels(const EvalPolicy& policy) {
  return {
      [policy](double t, const PairCoords& pc) { return p_series(t, pc.r, pc.theta, policy); },
      [policy](double t, const PairCoords& pc) { return q_of_delta(t, pc.delta, policy); },
      [policy](double t, const PairCoords& pc) { return q_tilde(t, pc.r, policy); },
  };
}

void heat_kernel_axioms(Runner& run, const SuiteConfig& cfg, json& extra) {
  EvalPolicy policy = cfg.policy;
  // quadrature-heavy: plain double is ample for the 1e-5..1e-6 targets here
  if (policy.precision == Precision::Auto) policy.precision = Precision::Double;
  const auto K = axiom_kernels(policy);
  const std::vector<std::pair<std::string, CoordKernel>> kernels = {
      {"p", K.p}, {"qt", K.qt}, {"qtilde", K.qtilde}};
  const HaarSample quad = haar_quadrature(policy);
  const GroupElement e;
  const auto from_e = parallel_map<PairCoords>(quad.size(), [&](std::size_t i) { return pair_coords(e, quad.points[i]); });
  extra["quadrature_nodes"] = quad.size();

  double min_value = std::numeric_limits<double>::infinity();
  long nonpositive = 0;
  auto track = [&](const std::vector<double>& v) {
    for (double x : v) {
      min_value = std::min(min_value, x);
      nonpositive += !(x > 0);
    }
  };

  // symmetry over random pairs
  const HaarSample sym = haar_sample(2000, cfg.seed);
  for (const auto& [name, k] : kernels) {
    run.run("symmetry-" + name, [&, &k = k] {
      double worst = 0;
      for (std::size_t i = 0; i + 1 < sym.size(); i += 2) {
        const double a = k(0.5, pair_coords(sym.points[i], sym.points[i + 1]));
        const double b = k(0.5, pair_coords(sym.points[i + 1], sym.points[i]));
        worst = std::max(worst, rel(a, b));
      }
      return Outcome{worst, "1000 pairs at t=0.5"};
    });
  }

  // tables k_s(e, z_i), reused by the mass and Chapman-Kolmogorov checks
  std::map<std::pair<std::string, double>, std::vector<double>> tables;
  auto table = [&](const std::string& name, const CoordKernel& k, double t) -> const std::vector<double>& {
    auto key = std::make_pair(name, t);
    auto it = tables.find(key);
    if (it == tables.end()) {
      auto v = parallel_map<double>(quad.size(), [&](std::size_t i) { return k(t, from_e[i]); });
      track(v);
      it = tables.emplace(key, std::move(v)).first;
    }
    return it->second;
  };

  for (const auto& [name, k] : kernels) {
    run.run("mass-" + name, [&, &name = name, &k = k] {
      double worst = 0;
      std::string note;
      for (double t : {0.3, 1.0}) {
        const auto& v = table(name, k, t);
        double m = 0;
        for (std::size_t i = 0; i < v.size(); ++i) m += quad.weights[i] * v[i];
        worst = std::max(worst, std::abs(m - 1));
        note += "t=" + fmt(t) + ": mass-1=" + fmt(m - 1) + "; ";
      }
      return Outcome{worst, note};
    });
  }

  const std::size_t npairs = cfg.n;
  const HaarSample ends = haar_sample(2 * npairs, cfg.seed + 1);
  for (const auto& [name, k] : kernels) {
    run.run("ck-" + name, [&, &name = name, &k = k] {
      double worst = 0;
      for (auto [s, t] : {std::pair{0.3, 0.3}, std::pair{0.5, 1.0}}) {
        const auto& ks = table(name, k, s);
        for (std::size_t p = 0; p < npairs; ++p) {
          // left-invariance: int k_s(x,z) k_t(z,y) dz = int k_s(e,z) k_t(z, x^{-1}y) dz
          const GroupElement g = ends.points[2 * p].inverse() * ends.points[2 * p + 1];
          const auto kt = parallel_map<double>(quad.size(), [&](std::size_t i) { return k(t, pair_coords(quad.points[i], g)); });
          track(kt);
          double acc = 0;
          for (std::size_t i = 0; i < kt.size(); ++i) acc += quad.weights[i] * ks[i] * kt[i];
          worst = std::max(worst, rel(acc, k(s + t, pair_coords(e, g))));
        }
      }
      return Outcome{worst, std::to_string(npairs) + " pairs, (s,t) in {(0.3,0.3),(0.5,1)}"};
    });
  }

  run.run("positivity", [&] {
    // the quadrature evaluations above plus all four kernels on the cross-representation grid
    std::vector<double> grid;
    for (double t : {0.1, 0.3, 1.0, 3.0})
      for (double r : {0.0, 0.3, 0.7, 1.2})
        for (double th : {0.0, 0.5, 1.5, 3.0}) {
          const double d = std::acos(std::cos(r) * std::cos(th));
          grid.push_back(p_series(t, r, th, policy));
          grid.push_back(q_eval(t, std::cos(d), policy));
          grid.push_back(q_t_from_coords(t, {r, th, d}, policy));
          grid.push_back(q_tilde(t, r, policy));
        }
    track(grid);
    return Outcome{double(nonpositive), "count of non-positive values; min kernel value " + fmt(min_value)};
  });
}

// ---------------------------------------------------------------- cross-representations

void cross_representations(Runner& run, const SuiteConfig& cfg, json& extra) {
  const EvalPolicy& policy = cfg.policy;
  const std::vector<double> ts{0.1, 0.3, 1, 3}, rs{0, 0.3, 0.7, 1.2}, ths{0, 0.5, 1.5, 3.0};
  double worst_imag = 0;
  run.run("series-vs-integral", [&] {
    double worst = 0;
    for (double t : ts)
      for (double r : rs)
        for (double th : ths) {
          const double a = p_series(t, r, th, policy);
          const auto b = p_integral_detailed(t, r, th, policy);
          worst = std::max(worst, rel(b.value, a));
          worst_imag = std::max(worst_imag, std::abs(b.imag));
        }
    return Outcome{worst, "4x4x4 grid"};
  });
  run.run("integral-imaginary", [&] { return Outcome{worst_imag, "max |Im| over the grid"}; });
  run.run("theta-dual", [&] {
    double worst = 0;
    for (double t : {0.05, 0.1, 0.5, 1.0, 5.0})
      for (int j = 0; j <= 31; ++j) {
        const double d = 0.1 * j;
        const double a = theta_sum_direct(t, d), b = theta_sum_dual(t, d);
        worst = std::max(worst, std::abs(a - b) / (1 + std::abs(a)));
      }
    return Outcome{worst, "t in {0.05,0.1,0.5,1,5}, d = 0..3.1"};
  });
  const HaarSample pts = haar_sample(2 * cfg.n, cfg.seed);
  run.run("qt-theta-vs-spectral", [&] {
    double worst = 0;
    for (std::size_t i = 0; i + 1 < pts.size(); i += 2) {
      const auto pc = pair_coords(pts.points[i], pts.points[i + 1]);
      worst = std::max(worst, rel(q_t_from_coords(0.8, pc, policy, ThetaForm::Spectral), q_t_from_coords(0.8, pc, policy)));
    }
    return Outcome{worst, std::to_string(cfg.n) + " pairs at t=0.8"};
  });
  std::mt19937_64 gen(cfg.seed + 7);
  std::uniform_real_distribution<double> ur(0, kPi / 2), uth(0, kPi);
  std::vector<std::pair<double, double>> rt(10);
  for (auto& p : rt) p = {ur(gen), uth(gen)};
  for (auto [name, t] : {std::pair{"convolution-t0.5", 0.5}, std::pair{"convolution-t1", 1.0},
                         std::pair{"convolution-t0.1", 0.1}}) {
    run.run(name, [&, t = t] {
      double worst = 0;
      for (auto [r, th] : rt) worst = std::max(worst, convolution_check(t, r, th, policy));
      return Outcome{worst, "10 random (r, theta)"};
    });
  }
  run.run("qtilde-fiber-average", [&] {
    double worst = 0;
    for (std::size_t i = 0; i + 1 < std::min<std::size_t>(pts.size(), 10); i += 2) {
      const auto& x = pts.points[i];
      const auto& y = pts.points[i + 1];
      worst = std::max(worst, rel(q_t_fiber_average(0.8, x, y, 64, policy), q_tilde(0.8, pair_coords(x, y).r, policy)));
    }
    return Outcome{worst, "5 pairs at t=0.8, 64x64 fiber nodes"};
  });
  extra["grid"] = {{"t", ts}, {"r", rs}, {"theta", ths}};
}

// ---------------------------------------------------------------- eigen-structure

void eigen_structure(Runner& run, const SuiteConfig& cfg, json&) {
  run.run("eigenvalues", [&] {
    double worst = 0;
    worst = std::max(worst, std::abs(SpectralIndex{0, 1}.lambda() + 2));
    worst = std::max(worst, std::abs(SpectralIndex{0, 1}.lambda_prime() + 3));
    worst = std::max(worst, std::abs(SpectralIndex{1, 0}.lambda_prime() + 8));
    worst = std::max(worst, std::abs(SpectralIndex{0, 0}.lambda()));
    return Outcome{worst, "lambda_{0,1}=-2, lambda'_{0,1}=-3, lambda'_{1,0}=-8"};
  });
  std::mt19937_64 gen(cfg.seed);
  std::uniform_real_distribution<double> ur(0.2, kPi / 2 - 0.2), uth(0, kPi);
  std::vector<std::pair<double, double>> points(cfg.n);
  for (auto& p : points) p = {ur(gen), uth(gen)};
  run.run("eigen-residual", [&] {
    double worst = 0;
    for (int k = 0; k <= 2; ++k)
      for (int n = 0; n <= 3; ++n)
        for (auto [r, th] : points) worst = std::max(worst, eigen_residual({k, n}, r, th, 2e-5));
    return Outcome{worst, "k<=2, n<=3, h=2e-5, " + std::to_string(points.size()) + " points"};
  });
  run.run("eigen-orthogonality", [&] {
    EvalPolicy qp = cfg.policy;
    qp.haar_r_nodes = 24;
    qp.haar_angle_nodes = 24;
    const HaarSample quad = haar_quadrature(qp);
    const HaarSample xy = haar_sample(4, cfg.seed + 3);
    double worst = 0;
    std::vector<SpectralIndex> idx;
    for (int k = 0; k <= 2; ++k)
      for (int n = 0; n <= 2; ++n) idx.push_back({k, n});
    for (std::size_t p = 0; p + 1 < xy.size(); p += 2) {
      const auto& x = xy.points[p];
      const auto& y = xy.points[p + 1];
      std::vector<PairCoords> cx(quad.size()), cy(quad.size());
      for (std::size_t i = 0; i < quad.size(); ++i) {
        cx[i] = pair_coords(x, quad.points[i]);
        cy[i] = pair_coords(quad.points[i], y);
      }
      const auto pxy = pair_coords(x, y);
      for (const auto& a : idx)
        for (const auto& b : idx) {
          double acc = 0;
          for (std::size_t i = 0; i < quad.size(); ++i)
            acc += quad.weights[i] * eigen_term(a, cx[i].r, cx[i].theta) * eigen_term(b, cy[i].r, cy[i].theta);
          const double expect = (a.k == b.k && a.n == b.n) ? eigen_term(a, pxy.r, pxy.theta) : 0.0;
          worst = std::max(worst, std::abs(acc - expect));
        }
    }
    return Outcome{worst, "k,l<=2, n,m<=2, 24^3 quadrature, 2 pairs"};
  });
  run.run("theta-fiber-average", [&] {
    const HaarSample s = haar_sample(20, cfg.seed + 5);
    double worst = 0;
    for (std::size_t i = 0; i + 1 < s.size(); i += 2)
      for (int n = 1; n <= 4; ++n)
        worst = std::max(worst, std::abs(theta_fiber_average(n, s.points[i], fiber(s.points[i + 1]))));
    return Outcome{worst, "n=1..4, 10 random (x, fiber)"};
  });
  run.run("jacobi-endpoint", [&] {
    double worst = 0;
    for (int k = 0; k <= 200; ++k)
      for (int n = 0; n <= 50; ++n) worst = std::max(worst, std::abs(jacobi_eval<double>(k, n, 1.0) - 1));
    return Outcome{worst, "P_k^{(0,n)}(1) = 1, k<=200, n<=50"};
  });
}

// ---------------------------------------------------------------- small-time

void small_time(Runner& run, const SuiteConfig& cfg, json& extra) {
  // pairs with delta in [0.2, 2.5]
  std::vector<double> deltas;
  std::mt19937_64 gen(cfg.seed);
  std::normal_distribution<double> normal;
  while (deltas.size() < cfg.n) {
    const GroupElement x(normal(gen), normal(gen), normal(gen), normal(gen));
    const GroupElement y(normal(gen), normal(gen), normal(gen), normal(gen));
    const double d = pair_coords(x, y).delta;
    if (d >= 0.2 && d <= 2.5) deltas.push_back(d);
  }
  auto ldp = [&](double t) {
    double worst = 0;
    json rows = json::array();
    for (double d : deltas) {
      const double lhs = -4 * t * log_q_of_delta(t, d, cfg.policy);
      const double r = std::abs(lhs - d * d) / (d * d);
      worst = std::max(worst, r);
      rows.push_back({{"delta", d}, {"minus_4t_log_q", lhs}, {"relative_residual", r}});
    }
    return std::make_pair(worst, rows);
  };
  run.run("ldp", [&] {
    auto [w, rows] = ldp(1e-3);
    extra["ldp_t1e-3"] = rows;
    return Outcome{w, "t=1e-3; the residual is dominated by 4t log(prefactor) = O(t log(1/t))"};
  });
  run.run("ldp-t1e-6", [&] {
    auto [w, rows] = ldp(1e-6);
    extra["ldp_t1e-6"] = rows;
    return Outcome{w, "same pairs at t=1e-6"};
  });
  run.run("q-leading-term", [&] {
    double worst = 0;
    for (double d : {0.3, 0.8, 1.5, 2.5}) {
      const double t = 0.01;
      const double lead = std::sqrt(kPi) * std::exp(t) / (4 * t * std::sqrt(t)) * (d / std::sin(d)) * std::exp(-d * d / (4 * t));
      worst = std::max(worst, std::abs(q_of_delta(t, d, cfg.policy) / lead - 1));
    }
    return Outcome{worst, "|R'| at t=0.01"};
  });
}

// ---------------------------------------------------------------- volume growth

void volume_growth(Runner& run, const SuiteConfig& cfg, json& extra) {
  const std::vector<double> radii{0.1, 0.15, 0.2, 0.25, 0.3, 0.35, 0.4};
  const HaarSample s = haar_sample(cfg.n, cfg.seed);
  const std::size_t centers = std::min<std::size_t>(200, s.size());
  VolumeFit fit;
  run.run("slope-s3", [&] {
    fit = volume_growth_fit(s, centers, radii);
    return Outcome{std::abs(fit.slope_s3 - 3), "slope " + fmt(fit.slope_s3)};
  });
  run.run("slope-quotient", [&] {
    if (fit.radii.empty()) fit = volume_growth_fit(s, centers, radii);
    return Outcome{std::abs(fit.slope_quotient - 2), "slope " + fmt(fit.slope_quotient)};
  });
  extra["radii"] = radii;
  extra["mass_s3"] = fit.mass_s3;
  extra["mass_quotient"] = fit.mass_quotient;
  extra["slope_s3"] = fit.slope_s3;
  extra["slope_quotient"] = fit.slope_quotient;
  extra["centers"] = centers;
}

// ---------------------------------------------------------------- rigidity

void rigidity(Runner& run, const SuiteConfig& cfg, json& extra) {
  if (cfg.n < 50) throw ConfigError("rigidity: n must be at least 50");
  const HaarSample base = haar_sample(cfg.n, cfg.seed);
  EmbeddingModel m3, m2;
  run.run("gram-pd", [&] {
    m3 = select_base_points(base, 4);
    m2 = select_base_points(base, 3);
    return Outcome{0.0, "min eigenvalues " + fmt(m3.min_eigenvalue) + " (S^3), " + fmt(m2.min_eigenvalue) + " (S^2)"};
  });
  if (m3.base_points.empty() || m2.base_points.empty()) return;
  const HaarSample pts = haar_sample(20000, cfg.seed + 1);
  const EmbeddingReport rep = isometry_report(m3, m2, pts.points, pts.seed);
  run.run("isometry-s3", [&] { return Outcome{rep.max_residual_s3, std::to_string(rep.pairs_checked) + " pairs"}; });
  run.run("isometry-s2", [&] { return Outcome{rep.max_residual_s2, std::to_string(rep.pairs_checked) + " pairs"}; });
  run.run("base-point-independence", [&] {
    const HaarSample other = haar_sample(cfg.n, cfg.seed + 1000003);
    const auto o3 = select_base_points(other, 4);
    const auto o2 = select_base_points(other, 3);
    double worst = 0;
    for (std::size_t i = 0; i + 1 < 2000; i += 2) {
      const auto& x = pts.points[i];
      const auto& y = pts.points[i + 1];
      worst = std::max(worst, std::abs(embed(m3, x).dot(embed(m3, y)) - embed(o3, x).dot(embed(o3, y))));
      worst = std::max(worst, std::abs(embed(m2, x).dot(embed(m2, y)) - embed(o2, x).dot(embed(o2, y))));
    }
    return Outcome{worst, "1000 pairs, models from disjoint seeds"};
  });
  run.run("commuting-diagram", [&] {
    std::mt19937_64 gen(cfg.seed + 2);
    std::uniform_real_distribution<double> us(-kPi, kPi);
    double worst = 0;
    for (std::size_t i = 0; i < 1000; ++i) {
      const auto& x = pts.points[i];
      worst = std::max(worst, (embed(m2, x) - embed(m2, fiber(x).at(us(gen)))).norm());
    }
    return Outcome{worst, "1000 points vs a random member of their fiber"};
  });
  run.run("surjectivity", [&] {
    std::vector<Eigen::VectorXd> image(10000);
    for (std::size_t i = 0; i < image.size(); ++i) image[i] = embed(m2, pts.points[i]);
    std::mt19937_64 gen(cfg.seed + 3);
    std::normal_distribution<double> normal;
    double worst = 0;
    for (int j = 0; j < 1000; ++j) {
      Eigen::VectorXd target(3);
      for (int c = 0; c < 3; ++c) target(c) = normal(gen);
      target.normalize();
      double best = kPi;
      for (const auto& v : image) best = std::min(best, vector_angle(v, target));
      worst = std::max(worst, best);
    }
    return Outcome{worst, "1000 targets, 10^4 embedded points"};
  });
  run.run("hopf-consistency", [&] {
    double worst = 0;
    for (std::size_t i = 0; i + 1 < 2000; i += 2) {
      const auto& x = pts.points[i];
      const auto& y = pts.points[i + 1];
      worst = std::max(worst, std::abs(sphere_angle<double>(hopf_project(x), hopf_project(y)) - 2 * pair_coords(x, y).r));
    }
    return Outcome{worst, "angle between Hopf images = 2r"};
  });
  extra["embedding"] = {{"min_gram_eigenvalue", rep.min_gram_eigenvalue},
                        {"min_gram_eigenvalue_s2", rep.min_gram_eigenvalue_s2},
                        {"max_isometry_residual", rep.max_isometry_residual},
                        {"base_point_ids", rep.base_point_ids},
                        {"base_point_ids_s2", rep.base_point_ids_s2},
                        {"pairs_checked", rep.pairs_checked},
                        {"seed", rep.seed}};
}

// ---------------------------------------------------------------- submersion

void submersion(Runner& run, const SuiteConfig& cfg, json& extra) {
  const HaarSample base = haar_sample(500, cfg.seed);
  const auto m3 = select_base_points(base, 4);
  const auto m2 = select_base_points(base, 3);
  const HaarSample s = haar_sample(40, cfg.seed + 1);
  std::mt19937_64 gen(cfg.seed + 2);
  std::uniform_real_distribution<double> ua(-2, 2), uf(0.5, 3), uz(0.05, kPi - 0.05);
  const double a0 = ua(gen), a1 = ua(gen), a2 = ua(gen), f1 = uf(gen), f2 = uf(gen), p1 = ua(gen), p2 = ua(gen);
  const auto schedule = [=](double t) { return a0 + a1 * std::sin(f1 * t + p1) + a2 * std::sin(f2 * t + p2); };
  const int steps = int(cfg.n);
  const double h = 1e-2;

  run.run("horizontal-single", [&] {
    const auto r = check_submersion(m3, m2, GroupElement(), 0.0, 1, 1e-3);
    return Outcome{std::abs(r.ratio - 1), "one step h=1e-3 from e"};
  });
  SubmersionReport coarse, fine;
  run.run("horizontal-polyline", [&] {
    coarse = check_submersion(m3, m2, s.points[0], schedule, steps, h);
    return Outcome{std::abs(coarse.ratio - 1), std::to_string(steps) + " steps of h=1e-2, random smooth schedule"};
  });
  run.run("horizontal-refinement", [&] {
    fine = check_submersion(m3, m2, s.points[0], schedule, 2 * steps, h / 2);
    const double ratio = fine.error / coarse.error;
    return Outcome{ratio, "error(h)=" + fmt(coarse.error) + ", error(h/2)=" + fmt(fine.error) + "; needs <= 1/4"};
  });
  run.run("fiber-step", [&] {
    double worst = 0;
    for (int i = 0; i < 10; ++i) {
      const auto& x = s.points[i];
      const double hh = 0.01 * (i + 1);
      const auto y = x * GroupElement::exp_z(hh);
      worst = std::max(worst, vector_angle(embed(m2, x), embed(m2, y)));
      worst = std::max(worst, std::abs(vector_angle(embed(m3, x), embed(m3, y)) - hh));
    }
    return Outcome{worst, "projected length 0, S^3 length h"};
  });
  run.run("fiber-geodesic", [&] {
    double worst = 0;
    for (int i = 0; i < 10; ++i) worst = std::max(worst, check_fiber_geodesic(s.points[i], uz(gen)));
    return Outcome{worst, "10 random (x, z)"};
  });
  run.run("geodesic-midpoint", [&] {
    double worst = 0;
    for (int i = 10; i < 20; ++i) {
      const auto& x = s.points[i];
      const double z = uz(gen);
      const auto y = x * GroupElement::exp_z(z);
      const auto arc = great_arc(x, z, 101);
      const auto& m = arc[50];
      worst = std::max({worst, std::abs(pair_coords(x, m).delta - z / 2), std::abs(pair_coords(m, y).delta - z / 2)});
    }
    return Outcome{worst, "midpoints of 10 fiber arcs"};
  });
  run.run("theta-fiber-average", [&] {
    double worst = 0;
    for (int i = 20; i + 1 < 40; i += 2)
      for (int n = 1; n <= 4; ++n)
        worst = std::max(worst, std::abs(theta_fiber_average(n, s.points[i], fiber(s.points[i + 1]))));
    return Outcome{worst, "n=1..4"};
  });
  extra["polyline"] = {{"steps", steps}, {"h", h}, {"length_s3", coarse.length_s3},
                       {"half_length_s2", coarse.half_length_s2}, {"error_h", coarse.error},
                       {"error_h_over_2", fine.error}};
}

json config_echo(const SuiteConfig& cfg) {
  const auto& p = cfg.policy;
  return {{"suite", cfg.suite},
          {"seed", cfg.seed},
          {"n", cfg.n},
          {"tol_overrides", cfg.tol_overrides},
          {"policy",
           {{"tol", p.tol},
            {"t_switch", p.t_switch},
            {"quad_nodes", p.quad_nodes},
            {"y_cut", p.y_cut},
            {"max_index", p.max_index},
            {"haar_r_nodes", p.haar_r_nodes},
            {"haar_angle_nodes", p.haar_angle_nodes}}}};
}

}  // namespace

const std::vector<std::string>& suite_names() {
  static const std::vector<std::string> names = [] {
    std::vector<std::string> v;
    for (const auto& s : suite_specs()) v.push_back(s.name);
    return v;
  }();
  return names;
}

const CheckResult* SuiteReport::find(const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return &c;
  return nullptr;
}

std::map<std::string, double> parse_tol_overrides(const std::string& spec) {
  std::map<std::string, double> out;
  std::stringstream ss(spec);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) throw ConfigError("bad tolerance override '" + item + "' (want name=value)");
    const std::string key = item.substr(0, eq);
    try {
      std::size_t used = 0;
      const double v = std::stod(item.substr(eq + 1), &used);
      if (used != item.size() - eq - 1) throw std::invalid_argument("trailing characters");
      out[key] = v;
    } catch (const std::exception&) {
      throw ConfigError("bad tolerance value in '" + item + "'");
    }
  }
  return out;
}

void validate(const SuiteConfig& cfg) {
  const SuiteSpec& spec = find_spec(cfg.suite);
  for (const auto& [name, v] : cfg.tol_overrides) {
    const bool known = std::any_of(spec.checks.begin(), spec.checks.end(), [&](const CheckSpec& c) { return c.name == name; });
    if (!known) throw ConfigError("suite '" + cfg.suite + "' has no check named '" + name + "'");
    if (!(v >= 0) || !std::isfinite(v)) throw ConfigError("tolerance for '" + name + "' must be finite and non-negative");
  }
  try {
    cfg.policy.validate();
  } catch (const std::invalid_argument& e) {
    throw ConfigError(e.what());
  }
  if (cfg.suite == "rigidity" && cfg.n != 0 && cfg.n < 50) throw ConfigError("rigidity: n must be at least 50");
  if (cfg.suite == "volume-growth" && cfg.n != 0 && cfg.n < 1000) throw ConfigError("volume-growth: n must be at least 1000");
}

SuiteReport run_suite(const SuiteConfig& config) {
  validate(config);
  const SuiteSpec& spec = find_spec(config.suite);
  SuiteConfig cfg = config;
  if (cfg.n == 0) cfg.n = spec.default_n;

  SuiteReport report;
  report.suite = cfg.suite;
  report.seed = cfg.seed;
  report.config = config_echo(cfg);
  report.extra = json::object();
  const auto start = std::chrono::steady_clock::now();
  Runner run(spec, cfg);
  if (cfg.suite == "heat-kernel-axioms") heat_kernel_axioms(run, cfg, report.extra);
  else if (cfg.suite == "cross-representations") cross_representations(run, cfg, report.extra);
  else if (cfg.suite == "eigen-structure") eigen_structure(run, cfg, report.extra);
  else if (cfg.suite == "small-time") small_time(run, cfg, report.extra);
  else if (cfg.suite == "volume-growth") volume_growth(run, cfg, report.extra);
  else if (cfg.suite == "rigidity") rigidity(run, cfg, report.extra);
  else if (cfg.suite == "submersion") submersion(run, cfg, report.extra);
  report.runtime_s = std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count();
  report.checks = run.take();
  // keep the suite's declared order
  std::vector<CheckResult> ordered;
  for (const auto& c : spec.checks)
    for (auto& r : report.checks)
      if (r.name == c.name) ordered.push_back(r);
  report.checks = std::move(ordered);
  const bool any_error = std::any_of(report.checks.begin(), report.checks.end(), [](const CheckResult& c) { return !c.error.empty(); });
  const bool all_pass = report.checks.size() == spec.checks.size() &&
                        std::all_of(report.checks.begin(), report.checks.end(), [](const CheckResult& c) { return c.passed; });
  report.status = any_error ? "error" : all_pass ? "pass" : "fail";
  return report;
}

json to_json(const SuiteReport& r) {
  json checks = json::array();
  for (const auto& c : r.checks) {
    json j = {{"name", c.name}, {"passed", c.passed}, {"threshold", c.threshold}};
    j["residual"] = std::isfinite(c.residual) ? json(c.residual) : json(nullptr);
    if (!c.note.empty()) j["note"] = c.note;
    if (!c.error.empty()) j["error"] = c.error;
    checks.push_back(j);
  }
  return {{"schema", "hopf-heat/report/v1"},
          {"suite", r.suite},
          {"seed", r.seed},
          {"status", r.status},
          {"runtime_s", r.runtime_s},
          {"checks", checks},
          {"config", r.config},
          {"extra", r.extra}};
}

std::string to_csv(const SuiteReport& r) {
  std::ostringstream os;
  os.precision(17);
  os << "suite,check,residual,threshold,passed\n";
  for (const auto& c : r.checks)
    os << r.suite << ',' << c.name << ',' << c.residual << ',' << c.threshold << ',' << (c.passed ? "true" : "false") << '\n';
  return os.str();
}

void write_report(const SuiteReport& report, const SuiteConfig& config) {
  if (!config.out.empty()) write_file_atomic(config.out, to_json(report).dump(2) + "\n");
  if (!config.csv.empty()) write_file_atomic(config.csv, to_csv(report));
}

}  // namespace hopfheat
