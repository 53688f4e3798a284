#include <CLI11.hpp>
#include <json.hpp>

#include <cmath>
#include <iomanip>
#include <iostream>
#include <optional>
#include <sstream>

#include "hopfheat/io.hpp"
#include "hopfheat/kernels.hpp"
#include "hopfheat/rigidity.hpp"
#include "hopfheat/verify.hpp"

namespace {

using namespace hopfheat;
using json = nlohmann::json;

// exit codes
constexpr int kOk = 0, kFail = 1, kUsage = 2;

struct UsageError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

// "a,b,c" or "start:stop:count" (count >= 1, inclusive endpoints)
std::vector<double> parse_grid(const std::string& spec, const std::string& what) {
  std::vector<double> out;
  auto num = [&](const std::string& s) {
    try {
      std::size_t used = 0;
      const double v = std::stod(s, &used);
      if (used != s.size() || !std::isfinite(v)) throw std::invalid_argument(s);
      return v;
    } catch (const std::exception&) {
      throw UsageError(what + ": '" + s + "' is not a number");
    }
  };
  if (spec.find(':') != std::string::npos) {
    std::vector<std::string> parts;
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ':');) parts.push_back(p);
    if (parts.size() != 3) throw UsageError(what + ": range must be start:stop:count");
    const double a = num(parts[0]), b = num(parts[1]), c = num(parts[2]);
    if (c < 1 || c != std::floor(c)) throw UsageError(what + ": count must be a positive integer");
    const int n = int(c);
    for (int i = 0; i < n; ++i) out.push_back(n == 1 ? a : a + (b - a) * i / (n - 1));
  } else {
    std::stringstream ss(spec);
    for (std::string p; std::getline(ss, p, ',');) {
      if (p.empty()) throw UsageError(what + ": empty grid entry");
      out.push_back(num(p));
    }
  }
  if (out.empty()) throw UsageError(what + ": grid is empty");
  return out;
}

Method parse_method(const std::string& m) {
  if (m == "series") return Method::Series;
  if (m == "integral") return Method::Integral;
  return Method::Auto;
}

std::string theta_form_name(double t, const EvalPolicy& policy) {
  return t >= policy.t_switch ? "theta-dual" : "theta-direct";
}

double delta_of(double r, double theta) { return std::acos(std::clamp(std::cos(r) * std::cos(theta), -1.0, 1.0)); }

struct EvalArgs {
  std::string kernel = "p";
  double t = 1;
  std::optional<double> r, theta, delta, x;
  std::string method = "auto";
};

KernelValue evaluate(const EvalArgs& a, const EvalPolicy& policy) {
  auto need = [](const std::optional<double>& v, const char* name) {
    if (!v) throw UsageError(std::string("--") + name + " is required for this kernel");
    return *v;
  };
  if (a.kernel == "p") return p_eval(a.t, need(a.r, "r"), need(a.theta, "theta"), parse_method(a.method), policy);
  if (a.kernel == "qtilde") return {q_tilde(a.t, need(a.r, "r"), policy), "spectral"};
  if (a.kernel == "q") {
    if (a.x) return {q_eval(a.t, *a.x, policy), theta_form_name(a.t, policy)};
    return {q_of_delta(a.t, need(a.delta, "delta"), policy), theta_form_name(a.t, policy)};
  }
  // qt
  if (a.delta) return {q_of_delta(a.t, *a.delta, policy), theta_form_name(a.t, policy)};
  const double r = need(a.r, "r"), th = need(a.theta, "theta");
  return {q_of_delta(a.t, delta_of(r, th), policy), theta_form_name(a.t, policy)};
}

std::string format_double(double v) {
  std::ostringstream os;
  os << std::setprecision(17) << v;
  return os.str();
}

void add_policy_options(CLI::App* app, EvalPolicy& policy) {
  app->add_option("--tol", policy.tol, "relative truncation tolerance");
  app->add_option("--t-switch", policy.t_switch, "direct/dual theta switch time");
  app->add_option("--quad-nodes", policy.quad_nodes, "minimum quadrature nodes");
  app->add_option("--y-cut", policy.y_cut, "integration half-width in units of sqrt(t)");
  app->add_option("--max-index", policy.max_index, "largest series index");
}

json embedding_json(const EmbeddingReport& rep) {
  json pairs = json::array();
  for (const auto& p : rep.pairs) pairs.push_back({{"i", p.i}, {"j", p.j}, {"s3", p.s3}, {"s2", p.s2}});
  return {{"min_gram_eigenvalue", rep.min_gram_eigenvalue},
          {"min_gram_eigenvalue_s2", rep.min_gram_eigenvalue_s2},
          {"max_isometry_residual", rep.max_isometry_residual},
          {"max_residual_s3", rep.max_residual_s3},
          {"max_residual_s2", rep.max_residual_s2},
          {"base_point_ids", rep.base_point_ids},
          {"base_point_ids_s2", rep.base_point_ids_s2},
          {"pairs_checked", rep.pairs_checked},
          {"seed", rep.seed},
          {"pairs", pairs}};
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"hopf-heat: SU(2) subelliptic heat kernel and Hopf fibration recovery"};
  app.set_config("--config", "", "TOML config file; command-line flags take precedence");
  app.require_subcommand(1, 1);

  EvalPolicy policy;

  EvalArgs ea;
  auto* eval = app.add_subcommand("eval", "evaluate one kernel value");
  eval->add_option("--kernel", ea.kernel, "p | q | qt | qtilde")->check(CLI::IsMember({"p", "q", "qt", "qtilde"}));
  eval->add_option("--t", ea.t, "time")->required();
  eval->add_option("--r", ea.r, "r coordinate");
  eval->add_option("--theta", ea.theta, "theta coordinate");
  eval->add_option("--delta", ea.delta, "Riemannian distance (q, qt)");
  eval->add_option("--x", ea.x, "argument of q(t, x)");
  eval->add_option("--method", ea.method, "series | integral | auto (p only)")
      ->check(CLI::IsMember({"series", "integral", "auto"}));
  add_policy_options(eval, policy);

  SuiteConfig sc;
  std::string tol_overrides;
  auto* verify = app.add_subcommand("verify", "run a verification suite");
  verify->add_option("--suite", sc.suite, "suite name")->required();
  verify->add_option("--seed", sc.seed, "random seed")->required();
  verify->add_option("--n", sc.n, "main sample size (0 = suite default)");
  verify->add_option("--tol-overrides", tol_overrides, "name=value,... per-check thresholds");
  verify->add_option("--out", sc.out, "JSON report path");
  verify->add_option("--csv", sc.csv, "per-check CSV path");
  add_policy_options(verify, policy);

  std::size_t embed_n = 500;
  std::uint64_t embed_seed = 0;
  std::size_t embed_pairs = 10000;
  std::string embed_out;
  auto* embed_cmd = app.add_subcommand("embed", "recover S^3 and S^2 coordinates from kernel data");
  embed_cmd->add_option("--n", embed_n, "number of Haar samples (>= 50)");
  embed_cmd->add_option("--seed", embed_seed, "random seed")->required();
  embed_cmd->add_option("--pairs", embed_pairs, "random pairs for the isometry residual");
  embed_cmd->add_option("--out", embed_out, "output JSON path")->required();

  std::string tk = "p", tgrid, rgrid, thgrid, tmethod = "auto", table_out;
  auto* table = app.add_subcommand("table", "tabulate a kernel over a grid");
  table->add_option("--kernel", tk, "p | q | qt | qtilde")->check(CLI::IsMember({"p", "q", "qt", "qtilde"}));
  table->add_option("--t-grid", tgrid, "a,b,c or start:stop:count")->required();
  table->add_option("--r-grid", rgrid, "a,b,c or start:stop:count")->required();
  table->add_option("--theta-grid", thgrid, "a,b,c or start:stop:count")->required();
  table->add_option("--method", tmethod, "series | integral | auto (p only)")
      ->check(CLI::IsMember({"series", "integral", "auto"}));
  table->add_option("--out", table_out, "CSV path (stdout when omitted)");
  add_policy_options(table, policy);

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    app.exit(e);
    return kUsage;
  }

  try {
    policy.validate();
    if (*eval) {
      const KernelValue v = evaluate(ea, policy);
      std::cout << format_double(v.value) << ' ' << v.method << '\n';
      return kOk;
    }
    if (*verify) {
      sc.policy = policy;
      sc.tol_overrides = parse_tol_overrides(tol_overrides);
      const SuiteReport rep = run_suite(sc);
      write_report(rep, sc);
      for (const auto& c : rep.checks) {
        std::cout << (c.passed ? "PASS " : c.error.empty() ? "FAIL " : "ERROR ") << c.name << " residual="
                  << c.residual << " threshold=" << c.threshold;
        if (!c.error.empty()) std::cout << " error=\"" << c.error << '"';
        std::cout << '\n';
      }
      std::cout << "suite " << rep.suite << ": " << rep.status << " (" << rep.runtime_s << " s)\n";
      return rep.passed() ? kOk : kFail;
    }
    if (*embed_cmd) {
      if (embed_n < 50) throw UsageError("embed: --n must be at least 50");
      const HaarSample sample = haar_sample(embed_n, embed_seed);
      EmbeddingModel m3, m2;
      try {
        m3 = select_base_points(sample, 4);
        m2 = select_base_points(sample, 3);
      } catch (const ConditioningError& e) {
        std::cerr << "embed: " << e.what() << '\n';
        return kFail;
      }
      const HaarSample pairs = haar_sample(2 * embed_pairs, embed_seed + 1);
      const EmbeddingReport rep = isometry_report(m3, m2, pairs.points, pairs.seed);
      json points = json::array();
      for (std::size_t i = 0; i < sample.size(); ++i) {
        const auto& x = sample.points[i];
        const Eigen::Vector4d s3 = embed_S3(m3, x);
        const Eigen::Vector3d s2 = embed_S2(m2, x);
        points.push_back({{"q", {x.q0(), x.q1(), x.q2(), x.q3()}},
                          {"s3", {s3(0), s3(1), s3(2), s3(3)}},
                          {"s2", {s2(0), s2(1), s2(2)}}});
      }
      const json out = {{"schema", "hopf-heat/embed/v1"},
                        {"n", embed_n},
                        {"seed", embed_seed},
                        {"points", points},
                        {"report", embedding_json(rep)}};
      write_file_atomic(embed_out, out.dump(1) + "\n");
      std::cout << "max_isometry_residual=" << rep.max_isometry_residual
                << " min_gram_eigenvalue=" << rep.min_gram_eigenvalue
                << " min_gram_eigenvalue_s2=" << rep.min_gram_eigenvalue_s2 << '\n';
      return kOk;
    }
    if (*table) {
      const auto ts = parse_grid(tgrid, "--t-grid");
      const auto rs = parse_grid(rgrid, "--r-grid");
      const auto ths = parse_grid(thgrid, "--theta-grid");
      std::ostringstream os;
      os << std::setprecision(17) << "t,r,theta,value,method\n";
      EvalArgs a;
      a.kernel = tk;
      a.method = tmethod;
      for (double t : ts)
        for (double r : rs)
          for (double th : ths) {
            a.t = t;
            a.r = r;
            a.theta = th;
            const KernelValue v = evaluate(a, policy);
            os << t << ',' << r << ',' << th << ',' << v.value << ',' << v.method << '\n';
          }
      if (table_out.empty()) std::cout << os.str();
      else write_file_atomic(table_out, os.str());
      return kOk;
    }
  } catch (const PolicyError& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  } catch (const std::invalid_argument& e) {  // ConfigError, UsageError, policy validation
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::domain_error& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kUsage;
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << '\n';
    return kFail;
  }
  return kUsage;
}
