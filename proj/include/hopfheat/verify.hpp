#pragma once

#include <cstdint>
#include <map>
#include <stdexcept>
#include <string>
#include <vector>

#include <json.hpp>

#include "hopfheat/policy.hpp"

namespace hopfheat {

// Invalid suite configuration; raised before any computation.
struct ConfigError : std::invalid_argument {
  using std::invalid_argument::invalid_argument;
};

const std::vector<std::string>& suite_names();

struct SuiteConfig {
  std::string suite;
  std::uint64_t seed = 42;
  std::size_t n = 0;                         // main sample size; 0 picks the suite default
  std::map<std::string, double> tol_overrides;  // keyed by check name
  EvalPolicy policy;
  std::string out;  // report path; empty for none
  std::string csv;  // optional per-check CSV path
};

struct CheckResult {
  std::string name;
  double residual = 0;   // worst residual seen
  double threshold = 0;  // pass iff residual <= threshold
  bool passed = false;
  std::string error;  // non-empty when the check could not be computed
  std::string note;
};

struct SuiteReport {
  std::string suite;
  std::uint64_t seed = 0;
  std::string status;  // "pass", "fail" or "error"
  double runtime_s = 0;
  std::vector<CheckResult> checks;
  nlohmann::json config;
  nlohmann::json extra;  // suite-specific payload (e.g. the embedding report)

  bool passed() const { return status == "pass"; }
  const CheckResult* find(const std::string& name) const;
};

// "name=value,name=value"
std::map<std::string, double> parse_tol_overrides(const std::string& spec);

void validate(const SuiteConfig& config);
SuiteReport run_suite(const SuiteConfig& config);

nlohmann::json to_json(const SuiteReport& report);
std::string to_csv(const SuiteReport& report);
// writes config.out / config.csv when set
void write_report(const SuiteReport& report, const SuiteConfig& config);

}  // namespace hopfheat
