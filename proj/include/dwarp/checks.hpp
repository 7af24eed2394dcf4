// dwarp - check registry: runs a scenario's checks against the engine

#ifndef DWARP_CHECKS_HPP_
#define DWARP_CHECKS_HPP_

#include "dwarp/scenario.hpp"

namespace dwarp {

struct CheckResult {
  std::string name;
  std::string kind;
  std::string verdict;
  bool pass = false;
  std::string expected;  // empty: unconstrained
  bool matched = true;   // expected verdict matched (true when unconstrained)
  double worst_residual = 0.0;
  Point witness;
  std::map<std::string, double> derived;
  std::vector<std::string> notes;
};

struct RunOverrides {
  std::optional<std::uint64_t> seed;
  std::optional<double> tol;
  std::optional<int> samples;
};

struct RunReport {
  std::string scenario;
  std::string engine_version;
  std::uint64_t seed = 0;  // effective default seed
  double tol = 0.0;        // effective default tolerance (0: per-kind defaults)
  int samples = 0;
  std::vector<CheckResult> checks;
  bool all_expected_matched = true;
};

// Executes every check in declaration order. Scenario-level problems
// (unknown ids, missing parameters) throw ScenarioError; numeric failures
// inside a check become per-check "error" verdicts.
RunReport run(const Scenario& scenario, const RunOverrides& overrides = {});

// Registered check kinds with one-line descriptions, in listing order.
std::vector<std::pair<std::string, std::string>> check_kinds();

// The built-in 2-D concurrent-field suite: the three solution families
// (instantiated `draws` times each) plus the perturbed non-member control.
RunReport run_appendix_a(std::uint64_t seed = 42, double tol = 1e-9, int samples = 20,
                         int draws = 5);

}  // namespace dwarp

#endif  // DWARP_CHECKS_HPP_
