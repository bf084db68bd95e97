#pragma once

#include <string>
#include <vector>

#include <json.hpp>

namespace rmf::checks {

struct CheckResult {
  int id = 0;            // acceptance criterion number, 0 for module properties
  std::string name;
  bool passed = false;
  std::string summary;   // one line with the measured values
  nlohmann::json metrics;
  double seconds = 0.0;
};

struct SuiteOptions {
  bool quick = false;              // fewer random cases, shorter spans
  bool flip_adjoint_sign = false;  // mutation: wrong sign in odd adjoint terms
};

CheckResult check_rm_properties(const SuiteOptions& o = {});
CheckResult check_gauge_relations(const SuiteOptions& o = {});
CheckResult check_euler_operator(const SuiteOptions& o = {});
CheckResult check_el_regression(const SuiteOptions& o = {});
CheckResult check_adjoint_identity(const SuiteOptions& o = {});
CheckResult check_conservation(const SuiteOptions& o = {});
CheckResult check_noether_ode(const SuiteOptions& o = {});
CheckResult check_round_trip(const SuiteOptions& o = {});
CheckResult check_syzygy_convergence(const SuiteOptions& o = {});
CheckResult check_sweep_surface(const SuiteOptions& o = {});

/// The ten acceptance criteria in order.
std::vector<CheckResult> run_acceptance(const SuiteOptions& o = {});
/// Additional module properties run by `rmf verify`.
std::vector<CheckResult> run_properties(const SuiteOptions& o = {});

std::string format_line(const CheckResult& r);
nlohmann::json to_json(const std::vector<CheckResult>& results);

}  // namespace rmf::checks
