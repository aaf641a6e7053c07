#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "json.hpp"

namespace wishart {

/// One comparison inside a suite. For Monte-Carlo checks `value` is the
/// deviation in standard errors and `tolerance` is 3.
struct CheckLine {
  std::string label;
  double value = 0.0;
  double tolerance = 0.0;
  bool pass = false;
};

struct SuiteReport {
  std::string name;
  std::string description;
  std::vector<CheckLine> checks;
  double seconds = 0.0;
  /// Set when the suite aborted; counts as a failure.
  std::string error;

  bool passed() const;
  /// Check with the largest value / tolerance.
  const CheckLine* worst() const;
  nlohmann::json to_json() const;
};

struct SuiteOptions {
  std::uint64_t seed = 1;
  long mc_samples = 100000;
};

/// Names in criterion order.
const std::vector<std::string>& suite_names();
bool is_suite(const std::string& name);

/// Runs the named suite; exceptions are caught and recorded in `error`.
/// Throws ConfigError for an unknown name.
SuiteReport run_suite(const std::string& name, const SuiteOptions& opt = {});

}  // namespace wishart
