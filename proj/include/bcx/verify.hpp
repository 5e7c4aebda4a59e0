#pragma once

// Invariant suites behind `bcx verify`. Each check is cheap enough to run on
// every config; the full-size acceptance runs live in the test tree.

#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bcx/config.hpp"

namespace bcx {

struct Check {
  Check(std::string suite, std::string name) : suite(std::move(suite)), name(std::move(name)) {}

  std::string suite;
  std::string name;
  bool pass = true;
  bool skipped = false;  ///< not applicable to this config; counts as passing
  std::string detail;
};

inline constexpr std::string_view kVerifySuites[] = {"graphs", "bounds", "identity", "oracle"};

/// suite is one of kVerifySuites or "all"; anything else is a ConfigError.
std::vector<Check> run_verify(const RunConfig& config, std::string_view suite);

}  // namespace bcx
