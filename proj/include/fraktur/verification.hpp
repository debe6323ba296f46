#pragma once

#include <string>
#include <string_view>
#include <vector>

namespace fraktur {

struct CheckResult {
  std::string name;
  bool pass = false;
  std::string measured;
};

/// homogeneous, profiles, anisotropy, gradients, wellposed, all.
std::vector<std::string> suite_names();

/// Runs the property checks of a suite. Throws InvalidArgument for unknown names.
std::vector<CheckResult> run_suite(std::string_view name);

}  // namespace fraktur
