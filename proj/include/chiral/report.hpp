#pragma once

#include <string>
#include <utility>
#include <vector>

namespace chiral {

// One verified inequality or identity. For exact identities bound and
// observed are 0 and the residual count respectively.
struct Check {
  std::string name;
  double bound = 0.0;
  double observed = 0.0;
  double margin = 0.0;
  bool passed = false;
  std::string detail;
};

struct Report {
  Report() = default;
  explicit Report(std::string t) : title(std::move(t)) {}

  std::string title;
  std::vector<Check> checks;
  std::vector<std::string> warnings;

  // Passes when observed ≤ bound.
  Check& bound_check(std::string name, double bound, double observed, std::string detail = {}) {
    checks.push_back({std::move(name), bound, observed, bound - observed, observed <= bound, std::move(detail)});
    return checks.back();
  }
  Check& exact_check(std::string name, bool ok, std::string detail = {}) {
    checks.push_back({std::move(name), 0.0, ok ? 0.0 : 1.0, ok ? 0.0 : -1.0, ok, std::move(detail)});
    return checks.back();
  }
  bool passed() const {
    for (const auto& c : checks)
      if (!c.passed) return false;
    return true;
  }
};

}  // namespace chiral
