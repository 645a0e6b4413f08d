#pragma once

#include <cstdint>
#include <limits>
#include <string>
#include <utility>
#include <vector>

namespace shellmax {

/// One evaluated inequality lhs <= C * rhs with the constant set to one.
/// Count-valued sides are integers held exactly (below 2^53).
struct InequalityReport {
  std::string id;
  std::vector<std::pair<std::string, double>> parameters;
  double lhs = 0;
  double rhs = 0;
  double ratio = 0;
  std::uint64_t seed = 0;
  std::size_t size_a = 0;
  std::size_t size_b = 0;

  double parameter(const std::string& name) const {
    for (const auto& [k, v] : parameters) {
      if (k == name) return v;
    }
    return std::numeric_limits<double>::quiet_NaN();
  }
};

/// lhs/rhs, with 0/0 = 0 and lhs/0 = +inf.
inline double safe_ratio(double lhs, double rhs) {
  if (lhs == 0) return 0;
  if (rhs == 0) return std::numeric_limits<double>::infinity();
  return lhs / rhs;
}

}  // namespace shellmax
