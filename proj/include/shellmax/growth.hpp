#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "shellmax/group.hpp"

namespace shellmax {

/// s_n = sum_{k=1}^{order} coefficients[k-1] * s_{n-k} for every n >= start.
struct LinearRecurrence {
  std::vector<std::int64_t> coefficients;
  int start = 0;

  int order() const { return static_cast<int>(coefficients.size()); }
};

/// Almost-exact polynomial-exponential growth parameters of a sphere-size
/// sequence: C^-1 n^d q^n <= |S_n| <= C n^d q^n for the enumerated n >= 1.
struct GrowthFit {
  int d = 0;
  double q = 1.0;
  double c_gr = 1.0;
  bool polynomial_growth = false;     // dominant root is exactly 1
  bool nonrational_evidence = false;  // no recurrence found; regression fit
  std::optional<LinearRecurrence> recurrence;

  double predict(int n) const;
};

/// Minimal integer linear recurrence satisfied by a tail of `sizes`, found by
/// increasing order with exact rational solving. Every term from `start` on
/// must be reproduced, with at least `order` equations beyond the ones used
/// to solve. Returns nullopt when no recurrence of order <= sizes/2 exists.
std::optional<LinearRecurrence> find_recurrence(std::span<const std::uint64_t> sizes);

/// Needs at least 8 terms; rejects sequences with a vanishing term past n=0.
GrowthFit fit_growth(std::span<const std::uint64_t> sizes);

/// Largest real root of a polynomial with integer coefficients (highest
/// degree first), with its multiplicity.
struct DominantRoot {
  double value;
  int multiplicity;
  bool exactly_one;
};
DominantRoot dominant_real_root(std::span<const std::int64_t> coefficients);

/// Structural test for exponential growth of the supported families.
bool has_exponential_growth(const GroupModel& model);

/// Throws PolynomialGrowthError naming the model when q = 1.
void require_exponential_growth(const GroupModel& model);

}  // namespace shellmax
