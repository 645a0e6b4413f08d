#pragma once

#include <cstdint>
#include <map>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "shellmax/cayley.hpp"
#include "shellmax/group.hpp"
#include "shellmax/report.hpp"

namespace shellmax {

/// |{(u, v) in A x B : r <= d(u, v) < r + L}| by the double loop.
std::uint64_t correlation_count_direct(const GroupModel& model, std::span<const Element> a,
                                       std::span<const Element> b, int r, int width = 1);

/// The same count as <1_A, 1_B * 1_{SS_r}>.
std::uint64_t correlation_count_convolution(const LayeredBall& ball, std::span<const Element> a,
                                            std::span<const Element> b, int r, int width = 1);

/// Both routes; throws InvariantError if they differ. A and B must be
/// nonempty sets of distinct elements.
std::uint64_t correlation_count(const LayeredBall& ball, std::span<const Element> a, std::span<const Element> b,
                                int r, int width = 1);

/// lhs = correlation_count, rhs = r^b sqrt(|A| |B| |S_r|).
InequalityReport correlation_rd_ratio(const LayeredBall& ball, std::span<const Element> a,
                                      std::span<const Element> b, int r, double b_exponent);

/// lhs = |{(x, y) in E x F : d(x, y) = r}| for E in S_j, F in S_i,
/// rhs = min(|S_{r-m}| |E|, |S_m| |F|) with m = floor((j + r - i) / 2).
/// Requires |j - i| <= r. Throws std::invalid_argument on a layer-tag mismatch.
InequalityReport coarse_median_count(const LayeredBall& ball, std::span<const Element> e, int j,
                                     std::span<const Element> f, int i, int r);

struct SamplerConfig {
  std::uint64_t seed = 0;
  int layer_max = -1;  // defaults to r_max
};

struct CoarseMedianScan {
  std::vector<InequalityReport> reports;  // ordered by family, j, i, r
  double c0 = 0;                          // max lhs / (max(r,1)^d2 rhs)
};

/// Coarse-median counts over the fixed subset families (full spheres,
/// seeded random subsets of sizes 1, |S|/4, |S|/2, canonical-prefix
/// halves) for every admissible cell with r <= r_max. Refuses models of
/// polynomial growth.
CoarseMedianScan coarse_median_scan(const LayeredBall& ball, int r_max, const SamplerConfig& sampler, double d2);

/// Family names in scan order.
std::span<const std::string> coarse_median_families();

/// lhs = sum_m sum_{i = j + r - 2m} min(q^{r-m} |E_j|, q^m |F_i|),
/// rhs = 2 sqrt(|E| |F|) q^{r/2}.
InequalityReport minsum_bound_check(double q, const std::map<int, std::uint64_t>& levels_e,
                                    const std::map<int, std::uint64_t>& levels_f, int r);

/// C(x, y) = {z : d(x, z) + d(z, y) = d(x, y)}, sorted canonically. The ball
/// must have radius >= d(x, y).
std::vector<Element> interval(const LayeredBall& ball, const Element& x, const Element& y);

/// C(x, y) n C(x, z) n C(y, z); a singleton in a median space.
std::vector<Element> median_candidates(const LayeredBall& ball, const Element& x, const Element& y,
                                       const Element& z);

/// |C(x, y) n S(x, r)| for 0 <= r <= d(x, y).
std::uint64_t interval_sphere_count(const LayeredBall& ball, const Element& x, const Element& y, int r);

struct IntervalScan {
  std::vector<int> radii;                 // 1..max distance
  std::vector<std::uint64_t> max_counts;  // max over pairs with d >= r
  double slope = 0;                       // log-log slope of max_counts against r
};

IntervalScan interval_sphere_scan(const LayeredBall& ball, std::span<const std::pair<Element, Element>> pairs);

}  // namespace shellmax
