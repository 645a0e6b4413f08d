#include "shellmax/geometry.hpp"

#include <algorithm>
#include <array>
#include <cmath>
#include <stdexcept>
#include <unordered_set>

#include "shellmax/errors.hpp"
#include "shellmax/growth.hpp"
#include "shellmax/harmonic.hpp"
#include "shellmax/prng.hpp"

namespace shellmax {

std::vector<std::size_t> sample_indices(Lcg& rng, std::size_t n, std::size_t k) {
  if (k > n) throw std::invalid_argument("sample larger than population");
  std::vector<std::size_t> pool(n);
  for (std::size_t i = 0; i < n; ++i) pool[i] = i;
  for (std::size_t i = 0; i < k; ++i) {
    const std::size_t j = i + static_cast<std::size_t>(rng.below(n - i));
    std::swap(pool[i], pool[j]);
  }
  pool.resize(k);
  std::sort(pool.begin(), pool.end());
  return pool;
}

namespace {

void require_nonempty_sets(std::span<const Element> a, std::span<const Element> b) {
  if (a.empty() || b.empty()) throw std::invalid_argument("correlation sets must be nonempty");
}

}  // namespace

std::uint64_t correlation_count_direct(const GroupModel& model, std::span<const Element> a,
                                       std::span<const Element> b, int r, int width) {
  std::uint64_t count = 0;
  for (const auto& u : a) {
    for (const auto& v : b) {
      const auto d = static_cast<int>(distance(model, u, v));
      if (d >= r && d < r + width) ++count;
    }
  }
  return count;
}

std::uint64_t correlation_count_convolution(const LayeredBall& ball, std::span<const Element> a,
                                            std::span<const Element> b, int r, int width) {
  detail::require_radius(ball, r + width - 1);
  std::vector<Element> shell;
  for (int n = r; n < r + width; ++n) shell.insert(shell.end(), ball.sphere(n).begin(), ball.sphere(n).end());
  using F = FiniteFunction<std::int64_t>;
  const F correlated = convolve(ball.model(), F::indicator(b), F::indicator(shell));
  std::int64_t total = 0;
  for (const auto& u : a) total += correlated(u);
  return static_cast<std::uint64_t>(total);
}

std::uint64_t correlation_count(const LayeredBall& ball, std::span<const Element> a, std::span<const Element> b,
                                int r, int width) {
  require_nonempty_sets(a, b);
  if (r < 0 || width < 1) throw std::invalid_argument("need r >= 0 and width >= 1");
  const auto direct = correlation_count_direct(ball.model(), a, b, r, width);
  const auto via_convolution = correlation_count_convolution(ball, a, b, r, width);
  if (direct != via_convolution) {
    throw InvariantError("correlation_count: double loop gives " + std::to_string(direct) +
                         " but the convolution identity gives " + std::to_string(via_convolution));
  }
  return direct;
}

InequalityReport correlation_rd_ratio(const LayeredBall& ball, std::span<const Element> a,
                                      std::span<const Element> b, int r, double b_exponent) {
  InequalityReport rep;
  rep.id = "correlation_rd";
  rep.parameters = {{"r", r}, {"L", 1}, {"b", b_exponent}};
  rep.lhs = static_cast<double>(correlation_count(ball, a, b, r));
  rep.rhs = std::pow(static_cast<double>(r), b_exponent) *
            std::sqrt(static_cast<double>(a.size()) * static_cast<double>(b.size()) *
                      static_cast<double>(ball.sphere_size(r)));
  rep.ratio = safe_ratio(rep.lhs, rep.rhs);
  rep.size_a = a.size();
  rep.size_b = b.size();
  return rep;
}

namespace {

void check_layer(std::span<const Element> set, int layer, const char* name) {
  for (const auto& x : set) {
    if (x.length() != static_cast<std::size_t>(layer)) {
      throw std::invalid_argument(std::string("layer-tag mismatch: ") + name + " is not inside S_" +
                                  std::to_string(layer));
    }
  }
}

InequalityReport coarse_median_cell(const LayeredBall& ball, std::size_t size_e, int j, std::size_t size_f, int i,
                                    int r, std::uint64_t lhs) {
  const int m = (j + r - i) / 2;
  InequalityReport rep;
  rep.id = "coarse_median";
  rep.parameters = {{"j", j}, {"i", i}, {"r", r}, {"m", m}};
  rep.lhs = static_cast<double>(lhs);
  rep.rhs = std::min(static_cast<double>(ball.sphere_size(r - m)) * static_cast<double>(size_e),
                     static_cast<double>(ball.sphere_size(m)) * static_cast<double>(size_f));
  rep.ratio = safe_ratio(rep.lhs, rep.rhs);
  rep.size_a = size_e;
  rep.size_b = size_f;
  return rep;
}

// Distance histogram of E x F.
std::vector<std::uint64_t> pair_distances(const GroupModel& model, std::span<const Element> e,
                                          std::span<const Element> f, int max_distance) {
  std::vector<std::uint64_t> hist(static_cast<std::size_t>(max_distance) + 1, 0);
  for (const auto& x : e) {
    const Element xinv = invert(model, x);
    for (const auto& y : f) ++hist[multiply(model, xinv, y).length()];
  }
  return hist;
}

}  // namespace

InequalityReport coarse_median_count(const LayeredBall& ball, std::span<const Element> e, int j,
                                     std::span<const Element> f, int i, int r) {
  if (j < 0 || i < 0 || r < std::abs(j - i)) throw std::invalid_argument("coarse_median_count needs |j - i| <= r");
  detail::require_radius(ball, r);
  check_layer(e, j, "E");
  check_layer(f, i, "F");
  std::uint64_t lhs = 0;
  for (const auto& x : e) {
    for (const auto& y : f) {
      if (distance(ball.model(), x, y) == static_cast<std::size_t>(r)) ++lhs;
    }
  }
  return coarse_median_cell(ball, e.size(), j, f.size(), i, r, lhs);
}

std::span<const std::string> coarse_median_families() {
  static const std::array<std::string, 5> names{"full", "random_one", "random_quarter", "random_half",
                                                "prefix_half"};
  return names;
}

CoarseMedianScan coarse_median_scan(const LayeredBall& ball, int r_max, const SamplerConfig& sampler, double d2) {
  require_exponential_growth(ball.model());
  if (r_max < 0) throw std::invalid_argument("r_max must be >= 0");
  const int layer_max = sampler.layer_max < 0 ? r_max : sampler.layer_max;
  detail::require_radius(ball, std::max(r_max, layer_max));

  // Per family, the E and F subsets of each layer, drawn in a fixed order.
  const auto families = coarse_median_families();
  Lcg rng(sampler.seed);
  std::vector<std::vector<std::vector<Element>>> e_sets(families.size()), f_sets(families.size());
  for (std::size_t fam = 0; fam < families.size(); ++fam) {
    for (auto* sets : {&e_sets[fam], &f_sets[fam]}) {
      for (int layer = 0; layer <= layer_max; ++layer) {
        const auto sphere = ball.sphere(layer);
        const std::size_t n = sphere.size();
        std::vector<Element> subset;
        if (fam == 0) {
          subset.assign(sphere.begin(), sphere.end());
        } else if (fam == 4) {
          subset.assign(sphere.begin(), sphere.begin() + static_cast<std::ptrdiff_t>((n + 1) / 2));
        } else {
          const std::size_t k = fam == 1 ? 1 : fam == 2 ? (n + 3) / 4 : (n + 1) / 2;
          for (std::size_t idx : sample_indices(rng, n, k)) subset.push_back(sphere[idx]);
        }
        sets->push_back(std::move(subset));
      }
    }
  }

  CoarseMedianScan scan;
  for (std::size_t fam = 0; fam < families.size(); ++fam) {
    for (int j = 0; j <= layer_max; ++j) {
      for (int i = 0; i <= layer_max; ++i) {
        const int r_lo = std::abs(j - i);
        const int r_hi = std::min(r_max, j + i);
        if (r_lo > r_hi) continue;
        const auto& e = e_sets[fam][static_cast<std::size_t>(j)];
        const auto& f = f_sets[fam][static_cast<std::size_t>(i)];
        const auto hist = pair_distances(ball.model(), e, f, j + i);
        for (int r = r_lo; r <= r_hi; ++r) {
          InequalityReport rep = coarse_median_cell(ball, e.size(), j, f.size(), i, r, hist[static_cast<std::size_t>(r)]);
          rep.id = "coarse_median/" + families[fam];
          rep.parameters.emplace_back("d2", d2);
          rep.seed = sampler.seed;
          const double scaled = safe_ratio(rep.lhs, std::pow(std::max(1.0, static_cast<double>(r)), d2) * rep.rhs);
          scan.c0 = std::max(scan.c0, scaled);
          scan.reports.push_back(std::move(rep));
        }
      }
    }
  }
  return scan;
}

InequalityReport minsum_bound_check(double q, const std::map<int, std::uint64_t>& levels_e,
                                    const std::map<int, std::uint64_t>& levels_f, int r) {
  if (!(q > 1)) throw std::invalid_argument("minsum_bound_check needs q > 1");
  if (r < 0) throw std::invalid_argument("minsum_bound_check needs r >= 0");
  double lhs = 0;
  double total_e = 0;
  double total_f = 0;
  for (const auto& [j, ej] : levels_e) total_e += static_cast<double>(ej);
  for (const auto& [i, fi] : levels_f) total_f += static_cast<double>(fi);
  for (int m = 0; m <= r; ++m) {
    for (const auto& [j, ej] : levels_e) {
      auto it = levels_f.find(j + r - 2 * m);
      if (it == levels_f.end()) continue;
      lhs += std::min(std::pow(q, r - m) * static_cast<double>(ej), std::pow(q, m) * static_cast<double>(it->second));
    }
  }
  InequalityReport rep;
  rep.id = "minsum_bound";
  rep.parameters = {{"q", q}, {"r", r}};
  rep.lhs = lhs;
  rep.rhs = 2.0 * std::sqrt(total_e) * std::sqrt(total_f) * std::pow(q, 0.5 * r);
  rep.ratio = safe_ratio(rep.lhs, rep.rhs);
  rep.size_a = static_cast<std::size_t>(total_e);
  rep.size_b = static_cast<std::size_t>(total_f);
  return rep;
}

std::vector<Element> interval(const LayeredBall& ball, const Element& x, const Element& y) {
  const GroupModel& model = ball.model();
  const auto d = distance(model, x, y);
  detail::require_radius(ball, static_cast<int>(d));
  std::vector<Element> out;
  for (const auto& w : ball.closed_ball(static_cast<int>(d))) {
    Element z = multiply(model, x, w);
    if (w.length() + distance(model, z, y) == d) out.push_back(std::move(z));
  }
  std::sort(out.begin(), out.end());
  return out;
}

std::vector<Element> median_candidates(const LayeredBall& ball, const Element& x, const Element& y,
                                       const Element& z) {
  const GroupModel& model = ball.model();
  const auto dxy = distance(model, x, y);
  const auto dxz = distance(model, x, z);
  const auto dyz = distance(model, y, z);
  detail::require_radius(ball, static_cast<int>(std::max({dxy, dxz, dyz})));
  std::vector<Element> out;
  for (auto& c : interval(ball, x, y)) {
    const auto cx = distance(model, x, c);
    const auto cy = distance(model, y, c);
    const auto cz = distance(model, z, c);
    if (cx + cz == dxz && cy + cz == dyz) out.push_back(std::move(c));
  }
  return out;
}

std::uint64_t interval_sphere_count(const LayeredBall& ball, const Element& x, const Element& y, int r) {
  const GroupModel& model = ball.model();
  const auto d = static_cast<int>(distance(model, x, y));
  if (r < 0 || r > d) throw std::invalid_argument("interval_sphere_count needs 0 <= r <= d(x, y)");
  detail::require_radius(ball, r);
  std::uint64_t count = 0;
  for (const auto& w : ball.sphere(r)) {
    if (static_cast<int>(distance(model, multiply(model, x, w), y)) == d - r) ++count;
  }
  return count;
}

IntervalScan interval_sphere_scan(const LayeredBall& ball, std::span<const std::pair<Element, Element>> pairs) {
  IntervalScan scan;
  int max_d = 0;
  for (const auto& [x, y] : pairs) max_d = std::max(max_d, static_cast<int>(distance(ball.model(), x, y)));
  for (int r = 1; r <= max_d; ++r) {
    std::uint64_t best = 0;
    for (const auto& [x, y] : pairs) {
      if (static_cast<int>(distance(ball.model(), x, y)) >= r) {
        best = std::max(best, interval_sphere_count(ball, x, y, r));
      }
    }
    scan.radii.push_back(r);
    scan.max_counts.push_back(best);
  }
  if (scan.radii.size() >= 2) {
    std::vector<double> xs(scan.radii.begin(), scan.radii.end());
    std::vector<double> ys(scan.max_counts.begin(), scan.max_counts.end());
    scan.slope = loglog_slope(xs, ys);
  }
  return scan;
}

}  // namespace shellmax
