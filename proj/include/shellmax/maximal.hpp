#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <optional>
#include <span>
#include <unordered_map>
#include <unordered_set>
#include <vector>

#include "shellmax/cayley.hpp"
#include "shellmax/errors.hpp"
#include "shellmax/harmonic.hpp"
#include "shellmax/prng.hpp"
#include "shellmax/report.hpp"

namespace shellmax {

/// Hardy-Littlewood maximal function Mf(x) = max_{n >= 1} avg_{B_n(x)} f on
/// the certified window {x : d(x, supp f) <= W}. Every point outside the
/// window has Mf < eta_floor, so level sets {Mf >= eta} with
/// eta >= eta_floor are exact.
template <Scalar T>
struct MaximalProfile {
  FiniteFunction<T> f;
  int window_radius = 0;
  int n_max = 1;  // largest ball radius examined
  T eta_floor{};
  std::vector<std::pair<Element, T>> values;  // canonical order

  T operator()(const Element& x) const {
    auto it = std::lower_bound(values.begin(), values.end(), x,
                               [](const auto& e, const Element& key) { return e.first < key; });
    return it != values.end() && it->first == x ? it->second : T(0);
  }

  /// |{x : Mf(x) >= eta}|, defined for eta >= eta_floor.
  std::size_t level_set_size(const T& eta) const {
    if (eta < eta_floor) throw std::invalid_argument("level set below the certified floor");
    return static_cast<std::size_t>(std::count_if(values.begin(), values.end(),
                                                  [&](const auto& e) { return !(e.second < eta); }));
  }
};

/// Floor whose certified window has radius `depth`: ||f||_1 / |B_depth|.
template <Scalar T>
T eta_floor_for_window(const LayeredBall& ball, const FiniteFunction<T>& f, int depth) {
  detail::require_radius(ball, depth);
  return f.l1() / T(static_cast<long>(ball.ball_size(depth)));
}

namespace detail {

// Least D >= 1 with ||f||_1 < eta * |B_D|.
template <Scalar T>
int certified_radius(const std::vector<std::uint64_t>& ball_sizes, const T& l1, const T& eta, int limit) {
  for (int d = 1; d <= limit; ++d) {
    if (l1 < eta * T(static_cast<long>(ball_sizes[static_cast<std::size_t>(d)]))) return d;
  }
  return limit + 1;
}

}  // namespace detail

/// Exact maximal profile. The ball must reach both the window radius and the
/// largest examined averaging radius; otherwise ResourceError names the
/// radius required.
template <Scalar T>
MaximalProfile<T> maximal_function(const LayeredBall& ball, const FiniteFunction<T>& f, const T& eta_floor) {
  if (!f.is_nonnegative()) throw std::invalid_argument("maximal_function: f must be nonnegative");
  if (!(T(0) < eta_floor)) throw std::invalid_argument("maximal_function: eta_floor must be positive");
  const GroupModel& model = ball.model();

  MaximalProfile<T> profile;
  profile.f = f;
  profile.eta_floor = eta_floor;
  if (f.empty()) return profile;

  std::vector<std::uint64_t> ball_sizes;
  for (int n = 0; n <= ball.radius(); ++n) ball_sizes.push_back(ball.ball_size(n));
  const int certified = detail::certified_radius(ball_sizes, f.l1(), eta_floor, ball.radius());
  if (certified > ball.radius()) {
    throw ResourceError(certified, "maximal_function: certifying eta_floor needs a ball of radius > " +
                                       std::to_string(ball.radius()));
  }
  profile.window_radius = certified - 1;
  profile.n_max = certified;

  std::unordered_set<Element, ElementHash> window;
  for (const auto& [y, fy] : f.entries()) {
    for (const auto& w : ball.closed_ball(profile.window_radius)) window.insert(multiply(model, y, w));
  }
  std::vector<Element> points(window.begin(), window.end());
  std::sort(points.begin(), points.end());

  std::vector<T> by_distance(static_cast<std::size_t>(profile.n_max) + 1);
  profile.values.reserve(points.size());
  for (const auto& x : points) {
    std::fill(by_distance.begin(), by_distance.end(), T(0));
    const Element xinv = invert(model, x);
    for (const auto& [y, fy] : f.entries()) {
      const auto d = multiply(model, xinv, y).length();
      if (d <= static_cast<std::size_t>(profile.n_max)) by_distance[d] += fy;
    }
    T running = by_distance[0];
    T best(0);
    for (int n = 1; n <= profile.n_max; ++n) {
      running += by_distance[static_cast<std::size_t>(n)];
      const T avg = running / T(static_cast<long>(ball_sizes[static_cast<std::size_t>(n)]));
      if (best < avg) best = avg;
    }
    profile.values.emplace_back(x, best);
  }
  return profile;
}

template <Scalar T>
struct WeakTypeRatio {
  double ratio = 0;
  T argmax_eta{};
};

/// sup over attained eta >= eta_floor of eta |{Mf >= eta}| / ||f||_1.
template <Scalar T>
WeakTypeRatio<T> weak_type_ratio(const MaximalProfile<T>& profile) {
  WeakTypeRatio<T> out;
  if (profile.f.empty()) return out;
  std::vector<T> attained;
  for (const auto& [x, v] : profile.values) {
    if (!(v < profile.eta_floor)) attained.push_back(v);
  }
  std::sort(attained.begin(), attained.end(), [](const T& a, const T& b) { return b < a; });
  T best(0);
  for (std::size_t k = 0; k < attained.size(); ++k) {
    if (k + 1 < attained.size() && attained[k + 1] == attained[k]) continue;
    const T score = attained[k] * T(static_cast<long>(k + 1));
    if (best < score) {
      best = score;
      out.argmax_eta = attained[k];
    }
  }
  out.ratio = to_double(T(best / profile.f.l1()));
  return out;
}

struct OrliczRecord {
  double eta;
  double c;
  double value;
};

/// sum_{f > eta} (f/eta) (log2(f/eta))^c.
template <Scalar T>
OrliczRecord orlicz_sum(const FiniteFunction<T>& f, const T& eta, double c) {
  if (!(T(0) < eta)) throw std::invalid_argument("orlicz_sum: eta must be positive");
  if (c < 0) throw std::invalid_argument("orlicz_sum: c must be >= 0");
  double total = 0;
  for (const auto& [x, v] : f.entries()) {
    const T a = v < T(0) ? T(-v) : v;
    if (eta < a) {
      const double t = to_double(T(a / eta));
      total += c == 0 ? t : t * std::pow(std::log2(t), c);
    }
  }
  return {to_double(eta), c, total};
}

/// |{Mf >= eta}| / orlicz_sum(f, eta, c); +inf when the sum vanishes on a
/// nonempty level set.
template <Scalar T>
double orlicz_weak_ratio(const MaximalProfile<T>& profile, const T& eta, double c) {
  const auto level = static_cast<double>(profile.level_set_size(eta));
  return safe_ratio(level, orlicz_sum(profile.f, eta, c).value);
}

/// Both sides of the distributional inequality for the sphere average:
/// lhs = |{w : (f * sigma_r)(w) >= eta}|,
/// rhs = r^{2b} sum_{1 <= 2^n <= 2|S_r|} sqrt(2^n/|S_r|) 2^n |{f >= 2^{n-1} eta}|.
template <Scalar T>
InequalityReport distributional_check(const LayeredBall& ball, const FiniteFunction<T>& f, int r, const T& eta,
                                      double b);

namespace detail {

template <Scalar T>
FiniteFunction<T> sphere_scatter(const LayeredBall& ball, const FiniteFunction<T>& f, int r) {
  require_radius(ball, r);
  const auto sphere = ball.sphere(r);
  std::unordered_map<Element, T, ElementHash> acc;
  acc.reserve(f.support_size() * sphere.size());
  for (const auto& [u, fu] : f.entries()) {
    for (const auto& s : sphere) acc[multiply(ball.model(), u, s)] += fu;
  }
  const T size(static_cast<long>(sphere.size()));
  for (auto& [w, v] : acc) v /= size;
  return FiniteFunction<T>::from_map(acc);
}

// Values sorted descending, for counting {g >= t} by binary search.
template <Scalar T>
std::vector<T> descending_values(const FiniteFunction<T>& g) {
  std::vector<T> v;
  for (const auto& [x, value] : g.entries()) v.push_back(value);
  std::sort(v.begin(), v.end(), [](const T& a, const T& b) { return b < a; });
  return v;
}

template <Scalar T>
std::size_t count_at_least(const std::vector<T>& desc, const T& t) {
  return static_cast<std::size_t>(
      std::partition_point(desc.begin(), desc.end(), [&](const T& v) { return !(v < t); }) - desc.begin());
}

template <Scalar T>
double distributional_rhs(const std::vector<T>& f_desc, std::size_t sphere_size, int r, const T& eta, double b) {
  double sum = 0;
  for (int n = 0; (std::uint64_t{1} << n) <= 2 * sphere_size; ++n) {
    const double p = std::ldexp(1.0, n);
    T threshold = eta;
    if (n == 0) {
      threshold /= T(2);
    } else {
      threshold *= T(static_cast<long>(std::uint64_t{1} << (n - 1)));
    }
    sum += std::sqrt(p / static_cast<double>(sphere_size)) * p * static_cast<double>(count_at_least(f_desc, threshold));
  }
  return std::pow(static_cast<double>(r), 2 * b) * sum;
}

}  // namespace detail

template <Scalar T>
InequalityReport distributional_check(const LayeredBall& ball, const FiniteFunction<T>& f, int r, const T& eta,
                                      double b) {
  if (r < 1) throw std::invalid_argument("distributional_check needs r >= 1");
  if (!f.is_nonnegative()) throw std::invalid_argument("distributional_check: f must be nonnegative");
  if (!(T(0) < eta)) throw std::invalid_argument("distributional_check: eta must be positive");
  const auto averaged = detail::sphere_scatter(ball, f, r);
  const auto avg_desc = detail::descending_values(averaged);
  const auto f_desc = detail::descending_values(f);
  InequalityReport rep;
  rep.id = "distributional";
  rep.parameters = {{"r", r}, {"eta", to_double(eta)}, {"b", b}};
  rep.lhs = static_cast<double>(detail::count_at_least(avg_desc, eta));
  rep.rhs = detail::distributional_rhs(f_desc, ball.sphere_size(r), r, eta, b);
  rep.ratio = safe_ratio(rep.lhs, rep.rhs);
  rep.size_a = f.support_size();
  return rep;
}

/// Largest lhs/rhs over the attained values eta of f * sigma_r.
template <Scalar T>
InequalityReport distributional_sweep(const LayeredBall& ball, const FiniteFunction<T>& f, int r, double b) {
  if (r < 1) throw std::invalid_argument("distributional_sweep needs r >= 1");
  const auto averaged = detail::sphere_scatter(ball, f, r);
  const auto avg_desc = detail::descending_values(averaged);
  const auto f_desc = detail::descending_values(f);
  InequalityReport best;
  best.id = "distributional";
  best.parameters = {{"r", r}, {"eta", 0.0}, {"b", b}};
  best.size_a = f.support_size();
  for (std::size_t k = 0; k < avg_desc.size(); ++k) {
    if (k + 1 < avg_desc.size() && avg_desc[k + 1] == avg_desc[k]) continue;
    const double lhs = static_cast<double>(k + 1);
    const double rhs = detail::distributional_rhs(f_desc, ball.sphere_size(r), r, avg_desc[k], b);
    const double ratio = safe_ratio(lhs, rhs);
    if (ratio > best.ratio) {
      best.lhs = lhs;
      best.rhs = rhs;
      best.ratio = ratio;
      best.parameters[1].second = to_double(avg_desc[k]);
    }
  }
  return best;
}

/// Seeded corpus of dyadic-valued functions on the closed ball of radius
/// `support_radius`: each point kept with probability 1/4, value 2^k with
/// k uniform in {0,...,5}.
std::vector<FiniteFunction<double>> dyadic_corpus(const LayeredBall& ball, std::uint64_t seed, int count,
                                                  int support_radius);

struct StrongLpRow {
  int n;
  double ratio;        // ||beta_n * |f| ||_p / ||f||_p
  double l2_ratio;     // same with p = 2
  double partial_sum;  // sum_{k <= n} q^{k/8} l2_ratio_k
};

/// Exact l^p norms of ball averages of |f| (p in (1, inf], inf allowed).
std::vector<StrongLpRow> strong_lp_probe(const LayeredBall& ball, const FiniteFunction<double>& f, double p,
                                         std::span<const int> radii, double q);

}  // namespace shellmax
