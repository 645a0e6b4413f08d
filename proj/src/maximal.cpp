#include "shellmax/maximal.hpp"

#include <cmath>
#include <stdexcept>

namespace shellmax {

std::vector<FiniteFunction<double>> dyadic_corpus(const LayeredBall& ball, std::uint64_t seed, int count,
                                                  int support_radius) {
  detail::require_radius(ball, support_radius);
  if (count < 0) throw std::invalid_argument("dyadic_corpus: count must be >= 0");
  Lcg rng(seed);
  const auto points = ball.closed_ball(support_radius);
  std::vector<FiniteFunction<double>> out;
  out.reserve(static_cast<std::size_t>(count));
  for (int k = 0; k < count; ++k) {
    std::vector<FiniteFunction<double>::Entry> entries;
    for (const auto& x : points) {
      if (rng.below(4) != 0) continue;
      entries.emplace_back(x, std::ldexp(1.0, static_cast<int>(rng.below(6))));
    }
    if (entries.empty()) entries.emplace_back(identity(ball.model()), 1.0);
    out.emplace_back(std::move(entries));
  }
  return out;
}

namespace {

double lp_norm(const FiniteFunction<double>& g, double p) {
  if (std::isinf(p)) return g.linf();
  if (p == 2) return g.l2();
  double sum = 0;
  for (const auto& [x, v] : g.entries()) sum += std::pow(std::abs(v), p);
  return std::pow(sum, 1.0 / p);
}

FiniteFunction<double> ball_average(const LayeredBall& ball, const FiniteFunction<double>& f, int n) {
  const auto b = ball.closed_ball(n);
  const double size = static_cast<double>(b.size());
  std::unordered_map<Element, double, ElementHash> acc;
  acc.reserve(f.support_size() * b.size());
  for (const auto& [u, fu] : f.entries()) {
    const double a = std::abs(fu) / size;
    for (const auto& w : b) acc[multiply(ball.model(), u, w)] += a;
  }
  return FiniteFunction<double>::from_map(acc);
}

}  // namespace

std::vector<StrongLpRow> strong_lp_probe(const LayeredBall& ball, const FiniteFunction<double>& f, double p,
                                         std::span<const int> radii, double q) {
  if (!(p > 1)) throw std::invalid_argument("strong_lp_probe: p must be > 1");
  if (f.empty()) throw std::invalid_argument("strong_lp_probe: f must be nonzero");
  const double fp = lp_norm(f, p);
  const double f2 = f.l2();
  std::vector<StrongLpRow> rows;
  double partial = 0;
  for (int n : radii) {
    detail::require_radius(ball, n);
    const auto avg = ball_average(ball, f, n);
    StrongLpRow row{n, lp_norm(avg, p) / fp, avg.l2() / f2, 0};
    partial += std::pow(q, n / 8.0) * row.l2_ratio;
    row.partial_sum = partial;
    rows.push_back(row);
  }
  return rows;
}

}  // namespace shellmax
