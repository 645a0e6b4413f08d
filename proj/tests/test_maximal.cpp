#include <doctest.h>

#include <cmath>
#include <limits>

#include "shellmax/cayley.hpp"
#include "shellmax/errors.hpp"
#include "shellmax/maximal.hpp"

using namespace shellmax;

namespace {

using Q = FiniteFunction<mpq_class>;

mpq_class q(long p, long d = 1) {
  mpq_class v(p, d);
  v.canonicalize();
  return v;
}

Q rational_from(const FiniteFunction<double>& f) {
  std::vector<Q::Entry> entries;
  for (const auto& [x, v] : f.entries()) entries.emplace_back(x, mpq_class(v));
  return Q(std::move(entries));
}

}  // namespace

TEST_CASE("maximal function of delta_e") {
  const auto ball = enumerate(GroupModel::free(2), 6);
  const auto f = Q::delta(Element());
  const auto floor = eta_floor_for_window(ball, f, 4);
  CHECK(floor == q(1, 161));
  const auto prof = maximal_function(ball, f, floor);
  CHECK(prof.window_radius == 4);
  CHECK(prof.n_max == 5);
  CHECK(prof.values.size() == 161);
  CHECK(prof(Element()) == q(1, 5));
  for (const auto& [x, v] : prof.values) {
    if (x.is_identity()) continue;
    long b = 1;
    for (std::size_t k = 0; k < x.length(); ++k) b *= 3;
    CHECK(v == q(1, 2 * b - 1));
  }
}

TEST_CASE("maximal function of zero and of a ball indicator") {
  const auto ball = enumerate(GroupModel::free(2), 6);
  const auto zero = maximal_function(ball, Q(), q(1, 10));
  CHECK(zero.values.empty());
  CHECK(zero(Element()) == 0);
  CHECK(weak_type_ratio(zero).ratio == 0);

  const auto ind = Q::indicator(ball.closed_ball(1));
  const auto prof = maximal_function(ball, ind, eta_floor_for_window(ball, ind, 3));
  CHECK(prof(Element()) == 1);
}

TEST_CASE("maximal_function input checks") {
  const auto ball = enumerate(GroupModel::free(2), 4);
  CHECK_THROWS_AS(maximal_function(ball, Q::delta(Element(), q(-1)), q(1, 10)), std::invalid_argument);
  CHECK_THROWS_AS(maximal_function(ball, Q::delta(Element()), q(0)), std::invalid_argument);
  try {
    maximal_function(ball, Q::delta(Element()), q(1, 1000));
    FAIL("expected a resource error");
  } catch (const ResourceError& e) {
    CHECK(e.radius() == 5);
  }
}

TEST_CASE("weak type ratio examples") {
  const auto ball = enumerate(GroupModel::free(2), 7);
  const auto f = Q::delta(Element());
  const auto prof = maximal_function(ball, f, eta_floor_for_window(ball, f, 4));
  const auto w = weak_type_ratio(prof);
  CHECK(w.ratio == doctest::Approx(1.0));
  CHECK(prof.level_set_size(q(1, 5)) == 5);

  const auto ind = Q::indicator(ball.closed_ball(2));
  const auto p2 = maximal_function(ball, ind, eta_floor_for_window(ball, ind, 5));
  const auto w2 = weak_type_ratio(p2);
  CHECK(std::isfinite(w2.ratio));
  CHECK(w2.ratio > 0);
  CHECK_FALSE(w2.argmax_eta < p2.eta_floor);
}

TEST_CASE("window certificate") {
  const auto ball = enumerate(GroupModel::free(2), 8);
  Lcg rng(12);
  for (int trial = 0; trial < 5; ++trial) {
    std::vector<Q::Entry> entries;
    for (const auto& x : ball.closed_ball(2)) {
      if (rng.below(3) == 0) entries.emplace_back(x, q(1 + static_cast<long>(rng.below(4)), 1 + static_cast<long>(rng.below(3))));
    }
    if (entries.empty()) entries.emplace_back(Element(), q(1));
    const Q f(std::move(entries));
    const auto prof = maximal_function(ball, f, eta_floor_for_window(ball, f, 3));
    const int boundary = prof.window_radius + 1;
    CHECK(f.l1() / mpq_class(static_cast<long>(ball.ball_size(boundary))) < prof.eta_floor);
    // Every stored point is within W of the support; everything above the
    // floor is stored.
    for (const auto& [x, v] : prof.values) {
      std::size_t d = 1000;
      for (const auto& [y, fy] : f.entries()) d = std::min(d, distance(ball.model(), x, y));
      CHECK(d <= static_cast<std::size_t>(prof.window_radius));
    }
  }
}

TEST_CASE("sublinearity and left invariance") {
  const auto ball = enumerate(GroupModel::free(2), 9);
  const auto& g = ball.model();
  Lcg rng(4);
  for (int trial = 0; trial < 4; ++trial) {
    std::vector<Q::Entry> fe, he;
    for (const auto& x : ball.closed_ball(1)) {
      if (rng.below(2)) fe.emplace_back(x, q(1 + static_cast<long>(rng.below(3))));
      if (rng.below(2)) he.emplace_back(x, q(1 + static_cast<long>(rng.below(3))));
    }
    fe.emplace_back(Element(), q(1));
    he.emplace_back(Element(), q(2));
    const Q f(fe), h(he);
    std::vector<Q::Entry> se(fe);
    se.insert(se.end(), he.begin(), he.end());
    const Q sum(se);

    const auto floor = eta_floor_for_window(ball, sum, 4);
    const auto mf = maximal_function(ball, f, floor);
    const auto mh = maximal_function(ball, h, floor);
    const auto ms = maximal_function(ball, sum, floor);
    // M(f + h) <= Mf + Mh wherever all three are exact.
    for (const auto& [x, v] : mf.values) {
      if (x.length() > 3) continue;
      CHECK(ms(x) <= mf(x) + mh(x));
    }

    const auto w = parse_word(g, "a.b^-1");
    const auto moved = maximal_function(ball, translate(g, f, w), floor);
    REQUIRE(moved.values.size() == mf.values.size());
    for (const auto& [x, v] : mf.values) CHECK(moved(multiply(g, w, x)) == v);
  }
}

TEST_CASE("orlicz_sum examples") {
  const auto g = GroupModel::free(2);
  const auto x = parse_word(g, "a");
  const auto rec = orlicz_sum(Q::delta(x, q(4)), q(1), 1.0);
  CHECK(rec.value == doctest::Approx(8.0));
  CHECK(orlicz_sum(Q::delta(x, q(4)), q(1), 0.0).value == doctest::Approx(4.0));
  CHECK(orlicz_sum(Q::delta(x, q(4)), q(5), 2.0).value == 0);
  CHECK_THROWS_AS(orlicz_sum(Q::delta(x), q(0), 1.0), std::invalid_argument);
  CHECK_THROWS_AS(orlicz_sum(Q::delta(x), q(1), -1.0), std::invalid_argument);
}

TEST_CASE("orlicz weak ratio") {
  const auto ball = enumerate(GroupModel::free(2), 7);
  const Q f({{Element(), q(8)}, {parse_word(ball.model(), "a"), q(2)}});
  const auto prof = maximal_function(ball, f, eta_floor_for_window(ball, f, 4));
  // Above the sup norm the level set is empty and the ratio is zero, not +inf.
  CHECK(orlicz_weak_ratio(prof, q(9), 1.0) == 0);
  CHECK_THROWS_AS(orlicz_weak_ratio(prof, mpq_class(prof.eta_floor / 2), 1.0), std::invalid_argument);

  // c = 0 against the weak ratio at the same eta: |{Mf >= eta}| / sum_{f > eta} f/eta.
  const mpq_class eta = prof.eta_floor;
  const double level = static_cast<double>(prof.level_set_size(eta));
  double mass_above = 0;
  for (const auto& [x, v] : f.entries()) {
    if (eta < v) mass_above += mpq_class(v / eta).get_d();
  }
  CHECK(orlicz_weak_ratio(prof, eta, 0.0) == doctest::Approx(level / mass_above));
  CHECK(eta.get_d() * level / f.l1().get_d() <= weak_type_ratio(prof).ratio + 1e-12);
}

TEST_CASE("distributional check examples") {
  const auto ball = enumerate(GroupModel::free(2), 4);
  const auto rep = distributional_check(ball, Q::delta(Element()), 2, q(1, 12), 0.0);
  CHECK(rep.lhs == 12);
  double expected = 0;
  for (int n = 0; n <= 4; ++n) expected += std::pow(2.0, 1.5 * n);
  expected /= std::sqrt(12.0);
  CHECK(rep.rhs == doctest::Approx(expected).epsilon(1e-12));
  CHECK(rep.rhs == doctest::Approx(28.42).epsilon(1e-3));
  CHECK(std::abs(rep.ratio - 12 / expected) < 1e-9);

  CHECK(distributional_check(ball, Q(), 2, q(1), 0.0).lhs == 0);

  const auto s1 = Q::indicator(ball.sphere(1));
  const auto r1 = distributional_check(ball, s1, 1, q(1, 4), 0.0);
  CHECK(r1.lhs == static_cast<double>(sphere_average(ball, s1, 1).support_size()));
  CHECK(std::isfinite(r1.ratio));

  CHECK_THROWS_AS(distributional_check(ball, s1, 0, q(1), 0.0), std::invalid_argument);
}

TEST_CASE("distributional sweep dominates single checks") {
  const auto ball = enumerate(GroupModel::free(2), 4);
  const auto corpus = dyadic_corpus(ball, 1, 3, 2);
  for (const auto& fd : corpus) {
    const auto f = rational_from(fd);
    for (int r = 1; r <= 3; ++r) {
      const auto sweep = distributional_sweep(ball, f, r, 0.0);
      const auto avg = sphere_average(ball, f, r);
      for (const auto& [w, v] : avg.entries()) CHECK(distributional_check(ball, f, r, v, 0.0).ratio <= sweep.ratio);
    }
  }
}

TEST_CASE("dyadic corpus") {
  const auto ball = enumerate(GroupModel::free(2), 4);
  const auto a = dyadic_corpus(ball, 42, 20, 4);
  const auto b = dyadic_corpus(ball, 42, 20, 4);
  REQUIRE(a.size() == 20);
  for (std::size_t k = 0; k < a.size(); ++k) {
    CHECK(a[k] == b[k]);
    CHECK_FALSE(a[k].empty());
    for (const auto& [x, v] : a[k].entries()) {
      CHECK(x.length() <= 4);
      const int e = std::ilogb(v);
      CHECK(v == std::ldexp(1.0, e));
      CHECK(e >= 0);
      CHECK(e <= 5);
    }
  }
  CHECK_FALSE(dyadic_corpus(ball, 43, 1, 4)[0] == a[0]);
}

TEST_CASE("strong lp probe") {
  const auto ball = enumerate(GroupModel::free(2), 6);
  const auto delta = FiniteFunction<double>::delta(Element());
  const int radii[] = {1, 2, 3, 4, 5, 6};
  const auto inf_rows = strong_lp_probe(ball, delta, std::numeric_limits<double>::infinity(), radii, 3.0);
  const auto two_rows = strong_lp_probe(ball, delta, 2.0, radii, 3.0);
  for (std::size_t k = 0; k < 6; ++k) {
    const double b = static_cast<double>(ball.ball_size(radii[k]));
    CHECK(inf_rows[k].ratio == doctest::Approx(1.0 / b));
    CHECK(two_rows[k].ratio == doctest::Approx(1.0 / std::sqrt(b)));
  }
  CHECK_THROWS_AS(strong_lp_probe(ball, delta, 1.0, radii, 3.0), std::invalid_argument);

  const auto f = dyadic_corpus(ball, 7, 1, 3)[0];
  const auto rows = strong_lp_probe(ball, f, 2.0, radii, 3.0);
  for (std::size_t k = 1; k < rows.size(); ++k) {
    const double step = rows[k].partial_sum - rows[k - 1].partial_sum;
    CHECK(step > 0);
    CHECK(step < rows[k - 1].partial_sum);
  }
}
