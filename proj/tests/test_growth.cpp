#include <doctest.h>

#include <cmath>

#include "shellmax/cayley.hpp"
#include "shellmax/errors.hpp"
#include "shellmax/growth.hpp"

using namespace shellmax;

namespace {

// Independent check that the recurrence reproduces every term from its start.
bool reproduces(const LinearRecurrence& rec, const std::vector<std::uint64_t>& s) {
  for (std::size_t n = static_cast<std::size_t>(rec.start); n < s.size(); ++n) {
    std::int64_t value = 0;
    for (int k = 1; k <= rec.order(); ++k) {
      if (n < static_cast<std::size_t>(k)) return false;
      value += rec.coefficients[static_cast<std::size_t>(k - 1)] * static_cast<std::int64_t>(s[n - static_cast<std::size_t>(k)]);
    }
    if (value != static_cast<std::int64_t>(s[n])) return false;
  }
  return true;
}

}  // namespace

TEST_CASE("free group fit") {
  const auto sizes = enumerate(GroupModel::free(2), 10).sphere_sizes();
  const auto fit = fit_growth(sizes);
  REQUIRE(fit.recurrence.has_value());
  CHECK(fit.recurrence->coefficients == std::vector<std::int64_t>{3});
  CHECK(fit.recurrence->start == 2);
  CHECK(fit.d == 0);
  CHECK(fit.q == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(fit.c_gr == doctest::Approx(4.0 / 3.0).epsilon(1e-12));
  CHECK_FALSE(fit.polynomial_growth);
  CHECK_FALSE(fit.nonrational_evidence);
  CHECK(fit.predict(5) == doctest::Approx(243.0));
}

TEST_CASE("F2 x F2 fit has d = 1") {
  const auto f2 = enumerate(GroupModel::free(2), 12).sphere_sizes();
  const auto sizes = product_sphere_sizes(f2, f2);
  const auto fit = fit_growth(sizes);
  REQUIRE(fit.recurrence.has_value());
  CHECK(reproduces(*fit.recurrence, sizes));
  CHECK(fit.d == 1);
  CHECK(fit.q == doctest::Approx(3.0).epsilon(1e-9));
}

TEST_CASE("F2 x FreeProductCyclic(2,3) takes the larger rate") {
  const auto f2 = enumerate(GroupModel::free(2), 14).sphere_sizes();
  const auto c23 = enumerate(GroupModel::free_product_cyclic({2, 3}), 14).sphere_sizes();
  const auto sizes = product_sphere_sizes(f2, c23);
  const auto fit = fit_growth(sizes);
  REQUIRE(fit.recurrence.has_value());
  CHECK(reproduces(*fit.recurrence, sizes));
  CHECK(fit.d == 0);
  CHECK(fit.q == doctest::Approx(3.0).epsilon(1e-9));

  const auto alone = fit_growth(c23);
  CHECK(alone.d == 0);
  CHECK(alone.q == doctest::Approx(std::sqrt(2.0)).epsilon(1e-9));
}

TEST_CASE("RAAG P3 fit matches the empirical ratio") {
  const auto sizes = enumerate(parse_spec("raag vertices=a,b,c edges=a-b,b-c"), 10).sphere_sizes();
  const auto fit = fit_growth(sizes);
  REQUIRE(fit.recurrence.has_value());
  CHECK(reproduces(*fit.recurrence, sizes));
  const double empirical = static_cast<double>(sizes[10]) / static_cast<double>(sizes[9]);
  CHECK(std::abs(fit.q - empirical) < 1e-3);
  CHECK(fit.c_gr >= 1.0);
}

TEST_CASE("C_gr bounds every term") {
  for (const char* spec : {"free rank=3", "cyclicfreeproduct orders=3,4", "raag vertices=a,b,c,d edges=a-b,c-d"}) {
    CAPTURE(spec);
    const auto sizes = enumerate(parse_spec(spec), 8).sphere_sizes();
    const auto fit = fit_growth(sizes);
    for (int n = 1; n <= 8; ++n) {
      const double pred = fit.predict(n);
      CHECK(static_cast<double>(sizes[n]) <= fit.c_gr * pred * (1 + 1e-12));
      CHECK(pred <= fit.c_gr * static_cast<double>(sizes[n]) * (1 + 1e-12));
    }
  }
}

TEST_CASE("polynomial growth is flagged") {
  const auto fit = fit_growth(enumerate(GroupModel::zpower(2), 10).sphere_sizes());
  CHECK(fit.polynomial_growth);
  CHECK(fit.q == 1.0);
  CHECK(fit.d == 1);
  const auto fit3 = fit_growth(enumerate(GroupModel::zpower(3), 9).sphere_sizes());
  CHECK(fit3.polynomial_growth);
  CHECK(fit3.d == 2);
  CHECK_FALSE(has_exponential_growth(GroupModel::zpower(2)));
  CHECK_FALSE(has_exponential_growth(GroupModel::free_product_cyclic({2, 2})));
  CHECK(has_exponential_growth(GroupModel::free(2)));
  CHECK_THROWS_AS(require_exponential_growth(GroupModel::zpower(2)), PolynomialGrowthError);
}

TEST_CASE("nonrational fallback") {
  // Squares of primes: no short integer recurrence.
  const std::vector<std::uint64_t> s{1, 4, 9, 25, 49, 121, 169, 289, 361, 529, 841, 961};
  const auto fit = fit_growth(s);
  CHECK(fit.nonrational_evidence);
  CHECK_FALSE(fit.recurrence.has_value());
}

TEST_CASE("fit_growth input checks") {
  CHECK_THROWS_AS(fit_growth(std::vector<std::uint64_t>{1, 4, 12}), std::invalid_argument);
  CHECK_THROWS_AS(fit_growth(std::vector<std::uint64_t>{1, 4, 12, 0, 0, 0, 0, 0}), std::invalid_argument);
}

TEST_CASE("find_recurrence") {
  const std::vector<std::uint64_t> fib{1, 1, 2, 3, 5, 8, 13, 21, 34, 55};
  const auto rec = find_recurrence(fib);
  REQUIRE(rec.has_value());
  CHECK(rec->coefficients == std::vector<std::int64_t>{1, 1});
  CHECK(rec->start == 2);
}

TEST_CASE("dominant root") {
  // (x - 3)(x + 4) = x^2 + x - 12: largest real root 3.
  const auto r = dominant_real_root(std::vector<std::int64_t>{1, 1, -12});
  CHECK(r.value == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(r.multiplicity == 1);
  // (x - 2)^2 (x + 1)
  const auto r2 = dominant_real_root(std::vector<std::int64_t>{1, -3, 0, 4});
  CHECK(r2.value == doctest::Approx(2.0).epsilon(1e-12));
  CHECK(r2.multiplicity == 2);
  // (x - 1)^3
  const auto r3 = dominant_real_root(std::vector<std::int64_t>{1, -3, 3, -1});
  CHECK(r3.exactly_one);
  CHECK(r3.multiplicity == 3);
  // x^2 - 2
  CHECK(dominant_real_root(std::vector<std::int64_t>{1, 0, -2}).value == doctest::Approx(std::sqrt(2.0)).epsilon(1e-14));
}
