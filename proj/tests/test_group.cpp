#include <doctest.h>

#include <algorithm>
#include <map>
#include <set>

#include "shellmax/cayley.hpp"
#include "shellmax/errors.hpp"
#include "shellmax/group.hpp"
#include "shellmax/prng.hpp"

using namespace shellmax;

namespace {

Element random_word(const GroupModel& g, Lcg& rng, int max_len) {
  const auto gens = g.generating_set();
  Element x;
  const auto n = rng.below(static_cast<std::uint64_t>(max_len) + 1);
  for (std::uint64_t k = 0; k < n; ++k) x = multiply(g, x, gens[rng.below(gens.size())]);
  return x;
}

std::vector<GroupModel> sample_models() {
  return {parse_spec("free rank=2"),
          parse_spec("free rank=3"),
          parse_spec("cyclicfreeproduct orders=2,3"),
          parse_spec("cyclicfreeproduct orders=4,5,2"),
          parse_spec("raag vertices=a,b,c edges=a-b,b-c"),
          parse_spec("raag vertices=a,b,c,d edges=a-b,b-c,c-d,a-d"),
          parse_spec("zd dim=3"),
          parse_spec("product (free rank=2) (cyclicfreeproduct orders=2,3)")};
}

// Reduced words of a RAAG element by brute-force closure under commutation
// of adjacent commuting letters and deletion of adjacent inverse pairs; the
// shortlex least word of minimal length.
using RawWord = std::vector<Letter>;

RawWord naive_raag_normal_form(const std::set<std::pair<int, int>>& commute, RawWord w) {
  auto commutes = [&](Letter x, Letter y) {
    const int i = x >> 1, j = y >> 1;
    return i != j && commute.count({std::min(i, j), std::max(i, j)}) > 0;
  };
  std::set<RawWord> seen{w};
  std::vector<RawWord> frontier{w};
  RawWord best = w;
  auto better = [](const RawWord& a, const RawWord& b) {
    return a.size() != b.size() ? a.size() < b.size() : a < b;
  };
  while (!frontier.empty()) {
    RawWord cur = frontier.back();
    frontier.pop_back();
    if (better(cur, best)) best = cur;
    for (std::size_t k = 0; k + 1 < cur.size(); ++k) {
      RawWord next = cur;
      if ((cur[k] ^ 1) == cur[k + 1]) {
        next.erase(next.begin() + static_cast<long>(k), next.begin() + static_cast<long>(k) + 2);
      } else if (commutes(cur[k], cur[k + 1])) {
        std::swap(next[k], next[k + 1]);
      } else {
        continue;
      }
      if (seen.insert(next).second) frontier.push_back(next);
    }
  }
  return best;
}

// |S_n| of a free product of cyclic groups by recursion on the last syllable.
std::vector<std::uint64_t> free_product_counts(const std::vector<int>& orders, int radius) {
  auto syllables = [](int m, int len) -> std::uint64_t {
    if (2 * len < m) return 2;
    if (2 * len == m) return 1;
    return 0;
  };
  const std::size_t n_factors = orders.size();
  std::vector<std::vector<std::uint64_t>> ending(static_cast<std::size_t>(radius) + 1,
                                                 std::vector<std::uint64_t>(n_factors, 0));
  std::vector<std::uint64_t> total(static_cast<std::size_t>(radius) + 1, 0);
  total[0] = 1;
  for (int n = 1; n <= radius; ++n) {
    for (std::size_t i = 0; i < n_factors; ++i) {
      std::uint64_t sum = 0;
      for (int len = 1; len <= n; ++len) {
        sum += syllables(orders[i], len) * (total[n - len] - ending[n - len][i]);
      }
      ending[n][i] = sum;
      total[n] += sum;
    }
  }
  return total;
}

}  // namespace

TEST_CASE("parse_spec examples") {
  const auto f2 = parse_spec("free rank=2");
  CHECK(f2 == GroupModel::free(2));
  CHECK(f2.generating_set().size() == 4);

  const auto p3 = parse_spec("raag vertices=a,b,c edges=a-b,b-c");
  CHECK(p3 == GroupModel::raag({"a", "b", "c"}, {{0, 1}, {1, 2}}));

  const auto prod = parse_spec("product (free rank=2) (free rank=2)");
  CHECK(prod == GroupModel::product(GroupModel::free(2), GroupModel::free(2)));
  CHECK(prod.generating_set().size() == 8);
}

TEST_CASE("parse_spec round trip") {
  for (const auto& g : sample_models()) {
    CAPTURE(g.to_spec());
    CHECK(parse_spec(g.to_spec()) == g);
  }
  CHECK(parse_spec("  free   rank = 3 ") == GroupModel::free(3));
  CHECK(parse_spec("raag vertices=x,y") == GroupModel::raag({"x", "y"}, {}));
}

TEST_CASE("parse_spec errors carry positions") {
  auto position_of = [](const char* text) -> long {
    try {
      parse_spec(text);
    } catch (const SpecError& e) {
      return static_cast<long>(e.position());
    }
    return -1;
  };
  CHECK(position_of("hyperbolic rank=2") == 0);
  CHECK(position_of("raag vertices=a,b edges=a-c") == 26);
  CHECK(position_of("cyclicfreeproduct orders=2,1") >= 27);
  CHECK(position_of("cyclicfreeproduct orders=3") >= 0);
  CHECK(position_of("raag vertices=a,b edges=a-a") >= 0);
  CHECK(position_of("raag vertices=a,b edges=a-b,b-a") >= 0);
  CHECK(position_of("raag vertices=a,a") >= 0);
  CHECK(position_of("free rank=2 extra") == 12);
  CHECK(position_of("product (free rank=2)") >= 0);
  CHECK(position_of("free rank=0") >= 0);
  CHECK_THROWS_AS(parse_spec(""), std::invalid_argument);
}

TEST_CASE("multiply examples") {
  const auto f2 = GroupModel::free(2);
  CHECK(multiply(f2, parse_word(f2, "a"), parse_word(f2, "a^-1")).is_identity());

  const auto ab = GroupModel::raag({"a", "b"}, {{0, 1}});
  CHECK(multiply(ab, parse_word(ab, "a.b"), parse_word(ab, "a")) == parse_word(ab, "a^2.b"));
  CHECK(format_word(ab, parse_word(ab, "b.a.b^-1.a")) == "a^2");

  const auto c23 = GroupModel::free_product_cyclic({2, 3});
  CHECK(multiply(c23, parse_word(c23, "b"), parse_word(c23, "b^2")).is_identity());
}

TEST_CASE("length examples") {
  const auto f2 = GroupModel::free(2);
  CHECK(length(f2, parse_word(f2, "a.b^-1.a")) == 3);

  const auto c23 = GroupModel::free_product_cyclic({2, 3});
  CHECK(length(c23, parse_word(c23, "b^2")) == 1);
  CHECK(length(c23, parse_word(c23, "a^2")) == 0);

  const auto z2 = GroupModel::zpower(2);
  CHECK(length(z2, parse_word(z2, "a^3.b^-2")) == 5);
}

TEST_CASE("distance examples") {
  const auto f2 = GroupModel::free(2);
  CHECK(distance(f2, parse_word(f2, "a"), parse_word(f2, "b")) == 2);
  const auto z2 = GroupModel::zpower(2);
  CHECK(distance(z2, parse_word(z2, "a"), parse_word(z2, "b")) == 2);
  for (const auto& g : sample_models()) {
    Lcg rng(7);
    const auto x = random_word(g, rng, 8);
    CHECK(distance(g, x, x) == 0);
  }
}

TEST_CASE("word format round trip") {
  for (const auto& g : sample_models()) {
    Lcg rng(11);
    for (int k = 0; k < 50; ++k) {
      const auto x = random_word(g, rng, 10);
      CAPTURE(format_word(g, x));
      CHECK(parse_word(g, format_word(g, x)) == x);
    }
  }
  const auto f2 = GroupModel::free(2);
  CHECK(format_word(f2, Element()) == "1");
  CHECK_THROWS_AS(parse_word(f2, "a.z"), SpecError);
  CHECK_THROWS_AS(parse_word(f2, "a..b"), SpecError);
  CHECK_THROWS_AS(parse_word(f2, "a^x"), SpecError);
}

TEST_CASE("group law on seeded random words") {
  for (const auto& g : sample_models()) {
    CAPTURE(g.to_spec());
    Lcg rng(2024);
    for (int k = 0; k < 200; ++k) {
      const auto x = random_word(g, rng, 9);
      const auto y = random_word(g, rng, 9);
      const auto z = random_word(g, rng, 9);
      CHECK(multiply(g, multiply(g, x, y), z) == multiply(g, x, multiply(g, y, z)));
      CHECK(multiply(g, x, invert(g, x)).is_identity());
      CHECK(multiply(g, invert(g, x), x).is_identity());
      CHECK(multiply(g, x, identity(g)) == x);
      CHECK(length(g, invert(g, x)) == length(g, x));
      CHECK(length(g, multiply(g, x, y)) <= length(g, x) + length(g, y));
      CHECK(distance(g, x, y) == distance(g, y, x));
      // Left invariance of the metric.
      CHECK(distance(g, multiply(g, z, x), multiply(g, z, y)) == distance(g, x, y));
    }
  }
}

TEST_CASE("normal form is stable under renormalization") {
  for (const auto& g : sample_models()) {
    Lcg rng(99);
    for (int k = 0; k < 100; ++k) {
      const auto x = random_word(g, rng, 12);
      CHECK(g.normalize(x.letters()) == x);
    }
  }
}

TEST_CASE("RAAG normal form against brute-force closure") {
  const std::vector<std::pair<std::string, std::set<std::pair<int, int>>>> cases = {
      {"raag vertices=a,b,c edges=a-b,b-c", {{0, 1}, {1, 2}}},
      {"raag vertices=a,b,c,d edges=a-b,b-c,c-d,a-d", {{0, 1}, {1, 2}, {2, 3}, {0, 3}}},
      {"raag vertices=a,b,c edges=a-b,a-c,b-c", {{0, 1}, {0, 2}, {1, 2}}},
  };
  for (const auto& [spec, commute] : cases) {
    CAPTURE(spec);
    const auto g = parse_spec(spec);
    const auto gens = g.generating_set();
    // All words of length <= 5.
    std::map<RawWord, std::size_t> classes;
    std::vector<RawWord> words{{}};
    for (int len = 1; len <= 5; ++len) {
      std::vector<RawWord> longer;
      for (const auto& w : words) {
        if (static_cast<int>(w.size()) != len - 1) continue;
        for (Letter c : gens) {
          auto v = w;
          v.push_back(c);
          longer.push_back(v);
        }
      }
      words.insert(words.end(), longer.begin(), longer.end());
    }
    std::vector<std::uint64_t> oracle(6, 0);
    for (const auto& w : words) {
      const auto nf = naive_raag_normal_form(commute, w);
      const auto ours = g.normalize(std::span<const Letter>(w));
      REQUIRE(ours.length() == nf.size());
      CHECK(RawWord(ours.letters().begin(), ours.letters().end()) == nf);
      if (classes.emplace(nf, nf.size()).second) ++oracle[nf.size()];
    }
    const auto ball = enumerate(g, 5);
    CHECK(ball.sphere_sizes() == oracle);
  }
}

TEST_CASE("free products of cyclic groups: sphere sizes by recursion") {
  for (const auto& orders : std::vector<std::vector<int>>{{2, 3}, {2, 2, 2}, {3, 4}, {5, 2, 6}}) {
    const auto g = GroupModel::free_product_cyclic(orders);
    const auto ball = enumerate(g, 9);
    CHECK(ball.sphere_sizes() == free_product_counts(orders, 9));
  }
}

TEST_CASE("model validation") {
  CHECK_THROWS_AS(GroupModel::free(0), std::invalid_argument);
  CHECK_THROWS_AS(GroupModel::free_product_cyclic({2}), std::invalid_argument);
  CHECK_THROWS_AS(GroupModel::free_product_cyclic({2, 1}), std::invalid_argument);
  CHECK_THROWS_AS(GroupModel::raag({"a", "b"}, {{0, 0}}), std::invalid_argument);
  CHECK_THROWS_AS(GroupModel::zpower(0), std::invalid_argument);
}

TEST_CASE("generator codes") {
  constexpr GeneratorId g{3, -1};
  static_assert(g.code() == 7);
  static_assert(GeneratorId::from_code(7) == g);
  const auto c23 = GroupModel::free_product_cyclic({2, 3});
  // a is an involution: one letter; b contributes b and b^-1.
  CHECK(c23.generating_set().size() == 3);
  CHECK(c23.inverse(0) == 0);
}
