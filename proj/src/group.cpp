#include "shellmax/group.hpp"

#include <algorithm>
#include <charconv>
#include <cstdlib>
#include <set>
#include <sstream>
#include <stdexcept>

#include "shellmax/errors.hpp"

namespace shellmax {

bool operator==(const ProductGroup& a, const ProductGroup& b) {
  return *a.left == *b.left && *a.right == *b.right;
}

namespace {

std::string default_name(std::size_t i) {
  if (i < 26) return std::string(1, static_cast<char>('a' + i));
  return "g" + std::to_string(i);
}

void check_generator_count(std::size_t n) {
  if (n == 0 || n > kMaxGenerators) {
    throw std::invalid_argument("generator count must be in [1, " + std::to_string(kMaxGenerators) + "]");
  }
}

}  // namespace

GroupModel GroupModel::free(int rank) {
  if (rank < 1) throw std::invalid_argument("free group rank must be >= 1");
  return GroupModel(FreeGroup{rank});
}

GroupModel GroupModel::free_product_cyclic(std::vector<int> orders) {
  if (orders.size() < 2) throw std::invalid_argument("cyclic free product needs at least two factors");
  for (int m : orders) {
    if (m < 2) throw std::invalid_argument("cyclic order must be >= 2");
  }
  return GroupModel(FreeProductCyclic{std::move(orders)});
}

GroupModel GroupModel::raag(std::vector<std::string> vertices, std::vector<std::pair<int, int>> edges) {
  if (vertices.empty()) throw std::invalid_argument("raag needs at least one vertex");
  if (vertices.size() > 64) throw std::invalid_argument("raag supports at most 64 vertices");
  std::set<std::string> seen(vertices.begin(), vertices.end());
  if (seen.size() != vertices.size()) throw std::invalid_argument("duplicate raag vertex");
  const int n = static_cast<int>(vertices.size());
  for (auto& [u, v] : edges) {
    if (u < 0 || v < 0 || u >= n || v >= n) throw std::invalid_argument("raag edge references undeclared vertex");
    if (u == v) throw std::invalid_argument("raag graph must not have loops");
    if (u > v) std::swap(u, v);
  }
  std::sort(edges.begin(), edges.end());
  if (std::adjacent_find(edges.begin(), edges.end()) != edges.end()) {
    throw std::invalid_argument("raag graph must not have multi-edges");
  }
  return GroupModel(Raag{std::move(vertices), std::move(edges)});
}

GroupModel GroupModel::zpower(int dimension) {
  if (dimension < 1) throw std::invalid_argument("zd dimension must be >= 1");
  return GroupModel(ZPower{dimension});
}

GroupModel GroupModel::product(GroupModel left, GroupModel right) {
  return GroupModel(ProductGroup{std::make_shared<const GroupModel>(std::move(left)),
                                 std::make_shared<const GroupModel>(std::move(right))});
}

GroupModel::GroupModel(Variant v) : variant_(std::move(v)) {
  // Per-variant generator names and involutions.
  std::vector<bool> involution;
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, FreeGroup>) {
          for (int i = 0; i < g.rank; ++i) names_.push_back(default_name(i));
          involution.assign(names_.size(), false);
        } else if constexpr (std::is_same_v<T, FreeProductCyclic>) {
          for (std::size_t i = 0; i < g.orders.size(); ++i) {
            names_.push_back(default_name(i));
            involution.push_back(g.orders[i] == 2);
          }
        } else if constexpr (std::is_same_v<T, Raag>) {
          names_ = g.vertices;
          involution.assign(names_.size(), false);
          commute_.assign(names_.size(), 0);
          for (auto [u, v] : g.edges) {
            commute_[u] |= std::uint64_t{1} << v;
            commute_[v] |= std::uint64_t{1} << u;
          }
        } else if constexpr (std::is_same_v<T, ZPower>) {
          for (int i = 0; i < g.dimension; ++i) names_.push_back(default_name(i));
          involution.assign(names_.size(), false);
        } else {
          const GroupModel& l = *g.left;
          const GroupModel& r = *g.right;
          left_generators_ = l.generator_count();
          std::set<std::string> left_names(l.names_.begin(), l.names_.end());
          bool collide = std::any_of(r.names_.begin(), r.names_.end(),
                                     [&](const std::string& s) { return left_names.count(s) > 0; });
          for (const auto& s : l.names_) names_.push_back(collide ? s + "_1" : s);
          for (const auto& s : r.names_) names_.push_back(collide ? s + "_2" : s);
          for (std::size_t i = 0; i < l.generator_count(); ++i) {
            involution.push_back(l.inverse(static_cast<Letter>(2 * i)) == 2 * i);
          }
          for (std::size_t i = 0; i < r.generator_count(); ++i) {
            involution.push_back(r.inverse(static_cast<Letter>(2 * i)) == 2 * i);
          }
        }
      },
      variant_);
  check_generator_count(names_.size());

  inverse_.resize(2 * names_.size());
  for (std::size_t i = 0; i < names_.size(); ++i) {
    auto pos = static_cast<Letter>(2 * i);
    if (involution[i]) {
      inverse_[pos] = pos;
      inverse_[pos + 1] = pos;
      generating_set_.push_back(pos);
    } else {
      inverse_[pos] = static_cast<Letter>(pos + 1);
      inverse_[pos + 1] = pos;
      generating_set_.push_back(pos);
      generating_set_.push_back(static_cast<Letter>(pos + 1));
    }
  }
}

namespace {

void free_reduce(std::span<const Letter> word, Element::Word& out) {
  out.clear();
  for (Letter c : word) {
    if (!out.empty() && out.back() == (c ^ 1)) {
      out.pop_back();
    } else {
      out.push_back(c);
    }
  }
}

void cyclic_normalize(const std::vector<int>& orders, std::span<const Letter> word, Element::Word& out) {
  struct Syllable {
    int factor;
    int exponent;
  };
  boost::container::small_vector<Syllable, 14> syl;
  for (Letter c : word) {
    const int f = c >> 1;
    const int m = orders[f];
    const int delta = (c & 1) ? m - 1 : 1;
    if (!syl.empty() && syl.back().factor == f) {
      syl.back().exponent = (syl.back().exponent + delta) % m;
      if (syl.back().exponent == 0) syl.pop_back();
    } else {
      syl.push_back({f, delta % m});
    }
  }
  out.clear();
  for (auto [f, e] : syl) {
    const int m = orders[f];
    if (e <= m - e) {
      out.insert(out.end(), e, static_cast<Letter>(2 * f));
    } else {
      out.insert(out.end(), m - e, static_cast<Letter>(2 * f + 1));
    }
  }
}

void zpower_normalize(int dim, std::span<const Letter> word, Element::Word& out) {
  boost::container::small_vector<long, 8> coord(dim, 0);
  for (Letter c : word) coord[c >> 1] += (c & 1) ? -1 : 1;
  out.clear();
  for (int i = 0; i < dim; ++i) {
    const long v = coord[i];
    out.insert(out.end(), static_cast<std::size_t>(std::labs(v)), static_cast<Letter>(2 * i + (v < 0 ? 1 : 0)));
  }
}

// Shuffle-reduce, then lexicographically least representative of the
// commutation class.
void raag_normalize(const std::vector<std::uint64_t>& commute, std::span<const Letter> word, Element::Word& out) {
  auto commutes = [&](Letter a, Letter b) { return (commute[a >> 1] >> (b >> 1)) & 1; };

  Element::Word reduced;
  for (Letter x : word) {
    bool cancelled = false;
    for (std::size_t p = reduced.size(); p-- > 0;) {
      const Letter y = reduced[p];
      if (y == (x ^ 1)) {
        reduced.erase(reduced.begin() + static_cast<std::ptrdiff_t>(p));
        cancelled = true;
        break;
      }
      if (!commutes(x, y)) break;
    }
    if (!cancelled) reduced.push_back(x);
  }

  const std::size_t n = reduced.size();
  boost::container::small_vector<int, 14> blockers(n, 0);
  boost::container::small_vector<bool, 14> done(n, false);
  for (std::size_t p = 0; p < n; ++p) {
    for (std::size_t q = 0; q < p; ++q) {
      if (!commutes(reduced[p], reduced[q])) ++blockers[p];
    }
  }
  out.clear();
  for (std::size_t step = 0; step < n; ++step) {
    std::size_t best = n;
    for (std::size_t p = 0; p < n; ++p) {
      if (!done[p] && blockers[p] == 0 && (best == n || reduced[p] < reduced[best])) best = p;
    }
    done[best] = true;
    out.push_back(reduced[best]);
    for (std::size_t p = best + 1; p < n; ++p) {
      if (!done[p] && !commutes(reduced[p], reduced[best])) --blockers[p];
    }
  }
}

}  // namespace

void GroupModel::normalize_into(std::span<const Letter> word, Element::Word& out) const {
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, FreeGroup>) {
          free_reduce(word, out);
        } else if constexpr (std::is_same_v<T, FreeProductCyclic>) {
          cyclic_normalize(g.orders, word, out);
        } else if constexpr (std::is_same_v<T, Raag>) {
          raag_normalize(commute_, word, out);
        } else if constexpr (std::is_same_v<T, ZPower>) {
          zpower_normalize(g.dimension, word, out);
        } else {
          const auto split = static_cast<Letter>(2 * left_generators_);
          Element::Word left, right;
          for (Letter c : word) {
            if (c < split) {
              left.push_back(c);
            } else {
              right.push_back(static_cast<Letter>(c - split));
            }
          }
          Element::Word nl, nr;
          g.left->normalize_into(left, nl);
          g.right->normalize_into(right, nr);
          out.assign(nl.begin(), nl.end());
          for (Letter c : nr) out.push_back(static_cast<Letter>(c + split));
        }
      },
      variant_);
}

Element GroupModel::normalize(std::span<const Letter> word) const {
  for (Letter c : word) {
    if (c >= inverse_.size()) throw std::invalid_argument("letter outside the generating set");
  }
  Element::Word out;
  normalize_into(word, out);
  return Element(std::move(out));
}

std::string GroupModel::to_spec() const {
  std::ostringstream os;
  std::visit(
      [&](const auto& g) {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, FreeGroup>) {
          os << "free rank=" << g.rank;
        } else if constexpr (std::is_same_v<T, FreeProductCyclic>) {
          os << "cyclicfreeproduct orders=";
          for (std::size_t i = 0; i < g.orders.size(); ++i) os << (i ? "," : "") << g.orders[i];
        } else if constexpr (std::is_same_v<T, Raag>) {
          os << "raag vertices=";
          for (std::size_t i = 0; i < g.vertices.size(); ++i) os << (i ? "," : "") << g.vertices[i];
          if (!g.edges.empty()) {
            os << " edges=";
            for (std::size_t i = 0; i < g.edges.size(); ++i) {
              os << (i ? "," : "") << g.vertices[g.edges[i].first] << "-" << g.vertices[g.edges[i].second];
            }
          }
        } else if constexpr (std::is_same_v<T, ZPower>) {
          os << "zd dim=" << g.dimension;
        } else {
          os << "product (" << g.left->to_spec() << ") (" << g.right->to_spec() << ")";
        }
      },
      variant_);
  return os.str();
}

Element identity(const GroupModel&) { return Element(); }

Element multiply(const GroupModel& model, const Element& x, const Element& y) {
  Element::Word w(x.letters().begin(), x.letters().end());
  w.insert(w.end(), y.letters().begin(), y.letters().end());
  return model.normalize(w);
}

Element multiply(const GroupModel& model, const Element& x, Letter g) {
  Element::Word w(x.letters().begin(), x.letters().end());
  w.push_back(g);
  return model.normalize(w);
}

Element invert(const GroupModel& model, const Element& x) {
  auto l = x.letters();
  Element::Word w;
  for (std::size_t k = l.size(); k-- > 0;) w.push_back(model.inverse(l[k]));
  return model.normalize(w);
}

std::size_t length(const GroupModel&, const Element& x) { return x.length(); }

std::size_t distance(const GroupModel& model, const Element& x, const Element& y) {
  auto l = x.letters();
  Element::Word w;
  for (std::size_t k = l.size(); k-- > 0;) w.push_back(model.inverse(l[k]));
  w.insert(w.end(), y.letters().begin(), y.letters().end());
  return model.normalize(w).length();
}

Element parse_word(const GroupModel& model, std::string_view text) {
  auto trim = [](std::string_view s) {
    while (!s.empty() && (s.front() == ' ' || s.front() == '\t')) s.remove_prefix(1);
    while (!s.empty() && (s.back() == ' ' || s.back() == '\t' || s.back() == '\r')) s.remove_suffix(1);
    return s;
  };
  text = trim(text);
  if (text.empty()) throw SpecError(0, "empty word");
  if (text == "1") return Element();
  Element::Word w;
  std::size_t pos = 0;
  while (pos <= text.size()) {
    const std::size_t dot = std::min(text.find('.', pos), text.size());
    std::string_view token = text.substr(pos, dot - pos);
    if (token.empty()) throw SpecError(pos, "empty token in word");
    long power = 1;
    const std::size_t caret = token.find('^');
    std::string_view name = token.substr(0, caret);
    if (caret != std::string_view::npos) {
      std::string_view exp = token.substr(caret + 1);
      auto [ptr, ec] = std::from_chars(exp.data(), exp.data() + exp.size(), power);
      if (ec != std::errc() || ptr != exp.data() + exp.size()) {
        throw SpecError(pos + caret + 1, "bad exponent '" + std::string(exp) + "'");
      }
    }
    std::size_t index = model.generator_count();
    for (std::size_t i = 0; i < model.generator_count(); ++i) {
      if (model.generator_name(i) == name) index = i;
    }
    if (index == model.generator_count()) throw SpecError(pos, "unknown generator '" + std::string(name) + "'");
    const auto g = static_cast<Letter>(2 * index);
    const Letter c = power < 0 ? model.inverse(g) : g;
    for (long k = 0; k < std::labs(power); ++k) w.push_back(c);
    pos = dot + 1;
  }
  return model.normalize(w);
}

std::string format_word(const GroupModel& model, const Element& x) {
  auto l = x.letters();
  if (l.empty()) return "1";
  std::string out;
  for (std::size_t k = 0; k < l.size();) {
    std::size_t run = 1;
    while (k + run < l.size() && l[k + run] == l[k]) ++run;
    if (!out.empty()) out += '.';
    out += model.generator_name(l[k] >> 1);
    const bool inv = l[k] & 1;
    if (inv) {
      out += "^-" + std::to_string(run);
    } else if (run > 1) {
      out += "^" + std::to_string(run);
    }
    k += run;
  }
  return out;
}

}  // namespace shellmax
