#pragma once

#include <compare>
#include <cstddef>
#include <cstdint>
#include <functional>
#include <memory>
#include <span>
#include <string>
#include <string_view>
#include <variant>
#include <vector>

#include <boost/container/small_vector.hpp>

namespace shellmax {

/// A letter of the symmetric generating set, encoded as 2*index + inverse.
/// The numeric order of codes is the canonical generator order: generators
/// by index, each generator before its inverse.
using Letter = std::uint8_t;

inline constexpr std::size_t kMaxGenerators = 127;

struct GeneratorId {
  std::uint8_t index = 0;
  std::int8_t sign = 1;

  constexpr Letter code() const { return static_cast<Letter>(2 * index + (sign < 0 ? 1 : 0)); }
  static constexpr GeneratorId from_code(Letter c) {
    return GeneratorId{static_cast<std::uint8_t>(c >> 1), static_cast<std::int8_t>(c & 1 ? -1 : 1)};
  }
  friend constexpr bool operator==(GeneratorId, GeneratorId) = default;
};

/// Group element stored as its canonical geodesic normal-form word.
///
/// Equal elements have identical words, and the word length is the word
/// length of the element. Ordering is shortlex on the word.
class Element {
 public:
  using Word = boost::container::small_vector<Letter, 24>;

  Element() = default;
  explicit Element(Word word) : word_(std::move(word)) {}

  std::span<const Letter> letters() const { return {word_.data(), word_.size()}; }
  std::size_t length() const { return word_.size(); }
  bool is_identity() const { return word_.empty(); }

  friend bool operator==(const Element& a, const Element& b) { return a.word_ == b.word_; }
  friend std::strong_ordering operator<=>(const Element& a, const Element& b) {
    if (auto c = a.word_.size() <=> b.word_.size(); c != 0) return c;
    for (std::size_t k = 0; k < a.word_.size(); ++k) {
      if (auto c = a.word_[k] <=> b.word_[k]; c != 0) return c;
    }
    return std::strong_ordering::equal;
  }

 private:
  Word word_;
};

struct ElementHash {
  std::size_t operator()(const Element& e) const noexcept {
    auto w = e.letters();
    return std::hash<std::string_view>{}(
        std::string_view(reinterpret_cast<const char*>(w.data()), w.size()));
  }
};

class GroupModel;

struct FreeGroup {
  int rank = 1;
  friend bool operator==(const FreeGroup&, const FreeGroup&) = default;
};

/// Free product of cyclic groups Z/m_1 * ... * Z/m_N.
struct FreeProductCyclic {
  std::vector<int> orders;
  friend bool operator==(const FreeProductCyclic&, const FreeProductCyclic&) = default;
};

/// Right-angled Artin group of a finite simple graph.
struct Raag {
  std::vector<std::string> vertices;
  std::vector<std::pair<int, int>> edges;  // i < j, sorted, no duplicates
  friend bool operator==(const Raag&, const Raag&) = default;
};

struct ZPower {
  int dimension = 1;
  friend bool operator==(const ZPower&, const ZPower&) = default;
};

/// Direct product with the l1 (sum) length.
struct ProductGroup {
  std::shared_ptr<const GroupModel> left;
  std::shared_ptr<const GroupModel> right;
  friend bool operator==(const ProductGroup& a, const ProductGroup& b);
};

/// A group family with its canonical symmetric generating set and
/// geodesic normal form. Immutable after construction.
class GroupModel {
 public:
  using Variant = std::variant<FreeGroup, FreeProductCyclic, Raag, ZPower, ProductGroup>;

  static GroupModel free(int rank);
  static GroupModel free_product_cyclic(std::vector<int> orders);
  static GroupModel raag(std::vector<std::string> vertices, std::vector<std::pair<int, int>> edges);
  static GroupModel zpower(int dimension);
  static GroupModel product(GroupModel left, GroupModel right);

  const Variant& variant() const { return variant_; }

  /// Number of abstract generators (letter indices).
  std::size_t generator_count() const { return names_.size(); }

  /// The symmetric generating set in canonical order. Involutions
  /// contribute a single letter.
  std::span<const Letter> generating_set() const { return generating_set_; }

  Letter inverse(Letter c) const { return inverse_[c]; }
  const std::string& generator_name(std::size_t index) const { return names_[index]; }

  /// Canonical normal form of the product of an arbitrary word.
  Element normalize(std::span<const Letter> word) const;
  Element normalize(const Element::Word& word) const { return normalize({word.data(), word.size()}); }

  /// Round-trippable text form in the group-spec grammar.
  std::string to_spec() const;

  friend bool operator==(const GroupModel& a, const GroupModel& b) { return a.variant_ == b.variant_; }

 private:
  explicit GroupModel(Variant v);
  void normalize_into(std::span<const Letter> word, Element::Word& out) const;
  void normalize_into(const Element::Word& word, Element::Word& out) const {
    normalize_into({word.data(), word.size()}, out);
  }

  Variant variant_;
  std::vector<std::string> names_;
  std::vector<Letter> generating_set_;
  std::vector<Letter> inverse_;
  std::vector<std::uint64_t> commute_;  // Raag: bitmask of adjacent vertices
  std::size_t left_generators_ = 0;     // Product: index split
};

Element identity(const GroupModel& model);
Element multiply(const GroupModel& model, const Element& x, const Element& y);
Element multiply(const GroupModel& model, const Element& x, Letter g);
Element invert(const GroupModel& model, const Element& x);
std::size_t length(const GroupModel& model, const Element& x);
std::size_t distance(const GroupModel& model, const Element& x, const Element& y);

/// Element from a dotted word such as "a.b^-1.a^2" ("1" is the identity).
Element parse_word(const GroupModel& model, std::string_view text);
/// Run-length dotted rendering of the normal form, parseable by parse_word.
std::string format_word(const GroupModel& model, const Element& x);

/// Parses the one-line group-spec grammar. Throws SpecError.
GroupModel parse_spec(std::string_view text);

}  // namespace shellmax
