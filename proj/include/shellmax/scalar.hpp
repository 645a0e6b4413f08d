#pragma once

#include <cmath>
#include <concepts>
#include <cstdint>
#include <string>
#include <string_view>

#include <gmpxx.h>

namespace shellmax {

/// Scalar types usable as function values. Exact scalars make every
/// identity check a bitwise comparison.
template <class T>
struct ScalarTraits;

template <>
struct ScalarTraits<double> {
  static constexpr bool exact = false;
  static double to_double(double v) { return v; }
  static double ratio(std::int64_t num, std::int64_t den) { return static_cast<double>(num) / static_cast<double>(den); }
  static std::string to_string(double v);
};

template <>
struct ScalarTraits<std::int64_t> {
  static constexpr bool exact = true;
  static double to_double(std::int64_t v) { return static_cast<double>(v); }
  static std::string to_string(std::int64_t v) { return std::to_string(v); }
};

template <>
struct ScalarTraits<mpq_class> {
  static constexpr bool exact = true;
  static double to_double(const mpq_class& v) { return v.get_d(); }
  static mpq_class ratio(std::int64_t num, std::int64_t den) {
    mpq_class q(static_cast<long>(num), static_cast<long>(den));
    q.canonicalize();
    return q;
  }
  static std::string to_string(const mpq_class& v) { return v.get_str(); }
};

template <class T>
concept Scalar = requires { ScalarTraits<T>::exact; };

template <Scalar T>
double to_double(const T& v) {
  return ScalarTraits<T>::to_double(v);
}

/// Formats with 17 significant digits (round-trip exact).
std::string format_double(double v);

/// Parses "p/q", an integer, or a decimal literal into an exact rational.
mpq_class parse_rational(std::string_view text);

}  // namespace shellmax
