#include "shellmax/scalar.hpp"

#include <cstdio>
#include <stdexcept>

#include "shellmax/errors.hpp"

namespace shellmax {

std::string format_double(double v) {
  if (std::isinf(v)) return v > 0 ? "inf" : "-inf";
  if (std::isnan(v)) return "nan";
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

std::string ScalarTraits<double>::to_string(double v) { return format_double(v); }

mpq_class parse_rational(std::string_view text) {
  std::string s(text);
  while (!s.empty() && (s.back() == ' ' || s.back() == '\r' || s.back() == '\t')) s.pop_back();
  std::size_t first = s.find_first_not_of(" \t");
  if (first == std::string::npos) throw SpecError(0, "empty number");
  s = s.substr(first);

  const std::size_t dot = s.find('.');
  if (dot != std::string::npos && s.find('/') == std::string::npos) {
    // Decimal literal: d.ddd -> integer / 10^k.
    std::string digits = s.substr(0, dot) + s.substr(dot + 1);
    const std::size_t frac = s.size() - dot - 1;
    mpz_class den = 1;
    for (std::size_t k = 0; k < frac; ++k) den *= 10;
    mpz_class num;
    if (digits.empty() || digits == "-" || num.set_str(digits, 10) != 0) throw SpecError(0, "bad number '" + s + "'");
    mpq_class q(num, den);
    q.canonicalize();
    return q;
  }
  mpq_class q;
  if (q.set_str(s, 10) != 0) throw SpecError(0, "bad number '" + s + "'");
  if (q.get_den() == 0) throw SpecError(s.find('/'), "zero denominator");
  q.canonicalize();
  return q;
}

}  // namespace shellmax
