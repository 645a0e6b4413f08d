#pragma once

#include <cstddef>
#include <stdexcept>
#include <string>

namespace shellmax {

/// Malformed group specification or element word. `position` is the byte
/// offset of the first offending token.
class SpecError : public std::invalid_argument {
 public:
  SpecError(std::size_t position, const std::string& message)
      : std::invalid_argument(message + " (at position " + std::to_string(position) + ")"),
        position_(position) {}

  std::size_t position() const noexcept { return position_; }

 private:
  std::size_t position_;
};

/// An enumeration or window would exceed the configured budget, or the
/// supplied ball is too small. `radius` is the radius that was required.
class ResourceError : public std::runtime_error {
 public:
  ResourceError(int radius, const std::string& message)
      : std::runtime_error(message), radius_(radius) {}

  int radius() const noexcept { return radius_; }

 private:
  int radius_;
};

/// Two independent computations of the same quantity disagreed.
class InvariantError : public std::logic_error {
 public:
  using std::logic_error::logic_error;
};

/// The requested computation needs exponential growth (q > 1).
class PolynomialGrowthError : public std::domain_error {
 public:
  using std::domain_error::domain_error;
};

}  // namespace shellmax
