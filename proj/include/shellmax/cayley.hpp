#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <span>
#include <unordered_map>
#include <vector>

#include "shellmax/group.hpp"

namespace shellmax {

inline constexpr std::size_t kDefaultBudget = 50'000'000;

/// Spheres S_0..S_R of the Cayley graph, each sorted in canonical order.
///
/// Elements are stored contiguously in layer order, so the global index of
/// an element is also its position in the closed ball ordering.
class LayeredBall {
 public:
  struct Position {
    int layer;
    std::size_t position;
  };

  const GroupModel& model() const { return model_; }
  int radius() const { return static_cast<int>(offsets_.size()) - 2; }

  std::span<const Element> sphere(int n) const;
  /// Closed ball of radius n (n <= radius()) as a contiguous range.
  std::span<const Element> closed_ball(int n) const;
  std::size_t sphere_size(int n) const { return offsets_[n + 1] - offsets_[n]; }
  std::size_t ball_size(int n) const { return offsets_[n + 1]; }
  std::vector<std::uint64_t> sphere_sizes() const;

  std::size_t size() const { return elements_.size(); }
  const Element& operator[](std::size_t global) const { return elements_[global]; }

  std::optional<std::size_t> index_of(const Element& x) const;
  std::optional<Position> find(const Element& x) const;

 private:
  friend LayeredBall enumerate(const GroupModel&, int, std::size_t);
  explicit LayeredBall(GroupModel model) : model_(std::move(model)) {}

  GroupModel model_;
  std::vector<Element> elements_;
  std::vector<std::size_t> offsets_;  // layer n occupies [offsets_[n], offsets_[n+1])
  std::unordered_map<Element, std::uint32_t, ElementHash> index_;
};

/// Exact layered ball of radius R. Throws ResourceError when the ball
/// would exceed `budget` elements.
LayeredBall enumerate(const GroupModel& model, int radius, std::size_t budget = kDefaultBudget);

/// Sphere sizes of an l1 product from the factor sphere sizes:
/// |S_n| = sum_i |S1_{n-i}| |S2_i|.
std::vector<std::uint64_t> product_sphere_sizes(std::span<const std::uint64_t> left,
                                                std::span<const std::uint64_t> right);

/// Checks |S_n(left x right)| against the convolution of factor sphere sizes
/// by enumerating the product model directly.
bool product_sphere_identity_check(const LayeredBall& left, const LayeredBall& right, int n);

}  // namespace shellmax
