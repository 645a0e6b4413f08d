#include "shellmax/cayley.hpp"

#include <algorithm>
#include <string>
#include <unordered_set>

#include "shellmax/errors.hpp"

namespace shellmax {

std::span<const Element> LayeredBall::sphere(int n) const {
  return {elements_.data() + offsets_[n], offsets_[n + 1] - offsets_[n]};
}

std::span<const Element> LayeredBall::closed_ball(int n) const { return {elements_.data(), offsets_[n + 1]}; }

std::vector<std::uint64_t> LayeredBall::sphere_sizes() const {
  std::vector<std::uint64_t> out;
  for (int n = 0; n <= radius(); ++n) out.push_back(sphere_size(n));
  return out;
}

std::optional<std::size_t> LayeredBall::index_of(const Element& x) const {
  auto it = index_.find(x);
  if (it == index_.end()) return std::nullopt;
  return it->second;
}

std::optional<LayeredBall::Position> LayeredBall::find(const Element& x) const {
  auto idx = index_of(x);
  if (!idx) return std::nullopt;
  const int layer = static_cast<int>(x.length());
  return Position{layer, *idx - offsets_[layer]};
}

LayeredBall enumerate(const GroupModel& model, int radius, std::size_t budget) {
  if (radius < 0) throw std::invalid_argument("radius must be >= 0");
  LayeredBall ball(model);
  ball.elements_.push_back(identity(model));
  ball.offsets_ = {0, 1};

  const auto gens = model.generating_set();
  for (int n = 0; n < radius; ++n) {
    std::unordered_set<Element, ElementHash> next;
    const auto current = ball.sphere(n);
    next.reserve(current.size() * gens.size());
    // Normal forms are geodesic, so x*g lies in S_{n+1} iff its word has n+1 letters.
    for (const Element& x : current) {
      for (Letter g : gens) {
        Element y = multiply(model, x, g);
        if (y.length() == static_cast<std::size_t>(n + 1)) next.insert(std::move(y));
      }
    }
    if (ball.elements_.size() + next.size() > budget) {
      throw ResourceError(n + 1, "ball of radius " + std::to_string(n + 1) + " exceeds the budget of " +
                                     std::to_string(budget) + " elements");
    }
    std::vector<Element> layer(std::make_move_iterator(next.begin()), std::make_move_iterator(next.end()));
    std::sort(layer.begin(), layer.end());
    ball.elements_.insert(ball.elements_.end(), std::make_move_iterator(layer.begin()),
                          std::make_move_iterator(layer.end()));
    ball.offsets_.push_back(ball.elements_.size());
  }

  ball.index_.reserve(ball.elements_.size());
  for (std::size_t k = 0; k < ball.elements_.size(); ++k) {
    ball.index_.emplace(ball.elements_[k], static_cast<std::uint32_t>(k));
  }
  return ball;
}

std::vector<std::uint64_t> product_sphere_sizes(std::span<const std::uint64_t> left,
                                                std::span<const std::uint64_t> right) {
  const std::size_t n = std::min(left.size(), right.size());
  std::vector<std::uint64_t> out(n, 0);
  for (std::size_t k = 0; k < n; ++k) {
    for (std::size_t i = 0; i <= k; ++i) out[k] += left[k - i] * right[i];
  }
  return out;
}

bool product_sphere_identity_check(const LayeredBall& left, const LayeredBall& right, int n) {
  if (n < 0 || n > left.radius() || n > right.radius()) {
    throw std::invalid_argument("n must lie within both enumerations");
  }
  const auto predicted = product_sphere_sizes(left.sphere_sizes(), right.sphere_sizes());
  const LayeredBall direct = enumerate(GroupModel::product(left.model(), right.model()), n);
  return direct.sphere_size(n) == predicted[n];
}

}  // namespace shellmax
