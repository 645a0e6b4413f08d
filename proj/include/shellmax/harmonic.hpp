#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <span>
#include <unordered_map>
#include <utility>
#include <vector>

#include <Eigen/Core>

#include "shellmax/cayley.hpp"
#include "shellmax/errors.hpp"
#include "shellmax/group.hpp"
#include "shellmax/scalar.hpp"

namespace shellmax {

/// Real function of finite support on the group, stored as entries sorted
/// canonically with zeros dropped. Norms are computed once at construction.
template <Scalar T>
class FiniteFunction {
 public:
  using value_type = T;
  using Entry = std::pair<Element, T>;

  FiniteFunction() = default;

  /// Duplicate elements are summed.
  explicit FiniteFunction(std::vector<Entry> entries) {
    std::sort(entries.begin(), entries.end(), [](const Entry& a, const Entry& b) { return a.first < b.first; });
    for (auto& e : entries) {
      if (!entries_.empty() && entries_.back().first == e.first) {
        entries_.back().second += e.second;
      } else {
        entries_.push_back(std::move(e));
      }
    }
    std::erase_if(entries_, [](const Entry& e) { return e.second == T(0); });
    double sq = 0;
    for (const auto& [x, v] : entries_) {
      const T a = v < T(0) ? T(-v) : v;
      l1_ += a;
      if (linf_ < a) linf_ = a;
      const double d = to_double(v);
      sq += d * d;
    }
    l2_ = std::sqrt(sq);
  }

  template <class Map>
  static FiniteFunction from_map(const Map& values) {
    std::vector<Entry> entries;
    entries.reserve(values.size());
    for (const auto& [x, v] : values) entries.emplace_back(x, v);
    return FiniteFunction(std::move(entries));
  }

  static FiniteFunction delta(const Element& x, T value = T(1)) { return FiniteFunction({{x, value}}); }

  static FiniteFunction indicator(std::span<const Element> set) {
    std::vector<Entry> entries;
    for (const auto& x : set) entries.emplace_back(x, T(1));
    return FiniteFunction(std::move(entries));
  }

  T operator()(const Element& x) const {
    auto it = std::lower_bound(entries_.begin(), entries_.end(), x,
                               [](const Entry& e, const Element& key) { return e.first < key; });
    return it != entries_.end() && it->first == x ? it->second : T(0);
  }

  std::span<const Entry> entries() const { return entries_; }
  std::size_t support_size() const { return entries_.size(); }
  bool empty() const { return entries_.empty(); }

  const T& l1() const { return l1_; }
  const T& linf() const { return linf_; }
  double l2() const { return l2_; }

  bool is_nonnegative() const {
    return std::all_of(entries_.begin(), entries_.end(), [](const Entry& e) { return !(e.second < T(0)); });
  }

  friend bool operator==(const FiniteFunction& a, const FiniteFunction& b) { return a.entries_ == b.entries_; }

 private:
  std::vector<Entry> entries_;
  T l1_ = T(0);
  T linf_ = T(0);
  double l2_ = 0;
};

/// (f * h)(w) = sum_{uv = w} f(u) h(v).
template <Scalar T>
FiniteFunction<T> convolve(const GroupModel& model, const FiniteFunction<T>& f, const FiniteFunction<T>& h) {
  std::unordered_map<Element, T, ElementHash> acc;
  acc.reserve(f.support_size() * h.support_size());
  for (const auto& [u, fu] : f.entries()) {
    for (const auto& [v, hv] : h.entries()) acc[multiply(model, u, v)] += fu * hv;
  }
  return FiniteFunction<T>::from_map(acc);
}

/// Left translate: (f o lambda_w^{-1})(x) = f(w^{-1} x), i.e. support moved by w.
template <Scalar T>
FiniteFunction<T> translate(const GroupModel& model, const FiniteFunction<T>& f, const Element& w) {
  std::vector<typename FiniteFunction<T>::Entry> out;
  for (const auto& [x, v] : f.entries()) out.emplace_back(multiply(model, w, x), v);
  return FiniteFunction<T>(std::move(out));
}

/// Nonnegative, mass one, inversion-symmetric.
enum class MeasureKind { Sphere, Shell, Ball };

template <Scalar T>
struct RadialMeasure {
  MeasureKind kind;
  int radius;
  int width;  // shell width L; 1 for spheres
  FiniteFunction<T> density;
};

namespace detail {
inline void require_radius(const LayeredBall& ball, int r) {
  if (r < 0) throw std::invalid_argument("radius must be >= 0");
  if (r > ball.radius()) {
    throw ResourceError(r, "enumerated ball of radius " + std::to_string(ball.radius()) +
                               " is too small; radius " + std::to_string(r) + " required");
  }
}
}  // namespace detail

template <Scalar T>
RadialMeasure<T> shell_measure(const LayeredBall& ball, int r, int width) {
  if (width < 1) throw std::invalid_argument("shell width must be >= 1");
  detail::require_radius(ball, r + width - 1);
  std::size_t count = 0;
  for (int n = r; n < r + width; ++n) count += ball.sphere_size(n);
  const T mass = T(1) / T(static_cast<long>(count));
  std::vector<typename FiniteFunction<T>::Entry> entries;
  for (int n = r; n < r + width; ++n) {
    for (const auto& x : ball.sphere(n)) entries.emplace_back(x, mass);
  }
  return {width == 1 ? MeasureKind::Sphere : MeasureKind::Shell, r, width, FiniteFunction<T>(std::move(entries))};
}

template <Scalar T>
RadialMeasure<T> sphere_measure(const LayeredBall& ball, int r) {
  return shell_measure<T>(ball, r, 1);
}

/// Normalized indicator of the closed ball of radius n.
template <Scalar T>
RadialMeasure<T> ball_measure(const LayeredBall& ball, int n) {
  RadialMeasure<T> m = shell_measure<T>(ball, 0, n + 1);
  m.kind = MeasureKind::Ball;
  m.radius = n;
  return m;
}

/// (f * sigma_r)(w) = |S_r|^-1 sum_{s in S_r} f(w s), evaluated by lookups
/// on the candidate support supp(f) S_r.
template <Scalar T>
FiniteFunction<T> sphere_average_direct(const LayeredBall& ball, const FiniteFunction<T>& f, int r) {
  detail::require_radius(ball, r);
  const GroupModel& model = ball.model();
  const auto sphere = ball.sphere(r);
  std::unordered_map<Element, T, ElementHash> candidates;
  for (const auto& [u, fu] : f.entries()) {
    for (const auto& s : sphere) candidates.emplace(multiply(model, u, s), T(0));
  }
  const T size = T(static_cast<long>(sphere.size()));
  for (auto& [w, value] : candidates) {
    T sum(0);
    for (const auto& s : sphere) sum += f(multiply(model, w, s));
    value = sum / size;
  }
  return FiniteFunction<T>::from_map(candidates);
}

/// Right convolution by the normalized sphere measure, computed through
/// convolve() and cross-checked against sphere_average_direct(). Exact
/// scalars must agree bitwise; doubles to a relative 1e-12.
template <Scalar T>
FiniteFunction<T> sphere_average(const LayeredBall& ball, const FiniteFunction<T>& f, int r) {
  const auto measure = sphere_measure<T>(ball, r);
  auto via_convolution = convolve(ball.model(), f, measure.density);
  const auto direct = sphere_average_direct(ball, f, r);
  if constexpr (ScalarTraits<T>::exact) {
    if (!(via_convolution == direct)) throw InvariantError("sphere_average: convolution and direct paths disagree");
  } else {
    const double scale = std::max(1.0, to_double(f.linf()));
    bool same = via_convolution.support_size() <= direct.support_size();
    for (const auto& [w, v] : direct.entries()) {
      same = same && std::abs(to_double(v) - to_double(via_convolution(w))) <= 1e-12 * scale;
    }
    if (!same) throw InvariantError("sphere_average: convolution and direct paths disagree");
  }
  return via_convolution;
}

/// Compression of h -> h * mu to l2 of the closed ball B_R, as a fixed-width
/// row table over ball indices.
class CompressedConvolution {
 public:
  CompressedConvolution(const LayeredBall& ball, const FiniteFunction<double>& kernel, int truncation);

  Eigen::Index rows() const { return rows_; }
  Eigen::VectorXd apply(const Eigen::VectorXd& v) const;
  Eigen::VectorXd operator*(const Eigen::VectorXd& v) const { return apply(v); }

 private:
  Eigen::Index rows_ = 0;
  std::size_t width_ = 0;
  std::vector<std::int32_t> table_;  // rows_ x width_, -1 when outside the ball
  std::vector<double> weights_;
};

struct NormEstimate {
  int truncation = 0;
  double norm = 0;
  bool converged = false;
  int iterations = 0;
  double last_relative_change = 0;
};

/// Power iteration on T^2 for the compression T; the result is a lower bound
/// for the l2(G) norm, nondecreasing in the truncation radius. Rejects
/// kernels that are not inversion-symmetric.
NormEstimate operator_norm_truncated(const LayeredBall& ball, const FiniteFunction<double>& kernel, int truncation,
                                     double tol = 1e-10, int max_iters = 10000);

inline NormEstimate operator_norm_truncated(const LayeredBall& ball, const RadialMeasure<double>& measure,
                                            int truncation, double tol = 1e-10, int max_iters = 10000) {
  return operator_norm_truncated(ball, measure.density, truncation, tol, max_iters);
}

/// Closed-form l2 norm of the sphere average sigma_r on the free group of
/// rank k: (1 + r (k-1)/k) (2k-1)^(-r/2).
double cohen_pytlik_norm(int rank, int r);

struct BallProbeRow {
  int r;
  std::size_t ball_size;
  NormEstimate estimate;
  double scaled;  // ||beta_r|| |B_r|^{1/2}
};

struct BallProbe {
  std::vector<BallProbeRow> rows;
  double exponent;  // least-squares slope of log(scaled) against log r
};

/// Needs at least three distinct radii in [1, truncation].
BallProbe ball_rd_exponent_probe(const LayeredBall& ball, std::span<const int> radii, int truncation,
                                 double tol = 1e-10, int max_iters = 10000);

/// Least-squares slope of log y against log x.
double loglog_slope(std::span<const double> x, std::span<const double> y);

}  // namespace shellmax
