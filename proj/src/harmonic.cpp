#include "shellmax/harmonic.hpp"

#include <cmath>
#include <set>

#include <Eigen/Dense>

namespace shellmax {

CompressedConvolution::CompressedConvolution(const LayeredBall& ball, const FiniteFunction<double>& kernel,
                                             int truncation) {
  detail::require_radius(ball, truncation);
  const GroupModel& model = ball.model();
  rows_ = static_cast<Eigen::Index>(ball.ball_size(truncation));
  width_ = kernel.support_size();
  for (const auto& [s, v] : kernel.entries()) weights_.push_back(v);
  table_.assign(static_cast<std::size_t>(rows_) * width_, -1);

  // (h * mu)(w) = sum_s mu(s^{-1}) h(w s^{-1}) = sum_s mu(s) h(w s) for symmetric mu.
  for (Eigen::Index w = 0; w < rows_; ++w) {
    const Element& x = ball[static_cast<std::size_t>(w)];
    std::size_t k = 0;
    for (const auto& [s, v] : kernel.entries()) {
      const Element y = multiply(model, x, s);
      if (y.length() <= static_cast<std::size_t>(truncation)) {
        table_[static_cast<std::size_t>(w) * width_ + k] = static_cast<std::int32_t>(*ball.index_of(y));
      }
      ++k;
    }
  }
}

Eigen::VectorXd CompressedConvolution::apply(const Eigen::VectorXd& v) const {
  Eigen::VectorXd out(rows_);
  const std::int32_t* row = table_.data();
  for (Eigen::Index w = 0; w < rows_; ++w, row += width_) {
    double acc = 0;
    for (std::size_t k = 0; k < width_; ++k) {
      if (row[k] >= 0) acc += weights_[k] * v(row[k]);
    }
    out(w) = acc;
  }
  return out;
}

NormEstimate operator_norm_truncated(const LayeredBall& ball, const FiniteFunction<double>& kernel, int truncation,
                                     double tol, int max_iters) {
  if (!(tol > 0)) throw std::invalid_argument("tol must be positive");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  const GroupModel& model = ball.model();
  for (const auto& [s, v] : kernel.entries()) {
    if (kernel(invert(model, s)) != v) throw std::invalid_argument("operator_norm_truncated: kernel is not symmetric");
  }

  const CompressedConvolution op(ball, kernel, truncation);
  NormEstimate est;
  est.truncation = truncation;

  // Start at delta_e plus a small uniform component on B_2.
  Eigen::VectorXd v = Eigen::VectorXd::Zero(op.rows());
  const auto start_support = static_cast<Eigen::Index>(ball.ball_size(std::min(2, truncation)));
  v.head(start_support).setConstant(1e-3);
  v(0) += 1.0;
  v.normalize();

  double previous = 0;
  for (int it = 1; it <= max_iters; ++it) {
    const Eigen::VectorXd tv = op * v;
    const double rayleigh = tv.squaredNorm();  // <v, T^2 v> with |v| = 1
    est.iterations = it;
    est.norm = std::sqrt(rayleigh);
    if (rayleigh == 0) {
      est.converged = true;
      est.last_relative_change = 0;
      return est;
    }
    est.last_relative_change = std::abs(rayleigh - previous) / rayleigh;
    if (it > 1 && est.last_relative_change < tol) {
      est.converged = true;
      return est;
    }
    previous = rayleigh;
    v = op * tv;
    v /= v.norm();
  }
  return est;
}

double cohen_pytlik_norm(int rank, int r) {
  const double k = rank;
  return (1.0 + (k - 1.0) / k * r) * std::pow(2.0 * k - 1.0, -0.5 * r);
}

double loglog_slope(std::span<const double> x, std::span<const double> y) {
  if (x.size() != y.size() || x.size() < 2) throw std::invalid_argument("loglog_slope needs two or more points");
  const auto n = static_cast<Eigen::Index>(x.size());
  Eigen::MatrixXd design(n, 2);
  Eigen::VectorXd target(n);
  for (Eigen::Index i = 0; i < n; ++i) {
    design(i, 0) = 1.0;
    design(i, 1) = std::log(x[static_cast<std::size_t>(i)]);
    target(i) = std::log(y[static_cast<std::size_t>(i)]);
  }
  const Eigen::Vector2d beta = design.colPivHouseholderQr().solve(target);
  return beta(1);
}

BallProbe ball_rd_exponent_probe(const LayeredBall& ball, std::span<const int> radii, int truncation, double tol,
                                 int max_iters) {
  const std::set<int> distinct(radii.begin(), radii.end());
  if (distinct.size() < 3) throw std::invalid_argument("ball_rd_exponent_probe needs at least three radii");
  BallProbe probe;
  std::vector<double> xs, ys;
  for (int r : distinct) {
    if (r < 1 || r > truncation) throw std::invalid_argument("probe radii must lie in [1, truncation]");
    const auto measure = ball_measure<double>(ball, r);
    BallProbeRow row{r, ball.ball_size(r), operator_norm_truncated(ball, measure, truncation, tol, max_iters), 0.0};
    row.scaled = row.estimate.norm * std::sqrt(static_cast<double>(row.ball_size));
    xs.push_back(r);
    ys.push_back(row.scaled);
    probe.rows.push_back(row);
  }
  probe.exponent = loglog_slope(xs, ys);
  return probe;
}

}  // namespace shellmax
