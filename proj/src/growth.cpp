#include "shellmax/growth.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <string>

#include <Eigen/Dense>
#include <gmpxx.h>

#include "shellmax/errors.hpp"

namespace shellmax {
namespace {

// Dense polynomial over Q, lowest degree first, no trailing zeros.
using Poly = std::vector<mpq_class>;

void trim(Poly& p) {
  while (!p.empty() && p.back() == 0) p.pop_back();
}

Poly derivative(const Poly& p) {
  Poly d;
  for (std::size_t k = 1; k < p.size(); ++k) d.push_back(p[k] * static_cast<long>(k));
  trim(d);
  return d;
}

// Returns {quotient, remainder}.
std::pair<Poly, Poly> divmod(Poly a, const Poly& b) {
  if (b.empty()) throw std::domain_error("polynomial division by zero");
  trim(a);
  if (a.size() < b.size()) return {Poly{}, a};
  Poly q(a.size() - b.size() + 1);
  for (std::size_t shift = q.size(); shift-- > 0;) {
    const mpq_class coef = a[shift + b.size() - 1] / b.back();
    q[shift] = coef;
    for (std::size_t i = 0; i < b.size(); ++i) a[shift + i] -= coef * b[i];
  }
  trim(a);
  trim(q);
  return {q, a};
}

Poly monic(Poly p) {
  trim(p);
  if (p.empty()) return p;
  const mpq_class lead = p.back();
  for (auto& c : p) c /= lead;
  return p;
}

Poly gcd(Poly a, Poly b) {
  trim(a);
  trim(b);
  while (!b.empty()) {
    Poly r = divmod(a, b).second;
    a = std::move(b);
    b = std::move(r);
  }
  return monic(a);
}

Poly subtract(const Poly& a, const Poly& b) {
  Poly out(std::max(a.size(), b.size()));
  for (std::size_t k = 0; k < a.size(); ++k) out[k] += a[k];
  for (std::size_t k = 0; k < b.size(); ++k) out[k] -= b[k];
  trim(out);
  return out;
}

mpq_class evaluate(const Poly& p, const mpq_class& x) {
  mpq_class acc = 0;
  for (std::size_t k = p.size(); k-- > 0;) acc = acc * x + p[k];
  return acc;
}

int sign(const mpq_class& v) { return sgn(v); }

// Yun's square-free decomposition: p = lead * prod_i factors[i]^(i+1).
std::vector<Poly> squarefree_decomposition(const Poly& p) {
  std::vector<Poly> factors;
  Poly a = gcd(p, derivative(p));
  Poly b = divmod(p, a).first;
  Poly c = divmod(derivative(p), a).first;
  Poly d = subtract(c, derivative(b));
  while (b.size() > 1) {
    Poly f = gcd(b, d);
    factors.push_back(f);
    b = divmod(b, f).first;
    c = divmod(d, f).first;
    d = subtract(c, derivative(b));
  }
  return factors;
}

class SturmSequence {
 public:
  explicit SturmSequence(const Poly& p) {
    seq_.push_back(p);
    seq_.push_back(derivative(p));
    while (seq_.back().size() > 1) {
      Poly r = divmod(seq_[seq_.size() - 2], seq_.back()).second;
      if (r.empty()) break;
      for (auto& c : r) c = -c;
      seq_.push_back(std::move(r));
    }
  }

  // Number of distinct real roots in (lo, hi].
  int count(const mpq_class& lo, const mpq_class& hi) const { return changes(lo) - changes(hi); }

 private:
  int changes(const mpq_class& x) const {
    int n = 0;
    int last = 0;
    for (const auto& q : seq_) {
      const int s = sign(evaluate(q, x));
      if (s == 0) continue;
      if (last != 0 && s != last) ++n;
      last = s;
    }
    return n;
  }

  std::vector<Poly> seq_;
};

bool fits_int64(const mpq_class& v) {
  if (v.get_den() != 1) return false;
  return v.get_num() >= std::numeric_limits<std::int64_t>::min() &&
         v.get_num() <= std::numeric_limits<std::int64_t>::max();
}

// Solves the k x k system for recurrence coefficients; false when singular.
bool solve_exact(std::vector<std::vector<mpq_class>> m, std::vector<mpq_class>& x) {
  const std::size_t k = m.size();
  for (std::size_t col = 0; col < k; ++col) {
    std::size_t piv = col;
    while (piv < k && m[piv][col] == 0) ++piv;
    if (piv == k) return false;
    std::swap(m[piv], m[col]);
    for (std::size_t row = 0; row < k; ++row) {
      if (row == col || m[row][col] == 0) continue;
      const mpq_class f = m[row][col] / m[col][col];
      for (std::size_t c = col; c <= k; ++c) m[row][c] -= f * m[col][c];
    }
  }
  x.resize(k);
  for (std::size_t i = 0; i < k; ++i) x[i] = m[i][k] / m[i][i];
  return true;
}

}  // namespace

double GrowthFit::predict(int n) const {
  return (d == 0 ? 1.0 : std::pow(static_cast<double>(n), d)) * std::pow(q, n);
}

std::optional<LinearRecurrence> find_recurrence(std::span<const std::uint64_t> sizes) {
  const int total = static_cast<int>(sizes.size());
  auto term = [&](int n) { return mpq_class(mpz_class(std::to_string(sizes[n]))); };
  for (int k = 1; 2 * k <= total; ++k) {
    for (int start = k; start + 2 * k <= total; ++start) {
      std::vector<std::vector<mpq_class>> system(k, std::vector<mpq_class>(k + 1));
      for (int row = 0; row < k; ++row) {
        const int n = start + row;
        for (int i = 1; i <= k; ++i) system[row][i - 1] = term(n - i);
        system[row][k] = term(n);
      }
      std::vector<mpq_class> coef;
      if (!solve_exact(system, coef)) continue;
      if (!std::all_of(coef.begin(), coef.end(), fits_int64)) continue;
      bool holds = true;
      for (int n = start; n < total && holds; ++n) {
        mpq_class acc = 0;
        for (int i = 1; i <= k; ++i) acc += coef[i - 1] * term(n - i);
        holds = acc == term(n);
      }
      if (!holds) continue;
      LinearRecurrence rec;
      rec.start = start;
      for (const auto& c : coef) rec.coefficients.push_back(c.get_num().get_si());
      return rec;
    }
  }
  return std::nullopt;
}

DominantRoot dominant_real_root(std::span<const std::int64_t> coefficients) {
  Poly p;
  for (std::size_t k = coefficients.size(); k-- > 0;) p.emplace_back(static_cast<long>(coefficients[k]));
  trim(p);
  if (p.size() < 2) throw std::invalid_argument("polynomial has no roots");

  const Poly squarefree = monic(divmod(p, gcd(p, derivative(p))).first);
  const SturmSequence sturm(squarefree);

  mpq_class bound = 0;
  for (std::size_t k = 0; k + 1 < squarefree.size(); ++k) bound = std::max(bound, mpq_class(abs(squarefree[k])));
  bound += 1;
  mpq_class lo = -bound;
  mpq_class hi = bound;
  if (sturm.count(lo, hi) == 0) throw std::domain_error("polynomial has no real root");

  const mpq_class width(mpz_class(1), mpz_class(1) << 50);
  while (hi - lo > width) {
    mpq_class mid = (lo + hi) / 2;
    if (sturm.count(mid, hi) > 0) {
      lo = mid;
    } else {
      hi = mid;
    }
  }

  int multiplicity = 0;
  const auto factors = squarefree_decomposition(monic(p));
  for (std::size_t i = 0; i < factors.size(); ++i) {
    if (factors[i].size() > 1 && SturmSequence(factors[i]).count(lo, hi) > 0) {
      multiplicity = static_cast<int>(i) + 1;
    }
  }
  const bool one = evaluate(squarefree, 1) == 0 && sturm.count(1, bound) == 0;
  return {one ? 1.0 : mpq_class((lo + hi) / 2).get_d(), multiplicity, one};
}

GrowthFit fit_growth(std::span<const std::uint64_t> sizes) {
  if (sizes.size() < 8) throw std::invalid_argument("fit_growth needs at least 8 terms");
  for (std::size_t n = 1; n < sizes.size(); ++n) {
    if (sizes[n] == 0) throw std::invalid_argument("sphere size vanishes at n=" + std::to_string(n));
  }

  GrowthFit fit;
  fit.recurrence = find_recurrence(sizes);
  if (fit.recurrence) {
    std::vector<std::int64_t> charpoly{1};
    for (auto c : fit.recurrence->coefficients) charpoly.push_back(-c);
    const DominantRoot root = dominant_real_root(charpoly);
    fit.q = root.value;
    fit.d = root.multiplicity - 1;
    fit.polynomial_growth = root.exactly_one;
  } else {
    // log s_n = a + d log n + n log q, least squares over n >= 1.
    fit.nonrational_evidence = true;
    const int rows = static_cast<int>(sizes.size()) - 1;
    Eigen::MatrixXd design(rows, 3);
    Eigen::VectorXd target(rows);
    for (int n = 1; n <= rows; ++n) {
      design.row(n - 1) << 1.0, std::log(static_cast<double>(n)), static_cast<double>(n);
      target(n - 1) = std::log(static_cast<double>(sizes[n]));
    }
    const Eigen::Vector3d beta = design.colPivHouseholderQr().solve(target);
    fit.d = std::max(0, static_cast<int>(std::lround(beta(1))));
    fit.q = std::exp(beta(2));
    fit.polynomial_growth = std::abs(fit.q - 1.0) < 1e-6;
  }

  fit.c_gr = 1.0;
  for (std::size_t n = 1; n < sizes.size(); ++n) {
    const double ratio = static_cast<double>(sizes[n]) / fit.predict(static_cast<int>(n));
    fit.c_gr = std::max({fit.c_gr, ratio, 1.0 / ratio});
  }
  return fit;
}

bool has_exponential_growth(const GroupModel& model) {
  return std::visit(
      [](const auto& g) -> bool {
        using T = std::decay_t<decltype(g)>;
        if constexpr (std::is_same_v<T, FreeGroup>) {
          return g.rank >= 2;
        } else if constexpr (std::is_same_v<T, FreeProductCyclic>) {
          return !(g.orders.size() == 2 && g.orders[0] == 2 && g.orders[1] == 2);
        } else if constexpr (std::is_same_v<T, Raag>) {
          const std::size_t n = g.vertices.size();
          return g.edges.size() < n * (n - 1) / 2;
        } else if constexpr (std::is_same_v<T, ZPower>) {
          return false;
        } else {
          return has_exponential_growth(*g.left) || has_exponential_growth(*g.right);
        }
      },
      model.variant());
}

void require_exponential_growth(const GroupModel& model) {
  if (!has_exponential_growth(model)) {
    throw PolynomialGrowthError("group '" + model.to_spec() +
                                "' has polynomial growth (q = 1); this computation requires exponential growth");
  }
}

}  // namespace shellmax
