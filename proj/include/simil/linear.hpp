#pragma once

// Exact linear algebra over rationals: row reduction, null vectors,
// affine independence and strict separating functionals.

#include "simil/rational.hpp"

#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

namespace simil {

using Vec = std::vector<Rational>;
using Mat = std::vector<Vec>;  // row-major

namespace detail {

/// In-place reduced row echelon form. Pivots are taken at the first nonzero
/// entry in column order, so results are deterministic. Returns pivot columns.
inline std::vector<std::size_t> rref(Mat& a) {
  std::vector<std::size_t> pivots;
  if (a.empty()) return pivots;
  const std::size_t rows = a.size(), cols = a[0].size();
  std::size_t r = 0;
  for (std::size_t c = 0; c < cols && r < rows; ++c) {
    std::size_t p = r;
    while (p < rows && a[p][c] == 0) ++p;
    if (p == rows) continue;
    std::swap(a[p], a[r]);
    const Rational inv = 1 / a[r][c];
    for (auto& x : a[r]) x *= inv;
    for (std::size_t i = 0; i < rows; ++i) {
      if (i == r || a[i][c] == 0) continue;
      const Rational f = a[i][c];
      for (std::size_t j = 0; j < cols; ++j) a[i][j] -= f * a[r][j];
    }
    pivots.push_back(c);
    ++r;
  }
  return pivots;
}

inline Rational dot(const Vec& a, const Vec& b) {
  Rational s = 0;
  for (std::size_t i = 0; i < a.size(); ++i) s += a[i] * b[i];
  return s;
}

inline Vec sub(const Vec& a, const Vec& b) {
  Vec out(a.size());
  for (std::size_t i = 0; i < a.size(); ++i) out[i] = a[i] - b[i];
  return out;
}

}  // namespace detail

inline std::size_t rank(Mat a) { return detail::rref(a).size(); }

/// Nonzero c with sum_k c_k v_k = 0, if the vectors are linearly dependent.
inline std::optional<Vec> linear_dependence(const std::vector<Vec>& vs) {
  if (vs.empty()) return std::nullopt;
  const std::size_t dim = vs[0].size(), m = vs.size();
  Mat a(dim, Vec(m));  // columns are the vectors
  for (std::size_t k = 0; k < m; ++k)
    for (std::size_t i = 0; i < dim; ++i) a[i][k] = vs[k][i];
  const auto pivots = detail::rref(a);
  if (pivots.size() == m) return std::nullopt;
  std::size_t free = 0;
  for (std::size_t k = 0; k < pivots.size() && pivots[k] == free; ++k) ++free;
  Vec c(m, Rational(0));
  c[free] = 1;
  for (std::size_t r = 0; r < pivots.size(); ++r) c[pivots[r]] = -a[r][free];
  return c;
}

/// Solves a x = b for square nonsingular a.
inline Vec solve(const Mat& a, const Vec& b) {
  const std::size_t n = a.size();
  Mat aug(n, Vec(n + 1));
  for (std::size_t i = 0; i < n; ++i) {
    if (a[i].size() != n) throw std::invalid_argument("solve needs a square matrix");
    for (std::size_t j = 0; j < n; ++j) aug[i][j] = a[i][j];
    aug[i][n] = b[i];
  }
  const auto pivots = detail::rref(aug);
  if (pivots.size() != n || pivots.back() != n - 1) throw std::domain_error("singular system");
  Vec x(n);
  for (std::size_t i = 0; i < n; ++i) x[i] = aug[i][n];
  return x;
}

struct AffineIndependence {
  bool independent = false;
  std::vector<Vec> basis;  // difference vectors v_k - v_0 when independent
  Vec lambda;              // nonzero, sums to zero, sum lambda_k v_k = 0 when dependent
};

/// Decides whether the points admit only the trivial zero-sum combination.
inline AffineIndependence affinely_independent(const std::vector<Vec>& points) {
  if (points.empty()) throw std::invalid_argument("affine independence of an empty set");
  AffineIndependence out;
  std::vector<Vec> diffs;
  for (std::size_t k = 1; k < points.size(); ++k) {
    if (points[k].size() != points[0].size()) throw std::invalid_argument("points differ in dimension");
    diffs.push_back(detail::sub(points[k], points[0]));
  }
  auto dep = linear_dependence(diffs);
  if (!dep) {
    out.independent = true;
    out.basis = std::move(diffs);
    return out;
  }
  Vec lambda(points.size(), Rational(0));
  for (std::size_t k = 0; k < dep->size(); ++k) {
    lambda[k + 1] = (*dep)[k];
    lambda[0] -= (*dep)[k];
  }
  Rational lead = 0;
  for (const auto& x : lambda)
    if (x != 0) {
      lead = x;
      break;
    }
  for (auto& x : lambda) x /= lead;
  out.lambda = std::move(lambda);
  return out;
}

class AffineDependenceError : public std::domain_error {
 public:
  AffineDependenceError(const std::string& what, Vec lambda)
      : std::domain_error(what), lambda_(std::move(lambda)) {}
  const Vec& lambda() const { return lambda_; }

 private:
  Vec lambda_;
};

struct SeparatingFunctional {
  Vec coeffs;
  Rational max_a;    // max over A of <coeffs, y>; unset when A is empty
  Rational at_x;
  Rational min_b;    // unset when B is empty
  bool has_a = false;
  bool has_b = false;

  /// Strict separation, recomputed from the points.
  bool separates(const std::vector<Vec>& a, const Vec& x, const std::vector<Vec>& b) const {
    const Rational vx = detail::dot(coeffs, x);
    for (const auto& y : a)
      if (!(detail::dot(coeffs, y) < vx)) return false;
    for (const auto& y : b)
      if (!(detail::dot(coeffs, y) > vx)) return false;
    return true;
  }
};

/// Linear functional with <c,y> < <c,x> for y in A and <c,y> > <c,x> for y
/// in B. Differences y - x are completed to a basis with standard vectors;
/// targets are -1 on A, +1 on B, 0 on the fill-ins.
inline SeparatingFunctional separating_functional(const std::vector<Vec>& a, const Vec& x,
                                                  const std::vector<Vec>& b) {
  std::vector<Vec> ordered = a;
  ordered.push_back(x);
  ordered.insert(ordered.end(), b.begin(), b.end());
  auto ind = affinely_independent(ordered);
  if (!ind.independent) throw AffineDependenceError("points are affinely dependent", ind.lambda);

  const std::size_t dim = x.size();
  Mat rows;
  Vec targets;
  for (const auto& y : a) {
    rows.push_back(detail::sub(y, x));
    targets.push_back(-1);
  }
  for (const auto& y : b) {
    rows.push_back(detail::sub(y, x));
    targets.push_back(1);
  }
  for (std::size_t j = 0; j < dim && rows.size() < dim; ++j) {
    Vec e(dim, Rational(0));
    e[j] = 1;
    Mat trial = rows;
    trial.push_back(e);
    if (rank(trial) == trial.size()) {
      rows.push_back(std::move(e));
      targets.push_back(0);
    }
  }
  SeparatingFunctional out;
  out.coeffs = solve(rows, targets);
  out.at_x = detail::dot(out.coeffs, x);
  for (const auto& y : a) {
    const Rational v = detail::dot(out.coeffs, y);
    if (!out.has_a || v > out.max_a) out.max_a = v;
    out.has_a = true;
  }
  for (const auto& y : b) {
    const Rational v = detail::dot(out.coeffs, y);
    if (!out.has_b || v < out.min_b) out.min_b = v;
    out.has_b = true;
  }
  return out;
}

}  // namespace simil
