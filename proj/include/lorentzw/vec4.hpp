#pragma once

#include <array>
#include <cmath>
#include <cstddef>

namespace lorentzw {

/// Vector in R^4 carrying the flat metric diag(+1,+1,-1,-1).
struct Vec4 {
  double x1 = 0.0, x2 = 0.0, x3 = 0.0, x4 = 0.0;

  double& operator[](std::size_t i) { return (&x1)[i]; }
  double operator[](std::size_t i) const { return (&x1)[i]; }

  Vec4 operator+(const Vec4& o) const { return {x1 + o.x1, x2 + o.x2, x3 + o.x3, x4 + o.x4}; }
  Vec4 operator-(const Vec4& o) const { return {x1 - o.x1, x2 - o.x2, x3 - o.x3, x4 - o.x4}; }
  Vec4 operator*(double s) const { return {x1 * s, x2 * s, x3 * s, x4 * s}; }
  Vec4 operator/(double s) const { return {x1 / s, x2 / s, x3 / s, x4 / s}; }
  Vec4 operator-() const { return {-x1, -x2, -x3, -x4}; }
  Vec4& operator+=(const Vec4& o) {
    x1 += o.x1; x2 += o.x2; x3 += o.x3; x4 += o.x4;
    return *this;
  }

  bool finite() const {
    return std::isfinite(x1) && std::isfinite(x2) && std::isfinite(x3) && std::isfinite(x4);
  }
};

inline Vec4 operator*(double s, const Vec4& v) { return v * s; }

/// Indefinite inner product of signature (2,2).
inline double inner(const Vec4& a, const Vec4& b) {
  return a.x1 * b.x1 + a.x2 * b.x2 - a.x3 * b.x3 - a.x4 * b.x4;
}

/// Euclidean norm squared; used only for scaling/tolerance purposes.
inline double norm2_euclid(const Vec4& v) {
  return v.x1 * v.x1 + v.x2 * v.x2 + v.x3 * v.x3 + v.x4 * v.x4;
}

inline double norm_euclid(const Vec4& v) { return std::sqrt(norm2_euclid(v)); }

inline double max_abs(const Vec4& v) {
  return std::max(std::max(std::abs(v.x1), std::abs(v.x2)),
                  std::max(std::abs(v.x3), std::abs(v.x4)));
}

/// Lightlike test: |<v,v>| <= tol * max(1, ||v||^2_euclid).
inline bool is_null(const Vec4& v, double tol = 1e-10) {
  return std::abs(inner(v, v)) <= tol * std::max(1.0, norm2_euclid(v));
}

/// Rank of the 2x4 coordinate matrix [w1; w2] by pivoted elimination.
/// The Gram matrix is useless here: normal vectors may be lightlike.
/// Threshold is tol relative to the largest row magnitude.
inline int normal_rank(const Vec4& w1, const Vec4& w2, double tol = 1e-10) {
  std::array<std::array<double, 4>, 2> m{{{w1.x1, w1.x2, w1.x3, w1.x4},
                                          {w2.x1, w2.x2, w2.x3, w2.x4}}};
  double scale = 0.0;
  for (const auto& row : m)
    for (double e : row) scale = std::max(scale, std::abs(e));
  if (scale == 0.0) return 0;
  const double thr = tol * scale;

  // pivot on the largest entry
  std::size_t pi = 0, pj = 0;
  double best = 0.0;
  for (std::size_t i = 0; i < 2; ++i)
    for (std::size_t j = 0; j < 4; ++j)
      if (std::abs(m[i][j]) > best) { best = std::abs(m[i][j]); pi = i; pj = j; }
  if (best <= thr) return 0;

  const std::size_t oi = 1 - pi;
  const double factor = m[oi][pj] / m[pi][pj];
  double rem = 0.0;
  for (std::size_t j = 0; j < 4; ++j) rem = std::max(rem, std::abs(m[oi][j] - factor * m[pi][j]));
  return rem <= thr ? 1 : 2;
}

}  // namespace lorentzw
