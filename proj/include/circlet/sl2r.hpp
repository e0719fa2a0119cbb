#pragma once

// SL(2,R) in Iwasawa coordinates g = K(theta) A(a) N(b):
//
//   g = [cos t  -sin t] [1/sqrt(a)    0    ] [1  b]
//       [sin t   cos t] [   0     sqrt(a)  ] [0  1]
//
// The parameter-space group law is implemented in closed form; the 2x2
// matrix picture is kept alongside it as the reference every formula is
// checked against.

#include <cmath>
#include <numbers>

#include "circlet/error.hpp"

namespace circlet::sl2r {

/// Reduce an angle to (-pi, pi].
inline double reduce_angle(double theta) noexcept {
  constexpr double two_pi = 2.0 * std::numbers::pi;
  double r = std::remainder(theta, two_pi);  // [-pi, pi]
  if (r <= -std::numbers::pi) r += two_pi;
  return r;
}

struct Sl2Matrix {
  double m11 = 1.0, m12 = 0.0, m21 = 0.0, m22 = 1.0;

  double det() const noexcept { return m11 * m22 - m12 * m21; }

  friend Sl2Matrix operator*(const Sl2Matrix& x, const Sl2Matrix& y) noexcept {
    return {x.m11 * y.m11 + x.m12 * y.m21, x.m11 * y.m12 + x.m12 * y.m22,
            x.m21 * y.m11 + x.m22 * y.m21, x.m21 * y.m12 + x.m22 * y.m22};
  }

  /// Inverse of a unit-determinant matrix.
  Sl2Matrix inverse() const noexcept { return {m22, -m12, -m21, m11}; }
};

/// Element (a, b, theta) of SL(2,R). a > 0, theta kept in (-pi, pi].
class GroupElement {
 public:
  GroupElement() = default;
  GroupElement(double a, double b, double theta) : a_(a), b_(b), theta_(reduce_angle(theta)) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("GroupElement: dilation a must be positive");
    if (!std::isfinite(b) || !std::isfinite(theta)) throw DomainError("GroupElement: non-finite parameter");
  }

  static GroupElement identity() { return {}; }

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }
  double theta() const noexcept { return theta_; }

 private:
  double a_ = 1.0;
  double b_ = 0.0;
  double theta_ = 0.0;
};

/// Element (a, b) of the affine group SIM(1), law a'' = a'a, b'' = b + a b'.
class AffineElement {
 public:
  AffineElement() = default;
  AffineElement(double a, double b) : a_(a), b_(b) {
    if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("AffineElement: dilation a must be positive");
    if (!std::isfinite(b)) throw DomainError("AffineElement: non-finite translation");
  }

  double a() const noexcept { return a_; }
  double b() const noexcept { return b_; }

  /// g'' = g' g.
  friend AffineElement operator*(const AffineElement& gp, const AffineElement& g) {
    return {gp.a_ * g.a_, g.b_ + g.a_ * gp.b_};
  }

 private:
  double a_ = 1.0;
  double b_ = 0.0;
};

inline Sl2Matrix matrix(const GroupElement& g) noexcept {
  const double c = std::cos(g.theta()), s = std::sin(g.theta());
  const double ra = std::sqrt(g.a());
  return {c / ra, g.b() * c / ra - ra * s, s / ra, ra * c + g.b() * s / ra};
}

/// Recover (a, b, theta) from a unit-determinant matrix. The first column is
/// (cos t, sin t)/sqrt(a), so a = 1/(m11^2 + m21^2) and theta = atan2(m21, m11).
inline GroupElement iwasawa_decompose(const Sl2Matrix& m) {
  if (!(std::abs(m.det() - 1.0) <= 1e-8)) throw DomainError("iwasawa_decompose: determinant differs from 1");
  const double a = 1.0 / (m.m11 * m.m11 + m.m21 * m.m21);
  const double theta = std::atan2(m.m21, m.m11);
  const double c = std::cos(theta), s = std::sin(theta);
  // K(-theta) m = A N = [[1/sqrt(a), b/sqrt(a)], [0, sqrt(a)]]
  const double b = std::sqrt(a) * (c * m.m12 + s * m.m22);
  return {a, b, theta};
}

/// Group law g'' = g' g in parameter form.
///
/// a'' and b'' follow the closed-form law. tan(theta'') only fixes theta'' mod pi;
/// the branch is the one whose first column has the sign of the product's first
/// column, i.e. theta'' = atan2(num, den) with num/den taken from g' (cos t, sin t).
inline GroupElement compose(const GroupElement& gp, const GroupElement& g) {
  const double ap = gp.a(), bp = gp.b(), tp = gp.theta();
  const double a = g.a(), b = g.b(), t = g.theta();
  const double c = std::cos(t), s = std::sin(t);
  const double cp = std::cos(tp), sp = std::sin(tp);
  const double c2 = c * c, s2 = s * s, cs = c * s;

  const double denom = c2 + (ap * ap + bp * bp) * s2 + 2.0 * bp * cs;
  const double a2 = a * ap / denom;
  const double b2 = ((b + a * bp) * c2 + (2.0 * b * bp + a * (-1.0 + ap * ap + bp * bp)) * cs +
                     (ap * ap * b + bp * (-a + b * bp)) * s2) /
                    denom;
  const double num = ap * cp * s + (c + bp * s) * sp;
  const double den = c * cp + s * (bp * cp - ap * sp);
  return {a2, b2, std::atan2(num, den)};
}

/// Closed-form inverse; first column of g^{-1} is (m22, -m21).
inline GroupElement inverse(const GroupElement& g) {
  const double a = g.a(), b = g.b();
  const double c = std::cos(g.theta()), s = std::sin(g.theta());
  const double ai = a / (a * a * c * c + 2.0 * a * b * s * c + (1.0 + b * b) * s * s);
  const double ti = std::atan2(-s, a * c + b * s);
  // b = sqrt(a_i) (cos t_i m12' + sin t_i m22') with m' = g^{-1}
  const Sl2Matrix m = matrix(g);
  const double bi = std::sqrt(ai) * (-std::cos(ti) * m.m12 + std::sin(ti) * m.m11);
  return {ai, bi, ti};
}

/// Density of the Haar measure da db dtheta / a^2 (left = right, the group is unimodular).
inline double haar_weight(const GroupElement& g) noexcept { return 1.0 / (g.a() * g.a()); }

/// Section sigma(a, b) = (a, b, 0) of the affine subgroup.
inline GroupElement affine_embed(const AffineElement& h) { return {h.a(), h.b(), 0.0}; }

}  // namespace circlet::sl2r
