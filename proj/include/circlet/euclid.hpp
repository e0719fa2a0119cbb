#pragma once

// Stereographic lifting between the half circle and the line, the radius-R
// contraction maps, and the Euclidean-limit experiment.
//
// A radius-R circle shares the (-pi/2, pi/2) chart with the unit circle; the
// factor R in its measure R d theta is carried by I_R, so that
//   || I_R gamma ||_{L2(R)}^2 = R || gamma ||^2.

#include <algorithm>
#include <cmath>
#include <utility>

#include "circlet/circle_rep.hpp"
#include "circlet/line_cwt.hpp"

namespace circlet::euclid {

using circle::CircleGrid;
using circle::CircleSignal;
using circle::cplx;
using line::LineGrid;
using line::LineSignal;
inline constexpr double pi = circle::pi;

struct ContractionParams {
  double R = 1.0;

  explicit ContractionParams(double radius) : R(radius) {
    if (!(radius >= 1.0) || !std::isfinite(radius)) throw DomainError("ContractionParams: need R >= 1");
  }
};

/// I_R gamma (x) = gamma(arctan(x/R)) / sqrt(1 + (x/R)^2); R = 1 is the stereographic map S.
inline LineSignal i_r_map(const CircleSignal& gamma, double R, const LineGrid& grid) {
  const ContractionParams p(R);
  return LineSignal::from_function(
      grid,
      [gamma, R = p.R](double x) {
        const double u = x / R;
        return gamma.at(std::atan(u)) / std::sqrt(1.0 + u * u);
      },
      gamma.label());
}

/// I_R^{-1} f (theta) = f(R tan theta) / cos theta.
inline CircleSignal i_r_inverse(const LineSignal& f, double R, const CircleGrid& grid) {
  const ContractionParams p(R);
  if (f.edge_ratio() > 1e-6) throw DecayError("i_r_inverse: signal does not decay at the window edges");
  return CircleSignal::from_evaluator(
      grid, [f, R = p.R](double t) { return f.at(R * std::tan(t)) / std::cos(t); }, f.label(), f.has_evaluator());
}

/// [S gamma](x) = gamma(arctan x) / sqrt(1 + x^2).
inline LineSignal stereo_project(const CircleSignal& gamma, const LineGrid& grid) { return i_r_map(gamma, 1.0, grid); }

/// [S^{-1} f](theta) = f(tan theta) / cos theta.
inline CircleSignal stereo_lift(const LineSignal& f, const CircleGrid& grid) { return i_r_inverse(f, 1.0, grid); }

/// max_x |S(U(a,0) gamma)(x) - a^{-1/2} (S gamma)(x/a)| over the line nodes.
inline double check_intertwining(const CircleSignal& gamma, double a, const LineGrid& grid) {
  if (!gamma.analytic()) throw DomainError("check_intertwining: needs a closed-form evaluator");
  const auto lhs = stereo_project(circle::rep_action(gamma, a, 0.0), grid);
  const auto sg = stereo_project(gamma, grid);
  const double amp = 1.0 / std::sqrt(a);
  double worst = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    const double x = grid.node(j);
    worst = std::max(worst, std::abs(lhs.values()[j] - amp * sg.at(x / a)));
  }
  return worst;
}

/// Pi_R(b, a) = (arctan(b/R), a).
inline std::pair<double, double> contract_point(double b, double a, const ContractionParams& params) {
  if (!(a > 0.0)) throw DomainError("contract_point: scale must be positive");
  return {std::atan(b / params.R), a};
}

/// Compactly supported bump exp(-1/(1 - (x/s)^2)) on (-s, s).
inline LineSignal bump(const LineGrid& grid, double s = 1.0, double center = 0.0) {
  return LineSignal::from_function(
      grid,
      [s, center](double x) -> cplx {
        const double u = (x - center) / s;
        if (std::abs(u) >= 1.0) return 0.0;
        return std::exp(-1.0 / (1.0 - u * u));
      },
      "bump");
}

namespace detail {

// Smallest interval [lo, hi] holding every nonzero sample, widened by one node.
inline std::pair<double, double> support(const LineSignal& f) {
  const auto v = f.values();
  const auto& g = f.grid();
  std::size_t first = v.size(), last = 0;
  for (std::size_t j = 0; j < v.size(); ++j) {
    if (v[j] != cplx{}) {
      first = std::min(first, j);
      last = j;
    }
  }
  if (first == v.size()) return {0.0, 0.0};
  return {g.node(first) - g.spacing(), g.node(last) + g.spacing()};
}

}  // namespace detail

/// || I_R U_R(Pi_R(b, a)) I_R^{-1} f - U'(b, a) f ||_{L2(R)} on f's window, with U_R
/// the circle action and U' the affine action. Both sides are evaluated in closed
/// form at the line nodes.
inline double euclidean_limit_error(const LineSignal& f, double b, double a, double R) {
  const ContractionParams p(R);
  if (!(a > 0.0)) throw DomainError("euclidean_limit_error: scale must be positive");
  if (!f.has_evaluator()) throw DomainError("euclidean_limit_error: needs a closed-form evaluator");
  const auto [vt, a_c] = contract_point(b, a, p);
  const auto [s_lo, s_hi] = detail::support(f);
  const auto& g = f.grid();

  // image of the support on the chart, then on the line
  const double phi_lo = std::atan(a * s_lo / R) + vt, phi_hi = std::atan(a * s_hi / R) + vt;
  if (!(phi_lo > -pi / 2) || !(phi_hi < pi / 2))
    throw DomainError("euclidean_limit_error: dilated support leaves the half-circle chart");
  const double x_lo = R * std::tan(phi_lo), x_hi = R * std::tan(phi_hi);
  if (x_lo < g.x_lo() || x_hi >= g.x_hi() || b + a * s_lo < g.x_lo() || b + a * s_hi >= g.x_hi())
    throw DomainError("euclidean_limit_error: transformed support leaves the window");

  const double inv = 1.0 / a_c, amp = 1.0 / std::sqrt(a);
  double acc = 0.0;
  for (std::size_t j = 0; j < g.size(); ++j) {
    const double x = g.node(j);
    const double u = x / R;
    const double phi = circle::reduce_half(std::atan(u) - vt);
    const double psi = circle::dilate_angle(phi, inv);
    const cplx lifted = f.at(R * std::tan(psi)) / std::cos(psi);
    const cplx lhs = std::sqrt(circle::multiplier(inv, phi)) * lifted / std::sqrt(1.0 + u * u);
    const cplx rhs = amp * f.at((x - b) / a);
    acc += std::norm(lhs - rhs);
  }
  return std::sqrt(acc * g.spacing());
}

}  // namespace circlet::euclid
