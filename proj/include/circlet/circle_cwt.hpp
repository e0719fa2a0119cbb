#pragma once

// Wavelet analysis on the half circle: admissibility (Lambda_n and the weak
// condition), the scalogram Psi(vartheta, a) = <gamma_{vartheta,a} | psi>,
// frame bounds and reconstruction.
//
// Everything runs through the Fourier coefficients gamma_a^n of the dilated
// wavelet gamma_a = U(a, 0) gamma. Rotations only add the phase exp(-2 i n vartheta),
// so a whole row of the scalogram is one inverse DFT.

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>
#include <vector>

#include "circlet/circle_rep.hpp"
#include "circlet/parallel.hpp"
#include "circlet/scales.hpp"

namespace circlet::circle {

using circlet::ScaleGrid;

/// psi^n = (1/sqrt(pi)) int psi(theta) exp(-2 i n theta) d theta for |n| <= n_max,
/// as a DFT over the midpoint grid.
inline FourierCoeffs fourier_coeffs(const CircleSignal& psi, long n_max) {
  if (n_max < 0 || n_max > static_cast<long>(psi.grid().size() / 4))
    throw DomainError("fourier_coeffs: n_max must lie in [0, n_samples/4]");
  check_band_limit(psi, "fourier_coeffs");
  const auto s = detail::spectrum(psi.values());
  FourierCoeffs c(n_max);
  for (long n = -n_max; n <= n_max; ++n) c(n) = s.coeffs(n);
  return c;
}

/// Highest mode of `g` whose coefficient exceeds 1e-13 of the largest one.
inline long effective_band(const CircleSignal& g) {
  const auto s = detail::spectrum(g.values());
  double peak = 0.0;
  for (long n = -s.n_max; n <= s.n_max; ++n) peak = std::max(peak, std::abs(s.coeffs(n)));
  long band = 0;
  for (long n = -s.n_max; n <= s.n_max; ++n)
    if (std::abs(s.coeffs(n)) > 1e-13 * peak) band = std::max(band, std::abs(n));
  return band;
}

struct DilatedCoeffs {
  FourierCoeffs coeffs;
  std::size_t quadrature_nodes = 0;  // midpoint nodes needed for convergence
};

/// Fourier coefficients of gamma_a = U(a, 0) gamma for |n| <= n_max.
///
/// gamma_a has structure on the scale min(a, 1/a), so it is sampled on its own
/// midpoint grid. The grid is doubled until the spectrum above M/4 falls below
/// 1e-13 ||gamma||; aliasing into the kept modes is then bounded by that tail.
/// `band` is the effective band of gamma (see effective_band()).
inline DilatedCoeffs dilated_coefficients(const CircleSignal& gamma, double a, long n_max, long band) {
  if (!(a > 0.0)) throw DomainError("dilated_coefficients: scale must be positive");
  const double stretch = std::max(a, 1.0 / a);
  const double width = 2.0 * static_cast<double>(std::max(band, 8L)) * stretch + 4.0 * static_cast<double>(n_max) + 4.0;
  std::size_t m = fft::next_pow2(static_cast<std::size_t>(std::min(width, 1e8)));
  m = std::max<std::size_t>(m, 64);
  const double tol = 1e-13 * std::max(gamma.norm(), std::numeric_limits<double>::min());
  constexpr std::size_t max_nodes = std::size_t{1} << 24;
  const double inv = 1.0 / a;

  std::vector<cplx> v;
  while (m <= max_nodes) {
    v.resize(m);
    for (std::size_t j = 0; j < m; ++j) {
      const double t = -pi / 2 + pi * (static_cast<double>(j) + 0.5) / static_cast<double>(m);
      v[j] = std::sqrt(multiplier(inv, t)) * gamma.at(dilate_angle(t, inv));
    }
    const auto s = detail::spectrum(v);
    double tail = std::abs(s.nyquist);
    for (long n = static_cast<long>(m / 4) + 1; n <= s.n_max; ++n)
      tail = std::max({tail, std::abs(s.coeffs(n)), std::abs(s.coeffs(-n))});
    if (tail <= tol) {
      FourierCoeffs c(n_max);
      for (long n = -n_max; n <= n_max; ++n) c(n) = s.coeffs(n);
      return {std::move(c), m};
    }
    m *= 2;
  }
  throw Error("dilated_coefficients: no convergence at a = " + std::to_string(a));
}

/// Dilated-wavelet coefficients gamma_{a_j}^n for every node of a scale grid.
/// Building one is the expensive step; lambda_sequence, analyze and synthesize
/// all accept a prebuilt bank.
struct WaveletBank {
  std::string wavelet;
  ScaleGrid scales;
  long n_max = 0;
  std::vector<FourierCoeffs> coeffs;  // one per scale node
};

inline WaveletBank make_bank(const CircleSignal& gamma, const ScaleGrid& scales, long n_max) {
  if (n_max < 0) throw DomainError("make_bank: n_max must be non-negative");
  const long band = effective_band(gamma);
  WaveletBank b{gamma.label(), scales, n_max, std::vector<FourierCoeffs>(scales.size())};
  parallel_for(scales.size(),
               [&](std::size_t j) { b.coeffs[j] = dilated_coefficients(gamma, scales.node(j), n_max, band).coeffs; });
  return b;
}

struct Truncation {
  double a_min = 0.0, a_max = 0.0;
  std::size_t count = 0;
  double tail_lo = 0.0;   // max_n of the d(ln a) integrand |gamma_a^n|^2 / a at a_min
  double tail_hi = 0.0;   // same at a_max
  double decay_lo = 0.0;  // max_n of (integrand at a_min) / (peak integrand of mode n)
  double decay_hi = 0.0;  // same at a_max
  bool trusted_range = false;  // grid covers [1e-3, 1e3]
};

struct AdmissibilityReport {
  std::string wavelet;
  long n_max = 0;
  std::vector<double> lambda;  // Lambda_n at index n + n_max
  double sup = 0.0, inf = 0.0;
  double weak_integral = 0.0;
  bool weak_decay_ok = false;  // decay precondition of the weak integral
  bool converged = false;      // scale integrand decays at both ends of the grid
  bool plateau = false;        // Lambda_{+-n} flat over the top modes
  bool admissible = false;
  Truncation truncation;

  double lambda_at(long n) const { return lambda.at(static_cast<std::size_t>(n + n_max)); }
};

/// Scale integrand must fall below this fraction of its peak at both grid ends.
inline constexpr double kTailDecayLimit = 1e-3;
/// Relative spread of Lambda over the top quarter of the tested modes.
inline constexpr double kPlateauSpread = 0.1;

namespace detail {

inline bool plateau_check(const AdmissibilityReport& r) {
  if (r.n_max < 4) return true;
  const long lo = r.n_max - r.n_max / 4;
  double mn = std::numeric_limits<double>::infinity(), mx = 0.0;
  for (long n = lo; n <= r.n_max; ++n) {
    for (long sgn : {-1L, 1L}) {
      const double v = r.lambda_at(sgn * n);
      mn = std::min(mn, v);
      mx = std::max(mx, v);
    }
  }
  return mx > 0.0 && (mx - mn) / mx <= kPlateauSpread;
}

}  // namespace detail

/// Lambda_n = int_0^inf da/a^2 |gamma_a^n|^2, truncated to the grid and
/// integrated in ln a with the trapezoid rule (da/a^2 = d(ln a)/a).
/// Fills the Lambda and truncation parts of the report.
inline AdmissibilityReport lambda_sequence(const WaveletBank& bank) {
  const auto& grid = bank.scales;
  const long n_max = bank.n_max;
  const std::size_t ns = grid.size();
  const std::size_t nm = static_cast<std::size_t>(2 * n_max + 1);
  std::vector<double> integrand(ns * nm);  // |gamma_a^n|^2 / a
  for (std::size_t j = 0; j < ns; ++j)
    for (long n = -n_max; n <= n_max; ++n)
      integrand[j * nm + static_cast<std::size_t>(n + n_max)] = std::norm(bank.coeffs[j](n)) / grid.node(j);

  AdmissibilityReport r;
  r.wavelet = bank.wavelet;
  r.n_max = n_max;
  r.lambda.assign(nm, 0.0);
  const auto w = grid.log_weights();
  for (std::size_t j = 0; j < ns; ++j)
    for (std::size_t k = 0; k < nm; ++k) r.lambda[k] += w[j] * integrand[j * nm + k];

  auto& t = r.truncation;
  t.a_min = grid.a_min();
  t.a_max = grid.a_max();
  t.count = ns;
  t.trusted_range = grid.a_min() <= 1e-3 * (1 + 1e-12) && grid.a_max() >= 1e3 * (1 - 1e-12);
  for (std::size_t k = 0; k < nm; ++k) {
    double peak = 0.0;
    for (std::size_t j = 0; j < ns; ++j) peak = std::max(peak, integrand[j * nm + k]);
    const double lo = integrand[k], hi = integrand[(ns - 1) * nm + k];
    t.tail_lo = std::max(t.tail_lo, lo);
    t.tail_hi = std::max(t.tail_hi, hi);
    if (peak > 0.0) {
      t.decay_lo = std::max(t.decay_lo, lo / peak);
      t.decay_hi = std::max(t.decay_hi, hi / peak);
    }
  }
  r.converged = t.decay_lo < kTailDecayLimit && t.decay_hi < kTailDecayLimit;

  r.sup = *std::max_element(r.lambda.begin(), r.lambda.end());
  r.inf = *std::min_element(r.lambda.begin(), r.lambda.end());
  r.plateau = detail::plateau_check(r);
  return r;
}

inline AdmissibilityReport lambda_sequence(const CircleSignal& gamma, const ScaleGrid& grid, long n_max) {
  return lambda_sequence(make_bank(gamma, grid, n_max));
}

/// True when |gamma| at the two outermost nodes is below 1e-6 of max |gamma|,
/// so that gamma / cos(theta) is integrable in practice.
inline bool weak_decay_ok(const CircleSignal& gamma) {
  const auto v = gamma.values();
  const double edge = std::max(std::abs(v.front()), std::abs(v.back()));
  return edge <= 1e-6 * gamma.max_abs();
}

/// int gamma(theta)/cos(theta) d theta over the half circle (midpoint rule).
/// Vanishes for every admissible wavelet; equals int [S gamma](x) dx on the line.
inline cplx weak_admissibility(const CircleSignal& gamma) {
  if (!weak_decay_ok(gamma)) throw DecayError("weak_admissibility: signal does not decay toward +-pi/2");
  const auto v = gamma.values();
  cplx acc{};
  for (std::size_t j = 0; j < v.size(); ++j) acc += v[j] / std::cos(gamma.grid().node(j));
  return acc * gamma.grid().spacing();
}

/// Lambda part plus weak condition and verdict.
///
/// admissible = weak integral below 1e-8 ||gamma|| (with the decay precondition met)
///              and the scale integrand decays at both ends
///              and Lambda is finite, strictly positive and flat over the top modes.
/// The plateau test is a heuristic stand-in for sup over all n.
inline AdmissibilityReport admissibility(const CircleSignal& gamma, const WaveletBank& bank) {
  auto r = lambda_sequence(bank);
  r.weak_decay_ok = weak_decay_ok(gamma);
  {
    // the raw midpoint sum is reported even when the precondition fails
    const auto v = gamma.values();
    cplx acc{};
    for (std::size_t j = 0; j < v.size(); ++j) acc += v[j] / std::cos(gamma.grid().node(j));
    r.weak_integral = std::abs(acc * gamma.grid().spacing());
  }
  const bool weak_ok = r.weak_decay_ok && r.weak_integral < 1e-8 * gamma.norm();
  const bool finite = std::isfinite(r.sup) && std::isfinite(r.inf);
  r.admissible = weak_ok && r.converged && finite && r.inf > 0.0 && r.plateau;
  return r;
}

inline AdmissibilityReport admissibility(const CircleSignal& gamma, const ScaleGrid& grid = ScaleGrid::standard(),
                                         long n_max = 64) {
  return admissibility(gamma, make_bank(gamma, grid, n_max));
}

/// Difference of Gaussians gamma - c U(alpha, 0) gamma with gamma = exp(-tan^2 theta).
/// c = 1 gives the literal difference; c = alpha^{-1/2} (balanced) makes the weak
/// integral vanish, because int S(U(alpha,0) gamma) = sqrt(alpha) int S gamma.
inline CircleSignal make_dog(double alpha_scale, bool balanced, CircleGrid grid = CircleGrid(1024)) {
  if (!(alpha_scale > 0.0) || alpha_scale == 1.0) throw DomainError("make_dog: alpha must be positive and != 1");
  const double c = balanced ? 1.0 / std::sqrt(alpha_scale) : 1.0;
  const double inv = 1.0 / alpha_scale;
  auto f = [c, inv](double t) -> cplx {
    const double g = std::exp(-std::tan(t) * std::tan(t));
    const double td = std::tan(dilate_angle(t, inv));
    return g - c * std::sqrt(multiplier(inv, t)) * std::exp(-td * td);
  };
  std::string label = "dog:" + std::to_string(alpha_scale) + (balanced ? ":balanced" : "");
  return CircleSignal::from_function(grid, f, label);
}

/// Psi(vartheta_k, a_j), rows = scales (ascending), columns = angles on a
/// midpoint grid of n_angles nodes.
struct Scalogram {
  ScaleGrid scales;
  std::size_t n_angles = 0;
  std::size_t signal_samples = 0;
  std::string wavelet;
  std::vector<cplx> values;

  cplx& at(std::size_t scale, std::size_t angle) { return values[scale * n_angles + angle]; }
  cplx at(std::size_t scale, std::size_t angle) const { return values[scale * n_angles + angle]; }
  CircleGrid angle_grid() const { return CircleGrid(n_angles); }
};

/// Psi(vartheta, a) = sum_n exp(2 i n vartheta) conj(gamma_a^n) psi^n, one inverse
/// DFT per scale. n_angles = 0 uses the signal grid.
inline Scalogram analyze(const CircleSignal& psi, const WaveletBank& bank, std::size_t n_angles = 0) {
  check_band_limit(psi, "analyze");
  const std::size_t k_ang = n_angles ? n_angles : psi.grid().size();
  const auto spec = detail::spectrum(psi.values());
  const long nm = spec.n_max;
  if (bank.n_max < nm) throw DomainError("analyze: wavelet bank does not cover the signal's modes");
  const auto& scales = bank.scales;

  Scalogram out{scales, k_ang, psi.grid().size(), bank.wavelet, std::vector<cplx>(scales.size() * k_ang)};
  parallel_for(scales.size(), [&](std::size_t j) {
    const auto& g = bank.coeffs[j];
    std::vector<cplx> row(k_ang, cplx{});
    for (long n = -nm; n <= nm; ++n)
      row[fft::bin(n, k_ang)] += std::conj(g(n)) * spec.coeffs(n) * std::conj(detail::mode_phase(n, k_ang));
    fft::transform(row, false);
    std::copy(row.begin(), row.end(), out.values.begin() + static_cast<std::ptrdiff_t>(j * k_ang));
  });
  return out;
}

inline Scalogram analyze(const CircleSignal& psi, const CircleSignal& gamma, const ScaleGrid& scales,
                         std::size_t n_angles = 0) {
  return analyze(psi, make_bank(gamma, scales, static_cast<long>((psi.grid().size() - 1) / 2)), n_angles);
}

struct FrameBounds {
  double c1 = 0.0, c2 = 0.0;
  bool plateau = false;  // false: Lambda at the top modes still moving, truncation unsafe
};

/// c1 = min Lambda_n, c2 = max Lambda_n over the tested modes. The frame operator
/// is diagonal in the Fourier basis; with d vartheta da/a^2 on the parameter space
/// its eigenvalue on mode n is pi Lambda_n.
inline FrameBounds frame_bounds(const AdmissibilityReport& report) { return {report.inf, report.sup, report.plateau}; }

struct Reconstruction {
  CircleSignal signal;
  std::vector<long> refused;  // modes left at zero (Lambda below the floor or not in the report)
};

/// Mode-wise inverse of the frame operator:
///   psi^m = 1/(pi Lambda_m) int da/a^2 gamma_a^m int d vartheta exp(-2 i m vartheta) Psi(vartheta, a)
/// followed by Fourier synthesis on the scalogram's signal grid.
inline Reconstruction synthesize(const Scalogram& s, const WaveletBank& bank, const AdmissibilityReport& report,
                                 double floor = 1e-12) {
  if (s.values.size() != s.scales.size() * s.n_angles) throw DomainError("synthesize: scalogram shape mismatch");
  if (!(bank.scales == s.scales)) throw DomainError("synthesize: wavelet bank and scalogram use different scales");
  const long sig_modes = static_cast<long>((s.signal_samples - 1) / 2);
  const long nm = std::min(sig_modes, static_cast<long>((s.n_angles - 1) / 2));
  const long used = std::min({nm, report.n_max, bank.n_max});
  const std::size_t ns = s.scales.size();
  const std::size_t width = static_cast<std::size_t>(2 * used + 1);

  // per-scale gamma_a^m * (angle integral) / a
  std::vector<cplx> contrib(ns * width);
  parallel_for(ns, [&](std::size_t j) {
    const double a = s.scales.node(j);
    std::vector<cplx> row(s.values.begin() + static_cast<std::ptrdiff_t>(j * s.n_angles),
                          s.values.begin() + static_cast<std::ptrdiff_t>((j + 1) * s.n_angles));
    fft::transform(row, true);
    const double h = pi / static_cast<double>(s.n_angles);
    for (long m = -used; m <= used; ++m) {
      const cplx angle_int = h * detail::mode_phase(m, s.n_angles) * row[fft::bin(m, s.n_angles)];
      contrib[j * width + static_cast<std::size_t>(m + used)] = bank.coeffs[j](m) * angle_int / a;
    }
  });

  const auto w = s.scales.log_weights();
  double lmax = 0.0;
  for (long m = -used; m <= used; ++m) lmax = std::max(lmax, report.lambda_at(m));

  FourierCoeffs c(sig_modes);
  std::vector<long> refused;
  for (long m = -sig_modes; m <= sig_modes; ++m) {
    if (std::abs(m) > used || !(report.lambda_at(m) >= floor * lmax) || report.lambda_at(m) <= 0.0) {
      refused.push_back(m);
      continue;
    }
    cplx acc{};
    for (std::size_t j = 0; j < ns; ++j) acc += w[j] * contrib[j * width + static_cast<std::size_t>(m + used)];
    c(m) = acc / (pi * report.lambda_at(m));
  }
  auto samples = detail::synthesize_samples(c, s.signal_samples);
  return {CircleSignal::from_samples(CircleGrid(s.signal_samples), std::move(samples)), std::move(refused)};
}

inline Reconstruction synthesize(const Scalogram& s, const CircleSignal& gamma, const AdmissibilityReport& report,
                                 double floor = 1e-12) {
  const long sig_modes = static_cast<long>((s.signal_samples - 1) / 2);
  const long used = std::min({sig_modes, static_cast<long>((s.n_angles - 1) / 2), report.n_max});
  return synthesize(s, make_bank(gamma, s.scales, used), report, floor);
}

}  // namespace circlet::circle
