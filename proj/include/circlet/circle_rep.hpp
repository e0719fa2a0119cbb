#pragma once

// Continuous-series representation (alpha = 1/2, s = 0) of SL(2,R)/N on the
// half circle (-pi/2, pi/2): dilation of angles, the multiplier that keeps the
// action unitary, the finite action on signals, and the infinitesimal generators.
//
// Signals live on a midpoint grid theta_j = -pi/2 + pi (j + 1/2)/N, which never
// touches the endpoints where tan and 1/cos blow up. All integrals over the half
// circle are midpoint sums, which are spectrally accurate for smooth pi-periodic
// integrands. Fourier coefficients are taken in the orthonormal basis
// <theta|n> = exp(2 i n theta)/sqrt(pi).

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <utility>
#include <vector>

#include "circlet/error.hpp"
#include "circlet/fft.hpp"

namespace circlet::circle {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

/// Reduce an angle modulo pi into (-pi/2, pi/2]. Idempotent on that interval.
inline double reduce_half(double theta) noexcept {
  while (theta > pi / 2) theta -= pi;
  while (theta <= -pi / 2) theta += pi;
  return theta;
}

/// theta -> theta_a = arctan(a tan theta).
inline double dilate_angle(double theta, double a) noexcept { return std::atan(a * std::tan(theta)); }

/// lambda(a, theta) = a / (a^2 + (1 - a^2) cos^2 theta), the Radon-Nikodym
/// derivative d theta_a / d theta.
inline double multiplier(double a, double theta) noexcept {
  const double c = std::cos(theta);
  return a / (a * a + (1.0 - a * a) * c * c);
}

class CircleGrid {
 public:
  explicit CircleGrid(std::size_t n_samples) : n_(n_samples) {
    if (n_samples == 0) throw DomainError("CircleGrid: n_samples must be positive");
  }

  std::size_t size() const noexcept { return n_; }
  double spacing() const noexcept { return pi / static_cast<double>(n_); }
  double node(std::size_t j) const noexcept {
    return -pi / 2 + pi * (static_cast<double>(j) + 0.5) / static_cast<double>(n_);
  }
  std::vector<double> nodes() const {
    std::vector<double> t(n_);
    for (std::size_t j = 0; j < n_; ++j) t[j] = node(j);
    return t;
  }

  friend bool operator==(const CircleGrid&, const CircleGrid&) = default;

 private:
  std::size_t n_;
};

/// Continuous-series parameters. Only s = 0 (alpha = 1/2) is realized by the
/// finite action; the generators accept any s.
struct RepParams {
  double s = 0.0;
  cplx alpha() const noexcept { return {0.5, s}; }
};

/// Fourier coefficients psi^n, |n| <= n_max, in the orthonormal basis.
class FourierCoeffs {
 public:
  FourierCoeffs() = default;
  explicit FourierCoeffs(long n_max) : n_max_(n_max), c_(static_cast<std::size_t>(2 * n_max + 1)) {}

  long n_max() const noexcept { return n_max_; }
  cplx& operator()(long n) { return c_[static_cast<std::size_t>(n + n_max_)]; }
  cplx operator()(long n) const { return c_[static_cast<std::size_t>(n + n_max_)]; }
  std::span<const cplx> data() const noexcept { return c_; }

  double energy() const noexcept {
    double e = 0.0;
    for (const auto& v : c_) e += std::norm(v);
    return e;
  }

 private:
  long n_max_ = 0;
  std::vector<cplx> c_;
};

namespace detail {

// Signed-mode coefficients from samples on an M-point midpoint grid:
//   psi^n = sqrt(pi)/M * (-1)^n exp(-i pi n/M) * DFT_n
inline cplx mode_phase(long n, std::size_t m) {
  const double sign = (n % 2 == 0) ? 1.0 : -1.0;
  return sign * std::polar(1.0, -pi * static_cast<double>(n) / static_cast<double>(m));
}

struct Spectrum {
  long n_max = 0;             // modes |n| <= n_max are stored in `coeffs`
  FourierCoeffs coeffs;
  cplx nyquist{0.0, 0.0};     // coefficient of mode -N/2 for even N (aliases +N/2)
  bool has_nyquist = false;
};

inline Spectrum spectrum(std::span<const cplx> samples) {
  const std::size_t m = samples.size();
  std::vector<cplx> x(samples.begin(), samples.end());
  fft::transform(x, true);
  Spectrum s;
  s.n_max = static_cast<long>((m - 1) / 2);
  s.coeffs = FourierCoeffs(s.n_max);
  const double scale = std::sqrt(pi) / static_cast<double>(m);
  for (long n = -s.n_max; n <= s.n_max; ++n) s.coeffs(n) = scale * mode_phase(n, m) * x[fft::bin(n, m)];
  if (m % 2 == 0) {
    const long ny = -static_cast<long>(m / 2);
    s.has_nyquist = true;
    s.nyquist = scale * mode_phase(ny, m) * x[fft::bin(ny, m)];
  }
  return s;
}

/// Samples sum_n c_n exp(2 i n theta_j)/sqrt(pi) on an m-point midpoint grid.
inline std::vector<cplx> synthesize_samples(const FourierCoeffs& c, std::size_t m) {
  std::vector<cplx> x(m, cplx{});
  for (long n = -c.n_max(); n <= c.n_max(); ++n) x[fft::bin(n, m)] += c(n) * std::conj(mode_phase(n, m));
  fft::transform(x, false);
  const double scale = 1.0 / std::sqrt(pi);
  for (auto& v : x) v *= scale;
  return x;
}

/// Trigonometric interpolant of a sampled signal, evaluated anywhere.
///
/// The interpolant is tabulated once on a 16x finer midpoint grid (exact, by
/// zero-padded synthesis) and read back with 8-point Lagrange interpolation, so
/// each evaluation costs O(1). For signals band-limited to N/4 the local error
/// is near 1e-12 of the signal scale.
class Interpolant {
 public:
  explicit Interpolant(std::span<const cplx> samples) {
    const auto s = spectrum(samples);
    FourierCoeffs c(s.n_max + 1);
    for (long n = -s.n_max; n <= s.n_max; ++n) c(n) = s.coeffs(n);
    if (s.has_nyquist) {
      // split the ambiguous mode evenly between -N/2 and +N/2
      c(s.n_max + 1) = 0.5 * s.nyquist;
      c(-s.n_max - 1) = 0.5 * s.nyquist;
    }
    fine_ = synthesize_samples(c, std::max<std::size_t>(16 * samples.size(), 256));
  }

  cplx operator()(double theta) const {
    constexpr int taps = 8;
    const auto m = static_cast<long>(fine_.size());
    const double u = (theta + pi / 2) / pi * static_cast<double>(m) - 0.5;  // fractional fine index
    const double fl = std::floor(u);
    const long base = static_cast<long>(fl) - taps / 2 + 1;
    const double x = u - static_cast<double>(base);  // in [3, 4)
    auto value = [&](long k) { return fine_[static_cast<std::size_t>(((base + k) % m + m) % m)]; };
    if (u == fl) return value(taps / 2 - 1);
    // barycentric weights for equispaced nodes: (-1)^k C(7, k)
    static constexpr double w[taps] = {1, -7, 21, -35, 35, -21, 7, -1};
    cplx num{};
    double den = 0.0;
    for (int k = 0; k < taps; ++k) {
      const double t = w[k] / (x - k);
      num += t * value(k);
      den += t;
    }
    return num / den;
  }

 private:
  std::vector<cplx> fine_;
};

}  // namespace detail

/// Sampled function on (-pi/2, pi/2). Always evaluable off-grid: through its
/// closed form when one was supplied (or derived from closed forms), otherwise
/// through trigonometric interpolation of the samples.
class CircleSignal {
 public:
  using Evaluator = std::function<cplx(double)>;

  static CircleSignal from_function(CircleGrid grid, Evaluator f, std::string label = {}) {
    return from_evaluator(grid, std::move(f), std::move(label), true);
  }

  /// Sample `f` on the grid and keep it as the off-grid evaluator. `analytic`
  /// records whether `f` is built from closed forms only.
  static CircleSignal from_evaluator(CircleGrid grid, Evaluator f, std::string label, bool analytic) {
    CircleSignal s(grid);
    s.values_.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) s.values_[j] = f(grid.node(j));
    s.eval_ = std::make_shared<const Evaluator>(std::move(f));
    s.analytic_ = analytic;
    s.label_ = std::move(label);
    return s;
  }

  static CircleSignal from_samples(CircleGrid grid, std::vector<cplx> values, std::string label = {}) {
    if (values.size() != grid.size()) throw DomainError("CircleSignal: sample count does not match grid");
    CircleSignal s(grid);
    s.values_ = std::move(values);
    auto interp = std::make_shared<const detail::Interpolant>(s.values_);
    s.eval_ = std::make_shared<const Evaluator>([interp](double t) { return (*interp)(t); });
    s.analytic_ = false;
    s.label_ = std::move(label);
    return s;
  }

  const CircleGrid& grid() const noexcept { return grid_; }
  std::span<const cplx> values() const noexcept { return values_; }
  const std::string& label() const noexcept { return label_; }
  /// True when off-grid values come from closed forms rather than interpolation.
  bool analytic() const noexcept { return analytic_; }

  cplx at(double theta) const { return (*eval_)(theta); }
  const Evaluator& evaluator() const noexcept { return *eval_; }

  double norm() const noexcept {
    double e = 0.0;
    for (const auto& v : values_) e += std::norm(v);
    return std::sqrt(e * grid_.spacing());
  }

  double max_abs() const noexcept {
    double m = 0.0;
    for (const auto& v : values_) m = std::max(m, std::abs(v));
    return m;
  }

 private:
  explicit CircleSignal(CircleGrid grid) : grid_(grid) {}

  CircleGrid grid_;
  std::vector<cplx> values_;
  std::shared_ptr<const Evaluator> eval_;
  bool analytic_ = false;
  std::string label_;
};

/// <f|g> by the midpoint rule. Grids must agree.
inline cplx inner(const CircleSignal& f, const CircleSignal& g) {
  if (!(f.grid() == g.grid())) throw DomainError("inner: grid mismatch");
  cplx acc{};
  const auto fv = f.values();
  const auto gv = g.values();
  for (std::size_t j = 0; j < fv.size(); ++j) acc += std::conj(fv[j]) * gv[j];
  return acc * f.grid().spacing();
}

/// Fraction of the spectral energy carried by modes |n| > N/4 (Nyquist included).
inline double high_band_fraction(std::span<const cplx> samples) {
  const auto s = detail::spectrum(samples);
  const long quarter = static_cast<long>(samples.size() / 4);
  double total = std::norm(s.nyquist), high = std::norm(s.nyquist);
  for (long n = -s.n_max; n <= s.n_max; ++n) {
    const double e = std::norm(s.coeffs(n));
    total += e;
    if (std::abs(n) > quarter) high += e;
  }
  return total > 0.0 ? high / total : 0.0;
}

inline void check_band_limit(const CircleSignal& f, const char* who) {
  const double frac = high_band_fraction(f.values());
  if (frac > 1e-8) {
    throw AliasingError(std::string(who) + ": modes above N/4 carry " + std::to_string(frac) +
                        " of the energy (limit 1e-8); refine the grid");
  }
}

/// gamma_{vartheta,a}(theta) = lambda(1/a, theta - vartheta)^{1/2} gamma((theta - vartheta)_{1/a}),
/// with theta - vartheta reduced mod pi. The result carries a composed evaluator,
/// so repeated actions never re-interpolate.
inline CircleSignal rep_action(const CircleSignal& gamma, double a, double vartheta) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("rep_action: scale must be positive");
  auto f = [gamma, a, vartheta](double theta) -> cplx {
    const double phi = reduce_half(theta - vartheta);
    if (a == 1.0) return gamma.at(phi);
    const double inv = 1.0 / a;
    return std::sqrt(multiplier(inv, phi)) * gamma.at(dilate_angle(phi, inv));
  };
  return CircleSignal::from_evaluator(gamma.grid(), std::move(f), gamma.label(), gamma.analytic());
}

/// Rotation by delta: rep_action(psi, 1, delta).
inline CircleSignal rotate(const CircleSignal& psi, double delta) { return rep_action(psi, 1.0, delta); }

/// Spectral derivative d/dtheta on the signal's own grid (Nyquist mode dropped).
inline std::vector<cplx> spectral_derivative(std::span<const cplx> samples) {
  auto s = detail::spectrum(samples);
  for (long n = -s.n_max; n <= s.n_max; ++n) s.coeffs(n) *= cplx(0.0, 2.0 * static_cast<double>(n));
  return detail::synthesize_samples(s.coeffs, samples.size());
}

enum class Generator { a, b, theta };

namespace detail {

inline std::vector<cplx> apply_generator(Generator which, const CircleGrid& grid, std::span<const cplx> f,
                                         cplx alpha) {
  const auto df = spectral_derivative(f);
  const cplx i(0.0, 1.0);
  std::vector<cplx> out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double t = grid.node(j);
    const double s2 = std::sin(2 * t), c2 = std::cos(2 * t);
    switch (which) {
      case Generator::a: out[j] = 0.5 * i * s2 * df[j] + i * alpha * c2 * f[j]; break;
      case Generator::b: out[j] = 0.5 * i * (c2 - 1.0) * df[j] - i * alpha * s2 * f[j]; break;
      case Generator::theta: out[j] = i * df[j]; break;
    }
  }
  return out;
}

}  // namespace detail

/// Infinitesimal generators on the circle:
///   X_a = (i/2) sin 2t d/dt + i alpha cos 2t
///   X_b = (i/2)(cos 2t - 1) d/dt - i alpha sin 2t
///   X_theta = i d/dt
inline CircleSignal generator(Generator which, const CircleSignal& f, RepParams params = {}) {
  check_band_limit(f, "generator");
  return CircleSignal::from_samples(f.grid(), detail::apply_generator(which, f.grid(), f.values(), params.alpha()));
}

/// X_a^2 + X_b^2 + (X_b X_theta + X_theta X_b)/2, by operator composition.
/// Acts as the scalar 1/4 + s^2 on band-limited signals.
inline CircleSignal casimir_apply(const CircleSignal& f, RepParams params = {}) {
  check_band_limit(f, "casimir_apply");
  const auto& g = f.grid();
  const cplx al = params.alpha();
  auto X = [&](Generator w, std::span<const cplx> v) { return detail::apply_generator(w, g, v, al); };
  const auto aa = X(Generator::a, X(Generator::a, f.values()));
  const auto bb = X(Generator::b, X(Generator::b, f.values()));
  const auto bt = X(Generator::b, X(Generator::theta, f.values()));
  const auto tb = X(Generator::theta, X(Generator::b, f.values()));
  std::vector<cplx> out(f.values().size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = aa[j] + bb[j] + 0.5 * (bt[j] + tb[j]);
  return CircleSignal::from_samples(g, std::move(out));
}

}  // namespace circlet::circle
