#pragma once

// Affine wavelets on the real line and the dilation representation on R+.
//
// Line signals are sampled on a finite window [x_lo, x_hi) with n uniform
// nodes x_j = x_lo + j h, h = (x_hi - x_lo)/n. The window is treated as one
// period for Fourier work and as the whole support for everything else: values
// outside it are zero. Fourier transforms use the unitary convention
// f^(k) = (2 pi)^{-1/2} int f(x) exp(-i k x) dx.

#include <algorithm>
#include <cmath>
#include <complex>
#include <functional>
#include <memory>
#include <numbers>
#include <span>
#include <string>
#include <vector>

#include "circlet/error.hpp"
#include "circlet/fft.hpp"
#include "circlet/parallel.hpp"
#include "circlet/scales.hpp"

namespace circlet::line {

using cplx = std::complex<double>;
inline constexpr double pi = std::numbers::pi;

class LineGrid {
 public:
  LineGrid(double x_lo, double x_hi, std::size_t n) : lo_(x_lo), hi_(x_hi), n_(n) {
    if (!(x_hi > x_lo) || !std::isfinite(x_lo) || !std::isfinite(x_hi)) throw DomainError("LineGrid: need x_lo < x_hi");
    if (n < 2) throw DomainError("LineGrid: need at least two samples");
  }

  double x_lo() const noexcept { return lo_; }
  double x_hi() const noexcept { return hi_; }
  std::size_t size() const noexcept { return n_; }
  double length() const noexcept { return hi_ - lo_; }
  double spacing() const noexcept { return (hi_ - lo_) / static_cast<double>(n_); }
  double node(std::size_t j) const noexcept { return lo_ + static_cast<double>(j) * spacing(); }
  bool contains(double x) const noexcept { return x >= lo_ && x < hi_; }

  /// Angular frequency of DFT bin j, signed: bins >= n/2 are negative.
  double frequency(std::size_t j) const noexcept {
    const long m = j < n_ / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n_);
    return 2.0 * pi * static_cast<double>(m) / length();
  }

  friend bool operator==(const LineGrid&, const LineGrid&) = default;

 private:
  double lo_, hi_;
  std::size_t n_;
};

class LineSignal {
 public:
  using Evaluator = std::function<cplx(double)>;

  static LineSignal from_function(LineGrid grid, Evaluator f, std::string label = {}) {
    LineSignal s(grid);
    s.values_.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) s.values_[j] = f(grid.node(j));
    s.eval_ = std::make_shared<const Evaluator>(std::move(f));
    s.label_ = std::move(label);
    s.check_finite();
    return s;
  }

  static LineSignal from_samples(LineGrid grid, std::vector<cplx> values, std::string label = {}) {
    if (values.size() != grid.size()) throw DomainError("LineSignal: sample count does not match grid");
    LineSignal s(grid);
    s.values_ = std::move(values);
    s.label_ = std::move(label);
    s.check_finite();
    s.interp_ = std::make_shared<const std::vector<cplx>>(fft::forward(s.values_));
    return s;
  }

  const LineGrid& grid() const noexcept { return grid_; }
  std::span<const cplx> values() const noexcept { return values_; }
  const std::string& label() const noexcept { return label_; }
  bool has_evaluator() const noexcept { return static_cast<bool>(eval_); }

  /// Value at any x: the closed form when present, otherwise the trigonometric
  /// interpolant of the window. Zero outside the window in both cases.
  cplx at(double x) const {
    if (eval_) return (*eval_)(x);
    if (!grid_.contains(x)) return {};
    const auto& c = *interp_;
    const std::size_t n = c.size();
    const double u = 2.0 * pi * (x - grid_.x_lo()) / grid_.length();
    cplx acc{};
    for (std::size_t j = 0; j < n; ++j) {
      if (n % 2 == 0 && j == n / 2) {
        acc += c[j] * std::cos(static_cast<double>(n / 2) * u);
        continue;
      }
      const long m = j < n / 2 ? static_cast<long>(j) : static_cast<long>(j) - static_cast<long>(n);
      acc += c[j] * std::polar(1.0, static_cast<double>(m) * u);
    }
    return acc / static_cast<double>(n);
  }

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

  /// |f| at the two window edges relative to max |f|.
  double edge_ratio() const noexcept {
    const double mx = max_abs();
    if (mx == 0.0) return 0.0;
    return std::max(std::abs(values_.front()), std::abs(values_.back())) / mx;
  }

 private:
  explicit LineSignal(LineGrid grid) : grid_(grid) {}

  void check_finite() const {
    for (const auto& v : values_)
      if (!std::isfinite(v.real()) || !std::isfinite(v.imag())) throw DomainError("LineSignal: non-finite sample");
  }

  LineGrid grid_;
  std::vector<cplx> values_;
  std::shared_ptr<const Evaluator> eval_;
  std::shared_ptr<const std::vector<cplx>> interp_;  // DFT of the samples
  std::string label_;
};

inline cplx inner(const LineSignal& f, const LineSignal& g) {
  if (!(f.grid() == g.grid())) throw DomainError("inner: grid mismatch");
  cplx acc{};
  for (std::size_t j = 0; j < f.values().size(); ++j) acc += std::conj(f.values()[j]) * g.values()[j];
  return acc * f.grid().spacing();
}

/// gamma_{b,a}(x) = a^{-1/2} gamma((x - b)/a), on the same grid.
inline LineSignal affine_action(const LineSignal& gamma, double a, double b) {
  if (!(a > 0.0) || !std::isfinite(a)) throw DomainError("affine_action: scale must be positive");
  if (!std::isfinite(b)) throw DomainError("affine_action: non-finite translation");
  const double amp = 1.0 / std::sqrt(a);
  return LineSignal::from_function(
      gamma.grid(), [gamma, a, b, amp](double x) { return amp * gamma.at((x - b) / a); }, gamma.label());
}

/// (1 - x^2) exp(-x^2/2); its transform is k^2 exp(-k^2/2) and C = 1.
inline LineSignal mexican_hat(LineGrid grid) {
  return LineSignal::from_function(
      grid, [](double x) -> cplx { return (1.0 - x * x) * std::exp(-0.5 * x * x); }, "mexhat");
}

inline LineSignal gaussian(LineGrid grid, double sigma = 1.0) {
  return LineSignal::from_function(
      grid, [sigma](double x) -> cplx { return std::exp(-0.5 * x * x / (sigma * sigma)); }, "gaussian");
}

/// Continuous transform of the sampled window, evaluated at arbitrary k.
/// Zero beyond the window's Nyquist frequency, where the samples carry no information.
class WaveletSpectrum {
 public:
  explicit WaveletSpectrum(const LineSignal& gamma)
      : x0_(gamma.grid().x_lo()), h_(gamma.grid().spacing()), values_(gamma.values().begin(), gamma.values().end()) {}

  double nyquist() const noexcept { return pi / h_; }

  cplx operator()(double k) const {
    if (std::abs(k) >= nyquist()) return {};
    const cplx step = std::polar(1.0, -k * h_);
    cplx ph = std::polar(1.0, -k * x0_);
    cplx acc{};
    for (const auto& v : values_) {
      acc += v * ph;
      ph *= step;
    }
    return acc * (h_ / std::sqrt(2.0 * pi));
  }

 private:
  double x0_, h_;
  std::vector<cplx> values_;
};

struct LineAdmissibility {
  double c_gamma = 0.0;      // int |gamma^(k)|^2 / |k| dk with the k = 0 bin left out
  double hat_at_zero = 0.0;  // |gamma^(0)|
  bool finite = false;
};

/// C_gamma by DFT and midpoint sum over the window's frequency bins. Divergent when
/// gamma^(0) is not negligible (|gamma^(0)|^2 > 1e-8 max |gamma^|^2) or when the
/// integrand fails to fall toward k = 0: on each side, bin 1 must stay below
/// 3/4 of bin 2 (a 1/|k| blow-up doubles instead).
inline LineAdmissibility line_admissibility(const LineSignal& gamma) {
  if (gamma.edge_ratio() > 1e-6) throw DecayError("line_admissibility: wavelet does not decay at the window edges");
  const auto& g = gamma.grid();
  auto hat = fft::forward(std::vector<cplx>(gamma.values().begin(), gamma.values().end()));
  const double scale = g.spacing() / std::sqrt(2.0 * pi);  // |phase| = 1, dropped
  const double dk = 2.0 * pi / g.length();

  LineAdmissibility r;
  r.hat_at_zero = std::abs(hat[0]) * scale;
  const std::size_t n = hat.size();
  std::vector<double> integrand(n, 0.0);
  double peak_hat = 0.0, sum = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    const double h2 = std::norm(hat[j]) * scale * scale;
    peak_hat = std::max(peak_hat, h2);
    if (j == 0) continue;
    integrand[j] = h2 / std::abs(g.frequency(j));
    sum += integrand[j];
  }
  r.c_gamma = sum * dk;
  const bool zero_mean = r.hat_at_zero * r.hat_at_zero <= 1e-8 * peak_hat;
  const bool decays = integrand[1] <= 0.75 * integrand[2] && integrand[n - 1] <= 0.75 * integrand[n - 2];
  r.finite = zero_mean && decays && std::isfinite(r.c_gamma);
  return r;
}

/// W(b, a) = <gamma_{b,a} | f>, rows = scales (ascending), columns = translations
/// b_l = grid nodes.
struct LineScalogram {
  LineGrid translations;
  ScaleGrid scales;
  std::string wavelet;
  std::vector<cplx> values;

  cplx& at(std::size_t scale, std::size_t b) { return values[scale * translations.size() + b]; }
  cplx at(std::size_t scale, std::size_t b) const { return values[scale * translations.size() + b]; }
};

/// Per-scale Fourier product: W_a = sqrt(2 pi a)/n * IDFT(conj(gamma^(a k_m)) F_m).
inline LineScalogram line_analyze(const LineSignal& f, const LineSignal& gamma, const ScaleGrid& scales) {
  const auto& g = f.grid();
  const std::size_t n = g.size();
  const WaveletSpectrum spec(gamma);
  const auto F = fft::forward(std::vector<cplx>(f.values().begin(), f.values().end()));
  LineScalogram out{g, scales, gamma.label(), std::vector<cplx>(scales.size() * n)};
  parallel_for(scales.size(), [&](std::size_t i) {
    const double a = scales.node(i);
    std::vector<cplx> row(n);
    for (std::size_t m = 0; m < n; ++m) row[m] = std::conj(spec(a * g.frequency(m))) * F[m];
    fft::transform(row, false);
    const double c = std::sqrt(2.0 * pi * a) / static_cast<double>(n);
    for (std::size_t l = 0; l < n; ++l) out.values[i * n + l] = c * row[l];
  });
  return out;
}

/// f = (1/(pi C)) int da/a^2 int db W(b, a) gamma_{b,a}, with the scale integral
/// as a trapezoid rule in ln a. Exact mode by mode up to scale truncation.
inline LineSignal line_synthesize(const LineScalogram& s, const LineSignal& gamma, double c_gamma) {
  if (!(c_gamma > 0.0) || !std::isfinite(c_gamma)) throw DomainError("line_synthesize: C_gamma must be positive");
  const auto& g = s.translations;
  const std::size_t n = g.size();
  if (s.values.size() != n * s.scales.size()) throw DomainError("line_synthesize: scalogram shape mismatch");
  const WaveletSpectrum spec(gamma);
  const auto w = s.scales.log_weights();

  std::vector<std::vector<cplx>> parts(s.scales.size());
  parallel_for(s.scales.size(), [&](std::size_t i) {
    const double a = s.scales.node(i);
    std::vector<cplx> row(s.values.begin() + static_cast<std::ptrdiff_t>(i * n),
                          s.values.begin() + static_cast<std::ptrdiff_t>((i + 1) * n));
    fft::transform(row, true);
    for (std::size_t m = 0; m < n; ++m) row[m] *= spec(a * g.frequency(m)) * (w[i] / std::sqrt(a));
    parts[i] = std::move(row);
  });
  std::vector<cplx> F(n, cplx{});
  for (const auto& p : parts)
    for (std::size_t m = 0; m < n; ++m) F[m] += p[m];
  const double c = std::sqrt(2.0 * pi) / (pi * c_gamma) / static_cast<double>(n);
  fft::transform(F, false);
  for (auto& v : F) v *= c;
  return LineSignal::from_samples(g, std::move(F));
}

// ---- dilation representation on R+ with measure da/a ----

/// Log-uniform nodes on [a_lo, a_hi], both ends included.
class RPlusGrid {
 public:
  RPlusGrid(double a_lo, double a_hi, std::size_t n) : lo_(a_lo), hi_(a_hi), n_(n) {
    if (!(a_lo > 0.0) || !(a_hi > a_lo) || !std::isfinite(a_hi)) throw DomainError("RPlusGrid: need 0 < a_lo < a_hi");
    if (n < 4) throw DomainError("RPlusGrid: need at least four nodes");
  }
  std::size_t size() const noexcept { return n_; }
  double a_lo() const noexcept { return lo_; }
  double a_hi() const noexcept { return hi_; }
  double log_step() const noexcept { return std::log(hi_ / lo_) / static_cast<double>(n_ - 1); }
  double node(std::size_t j) const noexcept { return lo_ * std::exp(static_cast<double>(j) * log_step()); }

  friend bool operator==(const RPlusGrid&, const RPlusGrid&) = default;

 private:
  double lo_, hi_;
  std::size_t n_;
};

class RPlusFunction {
 public:
  using Evaluator = std::function<cplx(double)>;

  static RPlusFunction from_function(RPlusGrid grid, Evaluator f) {
    RPlusFunction r(grid);
    r.values_.resize(grid.size());
    for (std::size_t j = 0; j < grid.size(); ++j) r.values_[j] = f(grid.node(j));
    r.eval_ = std::make_shared<const Evaluator>(std::move(f));
    return r;
  }

  static RPlusFunction from_samples(RPlusGrid grid, std::vector<cplx> values) {
    if (values.size() != grid.size()) throw DomainError("RPlusFunction: sample count does not match grid");
    RPlusFunction r(grid);
    r.values_ = std::move(values);
    return r;
  }

  const RPlusGrid& grid() const noexcept { return grid_; }
  std::span<const cplx> values() const noexcept { return values_; }
  bool has_evaluator() const noexcept { return static_cast<bool>(eval_); }

  /// Closed form when present, else cubic (Catmull-Rom) interpolation in ln a; zero off the grid.
  cplx at(double a) const {
    if (eval_) return (*eval_)(a);
    if (!(a >= grid_.a_lo()) || !(a <= grid_.a_hi())) return {};
    const double u = std::log(a / grid_.a_lo()) / grid_.log_step();
    const long last = static_cast<long>(values_.size()) - 1;
    const long j = std::clamp(static_cast<long>(std::floor(u)), 0L, last - 1);
    const double t = u - static_cast<double>(j);
    auto v = [&](long i) {
      if (i < 0) return 2.0 * values_[0] - values_[1];
      if (i > last) return 2.0 * values_[static_cast<std::size_t>(last)] - values_[static_cast<std::size_t>(last - 1)];
      return values_[static_cast<std::size_t>(i)];
    };
    const cplx p0 = v(j - 1), p1 = v(j), p2 = v(j + 1), p3 = v(j + 2);
    return 0.5 * (2.0 * p1 + (p2 - p0) * t + (2.0 * p0 - 5.0 * p1 + 4.0 * p2 - p3) * t * t +
                  (3.0 * p1 - p0 - 3.0 * p2 + p3) * t * t * t);
  }

  /// Norm in L2(R+, da/a), trapezoid rule in ln a.
  double norm() const noexcept {
    double e = 0.0;
    for (std::size_t j = 0; j < values_.size(); ++j) {
      const double w = (j == 0 || j + 1 == values_.size()) ? 0.5 : 1.0;
      e += w * std::norm(values_[j]);
    }
    return std::sqrt(e * grid_.log_step());
  }

 private:
  explicit RPlusFunction(RPlusGrid grid) : grid_(grid) {}

  RPlusGrid grid_;
  std::vector<cplx> values_;
  std::shared_ptr<const Evaluator> eval_;
};

/// [U(a', b') phi](a) = exp(-i a b') phi(a' a).
inline RPlusFunction rplus_action(const RPlusFunction& phi, double a_prime, double b_prime) {
  if (!(a_prime > 0.0) || !std::isfinite(a_prime)) throw DomainError("rplus_action: scale must be positive");
  if (a_prime == 1.0 && b_prime == 0.0) return phi;
  return RPlusFunction::from_function(phi.grid(), [phi, a_prime, b_prime](double a) {
    return std::polar(1.0, -a * b_prime) * phi.at(a_prime * a);
  });
}

}  // namespace circlet::line
