#pragma once

// Discrete series of SL(2,R) with Bargmann index k (Casimir label q = k(k-1)):
// first-order realization on L2(R+, dr/r), its Laguerre basis, the half-plane
// basis and the Laplace transform that carries one onto the other.

#include <cmath>
#include <complex>
#include <numbers>
#include <vector>

#include "circlet/error.hpp"
#include "circlet/line_cwt.hpp"
#include "circlet/quadrature.hpp"

namespace circlet::discrete {

using cplx = std::complex<double>;
using line::RPlusFunction;
using line::RPlusGrid;
inline constexpr double pi = std::numbers::pi;

/// Bargmann index k (half-integer, k >= 1) and the top mode.
struct LaguerreBasisSpec {
  double k = 1.0;
  long n_max = 8;

  LaguerreBasisSpec(double k_index, long top_mode) : k(k_index), n_max(top_mode) {
    const double twice = 2.0 * k_index;
    if (!(twice >= 2.0) || twice != std::round(twice)) throw DomainError("LaguerreBasisSpec: k must be a half-integer >= 1");
    if (top_mode < 0) throw DomainError("LaguerreBasisSpec: n_max must be non-negative");
  }

  double q() const noexcept { return k * (k - 1.0); }
};

struct HalfPlanePoint {
  cplx w;

  explicit HalfPlanePoint(cplx value) : w(value) {
    if (!(value.real() > 0.0)) throw DomainError("HalfPlanePoint: need Re(w) > 0");
  }
};

/// Generalized Laguerre polynomial L_n^alpha(r) by the three-term recurrence
/// (m+1) L_{m+1} = (2m + 1 + alpha - r) L_m - (m + alpha) L_{m-1}.
inline double laguerre_polynomial(long n, double alpha, double r) {
  if (n < 0) throw DomainError("laguerre_polynomial: n must be non-negative");
  double prev = 1.0;
  if (n == 0) return prev;
  double cur = 1.0 + alpha - r;
  for (long m = 1; m < n; ++m) {
    const double md = static_cast<double>(m);
    const double next = ((2.0 * md + 1.0 + alpha - r) * cur - (md + alpha) * prev) / (md + 1.0);
    prev = cur;
    cur = next;
  }
  return cur;
}

/// ln N_n^k with N_n^k = (n + 2k - 1)!/n!.
inline double log_laguerre_norm(double k, long n) {
  return std::lgamma(static_cast<double>(n) + 2.0 * k) - std::lgamma(static_cast<double>(n) + 1.0);
}

/// phi_n^k(r) = exp(-r/2) r^k L_n^{2k-1}(r) / sqrt(N_n^k), orthonormal in L2(R+, dr/r).
inline double laguerre_basis(const LaguerreBasisSpec& spec, long n, double r) {
  if (n < 0 || n > spec.n_max) throw DomainError("laguerre_basis: mode outside [0, n_max]");
  if (!(r > 0.0)) throw DomainError("laguerre_basis: need r > 0");
  const double L = laguerre_polynomial(n, 2.0 * spec.k - 1.0, r);
  if (L == 0.0) return 0.0;
  const double log_mag = std::log(std::abs(L)) - 0.5 * r + spec.k * std::log(r) - 0.5 * log_laguerre_norm(spec.k, n);
  return std::copysign(std::exp(log_mag), L);
}

inline RPlusFunction laguerre_function(const LaguerreBasisSpec& spec, long n, const RPlusGrid& grid) {
  return RPlusFunction::from_function(grid, [spec, n](double r) -> cplx { return laguerre_basis(spec, n, r); });
}

enum class Generator { a, b, theta };

namespace detail {

// d/dt and d^2/dt^2 in t = ln r: fourth-order centered differences inside,
// one-sided second-order stencils on the two outermost nodes at each end.
inline void log_derivatives(std::span<const cplx> f, double dt, std::vector<cplx>& d1, std::vector<cplx>& d2) {
  const std::size_t n = f.size();
  d1.assign(n, cplx{});
  d2.assign(n, cplx{});
  for (std::size_t j = 2; j + 2 < n; ++j) {
    d1[j] = (f[j - 2] - 8.0 * f[j - 1] + 8.0 * f[j + 1] - f[j + 2]) / (12.0 * dt);
    d2[j] = (-f[j - 2] + 16.0 * f[j - 1] - 30.0 * f[j] + 16.0 * f[j + 1] - f[j + 2]) / (12.0 * dt * dt);
  }
  auto edge = [&](std::size_t j, int dir) {
    auto at = [&](int s) { return f[static_cast<std::size_t>(static_cast<long>(j) + dir * s)]; };
    d1[j] = static_cast<double>(dir) * (-3.0 * at(0) + 4.0 * at(1) - at(2)) / (2.0 * dt);
    d2[j] = (2.0 * at(0) - 5.0 * at(1) + 4.0 * at(2) - at(3)) / (dt * dt);
  };
  edge(0, 1);
  edge(1, 1);
  edge(n - 1, -1);
  edge(n - 2, -1);
}

inline std::vector<cplx> apply_generator(Generator which, const RPlusGrid& grid, std::span<const cplx> f, double q) {
  std::vector<cplx> d1, d2;
  log_derivatives(f, grid.log_step(), d1, d2);
  const cplx i(0.0, 1.0);
  std::vector<cplx> out(f.size());
  for (std::size_t j = 0; j < f.size(); ++j) {
    const double r = grid.node(j);
    switch (which) {
      case Generator::a: out[j] = i * d1[j]; break;
      case Generator::b: out[j] = 0.5 * r * f[j]; break;
      case Generator::theta: out[j] = (2.0 / r) * (d2[j] - d1[j]) - (0.5 * r + 2.0 * q / r) * f[j]; break;
    }
  }
  return out;
}

}  // namespace detail

/// Nodes at each grid end that use one-sided stencils (less accurate).
inline constexpr std::size_t kBoundaryNodes = 2;

/// First-order realization on R+:
///   X_a = i r d/dr,  X_b = r/2,  X_theta = 2 r d^2/dr^2 - (r^2/2 + 2q)/r.
/// Derivatives are taken in ln r on the log grid.
inline RPlusFunction rplus_generators(Generator which, const RPlusFunction& f, const LaguerreBasisSpec& spec) {
  if (f.grid().size() < 5) throw DomainError("rplus_generators: need at least five nodes");
  return RPlusFunction::from_samples(f.grid(), detail::apply_generator(which, f.grid(), f.values(), spec.q()));
}

/// X_a^2 + X_b^2 + (X_b X_theta + X_theta X_b)/2 by composition; acts as -q.
inline RPlusFunction rplus_casimir_apply(const RPlusFunction& f, const LaguerreBasisSpec& spec) {
  const auto& g = f.grid();
  const double q = spec.q();
  auto X = [&](Generator w, std::span<const cplx> v) { return detail::apply_generator(w, g, v, q); };
  const auto aa = X(Generator::a, X(Generator::a, f.values()));
  const auto bb = X(Generator::b, X(Generator::b, f.values()));
  const auto bt = X(Generator::b, X(Generator::theta, f.values()));
  const auto tb = X(Generator::theta, X(Generator::b, f.values()));
  std::vector<cplx> out(aa.size());
  for (std::size_t j = 0; j < out.size(); ++j) out[j] = aa[j] + bb[j] + 0.5 * (bt[j] + tb[j]);
  return RPlusFunction::from_samples(g, std::move(out));
}

/// ln M_n^k with M_n^k = pi n! (2k-2)! / (2^{4k-2} (2k+n-1)!).
inline double log_halfplane_norm(double k, long n) {
  return std::log(pi) + std::lgamma(static_cast<double>(n) + 1.0) + std::lgamma(2.0 * k - 1.0) -
         (4.0 * k - 2.0) * std::log(2.0) - std::lgamma(2.0 * k + static_cast<double>(n));
}

/// phi_n^k(w) = Re(w)^k (1+w)^{-2k} ((w-1)/(w+1))^n / sqrt(M_n^k).
inline cplx halfplane_basis(const LaguerreBasisSpec& spec, long n, const HalfPlanePoint& p) {
  if (n < 0 || n > spec.n_max) throw DomainError("halfplane_basis: mode outside [0, n_max]");
  const cplx w = p.w;
  const cplx z = (w - 1.0) / (w + 1.0);
  cplx zn = 1.0;  // integer power; std::pow(0, 0.0) is NaN for complex arguments
  for (long j = 0; j < n; ++j) zn *= z;
  return std::pow(w.real(), spec.k) * std::pow(1.0 + w, -2.0 * spec.k) * zn *
         std::exp(-0.5 * log_halfplane_norm(spec.k, n));
}

/// <phi_n | phi_m> over the right half plane with measure Re(w)^{-2} da db
/// (equivalently Re(w)^{2k-2} on the holomorphic factor phi / Re(w)^k).
/// The half plane is mapped onto the unit square by a = u/(1-u), b = tan(pi (v - 1/2))
/// and integrated with a Gauss-Legendre product rule.
inline cplx halfplane_inner_product(const LaguerreBasisSpec& spec, long n, long m, std::size_t nodes = 200) {
  const auto rule = quad::gauss_legendre(nodes);
  cplx acc{};
  for (std::size_t i = 0; i < nodes; ++i) {
    const double u = 0.5 * (rule.nodes[i] + 1.0);
    const double a = u / (1.0 - u);
    const double ja = 0.5 * rule.weights[i] / ((1.0 - u) * (1.0 - u));
    cplx row{};
    for (std::size_t j = 0; j < nodes; ++j) {
      const double v = 0.5 * (rule.nodes[j] + 1.0);
      const double t = pi * (v - 0.5);
      const double b = std::tan(t);
      const double c = std::cos(t);
      const double jb = 0.5 * rule.weights[j] * pi / (c * c);
      const HalfPlanePoint p(cplx(a, b));
      row += jb * std::conj(halfplane_basis(spec, n, p)) * halfplane_basis(spec, m, p);
    }
    acc += ja * row / (a * a);
  }
  return acc;
}

/// <w|r> = Re(w)^k r^k exp(-r w/2) / (2 sqrt(pi (2k-2)!)).
inline cplx laplace_kernel(const LaguerreBasisSpec& spec, const HalfPlanePoint& p, double r) {
  if (!(r > 0.0)) throw DomainError("laplace_kernel: need r > 0");
  const double k = spec.k;
  const double log_amp = k * std::log(p.w.real()) + k * std::log(r) - 0.5 * std::log(pi) - 0.5 * std::lgamma(2.0 * k - 1.0) -
                         std::log(2.0);
  return std::exp(log_amp) * std::exp(-0.5 * r * p.w);
}

/// sum_{n <= N} phi_n^k(w) phi_n^k(r), which tends to the kernel like |(w-1)/(w+1)|^N.
inline cplx laplace_kernel_partial_sum(double k, const HalfPlanePoint& p, double r, long N) {
  const LaguerreBasisSpec spec(k, N);
  cplx acc{};
  for (long n = 0; n <= N; ++n) acc += halfplane_basis(spec, n, p) * laguerre_basis(spec, n, r);
  return acc;
}

struct LaplaceOptions {
  std::size_t nodes = 128;
  double decay_hint = 0.5;  // f(r) assumed to fall like exp(-decay_hint r)
  double origin_power = -1.0;  // f(r) ~ r^origin_power at 0; negative means k
};

struct LaplaceResult {
  cplx value;
  double change = 0.0;   // |value - value with half the nodes|
  bool converged = false;
};

/// int_0^inf (dr/r) <w|r> f(r) by generalized Gauss-Laguerre quadrature, with the
/// weight r^{k - 1 + p} exp(-kappa r), kappa = Re(w)/2 + decay_hint and p the
/// origin power of f. converged: the half-size rule agrees to 1e-10 (relative to
/// max(1, |value|)).
inline LaplaceResult laplace_transform(const RPlusFunction& f, const LaguerreBasisSpec& spec, const HalfPlanePoint& p,
                                       LaplaceOptions opt = {}) {
  if (opt.nodes < 2) throw DomainError("laplace_transform: need at least two nodes");
  const double power = opt.origin_power < 0.0 ? spec.k : opt.origin_power;
  const double alpha = spec.k - 1.0 + power;
  const double kappa = 0.5 * p.w.real() + opt.decay_hint;
  if (!(kappa > 0.0)) throw DomainError("laplace_transform: decay_hint makes the weight non-decaying");

  auto run = [&](std::size_t n) {
    const auto rule = quad::gauss_laguerre(n, alpha);
    cplx acc{};
    for (std::size_t i = 0; i < n; ++i) {
      const double r = rule.nodes[i] / kappa;
      // integrand / (r^alpha exp(-kappa r)), assembled in logs
      const cplx ker = laplace_kernel(spec, p, r);
      const cplx val = f.at(r);
      if (val == cplx{} || ker == cplx{}) continue;
      const double log_w = std::log(rule.weights[i]) - (alpha + 1.0) * std::log(kappa) + kappa * r - (alpha + 1.0) * std::log(r);
      acc += std::exp(log_w) * ker * val;
    }
    return acc;
  };
  LaplaceResult res;
  res.value = run(opt.nodes);
  res.change = std::abs(res.value - run(opt.nodes / 2));
  res.converged = res.change <= 1e-10 * std::max(1.0, std::abs(res.value));
  return res;
}

}  // namespace circlet::discrete
