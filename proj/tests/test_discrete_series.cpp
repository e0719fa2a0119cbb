#include <gtest/gtest.h>

#include "circlet/discrete_series.hpp"

using namespace circlet;
using namespace circlet::discrete;
using circlet::line::RPlusFunction;
using circlet::line::RPlusGrid;

namespace {

// sum_i (-1)^i binom(n + alpha, n - i) x^i / i!
double laguerre_explicit(long n, double alpha, double x) {
  double acc = 0.0;
  for (long i = 0; i <= n; ++i) {
    const double binom = std::exp(std::lgamma(n + alpha + 1.0) - std::lgamma(n - i + 1.0) - std::lgamma(alpha + i + 1.0));
    acc += (i % 2 ? -1.0 : 1.0) * binom * std::pow(x, i) / std::tgamma(i + 1.0);
  }
  return acc;
}

double interior_residual(const RPlusFunction& lhs, const RPlusFunction& rhs, std::size_t skip) {
  double worst = 0.0;
  for (std::size_t j = skip; j + skip < lhs.values().size(); ++j)
    worst = std::max(worst, std::abs(lhs.values()[j] - rhs.values()[j]));
  return worst;
}

RPlusFunction scaled(const RPlusFunction& f, cplx c) {
  std::vector<cplx> v(f.values().begin(), f.values().end());
  for (auto& x : v) x *= c;
  return RPlusFunction::from_samples(f.grid(), std::move(v));
}

RPlusFunction sum(const RPlusFunction& f, const RPlusFunction& g, cplx cf, cplx cg) {
  std::vector<cplx> v(f.values().size());
  for (std::size_t j = 0; j < v.size(); ++j) v[j] = cf * f.values()[j] + cg * g.values()[j];
  return RPlusFunction::from_samples(f.grid(), std::move(v));
}

}  // namespace

TEST(Quadrature, LaguerreMoments) {
  for (double alpha : {0.0, 1.0, 2.5}) {
    const auto rule = quad::gauss_laguerre(16, alpha);
    for (int j = 0; j <= 31; ++j) {
      double acc = 0.0;
      for (std::size_t i = 0; i < 16; ++i) acc += rule.weights[i] * std::pow(rule.nodes[i], j);
      EXPECT_NEAR(acc / std::tgamma(j + alpha + 1.0), 1.0, 1e-12) << "alpha=" << alpha << " j=" << j;
    }
  }
}

TEST(Quadrature, LegendrePolynomials) {
  const auto rule = quad::gauss_legendre(10);
  for (int j = 0; j <= 19; ++j) {
    double acc = 0.0;
    for (std::size_t i = 0; i < 10; ++i) acc += rule.weights[i] * std::pow(rule.nodes[i], j);
    EXPECT_NEAR(acc, j % 2 ? 0.0 : 2.0 / (j + 1), 1e-14);
  }
}

TEST(Spec, Validation) {
  EXPECT_NO_THROW(LaguerreBasisSpec(1.5, 4));
  EXPECT_THROW(LaguerreBasisSpec(0.5, 4), DomainError);
  EXPECT_THROW(LaguerreBasisSpec(1.25, 4), DomainError);
  EXPECT_THROW(HalfPlanePoint(cplx(0.0, 1.0)), DomainError);
  EXPECT_DOUBLE_EQ(LaguerreBasisSpec(2.0, 1).q(), 2.0);
}

TEST(Laguerre, PolynomialMatchesExplicitSum) {
  for (double alpha : {0.0, 1.0, 2.0, 3.0})
    for (long n = 0; n <= 8; ++n)
      for (double x : {0.1, 1.0, 4.0, 11.0})
        EXPECT_NEAR(laguerre_polynomial(n, alpha, x), laguerre_explicit(n, alpha, x), 1e-9 * std::max(1.0, std::abs(laguerre_explicit(n, alpha, x))));
}

TEST(Laguerre, Examples) {
  const LaguerreBasisSpec s(1.0, 4);
  for (double r : {0.2, 1.0, 5.0}) EXPECT_NEAR(laguerre_basis(s, 0, r), r * std::exp(-r / 2), 1e-15);
  EXPECT_NEAR(std::exp(log_laguerre_norm(1.0, 0)), 1.0, 1e-14);
  EXPECT_NEAR(std::exp(log_laguerre_norm(2.0, 0)), 6.0, 1e-12);
  EXPECT_NEAR(std::exp(log_laguerre_norm(3.0, 0)), 120.0, 1e-10);
}

TEST(Laguerre, Orthonormal) {
  for (double k : {1.0, 1.5, 2.0, 3.0}) {
    const LaguerreBasisSpec s(k, 8);
    // dr/r weight: the integrand is e^{-r} r^{2k-1} times polynomials
    const auto rule = quad::gauss_laguerre(40, 2.0 * k - 1.0);
    for (long n = 0; n <= 8; ++n)
      for (long m = 0; m <= 8; ++m) {
        double acc = 0.0;
        for (std::size_t i = 0; i < 40; ++i) {
          const double r = rule.nodes[i];
          acc += rule.weights[i] * laguerre_basis(s, n, r) * laguerre_basis(s, m, r) * std::exp(r) / std::pow(r, 2.0 * k);
        }
        EXPECT_NEAR(acc, n == m ? 1.0 : 0.0, 1e-10) << k << " " << n << " " << m;
      }
  }
}

TEST(Generators, MultiplicationAndGroundState) {
  const RPlusGrid g(1e-3, 60.0, 3000);
  const LaguerreBasisSpec s(1.0, 4);
  const auto phi = laguerre_function(s, 0, g);
  const auto xb = rplus_generators(Generator::b, phi, s);
  for (std::size_t j = 0; j < g.size(); ++j) EXPECT_NEAR(std::abs(xb.values()[j] - 0.5 * g.node(j) * phi.values()[j]), 0.0, 1e-15);
  const auto xt = rplus_generators(Generator::theta, phi, s);
  EXPECT_LT(interior_residual(scaled(xt, -0.5), phi, kBoundaryNodes), 1e-6);
}

TEST(Generators, ThetaEigenvalues) {
  const RPlusGrid g(1e-4, 120.0, 6000);
  for (double k : {1.0, 1.5, 2.5}) {
    const LaguerreBasisSpec s(k, 4);
    for (long n = 0; n <= 4; ++n) {
      const auto phi = laguerre_function(s, n, g);
      const auto xt = rplus_generators(Generator::theta, phi, s);
      EXPECT_LT(interior_residual(scaled(xt, -0.5), scaled(phi, n + k), kBoundaryNodes), 1e-6) << k << " " << n;
    }
  }
}

TEST(Generators, Commutators) {
  const RPlusGrid g(std::exp(-7.0), std::exp(7.0), 4001);
  const LaguerreBasisSpec s(1.5, 2);
  // Gaussian in ln r: small at the grid ends, gentle higher derivatives
  const auto f = RPlusFunction::from_function(g, [](double r) -> cplx { return std::exp(-std::log(r) * std::log(r)); });
  auto X = [&](Generator w, const RPlusFunction& v) { return rplus_generators(w, v, s); };
  const cplx i(0.0, 1.0);
  const auto A = X(Generator::a, f), B = X(Generator::b, f), T = X(Generator::theta, f);
  EXPECT_LT(interior_residual(sum(X(Generator::a, B), X(Generator::b, A), 1.0, -1.0), scaled(B, i), 8), 1e-6);
  EXPECT_LT(interior_residual(sum(X(Generator::a, T), X(Generator::theta, A), 1.0, -1.0), sum(B, T, -2.0 * i, -i), 8), 1e-6);
  EXPECT_LT(interior_residual(sum(X(Generator::b, T), X(Generator::theta, B), 1.0, -1.0), scaled(A, 2.0 * i), 8), 1e-6);
}

TEST(Generators, CasimirIsMinusQ) {
  const RPlusGrid g(1e-4, 120.0, 6000);
  for (double k : {1.0, 2.0}) {
    const LaguerreBasisSpec s(k, 3);
    const auto phi = laguerre_function(s, 2, g);
    EXPECT_LT(interior_residual(rplus_casimir_apply(phi, s), scaled(phi, -s.q()), 2 * kBoundaryNodes), 1e-6) << k;
  }
}

TEST(Generators, RestrictToAffineAction) {
  // the affine action lives on a with r = 2a: d/dln a' at 1 is -i X_a, d/db' at 0 is -i X_b
  const RPlusGrid ga(1e-3, 50.0, 2000);
  const RPlusGrid gr(2e-3, 100.0, 2000);
  const LaguerreBasisSpec s(1.0, 1);
  auto phi_a = [](double a) -> cplx { return a * std::exp(-a); };
  const auto phi = RPlusFunction::from_function(ga, phi_a);
  const auto on_r = RPlusFunction::from_function(gr, [&](double r) { return phi_a(r / 2); });
  const auto xa = rplus_generators(Generator::a, on_r, s);
  const auto xb = rplus_generators(Generator::b, on_r, s);
  const double h = 1e-5;
  const auto up = line::rplus_action(phi, std::exp(h), 0.0), dn = line::rplus_action(phi, std::exp(-h), 0.0);
  const auto bp = line::rplus_action(phi, 1.0, h), bm = line::rplus_action(phi, 1.0, -h);
  const cplx i(0.0, 1.0);
  for (std::size_t j = 10; j + 10 < ga.size(); j += 13) {
    EXPECT_LT(std::abs((up.values()[j] - dn.values()[j]) / (2 * h) + i * xa.values()[j]), 1e-6);
    EXPECT_LT(std::abs((bp.values()[j] - bm.values()[j]) / (2 * h) + i * xb.values()[j]), 1e-6);
  }
}

TEST(HalfPlane, GroundStateAndDecay) {
  const LaguerreBasisSpec s(1.0, 6);
  // M_0^1 = pi / 4
  const cplx w(0.7, -1.3);
  EXPECT_LT(std::abs(halfplane_basis(s, 0, HalfPlanePoint(w)) - 0.7 / ((1.0 + w) * (1.0 + w)) / std::sqrt(pi / 4)), 1e-15);
  const cplx z = (w - 1.0) / (w + 1.0);
  EXPECT_LT(std::abs(z), 1.0);
  EXPECT_NEAR(std::abs(halfplane_basis(s, 6, HalfPlanePoint(w)) / halfplane_basis(s, 5, HalfPlanePoint(w))),
              std::abs(z) * std::exp(0.5 * (log_halfplane_norm(1.0, 5) - log_halfplane_norm(1.0, 6))), 1e-12);
}

TEST(HalfPlane, Orthonormal) {
  for (double k : {1.0, 2.0}) {
    const LaguerreBasisSpec s(k, 4);
    for (long n = 0; n <= 4; ++n)
      for (long m = 0; m <= 4; ++m)
        EXPECT_LT(std::abs(halfplane_inner_product(s, n, m) - (n == m ? 1.0 : 0.0)), 1e-6) << k << " " << n << " " << m;
  }
}

TEST(Laplace, KernelExample) {
  const LaguerreBasisSpec s(1.0, 0);
  const HalfPlanePoint p(cplx(2.0, 1.0));
  const double r = 1.5;
  const cplx expected = 2.0 * r * std::exp(-0.5 * r * p.w) / (2.0 * std::sqrt(pi));
  EXPECT_LT(std::abs(laplace_kernel(s, p, r) - expected), 1e-15);
}

TEST(Laplace, KernelPartialSumsConverge) {
  const HalfPlanePoint p(cplx(1.5, 0.5));
  const LaguerreBasisSpec s(1.0, 0);
  const double r = 2.0;
  const cplx K = laplace_kernel(s, p, r);
  const double rho = std::abs((p.w - 1.0) / (p.w + 1.0));
  double prev = std::abs(laplace_kernel_partial_sum(1.0, p, r, 5) - K);
  for (long N : {10L, 15L, 20L}) {
    const double e = std::abs(laplace_kernel_partial_sum(1.0, p, r, N) - K);
    EXPECT_LT(e, prev * std::pow(rho, 5) * 20.0);
    prev = e;
  }
  EXPECT_LT(prev, 1e-6);
}

TEST(Laplace, GroundStateTransform) {
  const RPlusGrid g(1e-3, 50.0, 100);
  const LaguerreBasisSpec s(1.0, 0);
  const auto phi = laguerre_function(s, 0, g);
  const HalfPlanePoint p(cplx(0.8, 2.0));
  const auto res = laplace_transform(phi, s, p);
  EXPECT_TRUE(res.converged);
  EXPECT_LT(std::abs(res.value - halfplane_basis(s, 0, p)), 1e-12);
}

TEST(Laplace, BasisToBasis) {
  const RPlusGrid g(1e-3, 50.0, 100);
  const std::vector<cplx> pts{{0.3, 0.0}, {1.0, 0.0}, {2.5, 0.0}, {0.5, 1.0}, {0.5, -2.0},
                              {1.0, 3.0}, {4.0, -1.0}, {0.2, 0.4}, {7.0, 5.0}, {1.5, -0.5}};
  for (double k : {1.0, 1.5, 2.0}) {
    const LaguerreBasisSpec s(k, 4);
    for (long n = 0; n <= 4; ++n) {
      const auto f = laguerre_function(s, n, g);
      for (const auto& w : pts) {
        const HalfPlanePoint p(w);
        const auto res = laplace_transform(f, s, p);
        EXPECT_LT(std::abs(res.value - halfplane_basis(s, n, p)), 1e-8) << k << " " << n << " " << w;
      }
    }
  }
}

TEST(Laplace, OptionsValidated) {
  const RPlusGrid g(1e-3, 50.0, 100);
  const LaguerreBasisSpec s(1.0, 0);
  const auto f = laguerre_function(s, 0, g);
  EXPECT_THROW(laplace_transform(f, s, HalfPlanePoint(1.0), {1, 0.5, -1.0}), DomainError);
  EXPECT_THROW(laplace_transform(f, s, HalfPlanePoint(1.0), {64, -1.0, -1.0}), DomainError);
}
