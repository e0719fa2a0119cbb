#include <gtest/gtest.h>

#include <random>

#include "circlet/circle_cwt.hpp"

using namespace circlet;
using namespace circlet::circle;

namespace {

cplx gauss(double t) { return std::exp(-std::tan(t) * std::tan(t)); }

// int e^{-x^2} / sqrt(1 + x^2) dx = e^{1/2} K_0(1/2)
double gauss_weak() { return std::exp(0.5) * std::cyl_bessel_k(0.0, 0.5); }

FourierCoeffs random_coeffs(long band, std::uint64_t seed) {
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> nd;
  FourierCoeffs c(band);
  for (long n = -band; n <= band; ++n) c(n) = {nd(rng), nd(rng)};
  return c;
}

cplx eval_coeffs(const FourierCoeffs& c, double t) {
  cplx acc{};
  for (long n = -c.n_max(); n <= c.n_max(); ++n) acc += c(n) * std::polar(1.0, 2.0 * n * t);
  return acc / std::sqrt(pi);
}

// <gamma_{vartheta,a} | psi> by direct midpoint quadrature on m nodes
cplx direct_coefficient(const CircleSignal& gamma, const CircleSignal& psi, double vt, double a, std::size_t m) {
  const auto ga = rep_action(gamma, a, vt);
  cplx acc{};
  for (std::size_t j = 0; j < m; ++j) {
    const double t = -pi / 2 + pi * (j + 0.5) / static_cast<double>(m);
    acc += std::conj(ga.at(t)) * psi.at(t);
  }
  return acc * (pi / static_cast<double>(m));
}

double rel_l2(std::span<const cplx> x, std::span<const cplx> ref) {
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < x.size(); ++j) {
    num += std::norm(x[j] - ref[j]);
    den += std::norm(ref[j]);
  }
  return std::sqrt(num / den);
}

}  // namespace

TEST(ScaleGrid, NodesAndWeights) {
  const ScaleGrid g(1e-2, 1e2, 5);
  EXPECT_DOUBLE_EQ(g.node(0), 1e-2);
  EXPECT_NEAR(g.node(2), 1.0, 1e-14);
  EXPECT_DOUBLE_EQ(g.node(4), 1e2);
  double sum = 0.0;
  for (double w : g.log_weights()) sum += w;
  EXPECT_NEAR(sum, std::log(1e4), 1e-12);
  EXPECT_THROW(ScaleGrid(1.0, 1.0, 4), DomainError);
  EXPECT_THROW(ScaleGrid(1.0, 2.0, 1), DomainError);
}

TEST(FourierCoeffs, BasisVector) {
  const auto psi = CircleSignal::from_function(CircleGrid(64), [](double t) { return std::polar(1.0, 2.0 * t) / std::sqrt(pi); });
  const auto c = fourier_coeffs(psi, 8);
  for (long n = -8; n <= 8; ++n) EXPECT_LT(std::abs(c(n) - (n == 1 ? 1.0 : 0.0)), 1e-14);
}

TEST(FourierCoeffs, Cos2) {
  const auto psi = CircleSignal::from_function(CircleGrid(64), [](double t) -> cplx { return std::cos(2 * t); });
  const auto c = fourier_coeffs(psi, 16);
  for (long n = -16; n <= 16; ++n) EXPECT_LT(std::abs(c(n) - (std::abs(n) == 1 ? std::sqrt(pi) / 2 : 0.0)), 1e-14);
}

TEST(FourierCoeffs, Parseval) {
  const auto rc = random_coeffs(12, 31);
  const auto psi = CircleSignal::from_function(CircleGrid(128), [&](double t) { return eval_coeffs(rc, t); });
  const auto c = fourier_coeffs(psi, 32);
  EXPECT_NEAR(c.energy() / (psi.norm() * psi.norm()), 1.0, 1e-10);
}

TEST(FourierCoeffs, Preconditions) {
  const auto psi = CircleSignal::from_function(CircleGrid(64), gauss);
  EXPECT_THROW(fourier_coeffs(psi, 17), DomainError);
}

TEST(Weak, OddVanishes) {
  const auto odd = CircleSignal::from_function(CircleGrid(512), [](double t) { return std::tan(t) * gauss(t); });
  EXPECT_LT(std::abs(weak_admissibility(odd)), 1e-14);
}

TEST(Weak, GaussianIsNotWeaklyAdmissible) {
  const auto g = CircleSignal::from_function(CircleGrid(1024), gauss);
  EXPECT_NEAR(weak_admissibility(g).real(), gauss_weak(), 1e-10);
}

TEST(Weak, DecayPrecondition) {
  const auto c = CircleSignal::from_function(CircleGrid(256), [](double) -> cplx { return 1.0; });
  EXPECT_FALSE(weak_decay_ok(c));
  EXPECT_THROW(weak_admissibility(c), DecayError);
}

TEST(Dog, BalancedAndLiteral) {
  EXPECT_LT(std::abs(weak_admissibility(make_dog(2.0, true))), 1e-10);
  EXPECT_NEAR(weak_admissibility(make_dog(2.0, false)).real(), (1.0 - std::sqrt(2.0)) * gauss_weak(), 1e-9);
  EXPECT_NEAR(weak_admissibility(make_dog(3.5, false)).real(), (1.0 - std::sqrt(3.5)) * gauss_weak(), 1e-9);
  EXPECT_THROW(make_dog(1.0, true), DomainError);
}

TEST(Dog, AlphaNearOneIsNearZero) {
  EXPECT_LT(make_dog(1.0 + 1e-9, false).max_abs(), 1e-8);
}

TEST(DilatedCoefficients, MatchDirectQuadrature) {
  const auto g = CircleSignal::from_function(CircleGrid(1024), gauss);
  const long band = effective_band(g);
  for (double a : {0.05, 1.0, 20.0}) {
    const auto dc = dilated_coefficients(g, a, 6, band);
    const auto ga = rep_action(g, a, 0.0);
    const std::size_t m = 1 << 17;
    for (long n : {-6L, -1L, 0L, 3L}) {
      cplx acc{};
      for (std::size_t j = 0; j < m; ++j) {
        const double t = -pi / 2 + pi * (j + 0.5) / static_cast<double>(m);
        acc += ga.at(t) * std::polar(1.0, -2.0 * n * t);
      }
      acc *= pi / static_cast<double>(m) / std::sqrt(pi);
      EXPECT_LT(std::abs(acc - dc.coeffs(n)), 1e-11) << "a=" << a << " n=" << n;
    }
  }
}

TEST(Lambda, SymmetricNonNegativeForEvenWavelet) {
  const auto r = lambda_sequence(make_dog(2.0, true), ScaleGrid(1e-3, 1e3, 120), 12);
  for (long n = 0; n <= 12; ++n) {
    EXPECT_GE(r.lambda_at(n), 0.0);
    EXPECT_NEAR(r.lambda_at(n), r.lambda_at(-n), 1e-14 * r.sup);
  }
  EXPECT_TRUE(r.converged);
  EXPECT_TRUE(r.truncation.trusted_range);
  EXPECT_LE(r.inf, r.sup);
}

TEST(Lambda, OddWaveletConverges) {
  const auto odd = CircleSignal::from_function(CircleGrid(1024), [](double t) { return std::tan(t) * gauss(t); });
  const auto r = admissibility(odd, ScaleGrid(1e-3, 1e3, 120), 8);
  EXPECT_LT(r.weak_integral, 1e-12);
  EXPECT_TRUE(std::isfinite(r.sup));
  EXPECT_LT(r.truncation.decay_lo, kTailDecayLimit);
}

TEST(Admissibility, ConstantRejected) {
  const auto c = CircleSignal::from_function(CircleGrid(256), [](double) -> cplx { return 1.0; }, "constant");
  const auto r = admissibility(c, ScaleGrid(1e-3, 1e3, 60), 8);
  EXPECT_FALSE(r.admissible);
  EXPECT_FALSE(r.weak_decay_ok);
  EXPECT_FALSE(r.converged);
}

TEST(Admissibility, LiteralDogRejectedBalancedAccepted) {
  const ScaleGrid sg(1e-3, 1e3, 120);
  EXPECT_FALSE(admissibility(make_dog(2.0, false), sg, 16).admissible);
  const auto r = admissibility(make_dog(2.0, true), sg, 16);
  EXPECT_TRUE(r.admissible);
  const auto fb = frame_bounds(r);
  EXPECT_GT(fb.c1, 0.0);
  EXPECT_LE(fb.c1, fb.c2);
  EXPECT_GT(fb.c2 / fb.c1, 1.0);  // not a tight frame
}

TEST(Analyze, MatchesDirectQuadrature) {
  const auto gamma = make_dog(2.0, true);
  const auto rc = random_coeffs(8, 41);
  const auto psi = CircleSignal::from_function(CircleGrid(64), [&](double t) { return eval_coeffs(rc, t); });
  const ScaleGrid sg(0.5, 4.5, 3);
  const auto s = analyze(psi, gamma, sg, 64);
  const auto ag = s.angle_grid();
  for (std::size_t i = 0; i < 3; ++i)
    for (std::size_t k : {3u, 30u, 61u}) {
      const cplx direct = direct_coefficient(gamma, psi, ag.node(k), sg.node(i), 1 << 14);
      EXPECT_LT(std::abs(direct - s.at(i, k)), 1e-8);
    }
}

TEST(Analyze, SelfCoefficientIsNormSquared) {
  const auto gamma = make_dog(2.0, true);
  const auto s = analyze(gamma, gamma, ScaleGrid(1.0, 2.0, 2), 1025);  // odd angle count puts 0 on node 512
  EXPECT_NEAR(s.angle_grid().node(512), 0.0, 1e-15);
  EXPECT_NEAR(s.at(0, 512).real(), gamma.norm() * gamma.norm(), 1e-12);
  EXPECT_NEAR(s.at(0, 512).imag(), 0.0, 1e-12);
}

TEST(Analyze, RotationCovariance) {
  const auto gamma = make_dog(2.0, true);
  const auto rc = random_coeffs(8, 42);
  const auto psi = CircleSignal::from_function(CircleGrid(64), [&](double t) { return eval_coeffs(rc, t); });
  const ScaleGrid sg(0.1, 10.0, 9);
  const auto bank = make_bank(gamma, sg, 31);
  const std::size_t shift = 5;
  const auto s0 = analyze(psi, bank);
  const auto s1 = analyze(rotate(psi, shift * pi / 64), bank);
  for (std::size_t i = 0; i < sg.size(); ++i)
    for (std::size_t k = 0; k < 64; ++k) EXPECT_LT(std::abs(s1.at(i, (k + shift) % 64) - s0.at(i, k)), 1e-10);
}

TEST(Analyze, NotCovariantUnderDilations) {
  // dilating psi does not just move the scalogram along ln a
  const auto gamma = make_dog(2.0, true);
  const auto rc = random_coeffs(8, 43);
  const auto psi = CircleSignal::from_function(CircleGrid(256), [&](double t) { return eval_coeffs(rc, t); });
  const ScaleGrid sg(0.25, 4.0, 5);  // ratio 2 between nodes
  const auto bank = make_bank(gamma, sg, 127);
  const auto dil = rep_action(psi, 2.0, 0.0);
  ASSERT_LT(high_band_fraction(dil.values()), 1e-8);
  const auto s0 = analyze(psi, bank, 64);
  const auto s1 = analyze(dil, bank, 64);
  double gap = 0.0, ref = 0.0;
  for (std::size_t i = 0; i + 1 < sg.size(); ++i)
    for (std::size_t k = 0; k < 64; ++k) {
      gap = std::max(gap, std::abs(s1.at(i + 1, k) - s0.at(i, k)));
      ref = std::max(ref, std::abs(s0.at(i, k)));
    }
  EXPECT_GT(gap, 1e-3 * ref);
}

TEST(Synthesize, ZeroScalogramGivesZero) {
  const auto gamma = make_dog(2.0, true);
  const ScaleGrid sg(0.1, 10.0, 30);
  const auto bank = make_bank(gamma, sg, 15);
  const auto r = lambda_sequence(bank);
  Scalogram s{sg, 32, 32, gamma.label(), std::vector<cplx>(sg.size() * 32)};
  const auto rec = synthesize(s, bank, r);
  for (const auto& v : rec.signal.values()) EXPECT_EQ(v, cplx{});
}

TEST(Synthesize, RoundTripImprovesWithRange) {
  // Lambda belongs to the wavelet (widest grid); only the scalogram's scale range shrinks.
  // Normalizing by Lambda from the truncated grid itself would cancel the truncation exactly.
  const auto gamma = make_dog(2.0, true);
  const auto psi = CircleSignal::from_function(CircleGrid(32), [](double t) -> cplx { return std::cos(2 * t) + 0.3 * std::sin(4 * t); });
  const double density = 60.0 / std::log(100.0);
  auto grid = [&](double r) { return ScaleGrid(1.0 / r, r, static_cast<std::size_t>(std::lround(density * std::log(r * r))) + 1); };
  const auto wide = make_bank(gamma, grid(1e3), 15);
  const auto rep = lambda_sequence(wide);
  std::vector<double> errs;
  for (double r : {1e1, 1e2}) {
    const auto bank = make_bank(gamma, grid(r), 15);
    errs.push_back(rel_l2(synthesize(analyze(psi, bank), bank, rep).signal.values(), psi.values()));
  }
  errs.push_back(rel_l2(synthesize(analyze(psi, wide), wide, rep).signal.values(), psi.values()));
  EXPECT_GT(errs[0], errs[1]);
  EXPECT_GT(errs[1], errs[2]);
  EXPECT_LT(errs[2], 1e-2);
}

TEST(Synthesize, SelfNormalizedIsExact) {
  const auto gamma = make_dog(2.0, true);
  const auto psi = CircleSignal::from_function(CircleGrid(16), [](double t) -> cplx { return std::sin(4 * t); });
  const auto bank = make_bank(gamma, ScaleGrid(0.5, 2.0, 10), 7);
  const auto rec = synthesize(analyze(psi, bank), bank, lambda_sequence(bank));
  EXPECT_LT(rel_l2(rec.signal.values(), psi.values()), 1e-13);
}

TEST(Synthesize, RefusesModesOutsideReport) {
  const auto gamma = make_dog(2.0, true);
  const ScaleGrid sg(0.1, 10.0, 20);
  const auto bank = make_bank(gamma, sg, 15);
  const auto small = lambda_sequence(make_bank(gamma, sg, 4));
  const auto psi = CircleSignal::from_function(CircleGrid(32), [](double t) -> cplx { return std::cos(2 * t); });
  const auto rec = synthesize(analyze(psi, bank), bank, small);
  EXPECT_EQ(rec.refused.size(), 31u - 9u);
  for (long m : rec.refused) EXPECT_GT(std::abs(m), 4);
}

TEST(Synthesize, FloorRefusesDeadModes) {
  const auto gamma = make_dog(2.0, true);
  const ScaleGrid sg(0.1, 10.0, 20);
  const auto bank = make_bank(gamma, sg, 7);
  auto rep = lambda_sequence(bank);
  rep.lambda[static_cast<std::size_t>(3 + rep.n_max)] = 0.0;
  const auto psi = CircleSignal::from_function(CircleGrid(16), [](double t) -> cplx { return std::cos(2 * t); });
  const auto rec = synthesize(analyze(psi, bank), bank, rep);
  EXPECT_NE(std::find(rec.refused.begin(), rec.refused.end(), 3L), rec.refused.end());
}
