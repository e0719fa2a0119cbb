#pragma once

// Gauss rules from the Jacobi matrix of the orthogonal polynomials (Golub-Welsch).

#include <Eigen/Eigenvalues>

#include <cmath>
#include <vector>

#include "circlet/error.hpp"

namespace circlet::quad {

struct Rule {
  std::vector<double> nodes;
  std::vector<double> weights;
};

namespace detail {

inline Rule golub_welsch(const Eigen::VectorXd& diag, const Eigen::VectorXd& off, double mu0) {
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es;
  es.computeFromTridiagonal(diag, off, Eigen::ComputeEigenvectors);
  if (es.info() != Eigen::Success) throw Error("golub_welsch: eigenvalue iteration failed");
  const auto n = diag.size();
  Rule r{std::vector<double>(static_cast<std::size_t>(n)), std::vector<double>(static_cast<std::size_t>(n))};
  for (Eigen::Index i = 0; i < n; ++i) {
    const double v0 = es.eigenvectors()(0, i);
    r.nodes[static_cast<std::size_t>(i)] = es.eigenvalues()(i);
    r.weights[static_cast<std::size_t>(i)] = mu0 * v0 * v0;
  }
  return r;
}

}  // namespace detail

/// Nodes and weights for int_0^inf r^alpha exp(-r) f(r) dr.
///
/// Golub-Welsch gives the nodes; they are polished by Newton steps on L_n^alpha and
/// the weights taken from w_i = Gamma(n+alpha+1) x_i / (n! (n+1)^2 L_{n+1}^alpha(x_i)^2),
/// which keeps full relative accuracy in the far tail where eigenvector weights do not.
inline Rule gauss_laguerre(std::size_t n, double alpha = 0.0) {
  if (n == 0) throw DomainError("gauss_laguerre: need at least one node");
  if (!(alpha > -1.0)) throw DomainError("gauss_laguerre: need alpha > -1");
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::VectorXd diag(m), off(m > 1 ? m - 1 : 0);
  for (Eigen::Index i = 0; i < m; ++i) diag(i) = 2.0 * static_cast<double>(i) + alpha + 1.0;
  for (Eigen::Index i = 1; i < m; ++i) off(i - 1) = std::sqrt(static_cast<double>(i) * (static_cast<double>(i) + alpha));
  Rule r = detail::golub_welsch(diag, off, std::tgamma(alpha + 1.0));

  // L_n, L_{n-1}, L_{n+1} at x by the three-term recurrence, scaled to avoid overflow
  auto laguerre = [&](double x, double& ln, double& lnm1, double& lnp1, double& log_scale) {
    double prev = 1.0, cur = 1.0 + alpha - x;
    log_scale = 0.0;
    for (std::size_t k = 1; k <= n; ++k) {
      const double kd = static_cast<double>(k);
      const double next = ((2.0 * kd + 1.0 + alpha - x) * cur - (kd + alpha) * prev) / (kd + 1.0);
      prev = cur;
      cur = next;
      if (k + 1 == n) lnm1 = prev;
      const double big = std::abs(cur);
      if (big > 1e100) {
        prev /= big;
        cur /= big;
        lnm1 /= big;
        log_scale += std::log(big);
      }
    }
    if (n == 1) lnm1 = 1.0;
    ln = prev;
    lnp1 = cur;
  };

  const double nd = static_cast<double>(n);
  const double log_const = std::lgamma(nd + alpha + 1.0) - std::lgamma(nd + 1.0) - 2.0 * std::log(nd + 1.0);
  for (std::size_t i = 0; i < n; ++i) {
    double x = r.nodes[i];
    double ln = 0, lnm1 = 0, lnp1 = 0, ls = 0;
    for (int it = 0; it < 3; ++it) {
      laguerre(x, ln, lnm1, lnp1, ls);
      const double deriv = (nd * ln - (nd + alpha) * lnm1) / x;
      if (deriv == 0.0) break;
      x -= ln / deriv;
    }
    laguerre(x, ln, lnm1, lnp1, ls);
    r.nodes[i] = x;
    r.weights[i] = std::exp(log_const + std::log(x) - 2.0 * (std::log(std::abs(lnp1)) + ls));
  }
  return r;
}

/// Nodes and weights for int_{-1}^{1} f(x) dx.
inline Rule gauss_legendre(std::size_t n) {
  if (n == 0) throw DomainError("gauss_legendre: need at least one node");
  const auto m = static_cast<Eigen::Index>(n);
  Eigen::VectorXd diag = Eigen::VectorXd::Zero(m), off(m > 1 ? m - 1 : 0);
  for (Eigen::Index i = 1; i < m; ++i) {
    const double d = static_cast<double>(i);
    off(i - 1) = d / std::sqrt(4.0 * d * d - 1.0);
  }
  return detail::golub_welsch(diag, off, 2.0);
}

}  // namespace circlet::quad
