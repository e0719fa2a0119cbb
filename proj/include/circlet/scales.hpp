#pragma once

#include <cmath>
#include <vector>

#include "circlet/error.hpp"

namespace circlet {

/// Log-uniform scale nodes on [a_min, a_max].
class ScaleGrid {
 public:
  ScaleGrid(double a_min, double a_max, std::size_t count) : a_min_(a_min), a_max_(a_max), count_(count) {
    if (!(a_min > 0.0) || !(a_max > a_min) || !std::isfinite(a_max))
      throw DomainError("ScaleGrid: need 0 < a_min < a_max");
    if (count < 2) throw DomainError("ScaleGrid: need at least two nodes");
  }

  /// [1e-3, 1e3] with 400 nodes.
  static ScaleGrid standard() { return {1e-3, 1e3, 400}; }

  double a_min() const noexcept { return a_min_; }
  double a_max() const noexcept { return a_max_; }
  std::size_t size() const noexcept { return count_; }
  double log_step() const noexcept { return (std::log(a_max_) - std::log(a_min_)) / static_cast<double>(count_ - 1); }

  double node(std::size_t j) const noexcept {
    if (j == 0) return a_min_;
    if (j + 1 == count_) return a_max_;
    return std::exp(std::log(a_min_) + static_cast<double>(j) * log_step());
  }
  std::vector<double> nodes() const {
    std::vector<double> a(count_);
    for (std::size_t j = 0; j < count_; ++j) a[j] = node(j);
    return a;
  }

  /// Trapezoid weights for integrals over d(ln a).
  std::vector<double> log_weights() const {
    std::vector<double> w(count_, log_step());
    w.front() *= 0.5;
    w.back() *= 0.5;
    return w;
  }

  friend bool operator==(const ScaleGrid&, const ScaleGrid&) = default;

 private:
  double a_min_, a_max_;
  std::size_t count_;
};

}  // namespace circlet
