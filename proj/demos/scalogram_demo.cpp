// Analyze a two-mode signal with the balanced difference of Gaussians, print a
// coarse magnitude map of the scalogram, then reconstruct.

#include <cstdio>

#include "circlet/circlet.hpp"

using namespace circlet;
using circle::cplx;

int main() {
  const circle::CircleGrid grid(64);
  const auto psi = circle::CircleSignal::from_function(
      grid, [](double t) -> cplx { return std::cos(2 * t) + 0.3 * std::sin(4 * t); }, "cos2");
  const auto gamma = circle::make_dog(2.0, true);

  const ScaleGrid scales(1e-2, 1e2, 200);
  const auto bank = circle::make_bank(gamma, scales, 31);
  const auto report = circle::admissibility(gamma, bank);
  std::printf("admissible=%d  c1=%.4f  c2=%.4f\n", report.admissible, report.inf, report.sup);

  const auto s = circle::analyze(psi, bank);
  const char* shades = " .:-=+*#%@";
  double peak = 0.0;
  for (const auto& v : s.values) peak = std::max(peak, std::abs(v));
  for (std::size_t i = scales.size(); i-- > 0;) {
    if (i % 10) continue;
    std::printf("a=%8.3f |", scales.node(i));
    for (std::size_t k = 0; k < s.n_angles; ++k) std::putchar(shades[static_cast<int>(9.0 * std::abs(s.at(i, k)) / peak)]);
    std::printf("|\n");
  }

  const auto rec = circle::synthesize(s, bank, report);
  double num = 0.0, den = 0.0;
  for (std::size_t j = 0; j < grid.size(); ++j) {
    num += std::norm(rec.signal.values()[j] - psi.values()[j]);
    den += std::norm(psi.values()[j]);
  }
  std::printf("reconstruction error %.2e\n", std::sqrt(num / den));
}
