#pragma once

// Thin RAII layer over FFTW3. Plans are created with FFTW_ESTIMATE so results
// do not depend on timing measurements; the planner itself is not re-entrant,
// so plan creation/destruction is serialized.

#include <fftw3.h>

#include <complex>
#include <mutex>
#include <span>
#include <vector>

namespace circlet::fft {

using cplx = std::complex<double>;

inline std::mutex& planner_mutex() {
  static std::mutex m;
  return m;
}

/// In-place DFT of a complex vector.
///   forward:  X_k = sum_j x_j exp(-2 pi i jk/N)
///   backward: X_k = sum_j x_j exp(+2 pi i jk/N)   (unnormalized)
inline void transform(std::span<cplx> data, bool forward) {
  if (data.empty()) return;
  auto* p = reinterpret_cast<fftw_complex*>(data.data());
  fftw_plan plan;
  {
    std::lock_guard lock(planner_mutex());
    plan = fftw_plan_dft_1d(static_cast<int>(data.size()), p, p, forward ? FFTW_FORWARD : FFTW_BACKWARD,
                            FFTW_ESTIMATE);
  }
  fftw_execute(plan);
  std::lock_guard lock(planner_mutex());
  fftw_destroy_plan(plan);
}

inline std::vector<cplx> forward(std::vector<cplx> x) {
  transform(x, true);
  return x;
}

inline std::vector<cplx> backward(std::vector<cplx> x) {
  transform(x, false);
  return x;
}

/// Index of signed frequency n in an N-point DFT.
inline std::size_t bin(long n, std::size_t size) noexcept {
  const long m = static_cast<long>(size);
  return static_cast<std::size_t>(((n % m) + m) % m);
}

inline std::size_t next_pow2(std::size_t n) noexcept {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

}  // namespace circlet::fft
