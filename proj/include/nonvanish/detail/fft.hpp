#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace nonvanish::detail {

/// In-place iterative radix-2 FFT. sign = -1 forward, +1 inverse (unscaled).
inline void fft(std::vector<std::complex<double>>& a, int sign) {
  const std::size_t n = a.size();
  if (n == 0 || (n & (n - 1)) != 0) throw std::invalid_argument("fft size must be a power of two");
  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }
  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = sign * 2.0 * std::numbers::pi / static_cast<double>(len);
    for (std::size_t i = 0; i < n; i += len)
      for (std::size_t k = 0; k < len / 2; ++k) {
        std::complex<double> w = std::polar(1.0, ang * static_cast<double>(k));
        auto u = a[i + k];
        auto v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
      }
  }
}

/// Periodic conjugate function (discrete Hilbert transform on the circle) of
/// real samples u(2 pi j / n): multiplies Fourier mode k by -i sign(k). The
/// Nyquist mode is dropped.
inline std::vector<double> conjugate_function(const std::vector<double>& u) {
  const std::size_t n = u.size();
  std::vector<std::complex<double>> a(u.begin(), u.end());
  fft(a, -1);
  a[0] = 0.0;
  a[n / 2] = 0.0;
  for (std::size_t k = 1; k < n / 2; ++k) {
    a[k] *= std::complex<double>{0.0, -1.0};
    a[n - k] *= std::complex<double>{0.0, 1.0};
  }
  fft(a, +1);
  std::vector<double> v(n);
  for (std::size_t j = 0; j < n; ++j) v[j] = a[j].real() / static_cast<double>(n);
  return v;
}

}  // namespace nonvanish::detail
