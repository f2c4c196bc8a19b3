#pragma once

#include <cmath>
#include <cstddef>
#include <stdexcept>
#include <utility>
#include <vector>

#include "jcs/signal.hpp"

// Self-contained radix-2 FFT. FFTW is deliberately not used here: the harness
// guarantees bit-identical output for a fixed seed regardless of worker count,
// and FFTW's planner may pick different (differently-rounded) algorithms per
// process or alignment. A fixed textbook butterfly is deterministic and plenty
// fast for pulse-sized transforms.

namespace jcs::fft {

inline bool is_pow2(std::size_t n) { return n != 0 && (n & (n - 1)) == 0; }

inline std::size_t next_pow2(std::size_t n) {
  std::size_t p = 1;
  while (p < n) p <<= 1;
  return p;
}

/// In-place iterative Cooley-Tukey FFT; size must be a power of two.
inline void transform(std::vector<Complex>& a, bool inverse = false) {
  const std::size_t n = a.size();
  if (n == 0) return;
  if (!is_pow2(n)) throw std::invalid_argument("fft: size must be a power of two");

  for (std::size_t i = 1, j = 0; i < n; ++i) {
    std::size_t bit = n >> 1;
    for (; j & bit; bit >>= 1) j ^= bit;
    j ^= bit;
    if (i < j) std::swap(a[i], a[j]);
  }

  for (std::size_t len = 2; len <= n; len <<= 1) {
    const double ang = (inverse ? 1.0 : -1.0) * kTwoPi / static_cast<double>(len);
    const Complex wlen(std::cos(ang), std::sin(ang));
    for (std::size_t i = 0; i < n; i += len) {
      Complex w(1.0, 0.0);
      for (std::size_t k = 0; k < len / 2; ++k) {
        const Complex u = a[i + k];
        const Complex v = a[i + k + len / 2] * w;
        a[i + k] = u + v;
        a[i + k + len / 2] = u - v;
        w *= wlen;
      }
    }
  }

  if (inverse) {
    const double inv = 1.0 / static_cast<double>(n);
    for (Complex& x : a) x *= inv;
  }
}

/// |DFT|^2 of `x`, zero-padded to next_pow2(pad_factor * size).
inline std::vector<double> periodogram(const std::vector<Complex>& x, std::size_t pad_factor = 4) {
  if (x.empty()) throw std::invalid_argument("periodogram: empty input");
  const std::size_t n = next_pow2(x.size() * (pad_factor == 0 ? 1 : pad_factor));
  std::vector<Complex> buf(n, Complex(0.0, 0.0));
  for (std::size_t i = 0; i < x.size(); ++i) buf[i] = x[i];
  transform(buf);
  std::vector<double> p(n);
  for (std::size_t i = 0; i < n; ++i) p[i] = std::norm(buf[i]);
  return p;
}

/// Parabolic (log-magnitude) interpolation of the periodogram argmax.
/// The fractional bin may dip slightly below zero when the argmax sits at
/// bin 0; callers pick the wrap convention that suits their frequency axis.
struct Peak {
  double bin = 0.0;    // fractional bin in (-0.5, n - 0.5)
  double power = 0.0;  // raw power at the integer argmax
};

inline Peak interpolated_peak(const std::vector<double>& p, bool interpolate = true) {
  if (p.empty()) throw std::invalid_argument("interpolated_peak: empty spectrum");
  const std::size_t n = p.size();
  std::size_t k = 0;
  for (std::size_t i = 1; i < n; ++i)
    if (p[i] > p[k]) k = i;
  if (p[k] <= 0.0) throw std::domain_error("interpolated_peak: degenerate (all-zero) signal");
  Peak out;
  out.power = p[k];
  double delta = 0.0;
  if (interpolate && n >= 3) {
    const double eps = 1e-300;
    const double lm = std::log(p[(k + n - 1) % n] + eps);
    const double l0 = std::log(p[k] + eps);
    const double lp = std::log(p[(k + 1) % n] + eps);
    const double den = lm - 2.0 * l0 + lp;
    if (den < 0.0) delta = 0.5 * (lm - lp) / den;
    if (delta > 0.5) delta = 0.5;
    if (delta < -0.5) delta = -0.5;
  }
  out.bin = static_cast<double>(k) + delta;
  return out;
}

/// Map a fractional bin of an n-point DFT at rate fs to a frequency in
/// [-fs/2, fs/2).
inline double bin_to_centered_freq(double bin, std::size_t n, double fs) {
  double f = bin * fs / static_cast<double>(n);
  if (f >= fs / 2.0) f -= fs;
  return f;
}

}  // namespace jcs::fft
