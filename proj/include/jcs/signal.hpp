#pragma once

#include <cmath>
#include <complex>
#include <numbers>
#include <stdexcept>
#include <vector>

namespace jcs {

using Complex = std::complex<double>;

inline constexpr double kLightSpeed = 299'792'458.0;  // m/s
inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Unit phasor exp(j*2*pi*cycles). Phase is kept in cycles throughout the
/// library and reduced mod 1 here so large phase values keep full precision.
inline Complex unit_phasor(double cycles) {
  const double frac = cycles - std::floor(cycles);
  return std::polar(1.0, kTwoPi * frac);
}

/// Uniformly sampled complex baseband signal.
struct ComplexSignal {
  std::vector<Complex> samples;
  double sample_rate = 0.0;  // Hz
  double t_start = 0.0;      // time of first sample, s

  std::size_t size() const { return samples.size(); }
  double duration() const { return static_cast<double>(samples.size()) / sample_rate; }
  double time_at(std::size_t n) const { return t_start + static_cast<double>(n) / sample_rate; }

  void validate() const {
    if (sample_rate <= 0.0) throw std::invalid_argument("ComplexSignal: sample_rate must be > 0");
    for (const Complex& s : samples) {
      if (!std::isfinite(s.real()) || !std::isfinite(s.imag()))
        throw std::invalid_argument("ComplexSignal: non-finite sample");
    }
  }
};

/// Number of samples covering a duration at the given rate. round() so that
/// an exact product (e.g. 10us * 100Msps = 1000) is not truncated by
/// floating-point noise.
inline std::size_t sample_count(double duration, double sample_rate) {
  if (sample_rate <= 0.0) throw std::invalid_argument("sample_rate must be > 0");
  const long long n = std::llround(duration * sample_rate);
  if (n < 1) throw std::invalid_argument("duration too short for sample_rate");
  return static_cast<std::size_t>(n);
}

inline double mean_power(const ComplexSignal& s) {
  if (s.samples.empty()) return 0.0;
  double acc = 0.0;
  for (const Complex& v : s.samples) acc += std::norm(v);
  return acc / static_cast<double>(s.samples.size());
}

}  // namespace jcs
