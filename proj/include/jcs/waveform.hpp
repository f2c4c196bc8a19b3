#pragma once

#include <cmath>
#include <stdexcept>
#include <vector>

#include "jcs/signal.hpp"

namespace jcs {

/// Linear-FM (chirp) carrier: instantaneous frequency S*t + f0 over one pulse.
/// The artifact works in complex baseband, so f0 is a baseband offset and
/// defaults to 0; the RF center frequency is metadata only.
struct FmcwCarrier {
  double slope = 0.0;   // S, Hz/s
  double f0 = 0.0;      // Hz
  double Tp = 0.0;      // pulse duration, s
  double theta0 = 0.0;  // initial phase, cycles

  double bandwidth() const { return slope * Tp; }  // swept bandwidth B_s

  void validate() const {
    if (!(slope > 0.0)) throw std::invalid_argument("FmcwCarrier: slope must be > 0");
    if (!(Tp > 0.0)) throw std::invalid_argument("FmcwCarrier: Tp must be > 0");
    if (f0 < 0.0) throw std::invalid_argument("FmcwCarrier: f0 must be >= 0");
    if (!std::isfinite(bandwidth())) throw std::invalid_argument("FmcwCarrier: non-finite bandwidth");
  }
};

/// Step-frequency carrier: K constant-frequency steps of width delta_t rising
/// by delta_f each. Pulse duration is K*delta_t exactly.
struct SfCarrier {
  double delta_f = 0.0;  // per-step increment, Hz
  double delta_t = 0.0;  // step duration, s
  int K = 0;             // number of steps
  double f0 = 0.0;       // Hz
  double theta0 = 0.0;   // cycles

  double pulse_duration() const { return static_cast<double>(K) * delta_t; }
  double bandwidth() const { return delta_f * static_cast<double>(K); }

  void validate() const {
    if (K < 1) throw std::invalid_argument("SfCarrier: K must be >= 1");
    if (!(delta_f > 0.0)) throw std::invalid_argument("SfCarrier: delta_f must be > 0");
    if (!(delta_t > 0.0)) throw std::invalid_argument("SfCarrier: delta_t must be > 0");
    if (f0 < 0.0) throw std::invalid_argument("SfCarrier: f0 must be >= 0");
  }
};

/// SF carrier occupying the same swept bandwidth as `fmcw` (S*Tp == delta_f*K).
/// With power-of-two K the equality is exact in floating point.
inline SfCarrier equal_bandwidth_sf(const FmcwCarrier& fmcw, int K) {
  fmcw.validate();
  if (K < 1) throw std::invalid_argument("equal_bandwidth_sf: K must be >= 1");
  SfCarrier sf;
  sf.delta_f = fmcw.slope * fmcw.Tp / static_cast<double>(K);
  sf.delta_t = fmcw.Tp / static_cast<double>(K);
  sf.K = K;
  sf.f0 = fmcw.f0;
  sf.theta0 = fmcw.theta0;
  return sf;
}

/// Chirp phase in cycles: 0.5*S*t^2 + f0*t + theta0.
inline double fmcw_phase(double t, const FmcwCarrier& c) {
  if (t < 0.0 || t > c.Tp) throw std::domain_error("fmcw_phase: t outside [0, Tp]");
  return 0.5 * c.slope * t * t + c.f0 * t + c.theta0;
}

/// 1-based step index holding time t; the final step owns t == K*delta_t.
inline int sf_step_index(double t, const SfCarrier& c) {
  int k = static_cast<int>(std::floor(t / c.delta_t)) + 1;
  if (k > c.K) k = c.K;
  if (k < 1) k = 1;
  return k;
}

/// Piecewise-constant frequency (k-1)*delta_f + f0 on step k.
inline double sf_frequency(double t, const SfCarrier& c) {
  if (t < 0.0 || t > c.pulse_duration()) throw std::domain_error("sf_frequency: t outside [0, K*delta_t]");
  const int k = sf_step_index(t, c);
  return static_cast<double>(k - 1) * c.delta_f + c.f0;
}

/// Integrated SF phase in cycles; continuous across step boundaries.
inline double sf_phase(double t, const SfCarrier& c) {
  if (t < 0.0 || t > c.pulse_duration()) throw std::domain_error("sf_phase: t outside [0, K*delta_t]");
  const int k = sf_step_index(t, c);
  // full steps 1..k-1 contribute (j-1)*delta_f*delta_t + f0*delta_t each
  const double m = static_cast<double>(k - 1);
  const double full = c.delta_t * (c.delta_f * m * (m - 1.0) * 0.5 + c.f0 * m);
  const double tk = m * c.delta_t;
  return full + (m * c.delta_f + c.f0) * (t - tk) + c.theta0;
}

/// Unit-amplitude unmodulated carrier sampled at sample_rate.
inline ComplexSignal synthesize_carrier(const FmcwCarrier& c, double sample_rate) {
  c.validate();
  if (sample_rate <= 0.0) throw std::invalid_argument("synthesize_carrier: sample_rate must be > 0");
  const std::size_t n = sample_count(c.Tp, sample_rate);
  ComplexSignal out;
  out.sample_rate = sample_rate;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out.samples[i] = unit_phasor(fmcw_phase(static_cast<double>(i) / sample_rate, c));
  return out;
}

inline ComplexSignal synthesize_carrier(const SfCarrier& c, double sample_rate) {
  c.validate();
  if (sample_rate <= 0.0) throw std::invalid_argument("synthesize_carrier: sample_rate must be > 0");
  const std::size_t n = sample_count(c.pulse_duration(), sample_rate);
  ComplexSignal out;
  out.sample_rate = sample_rate;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out.samples[i] = unit_phasor(sf_phase(static_cast<double>(i) / sample_rate, c));
  return out;
}

}  // namespace jcs
