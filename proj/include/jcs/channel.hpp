#pragma once

#include <cmath>
#include <cstdint>
#include <random>
#include <stdexcept>

#include "jcs/modulation.hpp"
#include "jcs/signal.hpp"

namespace jcs {

/// Point-target geometry plus receiver noise. Noise is specified as a PSD N0;
/// the per-sample variance at rate fs is N0*fs, so experiments that sweep the
/// per-sample noise power at fixed fs just set noise_psd = power/fs.
struct ChannelScenario {
  double distance = 0.0;   // one-way transmitter-to-target distance, m
  double gain = 1.0;       // power gain of the echo / link
  double noise_psd = 0.0;  // N0, W/Hz
  std::uint64_t seed = 0;

  double round_trip_delay() const { return 2.0 * distance / kLightSpeed; }
  double one_way_delay() const { return distance / kLightSpeed; }
  double noise_variance(double sample_rate) const { return noise_psd * sample_rate; }

  void validate() const {
    if (distance < 0.0) throw std::invalid_argument("ChannelScenario: distance must be >= 0");
    if (!(gain > 0.0)) throw std::invalid_argument("ChannelScenario: gain must be > 0");
    if (noise_psd < 0.0) throw std::invalid_argument("ChannelScenario: noise_psd must be >= 0");
  }
};

namespace detail {

inline void add_awgn(ComplexSignal& s, double variance, std::uint64_t seed) {
  if (variance < 0.0) throw std::invalid_argument("add_awgn: variance must be >= 0");
  if (variance == 0.0) return;
  std::mt19937_64 rng(seed);
  std::normal_distribution<double> gauss(0.0, std::sqrt(variance / 2.0));
  for (Complex& v : s.samples) v += Complex(gauss(rng), gauss(rng));
}

template <typename Waveform>
ComplexSignal delayed_return(const Waveform& w, const ChannelScenario& scen, double sample_rate) {
  scen.validate();
  if (sample_rate <= 0.0) throw std::invalid_argument("radar_return: sample_rate must be > 0");
  const double tau = scen.round_trip_delay();
  if (tau >= w.duration())
    throw std::domain_error("radar_return: target beyond unambiguous processing window (tau >= Tp)");
  const double amp = std::sqrt(scen.gain);
  const std::size_t n = sample_count(w.duration(), sample_rate);
  ComplexSignal out;
  out.sample_rate = sample_rate;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate;
    // no echo before the round trip completes; the delay is applied inside the
    // analytic waveform expression, so fractional delays are exact
    out.samples[i] = (t >= tau) ? amp * w.value(t - tau) : Complex(0.0, 0.0);
  }
  detail::add_awgn(out, scen.noise_variance(sample_rate), scen.seed);
  return out;
}

template <typename Waveform>
ComplexSignal synced_copy(const Waveform& w, const ChannelScenario& scen, double sample_rate) {
  scen.validate();
  if (sample_rate <= 0.0) throw std::invalid_argument("comm_received: sample_rate must be > 0");
  const double amp = std::sqrt(scen.gain);
  const std::size_t n = sample_count(w.duration(), sample_rate);
  ComplexSignal out;
  out.sample_rate = sample_rate;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i)
    out.samples[i] = amp * w.value(static_cast<double>(i) / sample_rate);
  detail::add_awgn(out, scen.noise_variance(sample_rate), scen.seed);
  return out;
}

}  // namespace detail

/// Reflected pulse at the radar receiver: the transmitted waveform evaluated
/// at t - 2d/c, scaled by sqrt(gain), plus circularly-symmetric AWGN.
inline ComplexSignal radar_return(const SymbolStream& sym, const QamFmcwConfig& cfg, const ChannelScenario& scen,
                                  double sample_rate) {
  return detail::delayed_return(QamFmcwWaveform(sym, cfg), scen, sample_rate);
}

inline ComplexSignal radar_return(const SymbolStream& sym, const FskSfConfig& cfg, const ChannelScenario& scen,
                                  double sample_rate) {
  return detail::delayed_return(FskSfWaveform(sym, cfg), scen, sample_rate);
}

/// Signal at the (perfectly time-synchronized) communication receiver: the
/// one-way delay is removed by the synchronization assumption.
inline ComplexSignal comm_received(const SymbolStream& sym, const QamFmcwConfig& cfg, const ChannelScenario& scen,
                                   double sample_rate) {
  return detail::synced_copy(QamFmcwWaveform(sym, cfg), scen, sample_rate);
}

inline ComplexSignal comm_received(const SymbolStream& sym, const FskSfConfig& cfg, const ChannelScenario& scen,
                                   double sample_rate) {
  return detail::synced_copy(FskSfWaveform(sym, cfg), scen, sample_rate);
}

}  // namespace jcs
