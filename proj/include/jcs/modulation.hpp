#pragma once

#include <cmath>
#include <cstdint>
#include <stdexcept>
#include <vector>

#include "jcs/signal.hpp"
#include "jcs/waveform.hpp"

namespace jcs {

enum class Scheme { QamFmcw, FskSf };

/// One pulse worth of information symbols. For QAM the complex constellation
/// points are carried alongside the integer symbol indices.
struct SymbolStream {
  Scheme scheme = Scheme::QamFmcw;
  std::vector<int> symbols;     // in [0, M)
  std::vector<Complex> points;  // QAM only, same length as symbols
};

// ---------------------------------------------------------------------------
// Gray-coded square QAM, unit average energy
// ---------------------------------------------------------------------------

inline int qam_bits_per_symbol(int M) {
  switch (M) {
    case 4: return 2;
    case 16: return 4;
    case 64: return 6;
    default: throw std::invalid_argument("QAM order must be one of 4, 16, 64");
  }
}

namespace detail {

inline unsigned gray_encode(unsigned v) { return v ^ (v >> 1); }

inline unsigned gray_decode(unsigned g) {
  unsigned v = 0;
  for (; g; g >>= 1) v ^= g;
  return v;
}

inline double qam_scale(int M) {
  // levels +-1, +-3, ..., +-(L-1) per axis -> E|A|^2 = 2(M-1)/3
  return std::sqrt(3.0 / (2.0 * (static_cast<double>(M) - 1.0)));
}

}  // namespace detail

/// Constellation point for symbol index s: the high half of the bits selects
/// the I level, the low half the Q level, each Gray-coded over the axis.
inline Complex qam_point(int s, int M) {
  const int b = qam_bits_per_symbol(M);
  const int ba = b / 2;
  const unsigned L = 1u << ba;
  if (s < 0 || s >= M) throw std::invalid_argument("qam_point: symbol out of range");
  const unsigned gi = static_cast<unsigned>(s) >> ba;
  const unsigned gq = static_cast<unsigned>(s) & (L - 1);
  const double li = static_cast<double>(detail::gray_decode(gi));
  const double lq = static_cast<double>(detail::gray_decode(gq));
  const double off = static_cast<double>(L - 1);
  return detail::qam_scale(M) * Complex(2.0 * li - off, 2.0 * lq - off);
}

/// Minimum-distance decision; per-axis slicing is exact for square QAM.
inline int qam_decide(Complex y, int M) {
  const int b = qam_bits_per_symbol(M);
  const int ba = b / 2;
  const int L = 1 << ba;
  const double scale = detail::qam_scale(M);
  auto axis = [&](double x) {
    int li = static_cast<int>(std::lround((x / scale + static_cast<double>(L - 1)) / 2.0));
    if (li < 0) li = 0;
    if (li > L - 1) li = L - 1;
    return detail::gray_encode(static_cast<unsigned>(li));
  };
  return static_cast<int>((axis(y.real()) << ba) | axis(y.imag()));
}

/// Map a bit sequence (MSB-first per symbol) onto Gray-coded square QAM.
inline SymbolStream qam_map(const std::vector<int>& bits, int M) {
  const int b = qam_bits_per_symbol(M);
  if (bits.size() % static_cast<std::size_t>(b) != 0)
    throw std::invalid_argument("qam_map: bit count not divisible by log2(M)");
  SymbolStream out;
  out.scheme = Scheme::QamFmcw;
  const std::size_t ns = bits.size() / static_cast<std::size_t>(b);
  out.symbols.reserve(ns);
  out.points.reserve(ns);
  for (std::size_t i = 0; i < ns; ++i) {
    int s = 0;
    for (int j = 0; j < b; ++j) {
      const int bit = bits[i * static_cast<std::size_t>(b) + static_cast<std::size_t>(j)];
      if (bit != 0 && bit != 1) throw std::invalid_argument("qam_map: bits must be 0/1");
      s = (s << 1) | bit;
    }
    out.symbols.push_back(s);
    out.points.push_back(qam_point(s, M));
  }
  return out;
}

/// Inverse of qam_map on the integer symbols.
inline std::vector<int> qam_demap(const SymbolStream& sym, int M) {
  const int b = qam_bits_per_symbol(M);
  std::vector<int> bits;
  bits.reserve(sym.symbols.size() * static_cast<std::size_t>(b));
  for (int s : sym.symbols) {
    if (s < 0 || s >= M) throw std::invalid_argument("qam_demap: symbol out of range");
    for (int j = b - 1; j >= 0; --j) bits.push_back((s >> j) & 1);
  }
  return bits;
}

// ---------------------------------------------------------------------------
// Scheme configurations
// ---------------------------------------------------------------------------

/// QAM symbols on an FMCW carrier (amplitude/phase modulation of the chirp).
struct QamFmcwConfig {
  int M = 16;
  int Ns = 8;  // symbols per pulse
  FmcwCarrier carrier;

  double Ts() const { return carrier.Tp / static_cast<double>(Ns); }

  void validate() const {
    qam_bits_per_symbol(M);
    if (Ns < 1) throw std::invalid_argument("QamFmcwConfig: Ns must be >= 1");
    carrier.validate();
  }
};

/// M-ary FSK fine offsets on a step-frequency carrier. Each symbol spans
/// K/Ns consecutive steps and shifts them by m*delta_f/M.
struct FskSfConfig {
  int M = 8;
  int Ns = 8;
  SfCarrier carrier;

  int steps_per_symbol() const { return carrier.K / Ns; }
  double symbol_duration() const { return static_cast<double>(steps_per_symbol()) * carrier.delta_t; }

  void validate() const {
    if (M < 2 || (M & (M - 1)) != 0) throw std::invalid_argument("FskSfConfig: M must be a power of two >= 2");
    if (Ns < 1) throw std::invalid_argument("FskSfConfig: Ns must be >= 1");
    carrier.validate();
    if (carrier.K % Ns != 0) throw std::invalid_argument("FskSfConfig: K/Ns must be an integer");
  }
};

inline SymbolStream random_qam_stream(int Ns, int M, std::uint64_t& state);
inline SymbolStream random_fsk_stream(int Ns, int M, std::uint64_t& state);

// ---------------------------------------------------------------------------
// Transmit waveforms, evaluable at arbitrary pulse time
// ---------------------------------------------------------------------------

/// Analytic QAM-FMCW pulse: value(t) = A_{floor(t/Ts)} * exp(j*2*pi*theta(t)).
class QamFmcwWaveform {
 public:
  QamFmcwWaveform(const SymbolStream& sym, const QamFmcwConfig& cfg) : cfg_(cfg), points_(sym.points) {
    cfg_.validate();
    if (sym.scheme != Scheme::QamFmcw) throw std::invalid_argument("QamFmcwWaveform: wrong scheme tag");
    if (points_.size() != static_cast<std::size_t>(cfg_.Ns))
      throw std::invalid_argument("QamFmcwWaveform: symbol count != Ns");
  }

  double duration() const { return cfg_.carrier.Tp; }
  const QamFmcwConfig& config() const { return cfg_; }

  /// Piecewise-constant symbol amplitude at pulse time t; zero outside the pulse.
  Complex amplitude(double t) const {
    if (t < 0.0 || t >= duration()) return Complex(0.0, 0.0);
    int n = static_cast<int>(std::floor(t / cfg_.Ts()));
    if (n > cfg_.Ns - 1) n = cfg_.Ns - 1;
    return points_[static_cast<std::size_t>(n)];
  }

  Complex value(double t) const {
    if (t < 0.0 || t >= duration()) return Complex(0.0, 0.0);
    return amplitude(t) * unit_phasor(fmcw_phase(t, cfg_.carrier));
  }

 private:
  QamFmcwConfig cfg_;
  std::vector<Complex> points_;
};

/// Analytic FSK-SF pulse with phase-continuous frequency steps.
class FskSfWaveform {
 public:
  FskSfWaveform(const SymbolStream& sym, const FskSfConfig& cfg) : cfg_(cfg) {
    cfg_.validate();
    if (sym.scheme != Scheme::FskSf) throw std::invalid_argument("FskSfWaveform: wrong scheme tag");
    if (sym.symbols.size() != static_cast<std::size_t>(cfg_.Ns))
      throw std::invalid_argument("FskSfWaveform: symbol count != Ns");
    const int K = cfg_.carrier.K;
    const int G = cfg_.steps_per_symbol();
    step_freq_.resize(static_cast<std::size_t>(K));
    step_phase_.resize(static_cast<std::size_t>(K));
    double phase = cfg_.carrier.theta0;  // cycles at step start
    for (int k = 0; k < K; ++k) {
      const int m = sym.symbols[static_cast<std::size_t>(k / G)];
      if (m < 0 || m >= cfg_.M) throw std::invalid_argument("FskSfWaveform: symbol out of [0, M)");
      step_freq_[static_cast<std::size_t>(k)] = static_cast<double>(k) * cfg_.carrier.delta_f + cfg_.carrier.f0 +
                                                static_cast<double>(m) * cfg_.carrier.delta_f / cfg_.M;
      step_phase_[static_cast<std::size_t>(k)] = phase;
      phase += step_freq_[static_cast<std::size_t>(k)] * cfg_.carrier.delta_t;
    }
  }

  double duration() const { return cfg_.carrier.pulse_duration(); }
  const FskSfConfig& config() const { return cfg_; }

  /// Instantaneous frequency at pulse time t (includes the symbol offset).
  double frequency(double t) const {
    const int k = step_of(t);
    return step_freq_[static_cast<std::size_t>(k)];
  }

  Complex value(double t) const {
    if (t < 0.0 || t >= duration()) return Complex(0.0, 0.0);
    const int k = step_of(t);
    const double tk = static_cast<double>(k) * cfg_.carrier.delta_t;
    const double cyc = step_phase_[static_cast<std::size_t>(k)] + step_freq_[static_cast<std::size_t>(k)] * (t - tk);
    return unit_phasor(cyc);
  }

 private:
  int step_of(double t) const {
    int k = static_cast<int>(std::floor(t / cfg_.carrier.delta_t));
    if (k < 0) k = 0;
    if (k > cfg_.carrier.K - 1) k = cfg_.carrier.K - 1;
    return k;
  }

  FskSfConfig cfg_;
  std::vector<double> step_freq_;
  std::vector<double> step_phase_;  // cycles at each step start
};

// ---------------------------------------------------------------------------
// Sampled modulators
// ---------------------------------------------------------------------------

inline ComplexSignal modulate_qam_fmcw(const SymbolStream& sym, const QamFmcwConfig& cfg, double sample_rate) {
  const QamFmcwWaveform w(sym, cfg);
  if (sample_rate <= 0.0) throw std::invalid_argument("modulate_qam_fmcw: sample_rate must be > 0");
  const std::size_t n = sample_count(cfg.carrier.Tp, sample_rate);
  ComplexSignal out;
  out.sample_rate = sample_rate;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.samples[i] = w.value(static_cast<double>(i) / sample_rate);
  return out;
}

inline ComplexSignal modulate_fsk_sf(const SymbolStream& sym, const FskSfConfig& cfg, double sample_rate) {
  const FskSfWaveform w(sym, cfg);
  if (sample_rate <= 0.0) throw std::invalid_argument("modulate_fsk_sf: sample_rate must be > 0");
  const std::size_t n = sample_count(cfg.carrier.pulse_duration(), sample_rate);
  ComplexSignal out;
  out.sample_rate = sample_rate;
  out.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) out.samples[i] = w.value(static_cast<double>(i) / sample_rate);
  return out;
}

// ---------------------------------------------------------------------------
// Random streams (splitmix64; keeps symbol draws identical across platforms)
// ---------------------------------------------------------------------------

namespace detail {

inline std::uint64_t splitmix64(std::uint64_t& state) {
  std::uint64_t z = (state += 0x9e3779b97f4a7c15ULL);
  z = (z ^ (z >> 30)) * 0xbf58476d1ce4e5b9ULL;
  z = (z ^ (z >> 27)) * 0x94d4a2b2f9f6c38dULL;
  return z ^ (z >> 31);
}

inline int uniform_int(std::uint64_t& state, int bound) {
  return static_cast<int>(splitmix64(state) % static_cast<std::uint64_t>(bound));
}

}  // namespace detail

inline SymbolStream random_qam_stream(int Ns, int M, std::uint64_t& state) {
  qam_bits_per_symbol(M);
  SymbolStream out;
  out.scheme = Scheme::QamFmcw;
  out.symbols.resize(static_cast<std::size_t>(Ns));
  out.points.resize(static_cast<std::size_t>(Ns));
  for (int i = 0; i < Ns; ++i) {
    out.symbols[static_cast<std::size_t>(i)] = detail::uniform_int(state, M);
    out.points[static_cast<std::size_t>(i)] = qam_point(out.symbols[static_cast<std::size_t>(i)], M);
  }
  return out;
}

inline SymbolStream random_fsk_stream(int Ns, int M, std::uint64_t& state) {
  SymbolStream out;
  out.scheme = Scheme::FskSf;
  out.symbols.resize(static_cast<std::size_t>(Ns));
  for (int i = 0; i < Ns; ++i) out.symbols[static_cast<std::size_t>(i)] = detail::uniform_int(state, M);
  return out;
}

}  // namespace jcs
