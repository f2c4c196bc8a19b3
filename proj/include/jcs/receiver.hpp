#pragma once

#include <bit>
#include <cmath>
#include <stdexcept>
#include <vector>

#include "jcs/modulation.hpp"
#include "jcs/signal.hpp"
#include "jcs/waveform.hpp"

namespace jcs {

/// Decided symbols plus error counts against an optional reference stream.
struct DemodResult {
  SymbolStream symbols;
  long symbol_errors = 0;
  long bit_errors = 0;
  double evm = 0.0;  // RMS error vector magnitude, QAM only
};

namespace detail {

// symbol integers are the Gray bit labels, so XOR popcount counts bit errors
inline void count_errors(DemodResult& r, const SymbolStream& reference) {
  if (reference.symbols.size() != r.symbols.symbols.size())
    throw std::invalid_argument("count_errors: reference length mismatch");
  for (std::size_t i = 0; i < reference.symbols.size(); ++i) {
    const unsigned diff = static_cast<unsigned>(reference.symbols[i] ^ r.symbols.symbols[i]);
    if (diff != 0) ++r.symbol_errors;
    r.bit_errors += std::popcount(diff);
  }
}

}  // namespace detail

/// QAM-FMCW demodulation: mix with the conjugate local chirp, integrate over
/// each symbol period, minimum-distance decision. Perfect time sync assumed.
inline DemodResult demod_qam_fmcw(const ComplexSignal& r, const QamFmcwConfig& cfg,
                                  const SymbolStream* reference = nullptr) {
  cfg.validate();
  r.validate();
  const std::size_t n = sample_count(cfg.carrier.Tp, r.sample_rate);
  if (r.samples.size() != n) throw std::invalid_argument("demod_qam_fmcw: signal length does not match Tp");

  DemodResult out;
  out.symbols.scheme = Scheme::QamFmcw;
  out.symbols.symbols.reserve(static_cast<std::size_t>(cfg.Ns));
  out.symbols.points.reserve(static_cast<std::size_t>(cfg.Ns));

  const double Ts = cfg.Ts();
  // group samples by the same floor(t/Ts) expression the modulator uses, so
  // boundary samples land in the same symbol on both sides
  std::vector<Complex> acc(static_cast<std::size_t>(cfg.Ns), Complex(0.0, 0.0));
  std::vector<long> cnt(static_cast<std::size_t>(cfg.Ns), 0);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / r.sample_rate;
    int seg = static_cast<int>(std::floor(t / Ts));
    if (seg > cfg.Ns - 1) seg = cfg.Ns - 1;
    acc[static_cast<std::size_t>(seg)] += r.samples[i] * std::conj(unit_phasor(fmcw_phase(t, cfg.carrier)));
    ++cnt[static_cast<std::size_t>(seg)];
  }
  double evm_acc = 0.0;
  for (int s = 0; s < cfg.Ns; ++s) {
    if (cnt[static_cast<std::size_t>(s)] == 0)
      throw std::invalid_argument("demod_qam_fmcw: fewer than one sample per symbol");
    const Complex y = acc[static_cast<std::size_t>(s)] / static_cast<double>(cnt[static_cast<std::size_t>(s)]);
    const int dec = qam_decide(y, cfg.M);
    const Complex p = qam_point(dec, cfg.M);
    out.symbols.symbols.push_back(dec);
    out.symbols.points.push_back(p);
    evm_acc += std::norm(y - p);
  }
  out.evm = std::sqrt(evm_acc / static_cast<double>(cfg.Ns));
  if (reference != nullptr) detail::count_errors(out, *reference);
  return out;
}

/// FSK-SF demodulation: per symbol, coherent matched-filter bank over the M
/// hypothesis waveforms (phase-continuous across the symbol's steps; the
/// unknown entry phase drops out under the magnitude). Ties resolve toward
/// the smaller m.
inline DemodResult demod_fsk_sf(const ComplexSignal& r, const FskSfConfig& cfg,
                                const SymbolStream* reference = nullptr) {
  cfg.validate();
  r.validate();
  const std::size_t n = sample_count(cfg.carrier.pulse_duration(), r.sample_rate);
  if (r.samples.size() != n) throw std::invalid_argument("demod_fsk_sf: signal length does not match K*delta_t");

  const int G = cfg.steps_per_symbol();
  const double dt = cfg.carrier.delta_t;
  const double df = cfg.carrier.delta_f;
  const double tsym = cfg.symbol_duration();

  DemodResult out;
  out.symbols.scheme = Scheme::FskSf;
  out.symbols.symbols.reserve(static_cast<std::size_t>(cfg.Ns));

  std::vector<Complex> scores(static_cast<std::size_t>(cfg.M));
  for (int b = 0; b < cfg.Ns; ++b) {
    const double t0 = static_cast<double>(b) * tsym;
    const std::size_t i0 = static_cast<std::size_t>(std::llround(t0 * r.sample_rate));
    std::size_t i1 = static_cast<std::size_t>(std::llround((t0 + tsym) * r.sample_rate));
    if (i1 > n) i1 = n;
    if (i1 - i0 < 2) throw std::invalid_argument("demod_fsk_sf: fewer than two samples per symbol");
    std::fill(scores.begin(), scores.end(), Complex(0.0, 0.0));
    for (std::size_t i = i0; i < i1; ++i) {
      const double t = static_cast<double>(i) / r.sample_rate;
      int k = static_cast<int>(std::floor(t / dt));  // absolute step, 0-based
      if (k > cfg.carrier.K - 1) k = cfg.carrier.K - 1;
      const int krel = k - b * G;
      const double u = t - static_cast<double>(k) * dt;
      // hypothesis phase from the symbol start, in cycles, for offset m*df/M:
      //   sum of previous in-symbol step frequencies + current step partial
      const double base_full =
          dt * (df * 0.5 * static_cast<double>(krel) * (2.0 * static_cast<double>(b * G) + static_cast<double>(krel) - 1.0) +
                cfg.carrier.f0 * static_cast<double>(krel));
      const double base_part = (static_cast<double>(k) * df + cfg.carrier.f0) * u;
      const double t_in = static_cast<double>(krel) * dt + u;  // time since symbol start
      // hypothesis m differs from m=0 by the phasor (df/M * t_in)^m
      Complex acc = r.samples[i] * std::conj(unit_phasor(base_full + base_part));
      const Complex step = std::conj(unit_phasor(df / cfg.M * t_in));
      for (int m = 0; m < cfg.M; ++m) {
        scores[static_cast<std::size_t>(m)] += acc;
        acc *= step;
      }
    }
    int best = 0;
    double best_mag = std::abs(scores[0]);
    for (int m = 1; m < cfg.M; ++m) {
      const double mag = std::abs(scores[static_cast<std::size_t>(m)]);
      if (mag > best_mag) {
        best_mag = mag;
        best = m;
      }
    }
    out.symbols.symbols.push_back(best);
  }
  out.evm = 0.0;
  if (reference != nullptr) detail::count_errors(out, *reference);
  return out;
}

}  // namespace jcs
