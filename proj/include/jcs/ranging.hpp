#pragma once

#include <algorithm>
#include <cmath>
#include <limits>
#include <stdexcept>
#include <vector>

#include "jcs/fft.hpp"
#include "jcs/modulation.hpp"
#include "jcs/signal.hpp"

namespace jcs {

enum class RangeMethod { FreqDomainMl, CarrierSync, FskSf };

/// Short-time frequency track: per-window periodogram peak.
struct FreqTrack {
  std::vector<double> times;  // window centers, s
  std::vector<double> freqs;  // peak frequency, Hz, in [-fs/2, fs/2)
  std::vector<double> power;  // raw peak power (0 for an all-zero window)
};

/// Coarse/fine trace of the step-frequency ranging procedure.
struct FskRangingTrace {
  FreqTrack freq_track;
  int k_prime_hat = 0;   // coarse step offset, 1-based
  double t1_hat = 0.0;   // frequency-change offset within a step, (0, delta_t]
  double objective = 0.0;
};

struct RangeEstimate {
  double tau_hat = 0.0;  // round-trip time, s
  double d_hat = 0.0;    // = c * tau_hat / 2
  RangeMethod method = RangeMethod::CarrierSync;
  double objective = 0.0;  // method diagnostic: residual (ML) or peak power
  FskRangingTrace trace;   // populated by the FSK-SF estimator
};

// ---------------------------------------------------------------------------
// QAM-FMCW
// ---------------------------------------------------------------------------

/// Mix the radar return with the conjugate unmodulated chirp. The convention
/// beat[n] = conj(r[n]) * local[n] puts a target at delay tau at the positive
/// beat frequency tau*S (the symbol factor appears conjugated, which no
/// downstream consumer cares about). Frequencies are unambiguous for
/// tau*S < fs.
inline ComplexSignal beat_signal(const ComplexSignal& r, const QamFmcwConfig& cfg) {
  cfg.validate();
  r.validate();
  ComplexSignal out;
  out.sample_rate = r.sample_rate;
  out.samples.resize(r.samples.size());
  for (std::size_t i = 0; i < r.samples.size(); ++i) {
    const double t = static_cast<double>(i) / r.sample_rate;
    out.samples[i] = std::conj(r.samples[i]) * unit_phasor(fmcw_phase(t, cfg.carrier));
  }
  return out;
}

/// Carrier-synchronization ranging: periodogram (4x zero-padded) of the beat
/// signal, parabolic-interpolated peak, tau = f_c / S. Interpolation can be
/// switched off for strict integer-bin peak picking.
inline RangeEstimate range_carrier_sync(const ComplexSignal& beat, const QamFmcwConfig& cfg,
                                        bool interpolate = true) {
  cfg.validate();
  if (beat.samples.empty()) throw std::invalid_argument("range_carrier_sync: empty beat signal");
  const std::vector<double> p = fft::periodogram(beat.samples, 4);
  const fft::Peak peak = fft::interpolated_peak(p, interpolate);  // throws on all-zero input
  // beat frequencies live in [0, fs); a slightly negative interpolated bin at
  // the DC peak means tau ~ 0, not a wrap to the top of the band
  const double fc = std::max(peak.bin, 0.0) * beat.sample_rate / static_cast<double>(p.size());
  RangeEstimate est;
  est.method = RangeMethod::CarrierSync;
  est.tau_hat = fc / cfg.carrier.slope;
  est.d_hat = kLightSpeed * est.tau_hat / 2.0;
  est.objective = peak.power;
  return est;
}

/// Frequency-domain maximum-likelihood ranging: exhaustive grid search of the
/// squared mismatch between the observed beat and the delay-hypothesis
/// template built from the known transmit symbols (evaluated sample-exact, so
/// the objective is zero at the true on-grid delay in the noiseless case).
/// Ties resolve toward the smaller tau.
inline RangeEstimate range_freq_domain_ml(const ComplexSignal& beat, const QamFmcwConfig& cfg,
                                          const SymbolStream& known, const std::vector<double>& tau_grid) {
  cfg.validate();
  if (tau_grid.empty()) throw std::invalid_argument("range_freq_domain_ml: empty tau grid");
  if (known.points.size() != static_cast<std::size_t>(cfg.Ns))
    throw std::invalid_argument("range_freq_domain_ml: known symbol count != Ns");
  const std::size_t n = beat.samples.size();
  if (n == 0) throw std::invalid_argument("range_freq_domain_ml: empty beat signal");
  const double fs = beat.sample_rate;
  const double Ts = cfg.Ts();
  const double S = cfg.carrier.slope;

  double best_j = std::numeric_limits<double>::infinity();
  double best_tau = tau_grid.front();
  for (const double tau : tau_grid) {
    if (tau < 0.0 || tau >= cfg.carrier.Tp)
      throw std::domain_error("range_freq_domain_ml: tau grid point outside [0, Tp)");
    // template tone: phase(t) = S*tau*t - S*tau^2/2 + f0*tau (cycles)
    const Complex rot_step = unit_phasor(S * tau / fs);
    Complex rot = unit_phasor(-0.5 * S * tau * tau + cfg.carrier.f0 * tau);
    double j = 0.0;
    for (std::size_t i = 0; i < n; ++i) {
      const double t = static_cast<double>(i) / fs;
      Complex model(0.0, 0.0);
      if (t >= tau) {
        int seg = static_cast<int>(std::floor((t - tau) / Ts));
        if (seg > cfg.Ns - 1) seg = cfg.Ns - 1;
        model = std::conj(known.points[static_cast<std::size_t>(seg)]) * rot;
      }
      j += std::norm(beat.samples[i] - model);
      rot *= rot_step;
    }
    if (j < best_j) {
      best_j = j;
      best_tau = tau;
    }
  }
  RangeEstimate est;
  est.method = RangeMethod::FreqDomainMl;
  est.tau_hat = best_tau;
  est.d_hat = kLightSpeed * best_tau / 2.0;
  est.objective = best_j;
  return est;
}

/// Convenience grid with one beat-spectrum DFT bin per point, spanning the
/// frequency-unambiguous delay window [0, min(Tp, fs/S)).
inline std::vector<double> default_tau_grid(const QamFmcwConfig& cfg, double sample_rate) {
  cfg.validate();
  const double step = 1.0 / (cfg.carrier.Tp * cfg.carrier.slope);  // one DFT bin in tau
  const double hi = std::min(cfg.carrier.Tp, sample_rate / cfg.carrier.slope);
  std::vector<double> grid;
  for (double tau = 0.0; tau < hi; tau += step) grid.push_back(tau);
  return grid;
}

// ---------------------------------------------------------------------------
// Short-time frequency tracking
// ---------------------------------------------------------------------------

/// Rectangular-window short-time periodogram peak tracker. Windows are
/// zero-padded 16x, so "one bin" for the tone-accuracy contract is
/// fs / (16 * window_len) before interpolation.
inline FreqTrack stft_track(const ComplexSignal& r, std::size_t window_len, std::size_t hop,
                            std::size_t pad_factor = 16) {
  if (window_len < 2) throw std::invalid_argument("stft_track: window_len must be >= 2");
  if (hop < 1) throw std::invalid_argument("stft_track: hop must be >= 1");
  if (window_len > r.samples.size()) throw std::invalid_argument("stft_track: window longer than signal");
  double energy = 0.0;
  for (const Complex& v : r.samples) energy += std::norm(v);
  if (energy == 0.0) throw std::domain_error("stft_track: degenerate (all-zero) signal");

  const std::size_t nfft = fft::next_pow2(window_len * pad_factor);
  std::vector<Complex> buf(nfft);
  FreqTrack track;
  for (std::size_t start = 0; start + window_len <= r.samples.size(); start += hop) {
    std::fill(buf.begin(), buf.end(), Complex(0.0, 0.0));
    double wsum = 0.0;
    for (std::size_t i = 0; i < window_len; ++i) {
      buf[i] = r.samples[start + i];
      wsum += std::norm(buf[i]);
    }
    const double tc = (static_cast<double>(start) + static_cast<double>(window_len - 1) / 2.0) / r.sample_rate;
    track.times.push_back(tc);
    if (wsum == 0.0) {  // pre-echo region of a noiseless mixer output
      track.freqs.push_back(0.0);
      track.power.push_back(0.0);
      continue;
    }
    fft::transform(buf);
    std::vector<double> p(nfft);
    for (std::size_t i = 0; i < nfft; ++i) p[i] = std::norm(buf[i]);
    const fft::Peak peak = fft::interpolated_peak(p, true);
    track.freqs.push_back(fft::bin_to_centered_freq(peak.bin, nfft, r.sample_rate));
    track.power.push_back(peak.power);
  }
  return track;
}

// ---------------------------------------------------------------------------
// FSK-SF four-step ranging
// ---------------------------------------------------------------------------

struct FskRangingOptions {
  std::size_t window_len = 0;  // 0: samples-per-step / 4 (min 2)
  std::size_t hop = 0;         // 0: window_len / 2 (min 1)
  std::size_t pad_factor = 16;
};

/// Estimate the round-trip time from an FSK-SF radar return. The radar knows
/// its own symbols, so the received signal is mixed with the local transmit
/// waveform; the mixer-output frequency is k'*df-ish during the stale part of
/// each step and (k'-1)*df-ish after the change instant t1 (plus known
/// symbol-difference offsets). Steps:
///   1. short-time frequency track of the mixer output,
///   2. coarse step offset candidates from the dominant track offset,
///   3. grid search of the change instant over sample offsets in (0, delta_t]
///      minimizing the squared frequency mismatch,
///   4. tau = (k'-1)*delta_t + t1.
/// The coarse offset is frequency-unambiguous for k'*delta_f < fs/2.
inline RangeEstimate range_fsk_sf(const ComplexSignal& r, const FskSfConfig& cfg, const SymbolStream& known,
                                  const FskRangingOptions& opts = {}) {
  cfg.validate();
  r.validate();
  const std::size_t n = sample_count(cfg.carrier.pulse_duration(), r.sample_rate);
  if (r.samples.size() != n) throw std::invalid_argument("range_fsk_sf: signal length does not match K*delta_t");
  const FskSfWaveform tx(known, cfg);

  const double fs = r.sample_rate;
  const double dt = cfg.carrier.delta_t;
  const double df = cfg.carrier.delta_f;
  const int K = cfg.carrier.K;
  const int G = cfg.steps_per_symbol();
  const double spp = dt * fs;  // samples per step, need not be an integer

  std::size_t window = opts.window_len != 0 ? opts.window_len
                                            : std::max<std::size_t>(2, static_cast<std::size_t>(std::llround(spp / 4.0)));
  std::size_t hop = opts.hop != 0 ? opts.hop : std::max<std::size_t>(1, window / 2);
  const double windows_per_step = (spp - static_cast<double>(window)) / static_cast<double>(hop) + 1.0;
  if (windows_per_step < 2.0)
    throw std::domain_error("range_fsk_sf: fewer than 2 STFT windows per step; frequency cannot be tracked");

  // step 0: mixer output, evaluated sample-exact
  ComplexSignal mix;
  mix.sample_rate = fs;
  mix.samples.resize(n);
  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / fs;
    mix.samples[i] = tx.value(t) * std::conj(r.samples[i]);
  }

  // step 1: frequency track
  FreqTrack track = stft_track(mix, window, hop, opts.pad_factor);

  // step 2: coarse candidates around the dominant offset (median of f/df)
  std::vector<double> q;
  q.reserve(track.freqs.size());
  for (std::size_t i = 0; i < track.freqs.size(); ++i)
    if (track.power[i] > 0.0) q.push_back(track.freqs[i] / df);
  if (q.empty()) throw std::domain_error("range_fsk_sf: degenerate track");
  std::nth_element(q.begin(), q.begin() + static_cast<std::ptrdiff_t>(q.size() / 2), q.end());
  const double q_med = q[q.size() / 2];
  // noise-dominated tracks can put the median anywhere; keep the candidate
  // window inside the valid step range instead of failing the whole trial
  const int k_center = std::clamp(static_cast<int>(std::lround(q_med)), 1, K - 1);

  // window-center step assignment
  const std::size_t nw = track.times.size();
  std::vector<int> wstep(nw);  // 0-based step of window center
  std::vector<double> woff(nw);
  for (std::size_t i = 0; i < nw; ++i) {
    int k0 = static_cast<int>(std::floor(track.times[i] / dt));
    if (k0 > K - 1) k0 = K - 1;
    wstep[i] = k0;
    woff[i] = track.times[i] - static_cast<double>(k0) * dt;
  }

  // step 3: joint (k', t1) grid search at sample-offset resolution
  std::vector<double> sgrid;
  for (std::size_t j = 1; j <= static_cast<std::size_t>(std::floor(dt * fs)); ++j)
    sgrid.push_back(static_cast<double>(j) / fs);
  if (sgrid.empty() || sgrid.back() < dt) sgrid.push_back(dt);

  auto fold = [fs](double f) { return f - fs * std::round(f / fs); };

  double best_j = std::numeric_limits<double>::infinity();
  int best_kp = 0;
  double best_s = 0.0;
  for (int kp = std::max(1, k_center - 2); kp <= std::min(K - 1, k_center + 2); ++kp) {
    for (const double s : sgrid) {
      double acc = 0.0;
      std::size_t cnt = 0;
      for (std::size_t i = 0; i < nw; ++i) {
        const int k0 = wstep[i];
        if (k0 < kp || track.power[i] <= 0.0) continue;  // no echo model before k' steps
        const int m_k = known.symbols[static_cast<std::size_t>(k0 / G)];
        double pred;
        if (woff[i] < s) {
          const int m_old = known.symbols[static_cast<std::size_t>((k0 - kp) / G)];
          pred = static_cast<double>(kp) * df + static_cast<double>(m_k - m_old) * df / cfg.M;
        } else {
          const int m_new = known.symbols[static_cast<std::size_t>((k0 - kp + 1) / G)];
          pred = static_cast<double>(kp - 1) * df + static_cast<double>(m_k - m_new) * df / cfg.M;
        }
        const double e = track.freqs[i] - fold(pred);
        acc += e * e;
        ++cnt;
      }
      if (cnt == 0) continue;
      const double j = acc / static_cast<double>(cnt);
      if (j < best_j) {  // strict: ties keep the earliest t1 / smaller k'
        best_j = j;
        best_kp = kp;
        best_s = s;
      }
    }
  }
  if (best_kp == 0) throw std::domain_error("range_fsk_sf: no usable track windows");

  RangeEstimate est;
  est.method = RangeMethod::FskSf;
  est.tau_hat = static_cast<double>(best_kp - 1) * dt + best_s;
  est.d_hat = kLightSpeed * est.tau_hat / 2.0;
  est.objective = best_j;
  est.trace.freq_track = std::move(track);
  est.trace.k_prime_hat = best_kp;
  est.trace.t1_hat = best_s;
  est.trace.objective = best_j;
  return est;
}

}  // namespace jcs
