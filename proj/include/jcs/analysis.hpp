#pragma once

#include <cmath>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <vector>

#include "jcs/fft.hpp"
#include "jcs/modulation.hpp"
#include "jcs/signal.hpp"

namespace jcs {

// ---------------------------------------------------------------------------
// Communication-side closed forms
// ---------------------------------------------------------------------------

/// Gaussian tail probability, exact via erfc.
inline double q_function(double x) { return 0.5 * std::erfc(x / std::numbers::sqrt2); }

/// Large-x approximation exp(-x^2/2)/12. Worst relative error on [3, 6] is
/// about 31% (at x = 3) against the exact Q.
inline double q_approx(double x) { return std::exp(-0.5 * x * x) / 12.0; }

/// Union-style M-QAM bit error upper bound 4*Q(sqrt(3*log2(M)/(M-1) * snr)).
/// `snr` is the dimensionless per-symbol ratio (P_r/N0 in the pulse-energy
/// normalization). Vacuous (= 2) at snr = 0; returned as-is.
inline double qam_ber_bound(int M, double snr) {
  if (M < 4) throw std::invalid_argument("qam_ber_bound: M must be >= 4");
  if (snr < 0.0) throw std::invalid_argument("qam_ber_bound: snr must be >= 0");
  const double arg = std::sqrt(3.0 * std::log2(static_cast<double>(M)) / (static_cast<double>(M) - 1.0) * snr);
  return 4.0 * q_function(arg);
}

/// SNR argument x = sqrt(3*log2(M)/(M-1) * (Pt*G/N0) / Ns). The received
/// pulse energy is P_r = P_t*G; dividing by Ns gives the per-symbol ratio.
inline double snr_argument(int M, int Ns, double ptg_over_n0) {
  if (M < 2 || Ns < 1) throw std::invalid_argument("snr_argument: bad M or Ns");
  if (ptg_over_n0 < 0.0) throw std::invalid_argument("snr_argument: ptg_over_n0 must be >= 0");
  return std::sqrt(3.0 * std::log2(static_cast<double>(M)) / (static_cast<double>(M) - 1.0) * ptg_over_n0 /
                   static_cast<double>(Ns));
}

/// Binary-channel capacity approximation 1 - exp(-x^2/2)/3, implemented
/// exactly as the closed form states (bounded below by 2/3 at x = 0).
inline double capacity_approx(double x) { return 1.0 - std::exp(-0.5 * x * x) / 3.0; }

/// Data throughput (Ns/Tp) * capacity_approx(x) * log2(M), bits/s.
inline double throughput(int Ns, double Tp, int M, double x) {
  if (Ns < 1 || !(Tp > 0.0)) throw std::invalid_argument("throughput: bad Ns or Tp");
  return static_cast<double>(Ns) / Tp * capacity_approx(x) * std::log2(static_cast<double>(M));
}

struct CommMetrics {
  double ber_upper = 0.0;
  double x_arg = 0.0;
  double capacity_bits = 0.0;    // per channel use
  double throughput_bps = 0.0;
};

inline CommMetrics comm_metrics(int M, int Ns, double Tp, double ptg_over_n0) {
  CommMetrics m;
  m.x_arg = snr_argument(M, Ns, ptg_over_n0);
  m.ber_upper = 4.0 * q_function(m.x_arg);
  m.capacity_bits = capacity_approx(m.x_arg);
  m.throughput_bps = throughput(Ns, Tp, M, m.x_arg);
  return m;
}

// ---------------------------------------------------------------------------
// Cramer-Rao bounds
// ---------------------------------------------------------------------------

enum class CrbForm {
  Exact,       // N(N+1)(2N+1) denominator (corrected via the sum-of-squares identity)
  Asymptotic,  // large-N form
  AsPrinted,   // the misprinted N(N+1(2N+1)) = N(3N+1) denominator, kept for audit
};

/// Frequency-estimation CRB for a sampled complex sinusoid at SNR gamma.
inline double crb_frequency(double gamma, int N, bool asymptotic = false) {
  if (!(gamma > 0.0)) throw std::invalid_argument("crb_frequency: gamma must be > 0");
  if (N < 2) throw std::invalid_argument("crb_frequency: N must be >= 2");
  const double n = static_cast<double>(N);
  const double c4pi2 = kTwoPi * kTwoPi;
  if (asymptotic) return 12.0 / (c4pi2 * gamma * n * n * n);
  return 12.0 / (c4pi2 * gamma * n * (n * n - 1.0));
}

/// Ranging MSE lower bound for the QAM-FMCW mixer output.
inline double crb_range_mse(double S, double gamma, int N, CrbForm form = CrbForm::Exact) {
  if (!(S > 0.0)) throw std::invalid_argument("crb_range_mse: S must be > 0");
  if (!(gamma > 0.0)) throw std::invalid_argument("crb_range_mse: gamma must be > 0");
  if (N < 1) throw std::invalid_argument("crb_range_mse: N must be >= 1");
  const double n = static_cast<double>(N);
  const double c2 = kLightSpeed * kLightSpeed;
  const double pi2 = std::numbers::pi * std::numbers::pi;
  switch (form) {
    case CrbForm::Asymptotic:
      return 3.0 * c2 / (16.0 * pi2 * S * S * gamma * n * n * n);
    case CrbForm::AsPrinted:
      return 3.0 * c2 / (8.0 * pi2 * S * S * gamma * n * (3.0 * n + 1.0));
    case CrbForm::Exact:
    default:
      return 3.0 * c2 / (8.0 * pi2 * S * S * gamma * n * (n + 1.0) * (2.0 * n + 1.0));
  }
}

struct CrbResult {
  double freq_var_lb = 0.0;   // Hz^2
  double range_mse_lb = 0.0;  // m^2
  double gamma = 0.0;
  int N = 0;
};

inline CrbResult compute_crb(double S, double gamma, int N, bool asymptotic = false) {
  CrbResult r;
  r.gamma = gamma;
  r.N = N;
  r.freq_var_lb = crb_frequency(gamma, N, asymptotic);
  r.range_mse_lb = crb_range_mse(S, gamma, N, asymptotic ? CrbForm::Asymptotic : CrbForm::Exact);
  return r;
}

/// E[1/|A|^2] over the unit-energy constellation: the Jensen penalty of
/// amplitude modulation on the expected ranging CRB (1 for QPSK, 17/9 for
/// 16QAM). Multiplies crb_range_mse for the symbol-averaged bound.
inline double qam_jensen_crb_factor(int M) {
  const int bits = qam_bits_per_symbol(M);
  (void)bits;
  double acc = 0.0;
  for (int s = 0; s < M; ++s) acc += 1.0 / std::norm(qam_point(s, M));
  return acc / static_cast<double>(M);
}

// ---------------------------------------------------------------------------
// Spectral estimation
// ---------------------------------------------------------------------------

struct PsdEstimate {
  std::vector<double> freqs;    // centered grid, Hz
  std::vector<double> density;  // power / Hz; integrates to the mean power
  double occupied_bw_99 = 0.0;  // Hz
};

/// Smallest contiguous frequency interval containing `fraction` of the total
/// power of a (fftshifted) density array.
inline double occupied_bandwidth(const std::vector<double>& density, double bin_hz, double fraction = 0.99) {
  if (density.empty()) throw std::invalid_argument("occupied_bandwidth: empty density");
  double total = 0.0;
  for (double v : density) total += v;
  if (total <= 0.0) throw std::domain_error("occupied_bandwidth: zero total power");
  const double target = fraction * total;
  const std::size_t n = density.size();
  std::size_t best = n;
  std::size_t j = 0;
  double acc = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    if (j < i) {
      j = i;
      acc = density[i];
    }
    while (acc < target && j + 1 < n) acc += density[++j];
    if (acc >= target)
      best = std::min(best, j - i + 1);
    else
      break;
    acc -= density[i];
  }
  return static_cast<double>(best) * bin_hz;
}

/// Bartlett (averaged-periodogram) PSD over non-overlapping segments. With
/// i.i.d. symbols per pulse and segment_len = samples per pulse this
/// approximates the cyclostationary time-average spectrum.
inline PsdEstimate estimate_psd(const ComplexSignal& s, std::size_t segment_len) {
  if (segment_len < 2) throw std::invalid_argument("estimate_psd: segment_len must be >= 2");
  if (s.samples.size() < 4 * segment_len)
    throw std::invalid_argument("estimate_psd: signal shorter than 4 segments");
  const std::size_t nseg = s.samples.size() / segment_len;
  const std::size_t nfft = fft::next_pow2(segment_len);
  std::vector<Complex> buf(nfft);
  std::vector<double> acc(nfft, 0.0);
  for (std::size_t g = 0; g < nseg; ++g) {
    std::fill(buf.begin(), buf.end(), Complex(0.0, 0.0));
    for (std::size_t i = 0; i < segment_len; ++i) buf[i] = s.samples[g * segment_len + i];
    fft::transform(buf);
    for (std::size_t i = 0; i < nfft; ++i) acc[i] += std::norm(buf[i]);
  }
  PsdEstimate out;
  out.freqs.resize(nfft);
  out.density.resize(nfft);
  const double norm = static_cast<double>(nseg) * static_cast<double>(segment_len) * s.sample_rate;
  const double bin = s.sample_rate / static_cast<double>(nfft);
  for (std::size_t i = 0; i < nfft; ++i) {
    const std::size_t k = (i + nfft / 2) % nfft;  // fftshift
    out.freqs[i] = (static_cast<double>(i) - static_cast<double>(nfft / 2)) * bin;
    out.density[i] = acc[k] / norm;
  }
  out.occupied_bw_99 = occupied_bandwidth(out.density, bin, 0.99);
  return out;
}

// ---------------------------------------------------------------------------
// Bandwidth partition (B_t ~ B_c + B_s)
// ---------------------------------------------------------------------------

struct BandwidthReport {
  double B_s = 0.0;           // swept bandwidth S*Tp
  double B_c = 0.0;           // measured 99% width of the bare symbol stream
  double B_t_measured = 0.0;  // measured 99% width of the full JCS signal
  double additivity_error = 0.0;
};

struct BandwidthCheckOptions {
  std::size_t pulses = 128;
  std::uint64_t seed = 1;
};

/// Measure how the 99%-occupied bandwidth of the modulated chirp splits into
/// the swept bandwidth plus the symbol-stream bandwidth.
inline BandwidthReport bandwidth_partition_check(const QamFmcwConfig& cfg, double sample_rate,
                                                 const BandwidthCheckOptions& opts = {}) {
  cfg.validate();
  if (sample_rate <= 0.0) throw std::invalid_argument("bandwidth_partition_check: sample_rate must be > 0");
  const double B_s = cfg.carrier.bandwidth();
  if (sample_rate <= 2.0 * B_s)
    throw std::invalid_argument("bandwidth_partition_check: undersampled (need fs > 2*(B_s + B_c))");

  const std::size_t npulse = std::max<std::size_t>(opts.pulses, 4);
  const std::size_t plen = sample_count(cfg.carrier.Tp, sample_rate);
  ComplexSignal pam, jcs;
  pam.sample_rate = sample_rate;
  jcs.sample_rate = sample_rate;
  pam.samples.reserve(npulse * plen);
  jcs.samples.reserve(npulse * plen);
  std::uint64_t state = opts.seed;
  const double Ts = cfg.Ts();
  for (std::size_t p = 0; p < npulse; ++p) {
    const SymbolStream sym = random_qam_stream(cfg.Ns, cfg.M, state);
    for (std::size_t i = 0; i < plen; ++i) {
      const double t = static_cast<double>(i) / sample_rate;
      int seg = static_cast<int>(std::floor(t / Ts));
      if (seg > cfg.Ns - 1) seg = cfg.Ns - 1;
      const Complex a = sym.points[static_cast<std::size_t>(seg)];
      pam.samples.push_back(a);
      jcs.samples.push_back(a * unit_phasor(fmcw_phase(t, cfg.carrier)));
    }
  }
  BandwidthReport rep;
  rep.B_s = B_s;
  rep.B_c = estimate_psd(pam, plen).occupied_bw_99;
  rep.B_t_measured = estimate_psd(jcs, plen).occupied_bw_99;
  if (sample_rate <= 2.0 * (B_s + rep.B_c))
    throw std::invalid_argument("bandwidth_partition_check: undersampled (need fs > 2*(B_s + B_c))");
  rep.additivity_error = std::abs(rep.B_t_measured - (B_s + rep.B_c)) / (B_s + rep.B_c);
  return rep;
}

}  // namespace jcs
