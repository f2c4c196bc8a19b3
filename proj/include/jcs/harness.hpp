#pragma once

#include <algorithm>
#include <charconv>
#include <cmath>
#include <cstdint>
#include <fstream>
#include <map>
#include <sstream>
#include <stdexcept>
#include <string>
#include <thread>
#include <vector>

#include "jcs/analysis.hpp"
#include "jcs/channel.hpp"
#include "jcs/modulation.hpp"
#include "jcs/ranging.hpp"
#include "jcs/receiver.hpp"

namespace jcs {

inline constexpr const char* kVersion = "1.0.0";

enum class SweepAxis { NoisePower, Ns, SampleRate, ModulationOrder, BandwidthSplit };
enum class Scale { Desk, Full };

/// One aggregated Monte-Carlo result row.
struct SweepRecord {
  double axis_value = 0.0;
  std::string series;  // "<series>/<metric>"
  double mean = 0.0;
  double stddev = 0.0;
  long trials = 0;
};

/// Full description of one sweep experiment.
struct ExperimentConfig {
  Scheme scheme = Scheme::QamFmcw;

  FmcwCarrier fmcw{29.98e12, 0.0, 60e-6, 0.0};  // Table-style default chirp
  SfCarrier sf{};                               // FSK-SF carrier (see normalize())
  int sf_K = 512;                               // used when sf.delta_f == 0

  int M = 16;
  int Ns = 8;

  double distance = 100.0;
  double gain = 1.0;
  double noise_power = 1.0;  // per-sample complex noise variance at sample_rate
  std::uint64_t seed = 1;

  double sample_rate = 40e6;

  long trials = 1000;
  SweepAxis axis = SweepAxis::NoisePower;
  std::vector<double> axis_values{1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0};

  bool run_carrier_sync = true;
  bool run_freq_ml = false;
  std::size_t ml_grid_points = 0;  // 0: one-DFT-bin grid; else uniform over [0, Tp)
  FskRangingOptions fsk_opts{};
  bool comm = true;

  double bandwidth_total = 0.0;  // BandwidthSplit axis
  double ptg_over_n0 = 0.0;      // enables analytic comm metrics when > 0
  int workers = 1;

  std::string series_prefix;  // prepended to metric names in records

  /// Fill the SF carrier from the chirp by the equal-bandwidth convention
  /// when it was not given explicitly.
  void normalize() {
    if (scheme == Scheme::FskSf && sf.delta_f == 0.0) sf = equal_bandwidth_sf(fmcw, sf_K);
  }

  void validate() const {
    if (trials < 1) throw std::invalid_argument("experiment.trials: must be >= 1");
    if (axis_values.empty()) throw std::invalid_argument("experiment.values: must be non-empty");
    if (sample_rate <= 0.0) throw std::invalid_argument("sim.sample_rate: must be > 0");
    if (workers < 1) throw std::invalid_argument("experiment.workers: must be >= 1");
    if (axis == SweepAxis::BandwidthSplit && bandwidth_total <= 0.0)
      throw std::invalid_argument("sim.bandwidth_total: required for the bandwidth_split axis");
  }
};

namespace detail {

inline std::uint64_t mix_seed(std::uint64_t master, std::uint64_t a, std::uint64_t b, std::uint64_t salt) {
  std::uint64_t s = master;
  (void)splitmix64(s);
  s += (a + 1) * 0x9e3779b97f4a7c15ULL;
  (void)splitmix64(s);
  s += (b + 1) * 0xc2b2ae3d27d4eb4fULL;
  (void)splitmix64(s);
  s += salt * 0x165667b19e3779f9ULL;
  return splitmix64(s);
}

/// Deterministic parallel map: results land in a pre-sized vector indexed by
/// trial, so the reduction order (and therefore every rounding) is identical
/// for any worker count.
template <typename Fn>
void parallel_trials(long trials, int workers, Fn&& fn) {
  if (workers <= 1 || trials < 2) {
    for (long i = 0; i < trials; ++i) fn(i);
    return;
  }
  const int nw = static_cast<int>(std::min<long>(workers, trials));
  std::vector<std::thread> pool;
  pool.reserve(static_cast<std::size_t>(nw));
  const long chunk = (trials + nw - 1) / nw;
  for (int w = 0; w < nw; ++w) {
    const long lo = static_cast<long>(w) * chunk;
    const long hi = std::min(trials, lo + chunk);
    if (lo >= hi) break;
    pool.emplace_back([lo, hi, &fn]() {
      for (long i = lo; i < hi; ++i) fn(i);
    });
  }
  for (std::thread& t : pool) t.join();
}

struct Moments {
  double mean = 0.0;
  double stddev = 0.0;
  long used = 0;
  long nan_count = 0;
};

inline Moments moments(const std::vector<double>& v) {
  Moments m;
  double acc = 0.0;
  for (double x : v) {
    if (std::isfinite(x)) {
      acc += x;
      ++m.used;
    } else {
      ++m.nan_count;
    }
  }
  if (m.used == 0) return m;
  m.mean = acc / static_cast<double>(m.used);
  double sq = 0.0;
  for (double x : v)
    if (std::isfinite(x)) sq += (x - m.mean) * (x - m.mean);
  m.stddev = m.used > 1 ? std::sqrt(sq / static_cast<double>(m.used - 1)) : 0.0;
  return m;
}

inline void emit(std::vector<SweepRecord>& out, double axis, const std::string& prefix, const std::string& metric,
                 const std::vector<double>& values) {
  const Moments m = moments(values);
  SweepRecord r;
  r.axis_value = axis;
  r.series = prefix.empty() ? metric : prefix + "/" + metric;
  r.mean = m.mean;
  r.stddev = m.stddev;
  r.trials = m.used;
  out.push_back(r);
  if (m.nan_count > 0) {
    SweepRecord warn = r;
    warn.series += ".nan_excluded";
    warn.mean = static_cast<double>(m.nan_count);
    warn.stddev = 0.0;
    warn.trials = m.nan_count;
    out.push_back(warn);
  }
}

}  // namespace detail

/// ML search grid for the experiment: the documented one-bin default, or a
/// paper-style coarse uniform grid over [0, Tp).
inline std::vector<double> experiment_tau_grid(const QamFmcwConfig& cfg, double sample_rate,
                                               std::size_t grid_points) {
  if (grid_points == 0) return default_tau_grid(cfg, sample_rate);
  std::vector<double> g;
  g.reserve(grid_points);
  for (std::size_t j = 0; j < grid_points; ++j)
    g.push_back(cfg.carrier.Tp * static_cast<double>(j) / static_cast<double>(grid_points));
  return g;
}

/// Run one sweep: for each axis value, `trials` independent pulses with
/// deterministic per-trial seeds; emits ranging squared errors, SER/BER and
/// (when configured) analytic link metrics. Output is bit-identical for a
/// fixed (config, seed) regardless of worker count.
inline std::vector<SweepRecord> run_experiment(const ExperimentConfig& cfg_in) {
  ExperimentConfig cfg = cfg_in;
  cfg.normalize();
  cfg.validate();

  std::vector<SweepRecord> out;
  for (std::size_t pi = 0; pi < cfg.axis_values.size(); ++pi) {
    const double axis = cfg.axis_values[pi];
    ExperimentConfig pt = cfg;
    switch (cfg.axis) {
      case SweepAxis::NoisePower: pt.noise_power = axis; break;
      case SweepAxis::Ns: pt.Ns = static_cast<int>(std::lround(axis)); break;
      case SweepAxis::SampleRate: pt.sample_rate = axis; break;
      case SweepAxis::ModulationOrder: pt.M = static_cast<int>(std::lround(axis)); break;
      case SweepAxis::BandwidthSplit: {
        // axis value = communication bandwidth B_c; B_s = B_t - B_c
        pt.Ns = std::max(1, static_cast<int>(std::lround(axis * cfg.fmcw.Tp)));
        pt.fmcw.slope = (cfg.bandwidth_total - axis) / cfg.fmcw.Tp;
        if (pt.fmcw.slope <= 0.0) throw std::invalid_argument("experiment.values: B_c must be < bandwidth_total");
        break;
      }
    }
    pt.normalize();

    if (pt.scheme == Scheme::QamFmcw) {
      const QamFmcwConfig qcfg{pt.M, pt.Ns, pt.fmcw};
      qcfg.validate();
      const std::vector<double> tau_grid =
          pt.run_freq_ml ? experiment_tau_grid(qcfg, pt.sample_rate, pt.ml_grid_points) : std::vector<double>{};

      std::vector<double> cs_sqerr(static_cast<std::size_t>(pt.trials)),
          ml_sqerr(static_cast<std::size_t>(pt.trials)), ser(static_cast<std::size_t>(pt.trials)),
          ber(static_cast<std::size_t>(pt.trials));
      detail::parallel_trials(pt.trials, pt.workers, [&](long ti) {
        const std::size_t t = static_cast<std::size_t>(ti);
        std::uint64_t symstate = detail::mix_seed(pt.seed, pi, static_cast<std::uint64_t>(ti), 1);
        const SymbolStream sym = random_qam_stream(pt.Ns, pt.M, symstate);
        ChannelScenario scen;
        scen.distance = pt.distance;
        scen.gain = pt.gain;
        scen.noise_psd = pt.noise_power / pt.sample_rate;
        scen.seed = detail::mix_seed(pt.seed, pi, static_cast<std::uint64_t>(ti), 2);
        const ComplexSignal echo = radar_return(sym, qcfg, scen, pt.sample_rate);
        const ComplexSignal beat = beat_signal(echo, qcfg);
        if (pt.run_carrier_sync) {
          const RangeEstimate est = range_carrier_sync(beat, qcfg);
          const double e = est.d_hat - pt.distance;
          cs_sqerr[t] = e * e;
        }
        if (pt.run_freq_ml) {
          const RangeEstimate est = range_freq_domain_ml(beat, qcfg, sym, tau_grid);
          const double e = est.d_hat - pt.distance;
          ml_sqerr[t] = e * e;
        }
        if (pt.comm) {
          ChannelScenario comm_scen = scen;
          comm_scen.seed = detail::mix_seed(pt.seed, pi, static_cast<std::uint64_t>(ti), 3);
          const ComplexSignal rx = comm_received(sym, qcfg, comm_scen, pt.sample_rate);
          const DemodResult res = demod_qam_fmcw(rx, qcfg, &sym);
          ser[t] = static_cast<double>(res.symbol_errors) / static_cast<double>(pt.Ns);
          ber[t] = static_cast<double>(res.bit_errors) /
                   static_cast<double>(pt.Ns * qam_bits_per_symbol(pt.M));
        }
      });
      if (pt.run_carrier_sync) detail::emit(out, axis, cfg.series_prefix, "carrier_sync.sq_err_m2", cs_sqerr);
      if (pt.run_freq_ml) detail::emit(out, axis, cfg.series_prefix, "freq_ml.sq_err_m2", ml_sqerr);
      if (pt.comm) {
        detail::emit(out, axis, cfg.series_prefix, "comm.ser", ser);
        detail::emit(out, axis, cfg.series_prefix, "comm.ber", ber);
      }
      if (pt.ptg_over_n0 > 0.0) {
        const CommMetrics cm = comm_metrics(pt.M, pt.Ns, pt.fmcw.Tp, pt.ptg_over_n0);
        const double gamma = pt.gain / pt.noise_power;
        const int N = static_cast<int>(sample_count(pt.fmcw.Tp, pt.sample_rate));
        const double crb_j = crb_range_mse(pt.fmcw.slope, gamma, N) * qam_jensen_crb_factor(pt.M);
        detail::emit(out, axis, cfg.series_prefix, "capacity_bits", {cm.capacity_bits});
        detail::emit(out, axis, cfg.series_prefix, "throughput_bps", {cm.throughput_bps});
        detail::emit(out, axis, cfg.series_prefix, "crb_mse_jensen_m2", {crb_j});
      }
    } else {
      FskSfConfig fcfg{pt.M, pt.Ns, pt.sf};
      fcfg.validate();
      std::vector<double> sqerr(static_cast<std::size_t>(pt.trials)), ser(static_cast<std::size_t>(pt.trials)),
          ber(static_cast<std::size_t>(pt.trials));
      detail::parallel_trials(pt.trials, pt.workers, [&](long ti) {
        const std::size_t t = static_cast<std::size_t>(ti);
        std::uint64_t symstate = detail::mix_seed(pt.seed, pi, static_cast<std::uint64_t>(ti), 1);
        const SymbolStream sym = random_fsk_stream(pt.Ns, pt.M, symstate);
        ChannelScenario scen;
        scen.distance = pt.distance;
        scen.gain = pt.gain;
        scen.noise_psd = pt.noise_power / pt.sample_rate;
        scen.seed = detail::mix_seed(pt.seed, pi, static_cast<std::uint64_t>(ti), 2);
        const ComplexSignal echo = radar_return(sym, fcfg, scen, pt.sample_rate);
        const RangeEstimate est = range_fsk_sf(echo, fcfg, sym, pt.fsk_opts);
        const double e = est.d_hat - pt.distance;
        sqerr[t] = e * e;
        if (pt.comm) {
          ChannelScenario comm_scen = scen;
          comm_scen.seed = detail::mix_seed(pt.seed, pi, static_cast<std::uint64_t>(ti), 3);
          const ComplexSignal rx = comm_received(sym, fcfg, comm_scen, pt.sample_rate);
          const DemodResult res = demod_fsk_sf(rx, fcfg, &sym);
          ser[t] = static_cast<double>(res.symbol_errors) / static_cast<double>(pt.Ns);
          ber[t] = static_cast<double>(res.bit_errors) /
                   static_cast<double>(pt.Ns * static_cast<int>(std::log2(pt.M)));
        }
      });
      detail::emit(out, axis, cfg.series_prefix, "fsk_sf.sq_err_m2", sqerr);
      if (pt.comm) {
        detail::emit(out, axis, cfg.series_prefix, "comm.ser", ser);
        detail::emit(out, axis, cfg.series_prefix, "comm.ber", ber);
        // effective symbol-rate throughput at the measured error rate
        double mean_ser = 0.0;
        for (double v : ser) mean_ser += v;
        mean_ser /= static_cast<double>(pt.trials);
        const double tput = static_cast<double>(pt.Ns) / pt.sf.pulse_duration() * (1.0 - mean_ser) *
                            std::log2(static_cast<double>(pt.M));
        detail::emit(out, axis, cfg.series_prefix, "comm.throughput_bps", {tput});
      }
    }
  }
  return out;
}

// ---------------------------------------------------------------------------
// CSV
// ---------------------------------------------------------------------------

namespace detail {

inline std::string format_double(double v) {
  char buf[64];
  const std::to_chars_result res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);  // shortest round-trip, '.' decimal, locale-free
}

}  // namespace detail

/// Ranging diagnostics (the short-time frequency track) as CSV, for
/// inspecting the step staircase behind an FSK-SF estimate.
inline std::string track_to_csv(const FreqTrack& track) {
  std::string out = "time_s,freq_hz,peak_power\n";
  for (std::size_t i = 0; i < track.times.size(); ++i) {
    out += detail::format_double(track.times[i]);
    out += ',';
    out += detail::format_double(track.freqs[i]);
    out += ',';
    out += detail::format_double(track.power[i]);
    out += '\n';
  }
  return out;
}

inline std::string records_to_csv(const std::vector<SweepRecord>& records) {
  std::string out = "axis,series,mean,std,trials\n";
  for (const SweepRecord& r : records) {
    out += detail::format_double(r.axis_value);
    out += ',';
    out += r.series;
    out += ',';
    out += detail::format_double(r.mean);
    out += ',';
    out += detail::format_double(r.stddev);
    out += ',';
    out += std::to_string(r.trials);
    out += '\n';
  }
  return out;
}

// ---------------------------------------------------------------------------
// Figure reproduction
// ---------------------------------------------------------------------------

inline long scale_trials(Scale s) { return s == Scale::Desk ? 1000 : 50000; }

namespace detail {

inline ExperimentConfig table1_base(std::uint64_t seed, int workers) {
  ExperimentConfig c;
  c.scheme = Scheme::QamFmcw;
  c.fmcw = FmcwCarrier{29.98e12, 0.0, 60e-6, 0.0};
  c.M = 16;
  c.Ns = 8;
  c.distance = 100.0;
  c.sample_rate = 40e6;
  c.seed = seed;
  c.workers = workers;
  c.comm = false;
  c.axis = SweepAxis::NoisePower;
  c.axis_values = {1e-3, 1e-2, 1e-1, 1.0, 10.0, 100.0};
  return c;
}

inline ExperimentConfig table2_base(std::uint64_t seed, int workers) {
  ExperimentConfig c;
  c.scheme = Scheme::FskSf;
  c.fmcw = FmcwCarrier{29.98e12, 0.0, 60e-6, 0.0};
  c.sf_K = 512;  // equal-bandwidth ladder: delta_f = S*Tp/K
  c.M = 8;
  c.Ns = 8;
  c.distance = 100.0;
  c.sample_rate = 136e6;
  c.seed = seed;
  c.workers = workers;
  c.comm = false;
  return c;
}

}  // namespace detail

/// Reproduce one of the paper-style result sweeps as CSV records.
///   fig3: ranging error vs noise power, per distance, both QAM estimators
///   fig4: ranging error vs noise power, per Ns
///   fig5: ranging error vs noise power, per sampling rate
///   fig6: ranging error vs noise power, per modulation order
///   fig7: communication/sensing tradeoff across bandwidth splits
///   fig8: FSK-SF communication and ranging vs (Ns, M)
inline std::vector<SweepRecord> reproduce_figure(const std::string& name, Scale scale, std::uint64_t seed,
                                                 int workers = 1) {
  const long trials = scale_trials(scale);
  std::vector<SweepRecord> all;
  auto append = [&all](std::vector<SweepRecord> r) {
    for (SweepRecord& x : r) all.push_back(std::move(x));
  };

  if (name == "fig3") {
    for (const double d : {100.0, 150.0}) {
      ExperimentConfig c = detail::table1_base(seed, workers);
      c.trials = trials;
      c.distance = d;
      c.run_freq_ml = true;
      c.ml_grid_points = 10;  // paper-style coarse discrete search over [0, Tp)
      c.series_prefix = "d=" + std::to_string(static_cast<int>(d));
      append(run_experiment(c));
    }
  } else if (name == "fig4") {
    for (const int ns : {2, 8, 32}) {
      ExperimentConfig c = detail::table1_base(seed, workers);
      c.trials = trials;
      c.Ns = ns;
      c.run_freq_ml = true;
      c.ml_grid_points = 10;
      c.series_prefix = "Ns=" + std::to_string(ns);
      append(run_experiment(c));
    }
  } else if (name == "fig5") {
    // the 100 m beat tone sits at ~20 MHz, so every swept rate must keep it
    // inside the unambiguous [0, fs) band
    for (const double fs : {24e6, 40e6, 80e6}) {
      ExperimentConfig c = detail::table1_base(seed, workers);
      c.trials = trials;
      c.sample_rate = fs;
      c.series_prefix = "fs=" + std::to_string(static_cast<long>(fs / 1e6)) + "Msps";
      append(run_experiment(c));
    }
  } else if (name == "fig6") {
    for (const int m : {4, 16, 64}) {
      ExperimentConfig c = detail::table1_base(seed, workers);
      c.trials = trials;
      c.M = m;
      c.axis_values = {1e-2, 1e-1, 1.0, 10.0, 50.0};
      c.series_prefix = "M=" + std::to_string(m);
      append(run_experiment(c));
    }
  } else if (name == "fig7") {
    for (const int m : {4, 16}) {
      ExperimentConfig c = detail::table1_base(seed, workers);
      c.trials = std::max<long>(trials / 4, 100);  // per-split Monte-Carlo
      c.M = m;
      c.axis = SweepAxis::BandwidthSplit;
      c.bandwidth_total = 10e6;
      c.axis_values = {1e6, 2e6, 4e6, 8e6};
      c.noise_power = 0.1;
      c.ptg_over_n0 = 200.0;
      c.series_prefix = "M=" + std::to_string(m);
      append(run_experiment(c));
    }
  } else if (name == "fig8") {
    for (const int ns : {2, 8, 32}) {
      ExperimentConfig c = detail::table2_base(seed, workers);
      c.trials = std::max<long>(trials / 4, 100);
      c.Ns = ns;
      c.axis = SweepAxis::ModulationOrder;
      c.axis_values = {2.0, 8.0, 32.0};
      c.noise_power = 0.1;  // ranging noise; see fig8 comm pass below
      c.comm = false;
      c.series_prefix = "Ns=" + std::to_string(ns);
      append(run_experiment(c));
      // communication pass at a noise level where symbol errors are visible
      ExperimentConfig cc = c;
      cc.noise_power = 100.0;
      cc.comm = true;
      cc.series_prefix += "/comm_noise=100";
      // ranging at this noise level is not informative; skip it by running
      // the comm-only metrics through the same sweep
      std::vector<SweepRecord> r = run_experiment(cc);
      for (SweepRecord& x : r)
        if (x.series.find("comm.") != std::string::npos) all.push_back(std::move(x));
    }
  } else {
    throw std::invalid_argument("reproduce_figure: unknown figure '" + name + "'");
  }
  return all;
}

// ---------------------------------------------------------------------------
// Config file (flat key/value with [section] headers)
// ---------------------------------------------------------------------------

class ConfigFile {
 public:
  static ConfigFile parse_file(const std::string& path) {
    std::ifstream in(path);
    if (!in) throw std::invalid_argument("config: cannot open '" + path + "'");
    std::stringstream ss;
    ss << in.rdbuf();
    return parse(ss.str());
  }

  static ConfigFile parse(const std::string& text) {
    ConfigFile cf;
    std::string section;
    std::size_t line_no = 0;
    std::istringstream in(text);
    std::string line;
    while (std::getline(in, line)) {
      ++line_no;
      const std::string s = trim(strip_comment(line));
      if (s.empty()) continue;
      if (s.front() == '[') {
        if (s.back() != ']') throw std::invalid_argument("config line " + std::to_string(line_no) + ": bad section");
        section = trim(s.substr(1, s.size() - 2));
        continue;
      }
      const std::size_t eq = s.find('=');
      if (eq == std::string::npos)
        throw std::invalid_argument("config line " + std::to_string(line_no) + ": expected key = value");
      const std::string key = trim(s.substr(0, eq));
      const std::string val = trim(s.substr(eq + 1));
      if (key.empty()) throw std::invalid_argument("config line " + std::to_string(line_no) + ": empty key");
      cf.values_[section.empty() ? key : section + "." + key] = val;
    }
    return cf;
  }

  bool has(const std::string& key) const { return values_.count(key) != 0; }

  std::string get_string(const std::string& key, const std::string& fallback) const {
    auto it = values_.find(key);
    return it == values_.end() ? fallback : it->second;
  }

  double get_double(const std::string& key, double fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    try {
      std::size_t pos = 0;
      const double v = std::stod(it->second, &pos);
      if (pos != it->second.size()) throw std::invalid_argument("");
      return v;
    } catch (...) {
      throw std::invalid_argument("config field '" + key + "': not a number: '" + it->second + "'");
    }
  }

  long get_long(const std::string& key, long fallback) const {
    const double v = get_double(key, static_cast<double>(fallback));
    return static_cast<long>(std::llround(v));
  }

  bool get_bool(const std::string& key, bool fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    if (it->second == "true" || it->second == "1") return true;
    if (it->second == "false" || it->second == "0") return false;
    throw std::invalid_argument("config field '" + key + "': expected true/false");
  }

  std::vector<double> get_list(const std::string& key, const std::vector<double>& fallback) const {
    auto it = values_.find(key);
    if (it == values_.end()) return fallback;
    std::vector<double> out;
    std::string tok;
    std::istringstream ss(it->second);
    while (std::getline(ss, tok, ',')) {
      tok = trim(tok);
      if (tok.empty()) continue_error(key);
      try {
        out.push_back(std::stod(tok));
      } catch (...) {
        continue_error(key);
      }
    }
    if (out.empty()) continue_error(key);
    return out;
  }

  const std::map<std::string, std::string>& entries() const { return values_; }

 private:
  [[noreturn]] static void continue_error(const std::string& key) {
    throw std::invalid_argument("config field '" + key + "': expected a comma-separated list of numbers");
  }

  static std::string strip_comment(const std::string& s) {
    const std::size_t h = s.find_first_of("#;");
    return h == std::string::npos ? s : s.substr(0, h);
  }

  static std::string trim(const std::string& s) {
    const char* ws = " \t\r\n";
    const std::size_t a = s.find_first_not_of(ws);
    if (a == std::string::npos) return "";
    const std::size_t b = s.find_last_not_of(ws);
    return s.substr(a, b - a + 1);
  }

  std::map<std::string, std::string> values_;
};

inline ExperimentConfig experiment_from_config(const ConfigFile& cf) {
  ExperimentConfig c;
  const std::string scheme = cf.get_string("experiment.scheme", "qam_fmcw");
  if (scheme == "qam_fmcw")
    c.scheme = Scheme::QamFmcw;
  else if (scheme == "fsk_sf")
    c.scheme = Scheme::FskSf;
  else
    throw std::invalid_argument("config field 'experiment.scheme': unknown scheme '" + scheme + "'");

  const std::string axis = cf.get_string("experiment.axis", "noise_power");
  if (axis == "noise_power")
    c.axis = SweepAxis::NoisePower;
  else if (axis == "ns")
    c.axis = SweepAxis::Ns;
  else if (axis == "sample_rate")
    c.axis = SweepAxis::SampleRate;
  else if (axis == "modulation_order")
    c.axis = SweepAxis::ModulationOrder;
  else if (axis == "bandwidth_split")
    c.axis = SweepAxis::BandwidthSplit;
  else
    throw std::invalid_argument("config field 'experiment.axis': unknown axis '" + axis + "'");

  c.axis_values = cf.get_list("experiment.values", c.axis_values);
  c.trials = cf.get_long("experiment.trials", c.trials);
  c.seed = static_cast<std::uint64_t>(cf.get_long("experiment.seed", static_cast<long>(c.seed)));
  c.workers = static_cast<int>(cf.get_long("experiment.workers", c.workers));
  c.comm = cf.get_bool("experiment.comm", c.comm);

  const std::string est = cf.get_string("experiment.estimators", "carrier_sync");
  c.run_carrier_sync = est.find("carrier_sync") != std::string::npos;
  c.run_freq_ml = est.find("freq_ml") != std::string::npos;
  c.ml_grid_points = static_cast<std::size_t>(cf.get_long("experiment.ml_grid_points", 0));

  c.fmcw.slope = cf.get_double("carrier.slope", c.fmcw.slope);
  c.fmcw.f0 = cf.get_double("carrier.f0", c.fmcw.f0);
  c.fmcw.Tp = cf.get_double("carrier.Tp", c.fmcw.Tp);
  c.fmcw.theta0 = cf.get_double("carrier.theta0", c.fmcw.theta0);

  c.sf_K = static_cast<int>(cf.get_long("sf.K", c.sf_K));
  c.sf.delta_f = cf.get_double("sf.delta_f", 0.0);
  c.sf.delta_t = cf.get_double("sf.delta_t", 0.0);
  c.sf.K = c.sf_K;
  c.sf.f0 = cf.get_double("sf.f0", 0.0);
  if (c.sf.delta_f != 0.0 && c.sf.delta_t == 0.0) c.sf.delta_t = c.fmcw.Tp / c.sf_K;

  c.M = static_cast<int>(cf.get_long("modulation.M", c.M));
  c.Ns = static_cast<int>(cf.get_long("modulation.Ns", c.Ns));

  c.distance = cf.get_double("scenario.distance", c.distance);
  c.gain = cf.get_double("scenario.gain", c.gain);
  c.noise_power = cf.get_double("scenario.noise_power", c.noise_power);

  c.sample_rate = cf.get_double("sim.sample_rate", c.sample_rate);
  c.bandwidth_total = cf.get_double("sim.bandwidth_total", c.bandwidth_total);
  c.ptg_over_n0 = cf.get_double("sim.ptg_over_n0", c.ptg_over_n0);
  c.fsk_opts.window_len = static_cast<std::size_t>(cf.get_long("sim.stft_window", 0));
  c.fsk_opts.hop = static_cast<std::size_t>(cf.get_long("sim.stft_hop", 0));

  c.validate();
  return c;
}

}  // namespace jcs
