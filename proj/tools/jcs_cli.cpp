// Command-line front end: run sweeps from a config file, reproduce the
// result figures, export PSD/bandwidth and CRB tables, and sanity-check the
// demodulators. Every run drops its CSV outputs plus a manifest.json into
// the output directory.

#include <chrono>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "jcs/harness.hpp"

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct RunContext {
  std::string out_dir = "out";
  std::uint64_t seed = 1;
  bool seed_given = false;
  std::string scale = "desk";
  int workers = 1;
  std::string config_path;
  std::vector<std::string> outputs;
  std::chrono::steady_clock::time_point t0 = std::chrono::steady_clock::now();
};

void write_file(RunContext& ctx, const std::string& name, const std::string& content) {
  fs::create_directories(ctx.out_dir);
  const fs::path path = fs::path(ctx.out_dir) / name;
  std::ofstream out(path, std::ios::binary);
  if (!out) throw std::runtime_error("cannot write " + path.string());
  out << content;
  ctx.outputs.push_back(path.string());
  std::cout << "wrote " << path.string() << "\n";
}

void write_manifest(RunContext& ctx, const std::string& command, const jcs::ConfigFile* cfg) {
  json j;
  j["command"] = command;
  j["version"] = jcs::kVersion;
  j["seed"] = ctx.seed;
  j["scale"] = ctx.scale;
  j["workers"] = ctx.workers;
  j["outputs"] = ctx.outputs;
  j["wall_time_s"] = std::chrono::duration<double>(std::chrono::steady_clock::now() - ctx.t0).count();
  if (cfg != nullptr) {
    json echo;
    for (const auto& [k, v] : cfg->entries()) echo[k] = v;
    j["config_file"] = ctx.config_path;
    j["config"] = echo;
  }
  fs::create_directories(ctx.out_dir);
  const fs::path path = fs::path(ctx.out_dir) / "manifest.json";
  std::ofstream out(path);
  out << j.dump(2) << "\n";
  std::cout << "wrote " << path.string() << "\n";
}

jcs::Scale parse_scale(const std::string& s) {
  if (s == "desk") return jcs::Scale::Desk;
  if (s == "full") return jcs::Scale::Full;
  throw CLI::ValidationError("--scale", "expected desk or full");
}

int cmd_simulate(RunContext& ctx) {
  const jcs::ConfigFile cf = jcs::ConfigFile::parse_file(ctx.config_path);
  jcs::ExperimentConfig cfg = jcs::experiment_from_config(cf);
  if (ctx.seed_given) cfg.seed = ctx.seed;  // CLI overrides the config file
  ctx.seed = cfg.seed;
  cfg.workers = ctx.workers;
  const std::vector<jcs::SweepRecord> recs = jcs::run_experiment(cfg);
  write_file(ctx, "sweep.csv", jcs::records_to_csv(recs));
  write_manifest(ctx, "simulate", &cf);
  return 0;
}

int cmd_figure(RunContext& ctx, const std::string& name) {
  const std::vector<jcs::SweepRecord> recs = jcs::reproduce_figure(name, parse_scale(ctx.scale), ctx.seed, ctx.workers);
  write_file(ctx, name + ".csv", jcs::records_to_csv(recs));
  write_manifest(ctx, "figure " + name, nullptr);
  return 0;
}

int cmd_psd(RunContext& ctx) {
  jcs::QamFmcwConfig cfg{16, 10, jcs::FmcwCarrier{10e6 / 200e-6, 0.0, 200e-6, 0.0}};
  double fs = 40e6;
  std::size_t pulses = 96;
  const jcs::ConfigFile* cfp = nullptr;
  jcs::ConfigFile cf;
  if (!ctx.config_path.empty()) {
    cf = jcs::ConfigFile::parse_file(ctx.config_path);
    const jcs::ExperimentConfig ec = jcs::experiment_from_config(cf);
    cfg = jcs::QamFmcwConfig{ec.M, ec.Ns, ec.fmcw};
    fs = ec.sample_rate;
    cfp = &cf;
  }
  jcs::BandwidthCheckOptions opts;
  opts.pulses = pulses;
  opts.seed = ctx.seed;
  const jcs::BandwidthReport rep = jcs::bandwidth_partition_check(cfg, fs, opts);

  // spectrum of the full JCS signal for plotting
  std::uint64_t st = ctx.seed;
  jcs::ComplexSignal sig;
  sig.sample_rate = fs;
  const std::size_t plen = jcs::sample_count(cfg.carrier.Tp, fs);
  for (std::size_t p = 0; p < 32; ++p) {
    const jcs::SymbolStream sym = jcs::random_qam_stream(cfg.Ns, cfg.M, st);
    const jcs::ComplexSignal pulse = jcs::modulate_qam_fmcw(sym, cfg, fs);
    sig.samples.insert(sig.samples.end(), pulse.samples.begin(), pulse.samples.end());
  }
  const jcs::PsdEstimate psd = jcs::estimate_psd(sig, plen);
  std::string csv = "freq_hz,density\n";
  for (std::size_t i = 0; i < psd.freqs.size(); ++i)
    csv += jcs::detail::format_double(psd.freqs[i]) + "," + jcs::detail::format_double(psd.density[i]) + "\n";
  write_file(ctx, "psd.csv", csv);

  std::string rep_csv = "B_s_hz,B_c_hz,B_t_measured_hz,additivity_error\n";
  rep_csv += jcs::detail::format_double(rep.B_s) + "," + jcs::detail::format_double(rep.B_c) + "," +
             jcs::detail::format_double(rep.B_t_measured) + "," + jcs::detail::format_double(rep.additivity_error) +
             "\n";
  write_file(ctx, "bandwidth_partition.csv", rep_csv);
  std::cout << "B_s=" << rep.B_s / 1e6 << " MHz  B_c=" << rep.B_c / 1e6 << " MHz  B_t=" << rep.B_t_measured / 1e6
            << " MHz  additivity error " << rep.additivity_error * 100.0 << "%\n";
  write_manifest(ctx, "psd", cfp);
  return 0;
}

int cmd_crb(RunContext& ctx, double slope) {
  std::string csv = "gamma,N,freq_var_lb_hz2,range_mse_lb_m2,range_mse_lb_asymptotic_m2\n";
  for (double gamma : {0.01, 0.1, 1.0, 10.0, 100.0}) {
    for (int N : {16, 64, 256, 1024, 2400, 8192}) {
      const jcs::CrbResult r = jcs::compute_crb(slope, gamma, N);
      csv += jcs::detail::format_double(gamma) + "," + std::to_string(N) + "," +
             jcs::detail::format_double(r.freq_var_lb) + "," + jcs::detail::format_double(r.range_mse_lb) + "," +
             jcs::detail::format_double(jcs::crb_range_mse(slope, gamma, N, jcs::CrbForm::Asymptotic)) + "\n";
    }
  }
  write_file(ctx, "crb.csv", csv);
  write_manifest(ctx, "crb", nullptr);
  return 0;
}

int cmd_demod(RunContext& ctx) {
  std::cout << "noiseless loopback check (1000 symbols per scheme)\n";
  jcs::ChannelScenario scen;
  bool ok = true;
  for (int M : {4, 16, 64}) {
    jcs::QamFmcwConfig cfg{M, 8, jcs::FmcwCarrier{29.98e12, 0.0, 60e-6, 0.0}};
    std::uint64_t st = ctx.seed + static_cast<std::uint64_t>(M);
    long errors = 0;
    for (int p = 0; p < 125; ++p) {
      const jcs::SymbolStream sym = jcs::random_qam_stream(8, M, st);
      errors += jcs::demod_qam_fmcw(jcs::comm_received(sym, cfg, scen, 40e6), cfg, &sym).symbol_errors;
    }
    std::cout << "  qam-fmcw M=" << M << ": " << errors << " symbol errors\n";
    ok = ok && errors == 0;
  }
  {
    jcs::FskSfConfig cfg{8, 8, jcs::equal_bandwidth_sf(jcs::FmcwCarrier{29.98e12, 0.0, 60e-6, 0.0}, 512)};
    std::uint64_t st = ctx.seed + 99;
    long errors = 0;
    for (int p = 0; p < 125; ++p) {
      const jcs::SymbolStream sym = jcs::random_fsk_stream(8, 8, st);
      errors += jcs::demod_fsk_sf(jcs::comm_received(sym, cfg, scen, 136e6), cfg, &sym).symbol_errors;
    }
    std::cout << "  fsk-sf M=8: " << errors << " symbol errors\n";
    ok = ok && errors == 0;
  }
  std::cout << (ok ? "loopback OK\n" : "loopback FAILED\n");
  write_manifest(ctx, "demod", nullptr);
  return ok ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Joint communications and sensing simulator (QAM-FMCW / FSK-SF)"};
  app.require_subcommand(1);
  app.fallthrough();  // let --out/--seed/... appear after the subcommand

  RunContext ctx;
  app.add_option("--out", ctx.out_dir, "output directory")->capture_default_str();
  app.add_option("--seed", ctx.seed, "master RNG seed")->capture_default_str();
  app.add_option("--scale", ctx.scale, "desk (1e3 pulses) or full (5e4 pulses)")->capture_default_str();
  app.add_option("--workers", ctx.workers, "worker threads for Monte-Carlo trials")->capture_default_str();

  auto* sim = app.add_subcommand("simulate", "run one sweep experiment from a config file");
  sim->add_option("--config", ctx.config_path, "experiment config file")->required()->check(CLI::ExistingFile);

  std::string fig_name;
  auto* fig = app.add_subcommand("figure", "reproduce a result sweep (fig3..fig8)");
  fig->add_option("--name", fig_name, "fig3|fig4|fig5|fig6|fig7|fig8")->required();

  auto* psd = app.add_subcommand("psd", "PSD and bandwidth-partition report");
  psd->add_option("--config", ctx.config_path, "optional experiment config file")->check(CLI::ExistingFile);

  double crb_slope = 29.98e12;
  auto* crb = app.add_subcommand("crb", "print Cramer-Rao bound tables");
  crb->add_option("--slope", crb_slope, "chirp slope S in Hz/s")->capture_default_str();

  auto* demod = app.add_subcommand("demod", "noiseless demodulator loopback check");

  CLI11_PARSE(app, argc, argv);
  ctx.seed_given = app.count("--seed") > 0;

  try {
    if (sim->parsed()) return cmd_simulate(ctx);
    if (fig->parsed()) return cmd_figure(ctx, fig_name);
    if (psd->parsed()) return cmd_psd(ctx);
    if (crb->parsed()) return cmd_crb(ctx, crb_slope);
    if (demod->parsed()) return cmd_demod(ctx);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  }
  return 0;
}
