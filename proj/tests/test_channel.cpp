#include <gtest/gtest.h>

#include <cmath>

#include "jcs/channel.hpp"

using namespace jcs;

namespace {

QamFmcwConfig table1() { return QamFmcwConfig{16, 8, FmcwCarrier{29.98e12, 0.0, 60e-6, 0.0}}; }

}  // namespace

TEST(RadarReturn, ZeroDelayZeroNoiseIsIdentity) {
  const QamFmcwConfig cfg = table1();
  std::uint64_t st = 2;
  const SymbolStream sym = random_qam_stream(8, 16, st);
  ChannelScenario scen;  // d = 0, gain = 1, no noise
  scen.distance = 0.0;
  const ComplexSignal tx = modulate_qam_fmcw(sym, cfg, 40e6);
  const ComplexSignal rx = radar_return(sym, cfg, scen, 40e6);
  ASSERT_EQ(rx.samples.size(), tx.samples.size());
  for (std::size_t i = 0; i < tx.samples.size(); ++i) EXPECT_EQ(rx.samples[i], tx.samples[i]);
}

TEST(RadarReturn, AnalyticDelayAt100m) {
  const QamFmcwConfig cfg = table1();
  std::uint64_t st = 3;
  const SymbolStream sym = random_qam_stream(8, 16, st);
  ChannelScenario scen;
  scen.distance = 100.0;  // tau = 0.667 us
  const double fs = 40e6;
  const ComplexSignal rx = radar_return(sym, cfg, scen, fs);
  const QamFmcwWaveform w(sym, cfg);
  const double tau = scen.round_trip_delay();
  EXPECT_NEAR(tau, 2.0 * 100.0 / kLightSpeed, 1e-18);
  for (std::size_t i = 0; i < rx.samples.size(); ++i) {
    const double t = static_cast<double>(i) / fs;
    if (t < tau) {
      EXPECT_EQ(rx.samples[i], Complex(0.0, 0.0));
    } else {
      EXPECT_LT(std::abs(rx.samples[i] - w.value(t - tau)), 1e-12);
    }
  }
}

TEST(RadarReturn, EchoBeyondWindowRejected) {
  const QamFmcwConfig cfg = table1();
  std::uint64_t st = 4;
  const SymbolStream sym = random_qam_stream(8, 16, st);
  ChannelScenario scen;
  scen.distance = kLightSpeed * cfg.carrier.Tp / 2.0 * 1.01;  // tau > Tp
  EXPECT_THROW(radar_return(sym, cfg, scen, 40e6), std::domain_error);
}

TEST(CommReceived, IdentityAndGainScaling) {
  const QamFmcwConfig cfg = table1();
  std::uint64_t st = 5;
  const SymbolStream sym = random_qam_stream(8, 16, st);
  ChannelScenario scen;
  scen.distance = 250.0;  // removed by perfect sync
  const ComplexSignal tx = modulate_qam_fmcw(sym, cfg, 40e6);
  const ComplexSignal rx = comm_received(sym, cfg, scen, 40e6);
  for (std::size_t i = 0; i < tx.samples.size(); ++i) EXPECT_EQ(rx.samples[i], tx.samples[i]);

  scen.gain = 4.0;
  const ComplexSignal rx4 = comm_received(sym, cfg, scen, 40e6);
  for (std::size_t i = 0; i < tx.samples.size(); ++i)
    EXPECT_NEAR(std::abs(rx4.samples[i]), 2.0 * std::abs(tx.samples[i]), 1e-12);
}

TEST(Channel, NoiseVarianceWithinOnePercent) {
  // one long pulse gives 1e6 noise samples; subtract the known clean signal
  QamFmcwConfig cfg{4, 1, FmcwCarrier{1e9, 0.0, 25e-3, 0.0}};
  SymbolStream sym;
  sym.scheme = Scheme::QamFmcw;
  sym.symbols = {0};
  sym.points = {qam_point(0, 4)};
  const double fs = 40e6;
  const double sigma2 = 0.7;
  ChannelScenario scen;
  scen.noise_psd = sigma2 / fs;
  scen.seed = 99;
  const ComplexSignal rx = comm_received(sym, cfg, scen, fs);
  const ComplexSignal tx = modulate_qam_fmcw(sym, cfg, fs);
  ASSERT_EQ(rx.samples.size(), 1000000u);
  double acc = 0.0;
  for (std::size_t i = 0; i < rx.samples.size(); ++i) acc += std::norm(rx.samples[i] - tx.samples[i]);
  const double measured = acc / static_cast<double>(rx.samples.size());
  EXPECT_NEAR(measured, sigma2, 0.01 * sigma2);
}

TEST(Channel, NoiseWhiteness) {
  QamFmcwConfig cfg{4, 1, FmcwCarrier{1e9, 0.0, 2.5e-3, 0.0}};
  SymbolStream sym;
  sym.scheme = Scheme::QamFmcw;
  sym.symbols = {0};
  sym.points = {qam_point(0, 4)};
  const double fs = 40e6;
  ChannelScenario scen;
  scen.noise_psd = 1.0 / fs;
  scen.seed = 7;
  const ComplexSignal rx = comm_received(sym, cfg, scen, fs);
  const ComplexSignal tx = modulate_qam_fmcw(sym, cfg, fs);
  std::vector<Complex> noise(rx.samples.size());
  double p0 = 0.0;
  for (std::size_t i = 0; i < rx.samples.size(); ++i) {
    noise[i] = rx.samples[i] - tx.samples[i];
    p0 += std::norm(noise[i]);
  }
  const std::size_t n = noise.size();
  const double bound = 5.0 / std::sqrt(static_cast<double>(n));
  for (std::size_t lag = 1; lag <= 5; ++lag) {
    Complex acc(0.0, 0.0);
    for (std::size_t i = 0; i + lag < n; ++i) acc += noise[i] * std::conj(noise[i + lag]);
    EXPECT_LT(std::abs(acc) / p0, bound) << "lag " << lag;
  }
}

TEST(Channel, DeterministicGivenSeed) {
  const QamFmcwConfig cfg = table1();
  std::uint64_t st = 6;
  const SymbolStream sym = random_qam_stream(8, 16, st);
  ChannelScenario scen;
  scen.distance = 100.0;
  scen.noise_psd = 1.0 / 40e6;
  scen.seed = 1234;
  const ComplexSignal a = radar_return(sym, cfg, scen, 40e6);
  const ComplexSignal b = radar_return(sym, cfg, scen, 40e6);
  for (std::size_t i = 0; i < a.samples.size(); ++i) EXPECT_EQ(a.samples[i], b.samples[i]);
  scen.seed = 1235;
  const ComplexSignal c = radar_return(sym, cfg, scen, 40e6);
  bool any_diff = false;
  for (std::size_t i = 0; i < a.samples.size(); ++i) any_diff |= (a.samples[i] != c.samples[i]);
  EXPECT_TRUE(any_diff);
}

TEST(Channel, SnrWithinTenthDecibel) {
  QamFmcwConfig cfg{4, 1, FmcwCarrier{1e9, 0.0, 2.5e-3, 0.0}};  // 1e5 samples at 40 Msps
  SymbolStream sym;
  sym.scheme = Scheme::QamFmcw;
  sym.symbols = {0};
  sym.points = {qam_point(0, 4)};
  const double fs = 40e6;
  const double sigma2 = 0.25;
  ChannelScenario scen;
  scen.gain = 2.0;
  scen.noise_psd = sigma2 / fs;
  scen.seed = 31;
  const ComplexSignal rx = comm_received(sym, cfg, scen, fs);
  double mp = 0.0;
  for (const Complex& v : rx.samples) mp += std::norm(v);
  mp /= static_cast<double>(rx.samples.size());
  const double snr_meas = 10.0 * std::log10((mp - sigma2) / sigma2);
  const double snr_cfg = 10.0 * std::log10(scen.gain / sigma2);
  EXPECT_NEAR(snr_meas, snr_cfg, 0.1);
}

TEST(Channel, ScenarioValidation) {
  ChannelScenario bad;
  bad.distance = -1.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
  bad.distance = 1.0;
  bad.gain = 0.0;
  EXPECT_THROW(bad.validate(), std::invalid_argument);
}
