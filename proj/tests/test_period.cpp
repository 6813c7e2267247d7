#include <cmath>

#include "doctest.h"
#include "oracles.hpp"
#include "qss/clarke.hpp"
#include "qss/geometric.hpp"
#include "qss/period.hpp"
#include "qss/signal.hpp"

using namespace qss;

namespace {

FrequencyTrace constant_omega(double value_rad_s, double fs, std::size_t n) {
  FrequencyTrace t = make_trace(fs, 0.0, n, Unit::kRadPerSecond);
  for (auto& v : t.values) v = value_rad_s;
  return t;
}

// Independent re-evaluation of the backward curvature integral over the
// detected period: trapezoid over whole segments plus a linearly
// interpolated partial segment at the window tail.
double backward_integral(const FrequencyTrace& omega, std::size_t i, double period_s) {
  const double fs = omega.sample_rate_hz;
  const double u = static_cast<double>(i) - period_s * fs;
  const auto k = static_cast<std::size_t>(u);
  const double frac = u - static_cast<double>(k);
  double acc = 0.0;
  for (std::size_t j = k + 1; j < i; ++j)
    acc += 0.5 * (omega.values[j] + omega.values[j + 1]) / fs;
  acc += (1.0 - frac) * 0.5 * (omega.values[k] + omega.values[k + 1]) / fs;
  return acc;
}

}  // namespace

TEST_CASE("constant 50 Hz rotation detects a 20 ms period") {
  const auto omega = constant_omega(kTwoPi * 50.0, 5000.0, 1000);
  const auto periods = detect_period(omega, 0.1);
  for (std::size_t i = 0; i < periods.size(); ++i) {
    if (static_cast<double>(i) / 5000.0 < 0.02) {
      CHECK_FALSE(periods.valid[i]);
    } else if (static_cast<double>(i) / 5000.0 > 0.02 + 1e-9) {
      // the sample sitting exactly on one period is fp-borderline
      REQUIRE(periods.valid[i]);
      CHECK(std::abs(periods.period_s[i] - 0.020) < 1e-6);
    }
  }
}

TEST_CASE("constant 60 Hz rotation detects 1/60 s") {
  const auto omega = constant_omega(kTwoPi * 60.0, 5000.0, 1000);
  const auto periods = detect_period(omega, 0.1);
  REQUIRE(periods.valid[500]);
  CHECK(std::abs(periods.period_s[500] - 1.0 / 60.0) < 1e-6);
}

TEST_CASE("chirp periods match a dense-grid root finder") {
  SignalSpec spec;
  spec.kind = SignalKind::kChirp;
  spec.ramp_hz_per_s = -1.0;
  const auto omega = omega_v(clarke(generate(spec, 5000.0)));
  const auto periods = detect_period(omega, 0.1);
  const auto analytic = [](double t) { return kTwoPi * (50.0 - 1.0 * t); };
  for (std::size_t i = 200; i < periods.size(); i += 499) {
    REQUIRE(periods.valid[i]);
    const double t = static_cast<double>(i) / 5000.0;
    const double expected = oracles::dense_grid_period(analytic, t, 0.1, 1e-5);
    CHECK(std::abs(periods.period_s[i] - expected) < 1e-5);
  }
}

TEST_CASE("closure: the backward integral over the detected period is 2*pi") {
  for (SignalKind kind : {SignalKind::kBalanced, SignalKind::kChirp,
                          SignalKind::kTransientEvent, SignalKind::kAmplitudeStep}) {
    SignalSpec spec;
    spec.kind = kind;
    spec.ramp_hz_per_s = kind == SignalKind::kChirp ? -1.0 : 0.0;
    spec.duration_s = 1.5;
    const auto omega = omega_v(clarke(generate(spec, 5000.0)));
    const auto periods = detect_period(omega, 0.1);
    double worst = 0.0;
    for (std::size_t i = 0; i < periods.size(); i += 13) {
      if (!periods.valid[i]) continue;
      worst = std::max(worst,
                       std::abs(backward_integral(omega, i, periods.period_s[i]) - kTwoPi));
    }
    CHECK(worst < 1e-6);
  }
}

TEST_CASE("omega_qss equals 2*pi over the detected period and tracks 50 Hz") {
  SignalSpec spec;
  const auto omega = omega_v(clarke(generate(spec, 5000.0)));
  const auto periods = detect_period(omega, 0.1);
  const auto qss = omega_qss(omega, periods);
  for (std::size_t i = 0; i < qss.size(); i += 11) {
    CHECK(qss.valid[i] == periods.valid[i]);
    if (!qss.valid[i]) continue;
    CHECK(qss.values[i] == kTwoPi / periods.period_s[i]);
    CHECK(std::abs(qss.values[i] - kTwoPi * 50.0) < 1e-3);
  }
}

TEST_CASE("first valid sample arrives no earlier than one nominal period") {
  SignalSpec spec;
  spec.duration_s = 0.5;
  const auto omega = omega_v(clarke(generate(spec, 5000.0)));
  const auto periods = detect_period(omega, 0.1);
  std::size_t first = periods.size();
  for (std::size_t i = 0; i < periods.size(); ++i)
    if (periods.valid[i]) {
      first = i;
      break;
    }
  REQUIRE(first < periods.size());
  CHECK(static_cast<double>(first) / 5000.0 >= 0.02 - 1e-12);
}

TEST_CASE("harmonic pollution barely moves omega_qss while omega_v ripples") {
  SignalSpec spec;
  spec.kind = SignalKind::kPolluted;
  spec.harmonics = {{5, 0.05}};
  const auto omega = omega_v(clarke(generate(spec, 5000.0)));
  const auto qss = omega_qss(omega, detect_period(omega, 0.1));
  std::vector<double> raw, averaged;
  for (std::size_t i = 2500; i < 10000; ++i) {
    if (!omega.valid[i] || !qss.valid[i]) continue;
    raw.push_back(omega.values[i]);
    averaged.push_back(qss.values[i]);
  }
  const double ratio = oracles::stddev(averaged) / oracles::stddev(raw);
  MESSAGE("ripple ratio std(omega_qss)/std(omega_v) = ", ratio);
  CHECK(ratio < 0.5);
}

TEST_CASE("chirp omega_qss lags the instantaneous frequency by half a period") {
  SignalSpec spec;
  spec.kind = SignalKind::kChirp;
  spec.ramp_hz_per_s = -1.0;
  const auto omega = omega_v(clarke(generate(spec, 5000.0)));
  const auto periods = detect_period(omega, 0.1);
  const auto qss = omega_qss(omega, periods);
  double worst = 0.0;
  for (std::size_t i = 150; i < qss.size(); i += 37) {
    if (!qss.valid[i]) continue;
    const double t = static_cast<double>(i) / 5000.0;
    const double midpoint = kTwoPi * (50.0 - (t - periods.period_s[i] / 2.0));
    worst = std::max(worst, std::abs(qss.values[i] - midpoint));
  }
  CHECK(worst < kTwoPi * 0.01);
}

TEST_CASE("periods go invalid when the lookback cannot close the loop") {
  // 5 Hz rotation cannot accumulate 2*pi inside a 0.1 s lookback.
  const auto omega = constant_omega(kTwoPi * 5.0, 5000.0, 2000);
  const auto periods = detect_period(omega, 0.1);
  for (std::size_t i = 0; i < periods.size(); i += 50) CHECK_FALSE(periods.valid[i]);
}

TEST_CASE("invalid omega samples poison the windows that contain them") {
  auto omega = constant_omega(kTwoPi * 50.0, 5000.0, 1500);
  omega.valid[700] = 0;
  const auto periods = detect_period(omega, 0.1);
  CHECK(periods.valid[600]);
  for (std::size_t i = 700; i <= 800; ++i) CHECK_FALSE(periods.valid[i]);
  CHECK(periods.valid[810]);
}

TEST_CASE("detect_period validates its inputs") {
  auto omega = constant_omega(kTwoPi * 50.0, 5000.0, 100);
  CHECK_THROWS_AS(detect_period(omega, 0.0), std::invalid_argument);
  omega.unit = Unit::kHertz;
  CHECK_THROWS_AS(detect_period(omega, 0.1), std::invalid_argument);
}
