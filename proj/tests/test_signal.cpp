#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>

#include "doctest.h"
#include "oracles.hpp"
#include "qss/clarke.hpp"
#include "qss/signal.hpp"

using namespace qss;

namespace {

std::filesystem::path temp_file(const char* name) {
  auto dir = std::filesystem::temp_directory_path() / "qss_signal_tests";
  std::filesystem::create_directories(dir);
  return dir / name;
}

}  // namespace

TEST_CASE("balanced generation: sample count and zero-phase value") {
  SignalSpec spec;
  const auto w = generate(spec, 5000.0);
  CHECK(w.size() == 10000);
  CHECK(w.phases[0][0] == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(w.sample_rate_hz == 5000.0);
}

TEST_CASE("balanced set sums to zero at every sample") {
  SignalSpec spec;
  const auto w = generate(spec, 5000.0);
  double worst = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i)
    worst = std::max(worst,
                     std::abs(w.phases[0][i] + w.phases[1][i] + w.phases[2][i]));
  CHECK(worst < 1e-9);
}

TEST_CASE("chirp reaches f0 + ramp*t and keeps phase continuous") {
  SignalSpec spec;
  spec.kind = SignalKind::kChirp;
  spec.ramp_hz_per_s = -1.0;
  const auto w = generate(spec, 5000.0);
  const auto sv = clarke(w);

  // Instantaneous frequency from the alpha-beta angle increment.
  auto angle = [&](std::size_t i) { return std::atan2(sv.v[i].y, sv.v[i].x); };
  auto wrap = [](double a) {
    while (a > std::numbers::pi) a -= kTwoPi;
    while (a < -std::numbers::pi) a += kTwoPi;
    return a;
  };
  const std::size_t last = w.size() - 1;
  const double f_end =
      wrap(angle(last) - angle(last - 1)) * w.sample_rate_hz / kTwoPi;
  const double t_mid = (w.time(last) + w.time(last - 1)) / 2.0;
  CHECK(f_end == doctest::Approx(50.0 - 1.0 * t_mid).epsilon(1e-6));
  CHECK(f_end == doctest::Approx(48.0).epsilon(2e-4));

  double worst = 0.0;
  for (std::size_t i = 1; i < w.size(); ++i)
    worst = std::max(worst, std::abs(wrap(angle(i) - angle(i - 1))));
  CHECK(worst < std::numbers::pi);
}

TEST_CASE("amplitude step scales the envelope from the step time onward") {
  SignalSpec spec;
  spec.kind = SignalKind::kAmplitudeStep;
  spec.step_ratio = 1.2;
  spec.step_time_s = 1.0;
  const auto w = generate(spec, 5000.0);
  double before = 0.0, after = 0.0;
  for (std::size_t i = 0; i < w.size(); ++i) {
    double& envelope = w.time(i) < 1.0 ? before : after;
    envelope = std::max(envelope, std::abs(w.phases[0][i]));
  }
  CHECK(before == doctest::Approx(1.0).epsilon(1e-9));
  CHECK(after == doctest::Approx(1.2).epsilon(1e-9));
}

TEST_CASE("generator rejects invalid parameters") {
  SignalSpec spec;
  CHECK_THROWS_AS(generate(spec, 900.0), std::invalid_argument);  // below 20x floor
  spec.base_frequency_hz = std::numeric_limits<double>::quiet_NaN();
  CHECK_THROWS_AS(generate(spec, 5000.0), std::invalid_argument);
  spec = SignalSpec{};
  spec.duration_s = -1.0;
  CHECK_THROWS_AS(generate(spec, 5000.0), std::invalid_argument);
  spec = SignalSpec{};
  spec.amplitude_pu = 0.0;
  CHECK_THROWS_AS(generate(spec, 5000.0), std::invalid_argument);
}

TEST_CASE("seeded noise is reproducible and seed-sensitive") {
  SignalSpec spec;
  spec.kind = SignalKind::kPolluted;
  spec.noise_stddev_pu = 0.01;
  spec.seed = 7;
  const auto a = generate(spec, 5000.0);
  const auto b = generate(spec, 5000.0);
  CHECK(a.phases[0] == b.phases[0]);
  spec.seed = 8;
  const auto c = generate(spec, 5000.0);
  CHECK(a.phases[0] != c.phases[0]);
}

TEST_CASE("waveform CSV round trip is exact") {
  SignalSpec spec;
  spec.kind = SignalKind::kChirp;
  spec.ramp_hz_per_s = -1.0;
  spec.duration_s = 0.5;
  const auto w = generate(spec, 5000.0);
  const auto path = temp_file("roundtrip.csv");
  write_waveform_csv(w, path.string());
  const auto back = read_waveform_csv(path.string());
  REQUIRE(back.size() == w.size());
  CHECK(back.sample_rate_hz == doctest::Approx(w.sample_rate_hz).epsilon(1e-12));
  for (int p = 0; p < 3; ++p)
    for (std::size_t i = 0; i < w.size(); ++i) {
      REQUIRE(back.phases[p][i] == w.phases[p][i]);  // shortest-repr round trip
    }
}

TEST_CASE("csv reader accepts a minimal well-formed file") {
  const auto path = temp_file("tiny.csv");
  std::ofstream(path) << "time_s,va,vb,vc\n0,1,0,-1\n0.001,0.9,0.1,-1\n0.002,0.8,0.2,-1\n";
  const auto w = read_waveform_csv(path.string());
  CHECK(w.size() == 3);
  CHECK(w.sample_rate_hz == doctest::Approx(1000.0));
}

TEST_CASE("csv reader names the missing column") {
  const auto path = temp_file("missing.csv");
  std::ofstream(path) << "time_s,va,vb\n0,1,0\n";
  CHECK_THROWS_WITH_AS(read_waveform_csv(path.string()),
                       doctest::Contains("vc"), ParseError);
}

TEST_CASE("csv reader reports ragged rows with their line number") {
  const auto path = temp_file("ragged.csv");
  std::ofstream(path) << "time_s,va,vb,vc\n0,1,0,-1\n0.001,0.9,0.1\n";
  CHECK_THROWS_WITH_AS(read_waveform_csv(path.string()), doctest::Contains(":3:"),
                       ParseError);
}

TEST_CASE("csv reader rejects non-uniform or non-monotone timestamps") {
  const auto path = temp_file("jitter.csv");
  std::ofstream(path) << "time_s,va,vb,vc\n0,1,0,-1\n0.001,1,0,-1\n0.0025,1,0,-1\n";
  CHECK_THROWS_AS(read_waveform_csv(path.string()), ParseError);
  const auto path2 = temp_file("backwards.csv");
  std::ofstream(path2) << "time_s,va,vb,vc\n0,1,0,-1\n-0.001,1,0,-1\n";
  CHECK_THROWS_AS(read_waveform_csv(path2.string()), ParseError);
}

TEST_CASE("csv reader rejects non-numeric fields") {
  const auto path = temp_file("text.csv");
  std::ofstream(path) << "time_s,va,vb,vc\n0,1,oops,-1\n0.001,1,0,-1\n";
  CHECK_THROWS_WITH_AS(read_waveform_csv(path.string()), doctest::Contains("vb"),
                       ParseError);
}

TEST_CASE("missing file raises an io error") {
  CHECK_THROWS_AS(read_waveform_csv("/nonexistent/qss/file.csv"), IoError);
}

TEST_CASE("unit conversions are exact") {
  FrequencyTrace t = make_trace(5000.0, 0.0, 4, Unit::kRadPerSecond);
  t.values = {kTwoPi * 50.0, kTwoPi * 49.0, 0.0, kTwoPi * 51.0};
  const auto hz = to_hertz(t);
  CHECK(hz.values[0] == doctest::Approx(50.0).epsilon(1e-15));
  const auto pu = to_per_unit(hz, 50.0);
  CHECK(pu.values[1] == doctest::Approx(49.0 / 50.0).epsilon(1e-15));
  CHECK_THROWS_AS(to_hertz(hz), std::invalid_argument);
}

TEST_CASE("waveform invariants are enforced") {
  SampledWaveform w;
  w.sample_rate_hz = 5000.0;
  w.phases = {std::vector<double>{1.0, 1.0}, {0.0, 0.0}, {0.0}};  // ragged
  CHECK_THROWS_AS(w.validate(), std::invalid_argument);
  w.phases[2].push_back(0.0);
  CHECK_NOTHROW(w.validate());
  w.sample_rate_hz = 0.0;
  CHECK_THROWS_AS(w.validate(), std::invalid_argument);
}
