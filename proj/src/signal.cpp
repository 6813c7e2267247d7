#include "qss/signal.hpp"

#include <algorithm>
#include <cctype>
#include <charconv>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <random>
#include <sstream>
#include <string_view>

namespace qss {

namespace {

constexpr double kPhaseOffsets[3] = {0.0, -kTwoPi / 3.0, kTwoPi / 3.0};

// Minimum oversampling of the fundamental accepted by the generator.
constexpr double kMinSamplesPerCycle = 20.0;

// Transient-event distortion shape: phase-b sag depth and harmonic burst
// amplitudes, decaying with exp(-2 (t - t_event) / event_length), plus a
// half-sine excursion of the underlying frequency confined to the distorted
// interval (the network-frequency swing that accompanies the event).
constexpr double kEventSagDepth = 0.2;
constexpr Harmonic kEventBurst[] = {{2, 0.2}, {5, 0.1}};
constexpr double kEventDecayRate = 2.0;
constexpr double kEventFrequencyPulseHz = 4.0;

// Deterministic standard-normal sampler (Box-Muller over raw mt19937_64
// bits) so seeded outputs are reproducible across standard libraries.
class GaussianSampler {
 public:
  explicit GaussianSampler(std::uint64_t seed) : engine_(seed) {}

  double next() {
    if (have_cached_) {
      have_cached_ = false;
      return cached_;
    }
    const double u1 = uniform01();
    const double u2 = uniform01();
    const double r = std::sqrt(-2.0 * std::log(u1));
    cached_ = r * std::sin(kTwoPi * u2);
    have_cached_ = true;
    return r * std::cos(kTwoPi * u2);
  }

 private:
  double uniform01() {
    // 53-bit mantissa, offset half a ulp so the result is never 0 or 1.
    return (static_cast<double>(engine_() >> 11) + 0.5) * 0x1.0p-53;
  }

  std::mt19937_64 engine_;
  bool have_cached_ = false;
  double cached_ = 0.0;
};

void require_finite(double value, const char* name) {
  if (!std::isfinite(value))
    throw std::invalid_argument(std::string("signal spec: non-finite ") + name);
}

std::string format_double(double value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, end);
}

}  // namespace

void SampledWaveform::validate() const {
  if (sample_rate_hz <= 0.0 || !std::isfinite(sample_rate_hz))
    throw std::invalid_argument("waveform: sample_rate_hz must be positive");
  if (!std::isfinite(t0_s)) throw std::invalid_argument("waveform: non-finite t0_s");
  const std::size_t n = phases[0].size();
  if (n < 2) throw std::invalid_argument("waveform: need at least 2 samples");
  if (phases[1].size() != n || phases[2].size() != n)
    throw std::invalid_argument("waveform: phase lengths differ");
}

void SignalSpec::validate() const {
  require_finite(base_frequency_hz, "base_frequency_hz");
  require_finite(amplitude_pu, "amplitude_pu");
  require_finite(duration_s, "duration_s");
  require_finite(ramp_hz_per_s, "ramp_hz_per_s");
  require_finite(step_ratio, "step_ratio");
  require_finite(step_time_s, "step_time_s");
  require_finite(noise_stddev_pu, "noise_stddev_pu");
  require_finite(event_start_s, "event_start_s");
  require_finite(event_length_s, "event_length_s");
  for (const auto& h : harmonics) {
    require_finite(h.amplitude_pu, "harmonic amplitude");
    if (h.order < 1) throw std::invalid_argument("signal spec: harmonic order must be >= 1");
  }
  if (base_frequency_hz <= 0.0)
    throw std::invalid_argument("signal spec: base_frequency_hz must be positive");
  if (amplitude_pu <= 0.0)
    throw std::invalid_argument("signal spec: amplitude_pu must be positive");
  if (duration_s <= 0.0)
    throw std::invalid_argument("signal spec: duration_s must be positive");
  if (noise_stddev_pu < 0.0)
    throw std::invalid_argument("signal spec: noise_stddev_pu must be >= 0");
  if (kind == SignalKind::kTransientEvent && event_length_s <= 0.0)
    throw std::invalid_argument("signal spec: event_length_s must be positive");
}

SampledWaveform generate(const SignalSpec& spec, double sample_rate_hz) {
  spec.validate();
  if (!std::isfinite(sample_rate_hz) || sample_rate_hz <= 0.0)
    throw std::invalid_argument("generate: sample_rate_hz must be positive");
  if (sample_rate_hz < kMinSamplesPerCycle * spec.base_frequency_hz)
    throw std::invalid_argument("generate: sample rate below 20x the base frequency");

  const std::size_t n = static_cast<std::size_t>(std::llround(spec.duration_s * sample_rate_hz));
  if (n < 2) throw std::invalid_argument("generate: duration too short for the sample rate");

  SampledWaveform w;
  w.sample_rate_hz = sample_rate_hz;
  w.t0_s = 0.0;
  for (auto& p : w.phases) p.resize(n);

  const double f0 = spec.base_frequency_hz;
  const double v0 = spec.amplitude_pu;
  GaussianSampler noise(spec.seed);

  for (std::size_t i = 0; i < n; ++i) {
    const double t = static_cast<double>(i) / sample_rate_hz;

    // Fundamental phase.  The chirp ramp integrates from t = 0; a transient
    // event ramps from the event onset (frequency decline after a loss of
    // generation).
    double phase = kTwoPi * f0 * t;
    if (spec.kind == SignalKind::kChirp) {
      phase += kTwoPi * 0.5 * spec.ramp_hz_per_s * t * t;
    } else if (spec.kind == SignalKind::kTransientEvent && t >= spec.event_start_s) {
      const double dt_event = t - spec.event_start_s;
      phase += kTwoPi * 0.5 * spec.ramp_hz_per_s * dt_event * dt_event;
      // Integrated phase of the half-sine frequency pulse.
      const double len = spec.event_length_s;
      const double pulse_t = std::min(dt_event, len);
      phase += kTwoPi * kEventFrequencyPulseHz * len / std::numbers::pi *
               (1.0 - std::cos(std::numbers::pi * pulse_t / len));
    }

    double amp[3] = {v0, v0, v0};
    if (spec.kind == SignalKind::kAmplitudeStep && t >= spec.step_time_s)
      for (double& a : amp) a *= spec.step_ratio;

    double event_decay = 0.0;
    if (spec.kind == SignalKind::kTransientEvent && t >= spec.event_start_s &&
        t < spec.event_start_s + spec.event_length_s) {
      event_decay =
          std::exp(-kEventDecayRate * (t - spec.event_start_s) / spec.event_length_s);
      amp[1] *= 1.0 - kEventSagDepth * event_decay;
    }

    for (int k = 0; k < 3; ++k) {
      double v = amp[k] * std::cos(phase + kPhaseOffsets[k]);
      if (spec.kind == SignalKind::kPolluted) {
        for (const auto& h : spec.harmonics)
          v += h.amplitude_pu * v0 * std::cos(h.order * (phase + kPhaseOffsets[k]));
      }
      if (event_decay > 0.0) {
        for (const auto& h : kEventBurst)
          v += h.amplitude_pu * v0 * event_decay *
               std::cos(h.order * (phase + kPhaseOffsets[k]));
      }
      if (spec.noise_stddev_pu > 0.0) v += spec.noise_stddev_pu * noise.next();
      w.phases[k][i] = v;
    }
  }
  return w;
}

namespace {

const char* const kCsvColumns[4] = {"time_s", "va", "vb", "vc"};

std::string_view trim(std::string_view s) {
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.front()))) s.remove_prefix(1);
  while (!s.empty() && std::isspace(static_cast<unsigned char>(s.back()))) s.remove_suffix(1);
  return s;
}

std::vector<std::string_view> split_fields(std::string_view line) {
  std::vector<std::string_view> out;
  std::size_t start = 0;
  while (true) {
    const std::size_t comma = line.find(',', start);
    if (comma == std::string_view::npos) {
      out.push_back(trim(line.substr(start)));
      break;
    }
    out.push_back(trim(line.substr(start, comma - start)));
    start = comma + 1;
  }
  return out;
}

double parse_field(std::string_view field, const std::string& path, std::size_t line_no,
                   const char* column) {
  double value = 0.0;
  const char* first = field.data();
  const char* last = field.data() + field.size();
  auto [ptr, ec] = std::from_chars(first, last, value);
  if (ec != std::errc() || ptr != last || !std::isfinite(value))
    throw ParseError(path + ":" + std::to_string(line_no) + ": bad value for column '" +
                     column + "': '" + std::string(field) + "'");
  return value;
}

}  // namespace

SampledWaveform read_waveform_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot open '" + path + "' for reading");

  std::string line;
  if (!std::getline(in, line)) throw ParseError(path + ":1: empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();

  const auto header = split_fields(line);
  for (int c = 0; c < 4; ++c) {
    if (static_cast<std::size_t>(c) >= header.size() || header[c] != kCsvColumns[c])
      throw ParseError(path + ":1: header missing column '" + kCsvColumns[c] +
                       "' (expected 'time_s,va,vb,vc', got '" + line + "')");
  }
  if (header.size() != 4)
    throw ParseError(path + ":1: expected 4 columns, got " + std::to_string(header.size()));

  std::vector<double> times;
  SampledWaveform w;
  std::size_t line_no = 1;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    const auto fields = split_fields(line);
    if (fields.size() != 4)
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected 4 fields, got " +
                       std::to_string(fields.size()));
    times.push_back(parse_field(fields[0], path, line_no, kCsvColumns[0]));
    for (int k = 0; k < 3; ++k)
      w.phases[k].push_back(parse_field(fields[k + 1], path, line_no, kCsvColumns[k + 1]));
  }

  const std::size_t n = times.size();
  if (n < 2) throw ParseError(path + ": fewer than 2 samples");

  const double span = times[n - 1] - times[0];
  if (span <= 0.0) throw ParseError(path + ": timestamps do not increase");
  const double dt = span / static_cast<double>(n - 1);
  for (std::size_t i = 0; i + 1 < n; ++i) {
    const double step = times[i + 1] - times[i];
    if (step <= 0.0)
      throw ParseError(path + ":" + std::to_string(i + 3) +
                       ": timestamps not monotonically increasing");
    if (std::abs(step - dt) > 1e-6 * dt)
      throw ParseError(path + ":" + std::to_string(i + 3) +
                       ": non-uniform timestamp spacing (" + format_double(step) + " vs " +
                       format_double(dt) + ")");
  }

  w.sample_rate_hz = 1.0 / dt;
  w.t0_s = times[0];
  w.validate();
  return w;
}

void write_waveform_csv(const SampledWaveform& waveform, const std::string& path) {
  waveform.validate();
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "time_s,va,vb,vc\n";
  const std::size_t n = waveform.size();
  for (std::size_t i = 0; i < n; ++i) {
    out << format_double(waveform.time(i)) << ',' << format_double(waveform.phases[0][i])
        << ',' << format_double(waveform.phases[1][i]) << ','
        << format_double(waveform.phases[2][i]) << '\n';
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

FrequencyTrace to_hertz(const FrequencyTrace& trace) {
  if (trace.unit != Unit::kRadPerSecond)
    throw std::invalid_argument("to_hertz: input must be rad/s");
  FrequencyTrace out = trace;
  out.unit = Unit::kHertz;
  for (double& v : out.values) v /= kTwoPi;
  return out;
}

FrequencyTrace to_per_unit(const FrequencyTrace& trace, double base_frequency_hz) {
  if (base_frequency_hz <= 0.0)
    throw std::invalid_argument("to_per_unit: base frequency must be positive");
  if (trace.unit != Unit::kHertz)
    throw std::invalid_argument("to_per_unit: input must be Hz");
  FrequencyTrace out = trace;
  out.unit = Unit::kPerUnit;
  for (double& v : out.values) v /= base_frequency_hz;
  return out;
}

}  // namespace qss
