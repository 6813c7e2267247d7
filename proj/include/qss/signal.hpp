#ifndef QSS_SIGNAL_HPP
#define QSS_SIGNAL_HPP

#include <array>
#include <cstdint>
#include <string>
#include <vector>

#include "qss/types.hpp"

namespace qss {

/// Three-phase voltage record, uniformly sampled.  Voltages are pu on the
/// nominal peak phase voltage; sample i lives at t0_s + i / sample_rate_hz.
struct SampledWaveform {
  double sample_rate_hz = 0.0;
  double t0_s = 0.0;
  std::array<std::vector<double>, 3> phases;  // a, b, c

  std::size_t size() const { return phases[0].size(); }
  double time(std::size_t i) const { return t0_s + static_cast<double>(i) / sample_rate_hz; }

  /// Checks the container invariants (equal lengths >= 2, positive rate).
  void validate() const;
};

enum class SignalKind {
  kBalanced,
  kChirp,
  kAmplitudeStep,
  kPolluted,
  kTransientEvent,
};

struct Harmonic {
  int order = 0;
  double amplitude_pu = 0.0;  // relative to the fundamental amplitude
};

/// Parameters for the synthetic waveform generator.  Kind-specific fields are
/// ignored by kinds that do not use them.
struct SignalSpec {
  SignalKind kind = SignalKind::kBalanced;
  double base_frequency_hz = 50.0;
  double amplitude_pu = 1.0;
  double duration_s = 2.0;

  // chirp / transient_event: instantaneous frequency ramp, Hz/s.  For a chirp
  // the ramp starts at t = 0; for a transient event it starts at event onset.
  double ramp_hz_per_s = 0.0;

  // amplitude_step
  double step_ratio = 1.2;
  double step_time_s = 1.0;

  // polluted
  std::vector<Harmonic> harmonics;
  double noise_stddev_pu = 0.0;  // applied to any kind when > 0
  std::uint64_t seed = 0;

  // transient_event: a decaying distorted interval (20 % phase-b sag plus a
  // 2nd/5th harmonic burst) superimposed on the balanced base
  double event_start_s = 1.0;
  double event_length_s = 0.02;

  void validate() const;
};

/// Builds the three-phase waveform described by `spec`.  Phase offsets are
/// 0, -2pi/3, +2pi/3; the sample count is round(duration * fs) with t0 = 0.
/// Requires sample_rate_hz >= 20 * base_frequency_hz.
SampledWaveform generate(const SignalSpec& spec, double sample_rate_hz);

/// CSV I/O.  Format: header `time_s,va,vb,vc`, one row per sample, '.' decimal
/// point, LF line endings.  Reading validates a uniform time base (relative
/// jitter < 1e-6) and reports malformed content with its line number.
SampledWaveform read_waveform_csv(const std::string& path);
void write_waveform_csv(const SampledWaveform& waveform, const std::string& path);

}  // namespace qss

#endif  // QSS_SIGNAL_HPP
