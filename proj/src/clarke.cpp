#include "qss/clarke.hpp"

#include <cmath>

namespace qss {

SpaceVectorTrace clarke(const SampledWaveform& waveform) {
  waveform.validate();
  const std::size_t n = waveform.size();
  const double inv_sqrt3 = 1.0 / std::sqrt(3.0);

  SpaceVectorTrace trace;
  trace.sample_rate_hz = waveform.sample_rate_hz;
  trace.t0_s = waveform.t0_s;
  trace.v.resize(n);
  trace.mag2.resize(n);

  const auto& a = waveform.phases[0];
  const auto& b = waveform.phases[1];
  const auto& c = waveform.phases[2];
  for (std::size_t i = 0; i < n; ++i) {
    Vec3 v;
    v.x = (2.0 * a[i] - b[i] - c[i]) / 3.0;
    v.y = (b[i] - c[i]) * inv_sqrt3;
    v.z = (a[i] + b[i] + c[i]) / 3.0;
    trace.v[i] = v;
    trace.mag2[i] = norm2(v);
  }
  return trace;
}

}  // namespace qss
