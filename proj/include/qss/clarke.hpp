#ifndef QSS_CLARKE_HPP
#define QSS_CLARKE_HPP

#include <vector>

#include "qss/signal.hpp"
#include "qss/types.hpp"

namespace qss {

/// Voltage space vector in the stationary alpha/beta/gamma frame plus the
/// squared magnitude series used by the circulation metric.
struct SpaceVectorTrace {
  double sample_rate_hz = 0.0;
  double t0_s = 0.0;
  std::vector<Vec3> v;
  std::vector<double> mag2;  // |v|^2, pu^2

  std::size_t size() const { return v.size(); }
  double time(std::size_t i) const { return t0_s + static_cast<double>(i) / sample_rate_hz; }
};

/// Amplitude-invariant Clarke transform:
///   alpha = (2 va - vb - vc) / 3,  beta = (vb - vc) / sqrt(3),
///   gamma = (va + vb + vc) / 3.
/// A balanced set of peak V traces a circle of radius V in the alpha-beta
/// plane, so pu thresholds on |v|^2 carry over from the phase normalization.
SpaceVectorTrace clarke(const SampledWaveform& waveform);

}  // namespace qss

#endif  // QSS_CLARKE_HPP
