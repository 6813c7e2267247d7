#ifndef QSS_PERIOD_HPP
#define QSS_PERIOD_HPP

#include <cstdint>
#include <vector>

#include "qss/types.hpp"

namespace qss {

/// Per-sample detected period.  Where valid, the backward trapezoidal
/// integral of the rotation rate over period_s[i] equals 2*pi.
struct PeriodTrace {
  double sample_rate_hz = 0.0;
  double t0_s = 0.0;
  std::vector<double> period_s;
  std::vector<std::uint8_t> valid;

  std::size_t size() const { return period_s.size(); }
};

/// Detects the signal period at every sample as the smallest backward span T
/// with integral(omega, t-T, t) = 2*pi.  The integral is accumulated with the
/// trapezoidal rule and the crossing is located by linear interpolation of the
/// accumulated curvature, so the sub-sample quantization of T is removed.
///
/// A sample is invalid when the integral over the lookback horizon stays
/// below 2*pi or when any omega sample inside the integration window is
/// invalid.  omega must be in rad/s; lookback_s >= 2 / base frequency.
PeriodTrace detect_period(const FrequencyTrace& omega, double lookback_s);

/// Quasi-steady-state frequency: the period average of the rotation rate,
/// which is exactly 2*pi / T at the detected period.  Invalid samples inherit
/// period invalidity.  Output in rad/s.
FrequencyTrace omega_qss(const FrequencyTrace& omega, const PeriodTrace& periods);

}  // namespace qss

#endif  // QSS_PERIOD_HPP
