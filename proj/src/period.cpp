#include "qss/period.hpp"

#include <cmath>

namespace qss {

PeriodTrace detect_period(const FrequencyTrace& omega, double lookback_s) {
  if (omega.unit != Unit::kRadPerSecond)
    throw std::invalid_argument("detect_period: omega must be in rad/s");
  if (!(lookback_s > 0.0))
    throw std::invalid_argument("detect_period: lookback must be positive");

  const std::size_t n = omega.size();
  const double fs = omega.sample_rate_hz;
  const double dt = 1.0 / fs;

  PeriodTrace out;
  out.sample_rate_hz = fs;
  out.t0_s = omega.t0_s;
  out.period_s.assign(n, 0.0);
  out.valid.assign(n, 0);
  if (n < 2) return out;

  // Trapezoidal prefix of the accumulated curvature.  omega_v is nonnegative,
  // so the prefix is nondecreasing and the closure crossing can be tracked
  // with a single advancing pointer.
  std::vector<double> curv(n, 0.0);
  // Most recent invalid sample at or before i; any window touching it is out.
  std::vector<std::ptrdiff_t> barrier(n, -1);
  if (!omega.valid[0]) barrier[0] = 0;
  for (std::size_t i = 1; i < n; ++i) {
    curv[i] = curv[i - 1] + 0.5 * dt * (omega.values[i - 1] + omega.values[i]);
    barrier[i] = omega.valid[i] ? barrier[i - 1] : static_cast<std::ptrdiff_t>(i);
  }

  std::size_t j = 0;
  for (std::size_t i = 1; i < n; ++i) {
    const double target = curv[i] - kTwoPi;
    if (target < curv[0]) continue;  // closure not reachable yet
    while (j + 1 < i && curv[j + 1] <= target) ++j;
    // curv[j] <= target < curv[j+1]: linear interpolation of the accumulated
    // curvature locates the sub-sample crossing.
    const double denom = curv[j + 1] - curv[j];
    const double frac = denom > 0.0 ? (target - curv[j]) / denom : 1.0;
    const double u = static_cast<double>(j) + frac;
    const double period = (static_cast<double>(i) - u) * dt;
    if (period > lookback_s) continue;
    if (barrier[i] >= static_cast<std::ptrdiff_t>(j)) continue;
    if (!omega.valid[i]) continue;
    out.period_s[i] = period;
    out.valid[i] = 1;
  }
  return out;
}

FrequencyTrace omega_qss(const FrequencyTrace& omega, const PeriodTrace& periods) {
  if (omega.size() != periods.size())
    throw std::invalid_argument("omega_qss: misaligned traces");
  FrequencyTrace out =
      make_trace(omega.sample_rate_hz, omega.t0_s, omega.size(), Unit::kRadPerSecond);
  for (std::size_t i = 0; i < out.size(); ++i) {
    if (periods.valid[i]) {
      out.values[i] = kTwoPi / periods.period_s[i];
    } else {
      out.values[i] = 0.0;
      out.valid[i] = 0;
    }
  }
  return out;
}

}  // namespace qss
