#include "qss/geometric.hpp"

#include <cmath>

namespace qss {

namespace {

// Five-point one-sided first-derivative stencils, exact through degree 4.
// Offsets are from the evaluation point into the trace.
Vec3 stencil5(const std::vector<Vec3>& v, std::size_t base, const double (&c)[5],
              double inv_12h) {
  Vec3 acc{0.0, 0.0, 0.0};
  for (int k = 0; k < 5; ++k) acc = acc + c[k] * v[base + static_cast<std::size_t>(k)];
  return inv_12h * acc;
}

}  // namespace

std::vector<Vec3> derivative(const SpaceVectorTrace& trace) {
  const std::size_t n = trace.size();
  if (n < 3) throw std::invalid_argument("derivative: need at least 3 samples");
  const double fs = trace.sample_rate_hz;
  std::vector<Vec3> d(n);

  if (n < 5) {
    // Three-point fallback for very short traces (2nd order).
    const double half_fs = 0.5 * fs;
    d[0] = half_fs * (-3.0 * trace.v[0] + 4.0 * trace.v[1] - 1.0 * trace.v[2]);
    for (std::size_t i = 1; i + 1 < n; ++i)
      d[i] = half_fs * (trace.v[i + 1] - trace.v[i - 1]);
    d[n - 1] =
        half_fs * (3.0 * trace.v[n - 1] - 4.0 * trace.v[n - 2] + 1.0 * trace.v[n - 3]);
    return d;
  }

  const double inv_12h = fs / 12.0;
  static constexpr double kEdge0[5] = {-25.0, 48.0, -36.0, 16.0, -3.0};
  static constexpr double kEdge1[5] = {-3.0, -10.0, 18.0, -6.0, 1.0};

  d[0] = stencil5(trace.v, 0, kEdge0, inv_12h);
  d[1] = stencil5(trace.v, 0, kEdge1, inv_12h);
  for (std::size_t i = 2; i + 2 < n; ++i) {
    const Vec3 acc = (trace.v[i - 2] - trace.v[i + 2]) + 8.0 * (trace.v[i + 1] - trace.v[i - 1]);
    d[i] = inv_12h * acc;
  }
  static constexpr double kEdgeM1[5] = {-1.0, 6.0, -18.0, 10.0, 3.0};
  static constexpr double kEdgeM0[5] = {3.0, -16.0, 36.0, -48.0, 25.0};
  d[n - 2] = stencil5(trace.v, n - 5, kEdgeM1, inv_12h);
  d[n - 1] = stencil5(trace.v, n - 5, kEdgeM0, inv_12h);
  return d;
}

namespace {

FrequencyTrace frequency_quotient(const SpaceVectorTrace& trace, double floor_pu2,
                                  bool rotation) {
  const std::vector<Vec3> d = derivative(trace);
  FrequencyTrace out =
      make_trace(trace.sample_rate_hz, trace.t0_s, trace.size(), Unit::kRadPerSecond);
  for (std::size_t i = 0; i < trace.size(); ++i) {
    const double m2 = trace.mag2[i];
    if (!(m2 >= floor_pu2)) {
      out.values[i] = 0.0;
      out.valid[i] = 0;
      continue;
    }
    out.values[i] =
        (rotation ? norm(cross(trace.v[i], d[i])) : std::abs(dot(trace.v[i], d[i]))) / m2;
  }
  return out;
}

}  // namespace

FrequencyTrace omega_v(const SpaceVectorTrace& trace, double magnitude_floor_pu2) {
  return frequency_quotient(trace, magnitude_floor_pu2, /*rotation=*/true);
}

FrequencyTrace rho_v(const SpaceVectorTrace& trace, double magnitude_floor_pu2) {
  return frequency_quotient(trace, magnitude_floor_pu2, /*rotation=*/false);
}

ButterworthLowpass::ButterworthLowpass(double cutoff_hz, double sample_rate_hz) {
  if (!(cutoff_hz > 0.0) || !(cutoff_hz < 0.5 * sample_rate_hz))
    throw std::invalid_argument("butterworth1: cutoff must lie in (0, fs/2)");
  const double k = std::tan(std::numbers::pi * cutoff_hz / sample_rate_hz);
  b_ = k / (1.0 + k);
  a_ = (1.0 - k) / (1.0 + k);
}

void ButterworthLowpass::reset(double initial_value) {
  x_prev_ = initial_value;
  y_prev_ = initial_value;
}

double ButterworthLowpass::step(double x) {
  const double y = b_ * (x + x_prev_) + a_ * y_prev_;
  x_prev_ = x;
  y_prev_ = y;
  return y;
}

FrequencyTrace butterworth1(const FrequencyTrace& trace, double cutoff_hz) {
  ButterworthLowpass filter(cutoff_hz, trace.sample_rate_hz);
  FrequencyTrace out = trace;
  const std::size_t n = trace.size();
  const std::size_t start = trace.valid_from();
  for (std::size_t i = 0; i < start && i < n; ++i) {
    out.values[i] = 0.0;
    out.valid[i] = 0;
  }
  if (start >= n) return out;
  filter.reset(trace.values[start]);
  double held = trace.values[start];
  for (std::size_t i = start; i < n; ++i) {
    if (trace.valid[i]) {
      held = filter.step(trace.values[i]);
      out.values[i] = held;
      out.valid[i] = 1;
    } else {
      out.values[i] = held;  // state held across the gap
      out.valid[i] = 0;
    }
  }
  return out;
}

SrfPll::SrfPll(double kp, double ki, double nominal_frequency_hz, double sample_rate_hz)
    : kp_(kp),
      ki_(ki),
      omega_nom_(kTwoPi * nominal_frequency_hz),
      dt_(1.0 / sample_rate_hz),
      omega_(kTwoPi * nominal_frequency_hz) {
  if (!(kp > 0.0) || !(ki > 0.0))
    throw std::invalid_argument("pll: gains must be positive");
  if (!(nominal_frequency_hz > 0.0))
    throw std::invalid_argument("pll: nominal frequency must be positive");
}

void SrfPll::align(Vec3 v) { theta_ = std::atan2(v.y, v.x); }

double SrfPll::step(Vec3 v) {
  // Predict the phase at this sample, then correct from the q-axis
  // projection normalized by the vector magnitude (approximately the sine of
  // the phase error once locked).  Below the magnitude floor the loop coasts
  // rather than tracking a collapsed voltage.
  theta_ += omega_ * dt_;
  if (theta_ > std::numbers::pi) theta_ -= kTwoPi;
  const double mag = std::hypot(v.x, v.y);
  if (mag >= 1e-3) {
    const double q = (std::cos(theta_) * v.y - std::sin(theta_) * v.x) / mag;
    integrator_ += ki_ * q * omega_nom_ * dt_;
    omega_ = omega_nom_ * (1.0 + kp_ * q + integrator_);
  }
  return omega_;
}

FrequencyTrace pll(const SpaceVectorTrace& trace, double kp, double ki,
                   double nominal_frequency_hz) {
  SrfPll loop(kp, ki, nominal_frequency_hz, trace.sample_rate_hz);
  FrequencyTrace out =
      make_trace(trace.sample_rate_hz, trace.t0_s, trace.size(), Unit::kRadPerSecond);
  if (trace.size() == 0) return out;
  loop.align(trace.v[0]);
  out.values[0] = loop.frequency_rad_s();
  for (std::size_t i = 1; i < trace.size(); ++i) out.values[i] = loop.step(trace.v[i]);
  return out;
}

}  // namespace qss
