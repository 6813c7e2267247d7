#include "qss/rocof.hpp"

#include <cmath>
#include <limits>

namespace qss {

namespace {
constexpr double kNan = std::numeric_limits<double>::quiet_NaN();
constexpr double kLowSupportFraction = 0.1;
}  // namespace

WashoutFilter::WashoutFilter(double tau_s, double sample_rate_hz) {
  if (!(tau_s > 0.0)) throw std::invalid_argument("washout: tau must be positive");
  const double c = 2.0 * sample_rate_hz;
  c_tau_ = c * tau_s;
  scale_ = c / (1.0 + c_tau_);
}

void WashoutFilter::reset(double initial_input) {
  x_prev_ = initial_input;
  y_prev_ = 0.0;
}

void WashoutFilter::resume(double input) { x_prev_ = input; }

void WashoutFilter::relax() { y_prev_ *= (c_tau_ - 1.0) / (1.0 + c_tau_); }

double WashoutFilter::step(double x) {
  const double y = scale_ * (x - x_prev_) + ((c_tau_ - 1.0) / (1.0 + c_tau_)) * y_prev_;
  x_prev_ = x;
  y_prev_ = y;
  return y;
}

FrequencyTrace washout_derivative(const FrequencyTrace& trace, double washout_tau_s,
                                  const std::vector<std::uint8_t>* gate_mask,
                                  double reopen_guard_s) {
  if (gate_mask && gate_mask->size() != trace.size())
    throw std::invalid_argument("washout_derivative: gate mask misaligned");
  if (reopen_guard_s < 0.0)
    throw std::invalid_argument("washout_derivative: reopen guard must be >= 0");

  const std::size_t n = trace.size();
  const double unit_scale = trace.unit == Unit::kRadPerSecond ? 1.0 / kTwoPi : 1.0;
  FrequencyTrace out = make_trace(trace.sample_rate_hz, trace.t0_s, n, Unit::kHertzPerSecond);

  const std::size_t guard =
      static_cast<std::size_t>(std::ceil(reopen_guard_s * trace.sample_rate_hz));
  WashoutFilter filter(washout_tau_s, trace.sample_rate_hz);
  bool primed = false;
  bool resume_pending = false;
  std::size_t guard_left = 0;
  for (std::size_t i = 0; i < n; ++i) {
    const bool usable = trace.valid[i] && (!gate_mask || (*gate_mask)[i]);
    if (!usable) {
      out.values[i] = kNan;
      out.valid[i] = 0;
      if (primed) filter.relax();  // zero-input response across the gap
      resume_pending = true;
      continue;
    }
    if (!primed) {
      filter.reset(trace.values[i]);
      primed = true;
    } else if (resume_pending) {
      // Values inside the gap were unusable; with no guard, re-anchor so
      // their net jump does not differentiate into the defined output.  With
      // a guard, stay undefined until the gate has held for the guard span,
      // then restart the derivative fresh.
      guard_left = guard;
      if (guard == 0) filter.resume(trace.values[i]);
    }
    resume_pending = false;
    if (guard_left > 0) {
      --guard_left;
      out.values[i] = kNan;
      out.valid[i] = 0;
      if (guard_left == 0) filter.reset(trace.values[i]);
      continue;
    }
    out.values[i] = unit_scale * filter.step(trace.values[i]);
  }
  return out;
}

FrequencyTrace rocof_formal(const FrequencyTrace& omega_qss, const GateTrace& gate,
                            double washout_tau_s, double reopen_guard_s) {
  if (gate.size() != omega_qss.size())
    throw std::invalid_argument("rocof_formal: misaligned traces");
  return washout_derivative(omega_qss, washout_tau_s, &gate.tout, reopen_guard_s);
}

namespace {

RocofTrace rolling_weighted(const FrequencyTrace& deriv, double window_s) {
  if (!(window_s > 0.0))
    throw std::invalid_argument("rolling average: window must be positive");
  if (deriv.unit != Unit::kHertzPerSecond)
    throw std::invalid_argument("rolling average: input must be Hz/s");

  const std::size_t n = deriv.size();
  const double fs = deriv.sample_rate_hz;
  const std::size_t window = static_cast<std::size_t>(std::llround(window_s * fs));
  if (window < 1) throw std::invalid_argument("rolling average: window under one sample");

  RocofTrace out;
  out.sample_rate_hz = fs;
  out.t0_s = deriv.t0_s;
  out.values.assign(n, kNan);
  out.held.assign(n, kNan);
  out.effective_window_s.assign(n, 0.0);
  out.defined.assign(n, 0);
  out.low_support.assign(n, 0);
  if (n == 0) return out;

  // Trapezoidal prefix integrals of w'*T and T over the segment mesh, with
  // excluded samples contributing nothing (not zero-filled values).
  std::vector<double> num(n, 0.0);
  std::vector<double> den(n, 0.0);
  const double half_dt = 0.5 / fs;
  for (std::size_t i = 1; i < n; ++i) {
    double seg_num = 0.0;
    double seg_den = 0.0;
    if (deriv.valid[i - 1]) {
      seg_num += deriv.values[i - 1] * half_dt;
      seg_den += half_dt;
    }
    if (deriv.valid[i]) {
      seg_num += deriv.values[i] * half_dt;
      seg_den += half_dt;
    }
    num[i] = num[i - 1] + seg_num;
    den[i] = den[i - 1] + seg_den;
  }

  const std::size_t stream_start = deriv.valid_from();
  if (stream_start >= n) return out;

  double held = kNan;
  for (std::size_t i = 0; i < n; ++i) {
    if (i < stream_start + window) continue;  // window not yet full
    const std::size_t tail = i - window;
    const double support = den[i] - den[tail];
    out.effective_window_s[i] = support;
    if (support > 0.0) {
      const double value = (num[i] - num[tail]) / support;
      out.values[i] = value;
      out.defined[i] = 1;
      out.low_support[i] = support < kLowSupportFraction * window_s;
      held = value;
    }
    out.held[i] = held;
  }
  return out;
}

}  // namespace

RocofTrace rolling_average(const FrequencyTrace& derivative_trace, double window_s) {
  return rolling_weighted(derivative_trace, window_s);
}

RocofTrace rocof_conventional(const FrequencyTrace& omega_inst, double window_s,
                              double washout_tau_s) {
  return rolling_weighted(washout_derivative(omega_inst, washout_tau_s), window_s);
}

RocofTrace rocof_qss_gated(const FrequencyTrace& omega_qss_prime, const GateTrace& gate,
                           double window_s) {
  if (gate.size() != omega_qss_prime.size())
    throw std::invalid_argument("rocof_qss_gated: misaligned traces");
  FrequencyTrace masked = omega_qss_prime;
  for (std::size_t i = 0; i < masked.size(); ++i)
    masked.valid[i] = masked.valid[i] && gate.tout[i];
  return rolling_weighted(masked, window_s);
}

}  // namespace qss
