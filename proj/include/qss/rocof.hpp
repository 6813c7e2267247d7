#ifndef QSS_ROCOF_HPP
#define QSS_ROCOF_HPP

#include <cstdint>
#include <vector>

#include "qss/gate.hpp"
#include "qss/types.hpp"

namespace qss {

/// Averaged RoCoF series.  values[i] is NaN where defined[i] is false;
/// held[i] carries the most recent defined value (NaN before the first).
/// effective_window_s is the gated window support (equals the nominal window
/// when nothing is gated out); low_support flags defined samples whose
/// support is below 10 % of the nominal window.
struct RocofTrace {
  double sample_rate_hz = 0.0;
  double t0_s = 0.0;
  Unit unit = Unit::kHertzPerSecond;
  std::vector<double> values;
  std::vector<double> held;
  std::vector<double> effective_window_s;
  std::vector<std::uint8_t> defined;
  std::vector<std::uint8_t> low_support;

  std::size_t size() const { return values.size(); }
  double time(std::size_t i) const { return t0_s + static_cast<double>(i) / sample_rate_hz; }
};

/// Washout (first-order high-pass) differentiator, bilinear discretization of
/// H(s) = s / (1 + tau s).  Tracks the slope of a ramp exactly in steady
/// state.  Streaming; single writer.
class WashoutFilter {
 public:
  WashoutFilter(double tau_s, double sample_rate_hz);

  /// Seeds the state so the next step sees no input jump.
  void reset(double initial_input);
  /// Re-anchors the input reference across a gap without clearing the output
  /// memory (the decaying output state is kept).
  void resume(double input);
  /// Zero-input response for one sample (state relaxation over a gap).
  void relax();
  double step(double x);

 private:
  double c_tau_ = 0.0;
  double scale_ = 0.0;
  double x_prev_ = 0.0;
  double y_prev_ = 0.0;
};

/// Band-limited time derivative of a frequency trace via a washout filter.
/// Output is Hz/s (rad/s inputs are converted).  When `gate_mask` is given,
/// gated-out samples are undefined and are not fed to the filter: the state
/// relaxes over the gap and re-anchors on the first sample after it, so a
/// jump confined to the gap never differentiates into defined output.  With
/// reopen_guard_s > 0 the output after an interior gap instead stays
/// undefined for the guard span and the derivative restarts fresh, dropping
/// any memory of the disturbed interval.
FrequencyTrace washout_derivative(const FrequencyTrace& trace, double washout_tau_s,
                                  const std::vector<std::uint8_t>* gate_mask = nullptr,
                                  double reopen_guard_s = 0.0);

/// Formal RoCoF: washout derivative of the QSS frequency, undefined wherever
/// the circulation gate is false.  Hz/s.
FrequencyTrace rocof_formal(const FrequencyTrace& omega_qss, const GateTrace& gate,
                            double washout_tau_s, double reopen_guard_s = 0.0);

/// Trailing-window average of a derivative trace (trapezoidal, weighted by
/// the per-sample validity mask).  Defined once window_s of data has passed
/// since the first structurally present sample and the gated support is
/// positive.
RocofTrace rolling_average(const FrequencyTrace& derivative_trace, double window_s);

/// Conventional estimator: rolling mean over window_s of the washout
/// derivative of the (already filtered) instantaneous frequency.
RocofTrace rocof_conventional(const FrequencyTrace& omega_inst, double window_s,
                              double washout_tau_s);

/// Gated average RoCoF: the trailing-window average of omega_qss_prime
/// restricted to samples where the gate holds,
///   value(t) = integral(w' T) / integral(T)  over (t - window, t],
/// with the support integral(T) recorded as the effective window.  Samples
/// gated out are excluded from both integrals, not zero-filled; a window with
/// zero support is undefined and the last defined value is exposed on the
/// held channel.
RocofTrace rocof_qss_gated(const FrequencyTrace& omega_qss_prime, const GateTrace& gate,
                           double window_s);

}  // namespace qss

#endif  // QSS_ROCOF_HPP
