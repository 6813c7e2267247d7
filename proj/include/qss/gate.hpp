#ifndef QSS_GATE_HPP
#define QSS_GATE_HPP

#include <cstdint>
#include <optional>
#include <vector>

#include "qss/clarke.hpp"
#include "qss/period.hpp"
#include "qss/types.hpp"

namespace qss {

/// Circulation-derivative gate.  tout[i] is true iff gamma_prime[i] is valid
/// and |gamma_prime[i]| <= epsilon (boundary equality counts as satisfied).
struct GateTrace {
  double sample_rate_hz = 0.0;
  double t0_s = 0.0;
  double epsilon = 0.0;  // pu^2
  std::vector<double> gamma_prime;
  std::vector<std::uint8_t> gamma_valid;
  std::vector<std::uint8_t> tout;
  std::optional<double> first_recovery_s;  // set by first_recovery() callers

  std::size_t size() const { return gamma_prime.size(); }
  double time(std::size_t i) const { return t0_s + static_cast<double>(i) / sample_rate_hz; }
};

/// Time derivative of circulation over the detected period:
///   gamma'(t) = |v(t)|^2 - |v(t - T(t))|^2.
/// This is the loop integral of (|v|^2)' evaluated in closed form (the
/// integrand is a total derivative, so the integral telescopes to the
/// endpoint difference).  The backward endpoint is linearly interpolated at
/// the sub-sample period boundary.  Samples with an invalid period are
/// returned invalid.
void circulation_derivative(const SpaceVectorTrace& trace, const PeriodTrace& periods,
                            std::vector<double>& gamma_prime,
                            std::vector<std::uint8_t>& valid);

/// Boolean gate for one sample: |gamma_prime| <= epsilon.
bool tout(double gamma_prime, double epsilon);

/// Assembles the full gate trace for a space-vector trace and detected
/// periods.  Invalid gamma' samples gate to false.
GateTrace make_gate(const SpaceVectorTrace& trace, const PeriodTrace& periods,
                    double epsilon);

/// Length of the initial span after event_start_s during which the gate is
/// unusable: from the first tout=false sample at or after event_start_s until
/// the gate next holds true continuously for hold_s.  During a distorted
/// interval gamma' oscillates through zero, so isolated one-sample recoveries
/// do not end the span; a gate that never drops returns nullopt, and a gate
/// that never stably recovers spans to the end of the trace.
/// With hold_s = 0 this is the raw contiguous false-run length.
std::optional<double> first_recovery(const GateTrace& gate, double event_start_s,
                                     double hold_s);

}  // namespace qss

#endif  // QSS_GATE_HPP
