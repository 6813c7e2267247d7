#include "qss/gate.hpp"

#include <cmath>

namespace qss {

void circulation_derivative(const SpaceVectorTrace& trace, const PeriodTrace& periods,
                            std::vector<double>& gamma_prime,
                            std::vector<std::uint8_t>& valid) {
  if (trace.size() != periods.size())
    throw std::invalid_argument("circulation_derivative: misaligned inputs");
  const std::size_t n = trace.size();
  const double fs = trace.sample_rate_hz;
  gamma_prime.assign(n, 0.0);
  valid.assign(n, 0);

  for (std::size_t i = 0; i < n; ++i) {
    if (!periods.valid[i]) continue;
    const double u = static_cast<double>(i) - periods.period_s[i] * fs;
    if (u < 0.0) continue;
    std::size_t k = static_cast<std::size_t>(u);
    if (k + 1 >= n) continue;
    const double frac = u - static_cast<double>(k);
    const double tail = trace.mag2[k] + frac * (trace.mag2[k + 1] - trace.mag2[k]);
    gamma_prime[i] = trace.mag2[i] - tail;
    valid[i] = 1;
  }
}

bool tout(double gamma_prime, double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("tout: epsilon must be positive");
  return std::abs(gamma_prime) <= epsilon;
}

GateTrace make_gate(const SpaceVectorTrace& trace, const PeriodTrace& periods,
                    double epsilon) {
  if (!(epsilon > 0.0)) throw std::invalid_argument("make_gate: epsilon must be positive");
  GateTrace gate;
  gate.sample_rate_hz = trace.sample_rate_hz;
  gate.t0_s = trace.t0_s;
  gate.epsilon = epsilon;
  circulation_derivative(trace, periods, gate.gamma_prime, gate.gamma_valid);
  gate.tout.assign(trace.size(), 0);
  for (std::size_t i = 0; i < trace.size(); ++i)
    gate.tout[i] = gate.gamma_valid[i] && tout(gate.gamma_prime[i], epsilon);
  return gate;
}

std::optional<double> first_recovery(const GateTrace& gate, double event_start_s,
                                     double hold_s) {
  const std::size_t n = gate.size();
  if (n == 0) return std::nullopt;
  const double fs = gate.sample_rate_hz;
  if (event_start_s < gate.t0_s || event_start_s > gate.time(n - 1))
    throw std::invalid_argument("first_recovery: event start outside the trace");

  const std::size_t start =
      static_cast<std::size_t>(std::ceil((event_start_s - gate.t0_s) * fs - 1e-9));
  std::size_t drop = start;
  while (drop < n && gate.tout[drop]) ++drop;
  if (drop == n) return std::nullopt;  // gate never opens after the event

  const std::size_t hold_samples = static_cast<std::size_t>(std::llround(hold_s * fs));
  std::size_t i = drop;
  while (i < n) {
    if (gate.tout[i]) {
      std::size_t run = i;
      while (run < n && gate.tout[run]) ++run;
      // The span ends at the first recovery that is stable for hold_s (or
      // that reaches the end of the trace).
      if (run - i > hold_samples || run == n)
        return (static_cast<double>(i) - static_cast<double>(drop)) / fs;
      i = run;
    } else {
      ++i;
    }
  }
  return (static_cast<double>(n) - static_cast<double>(drop)) / fs;
}

}  // namespace qss
