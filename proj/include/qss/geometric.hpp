#ifndef QSS_GEOMETRIC_HPP
#define QSS_GEOMETRIC_HPP

#include <vector>

#include "qss/clarke.hpp"
#include "qss/types.hpp"

namespace qss {

/// Below this |v|^2 the rotation-rate quotient divides by near-zero and the
/// sample is flagged invalid instead of clamped.
inline constexpr double kMagnitudeFloorPu2 = 1e-6;

/// Time derivative of the space vector.  Interior samples use a five-point
/// central stencil, the two samples at each end use one-sided five-point
/// formulas (all exact through degree-4 polynomials).  Traces shorter than
/// five samples fall back to the three-point scheme; length >= 3 is required.
std::vector<Vec3> derivative(const SpaceVectorTrace& trace);

/// Rotation rate of the voltage trajectory, |v x v'| / |v|^2, rad/s.
/// Nonnegative by construction; samples below the magnitude floor are invalid.
FrequencyTrace omega_v(const SpaceVectorTrace& trace,
                       double magnitude_floor_pu2 = kMagnitudeFloorPu2);

/// Radial (translation) rate |v . v'| / |v|^2, rad/s-equivalent.  Near zero on
/// constant-amplitude trajectories; impulsive under amplitude steps.
FrequencyTrace rho_v(const SpaceVectorTrace& trace,
                     double magnitude_floor_pu2 = kMagnitudeFloorPu2);

/// First-order Butterworth low-pass, bilinear discretization prewarped so the
/// -3 dB point lands on cutoff_hz exactly.  Streaming; single writer.
class ButterworthLowpass {
 public:
  ButterworthLowpass(double cutoff_hz, double sample_rate_hz);

  /// Seeds the state so a constant input produces a constant output.
  void reset(double initial_value);
  double step(double x);

 private:
  double b_ = 0.0;  // feedforward
  double a_ = 0.0;  // feedback
  double x_prev_ = 0.0;
  double y_prev_ = 0.0;
};

/// Applies a first-order Butterworth low-pass to the trace, initialized to the
/// first valid input sample.  Invalid input samples hold the filter state and
/// stay invalid.  Requires 0 < cutoff_hz < sample_rate_hz / 2.
FrequencyTrace butterworth1(const FrequencyTrace& trace, double cutoff_hz);

/// Synchronous-reference-frame PLL over the alpha-beta components.  The phase
/// detector is the q-axis projection normalized by the vector magnitude, so
/// the loop is insensitive to voltage scaling; a PI with per-unit gains drives
/// the frequency estimate.  Streaming; single writer.
class SrfPll {
 public:
  SrfPll(double kp, double ki, double nominal_frequency_hz, double sample_rate_hz);

  /// Aligns the internal phase with the given sample (used at trace start).
  void align(Vec3 v);
  /// Advances one sample and returns the frequency estimate in rad/s.
  double step(Vec3 v);

  double frequency_rad_s() const { return omega_; }

 private:
  double kp_;
  double ki_;
  double omega_nom_;
  double dt_;
  double theta_ = 0.0;
  double integrator_ = 0.0;  // pu frequency correction
  double omega_;
};

/// Runs the SRF-PLL over a space-vector trace.  Output in rad/s, initialized
/// at the nominal frequency with the phase aligned to the first sample.
FrequencyTrace pll(const SpaceVectorTrace& trace, double kp, double ki,
                   double nominal_frequency_hz);

}  // namespace qss

#endif  // QSS_GEOMETRIC_HPP
