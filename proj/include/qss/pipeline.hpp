#ifndef QSS_PIPELINE_HPP
#define QSS_PIPELINE_HPP

#include <span>
#include <string>
#include <vector>

#include "qss/clarke.hpp"
#include "qss/gate.hpp"
#include "qss/geometric.hpp"
#include "qss/period.hpp"
#include "qss/rocof.hpp"
#include "qss/signal.hpp"
#include "qss/types.hpp"

namespace qss {

/// |RoCoF| above this is considered critical for system stability, Hz/s.
inline constexpr double kCriticalRocofHzPerS = 1.0;

/// Analysis parameters.  Defaults replicate the reference methodology:
/// epsilon 0.05 pu^2 on normalized voltage, 500 ms conventional / 250 ms
/// gated windows, 10 ms washout, PLL gains (0.2, 0.03).
struct AnalysisConfig {
  double base_frequency_hz = 50.0;
  double epsilon = 0.05;
  double window_s = 0.5;      // conventional estimator
  double qss_window_s = 0.25; // gated estimator
  double butterworth_cutoff_hz = 50.0;
  double washout_tau_s = 0.01;
  double pll_kp = 0.2;
  double pll_ki = 0.03;
  double lookback_s = 0.1;
  double magnitude_floor_pu2 = kMagnitudeFloorPu2;

  void validate() const;
};

/// All aligned series produced by one pass over a waveform.
struct AnalysisResult {
  double sample_rate_hz = 0.0;
  double t0_s = 0.0;
  SpaceVectorTrace space_vector;
  FrequencyTrace omega_v;           // rad/s
  FrequencyTrace omega_v_filtered;  // rad/s
  FrequencyTrace rho_v;             // rad/s
  FrequencyTrace omega_pll;         // rad/s
  FrequencyTrace omega_pll_filtered;
  PeriodTrace periods;
  FrequencyTrace omega_qss;        // rad/s
  GateTrace gate;
  FrequencyTrace omega_qss_prime;  // Hz/s, undefined where gated out
  RocofTrace rocof_conventional;   // Hz/s
  RocofTrace rocof_qss;            // Hz/s

  std::size_t size() const { return omega_v.size(); }
};

/// Runs frames -> frequencies -> period -> gate -> both RoCoF estimators.
AnalysisResult run_analysis(const SampledWaveform& waveform, const AnalysisConfig& config);

/// Writes the aligned result table.  Columns:
///   time_s, omega_v_rad_s, omega_v_filtered_rad_s, rho_v_rad_s,
///   omega_pll_rad_s, period_s, omega_qss_rad_s, gamma_prime_pu2, tout,
///   rocof_conventional_hz_s, rocof_qss_hz_s, rocof_qss_held_hz_s,
///   effective_window_s
/// Invalid samples print as nan; tout prints 0/1.
void write_analysis_csv(const AnalysisResult& result, const std::string& path);

struct AnalysisSummary {
  std::size_t samples = 0;
  double max_abs_rocof_conventional_hz_s = 0.0;
  double max_abs_rocof_qss_hz_s = 0.0;
  bool conventional_exceeds_critical = false;
  bool qss_exceeds_critical = false;
  double max_abs_gamma_prime_pu2 = 0.0;
  double min_omega_qss_hz = 0.0;
  double max_omega_qss_hz = 0.0;
  double min_effective_window_s = 0.0;
};

AnalysisSummary summarize(const AnalysisResult& result);
void write_summary_csv(const AnalysisSummary& summary, const std::string& path);

struct EpsilonSweepPoint {
  double epsilon = 0.0;
  double recovery_span_s = 0.0;  // 0 when the gate never drops
};

/// Recovery span after event_start_s for each threshold, reusing one analysis
/// pass.  The span is measured with a one-nominal-period stability hold (see
/// first_recovery); a gate that never stably recovers reports the span to the
/// end of the trace.
std::vector<EpsilonSweepPoint> sweep_epsilon(const AnalysisResult& result,
                                             double event_start_s,
                                             std::span<const double> epsilons,
                                             double base_frequency_hz);

std::vector<double> log_spaced(double lo, double hi, std::size_t count);

struct EpsilonRecommendation {
  double epsilon = 0.0;              // 10 x max |gamma'| over the record
  double max_abs_gamma_prime = 0.0;
  bool stationary = true;            // false when a transient is suspected
};

/// Threshold suggestion from a stationary record: one order of magnitude
/// above the largest observed |gamma'|.  Flags non-stationary inputs (lone
/// excursions far above the bulk noise level).
EpsilonRecommendation recommend_epsilon(const AnalysisResult& result);

}  // namespace qss

#endif  // QSS_PIPELINE_HPP
