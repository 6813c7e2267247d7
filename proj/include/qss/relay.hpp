#ifndef QSS_RELAY_HPP
#define QSS_RELAY_HPP

#include <optional>
#include <string>
#include <vector>

#include "qss/rocof.hpp"
#include "qss/signal.hpp"

namespace qss {

enum class RelayMode { kConventional, kQss };

/// Two-step semi-adaptive UFLS settings.  Thresholds are positive magnitudes
/// in pu/s on the nominal frequency base; tripping tests the signed RoCoF
/// against -d_omega_i (under-frequency direction).
struct RelayConfig {
  RelayMode mode = RelayMode::kConventional;
  double d_omega_1 = 0.012;      // pu/s
  double d_omega_2 = 0.024;      // pu/s
  double delta_t_delta_1 = 0.2;  // s
  double delta_t_delta_2 = 0.2;  // s
  double delta_ls_1 = 0.2;       // pu of local load
  double delta_ls_2 = 0.2;       // pu of local load
  double window_s = 0.5;         // rolling window for the feeding estimator
  double epsilon = 0.05;         // pu^2, qss mode only

  void validate() const;
};

/// Reads a `key = value` config file with keys matching the RelayConfig field
/// names (mode accepts `conventional` or `qss`; `#` starts a comment).
RelayConfig load_relay_config(const std::string& path);

struct TripEvent {
  int stage = 0;        // 1 or 2
  double t_detect_s = 0.0;
  double t_trip_s = 0.0;
  double shed_pu = 0.0;
};

/// Writes trip events as CSV rows `stage,t_detect_s,t_trip_s,shed_pu`.
void write_trip_events_csv(const std::vector<TripEvent>& events, const std::string& path);

/// Deterministic per-stage state machine.  A stage arms when the defined
/// RoCoF first reaches -d_omega_i, accumulates armed time over contiguous
/// defined exceedance, and trips once the stage delay has elapsed.  Undefined
/// samples freeze the armed timer (neither advance nor reset); a defined
/// return above threshold before the delay elapses disarms.  Each stage trips
/// at most once.
class UflsRelay {
 public:
  explicit UflsRelay(const RelayConfig& config);

  /// Advances one sample (t_s strictly increasing) and returns any trips
  /// issued at this instant.  Both stages can trip on the same sample.
  std::vector<TripEvent> step(double rocof_pu_s, bool defined, double t_s);

 private:
  struct Stage {
    double threshold = 0.0;
    double delay_s = 0.0;
    double shed_pu = 0.0;
    bool armed = false;
    bool tripped = false;
    bool crediting = false;  // previous sample was defined exceedance
    double t_detect_s = 0.0;
    double armed_time_s = 0.0;
  };

  Stage stages_[2];
  bool started_ = false;
  double t_prev_ = 0.0;
};

/// Folds UflsRelay over a RocofTrace (values converted from Hz/s to pu/s on
/// base_frequency_hz).  At most one event per stage.
std::vector<TripEvent> simulate_relay(const RocofTrace& rocof, const RelayConfig& config,
                                      double base_frequency_hz);

struct SchemeOutcome {
  std::vector<TripEvent> trips;
  double shed_total_pu = 0.0;
};

struct ComparisonReport {
  SchemeOutcome conventional;
  SchemeOutcome qss;
  /// t_detect(conventional) - t_detect(qss) for stage 1, when both tripped.
  std::optional<double> stage1_detection_advantage_s;
};

struct AnalysisConfig;  // pipeline.hpp

/// Runs the full pipeline on the waveform and simulates both schemes: the
/// conventional relay on the PLL-based rolling estimate (conv_cfg.window_s)
/// and the QSS relay on the circulation-gated estimate (qss_cfg.window_s,
/// qss_cfg.epsilon).
ComparisonReport compare_schemes(const SampledWaveform& waveform, const RelayConfig& conv_cfg,
                                 const RelayConfig& qss_cfg, const AnalysisConfig& analysis);

}  // namespace qss

#endif  // QSS_RELAY_HPP
