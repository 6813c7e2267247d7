#include "qss/pipeline.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <limits>

namespace qss {

void AnalysisConfig::validate() const {
  auto positive = [](double v, const char* name) {
    if (!(v > 0.0) || !std::isfinite(v))
      throw std::invalid_argument(std::string("analysis config: ") + name +
                                  " must be positive");
  };
  positive(base_frequency_hz, "base_frequency_hz");
  positive(epsilon, "epsilon");
  positive(window_s, "window_s");
  positive(qss_window_s, "qss_window_s");
  positive(butterworth_cutoff_hz, "butterworth_cutoff_hz");
  positive(washout_tau_s, "washout_tau_s");
  positive(pll_kp, "pll_kp");
  positive(pll_ki, "pll_ki");
  positive(lookback_s, "lookback_s");
  positive(magnitude_floor_pu2, "magnitude_floor_pu2");
  if (window_s < 2.0 / base_frequency_hz)
    throw std::invalid_argument("analysis config: window_s must cover two nominal cycles");
  if (lookback_s < 2.0 / base_frequency_hz)
    throw std::invalid_argument("analysis config: lookback_s must cover two nominal cycles");
}

AnalysisResult run_analysis(const SampledWaveform& waveform, const AnalysisConfig& config) {
  config.validate();
  waveform.validate();

  AnalysisResult r;
  r.sample_rate_hz = waveform.sample_rate_hz;
  r.t0_s = waveform.t0_s;
  r.space_vector = clarke(waveform);

  r.omega_v = omega_v(r.space_vector, config.magnitude_floor_pu2);
  r.rho_v = rho_v(r.space_vector, config.magnitude_floor_pu2);
  r.omega_v_filtered = butterworth1(r.omega_v, config.butterworth_cutoff_hz);

  r.omega_pll = pll(r.space_vector, config.pll_kp, config.pll_ki, config.base_frequency_hz);
  r.omega_pll_filtered = butterworth1(r.omega_pll, config.butterworth_cutoff_hz);

  r.periods = detect_period(r.omega_v, config.lookback_s);
  r.omega_qss = omega_qss(r.omega_v, r.periods);
  r.gate = make_gate(r.space_vector, r.periods, config.epsilon);
  // One washout time constant of guard after each gate reopening: the
  // period-average frequency is still slewing off the disturbed interval
  // there, and the restarted derivative must not ingest that slope.
  r.omega_qss_prime =
      rocof_formal(r.omega_qss, r.gate, config.washout_tau_s, config.washout_tau_s);

  r.rocof_conventional =
      rocof_conventional(r.omega_pll_filtered, config.window_s, config.washout_tau_s);
  r.rocof_qss = rocof_qss_gated(r.omega_qss_prime, r.gate, config.qss_window_s);
  return r;
}

namespace {

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

std::string format_double(double value) {
  char buf[32];
  auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), value);
  (void)ec;
  return std::string(buf, end);
}

double masked(const FrequencyTrace& trace, std::size_t i) {
  return trace.valid[i] ? trace.values[i] : kNan;
}

}  // namespace

void write_analysis_csv(const AnalysisResult& r, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "time_s,omega_v_rad_s,omega_v_filtered_rad_s,rho_v_rad_s,omega_pll_rad_s,"
         "period_s,omega_qss_rad_s,gamma_prime_pu2,tout,rocof_conventional_hz_s,"
         "rocof_qss_hz_s,rocof_qss_held_hz_s,effective_window_s\n";
  const std::size_t n = r.size();
  for (std::size_t i = 0; i < n; ++i) {
    out << format_double(r.omega_v.time(i)) << ',' << format_double(masked(r.omega_v, i))
        << ',' << format_double(masked(r.omega_v_filtered, i)) << ','
        << format_double(masked(r.rho_v, i)) << ',' << format_double(masked(r.omega_pll, i))
        << ',' << format_double(r.periods.valid[i] ? r.periods.period_s[i] : kNan) << ','
        << format_double(masked(r.omega_qss, i)) << ','
        << format_double(r.gate.gamma_valid[i] ? r.gate.gamma_prime[i] : kNan) << ','
        << (r.gate.tout[i] ? '1' : '0') << ','
        << format_double(r.rocof_conventional.defined[i] ? r.rocof_conventional.values[i]
                                                         : kNan)
        << ',' << format_double(r.rocof_qss.defined[i] ? r.rocof_qss.values[i] : kNan) << ','
        << format_double(r.rocof_qss.held[i]) << ','
        << format_double(r.rocof_qss.effective_window_s[i]) << '\n';
  }
  if (!out) throw IoError("write failed for '" + path + "'");
}

AnalysisSummary summarize(const AnalysisResult& r) {
  AnalysisSummary s;
  s.samples = r.size();
  s.min_omega_qss_hz = kNan;
  s.max_omega_qss_hz = kNan;
  s.min_effective_window_s = kNan;
  for (std::size_t i = 0; i < r.size(); ++i) {
    if (r.rocof_conventional.defined[i])
      s.max_abs_rocof_conventional_hz_s =
          std::max(s.max_abs_rocof_conventional_hz_s, std::abs(r.rocof_conventional.values[i]));
    if (r.rocof_qss.defined[i]) {
      s.max_abs_rocof_qss_hz_s =
          std::max(s.max_abs_rocof_qss_hz_s, std::abs(r.rocof_qss.values[i]));
      if (std::isnan(s.min_effective_window_s) ||
          r.rocof_qss.effective_window_s[i] < s.min_effective_window_s)
        s.min_effective_window_s = r.rocof_qss.effective_window_s[i];
    }
    if (r.gate.gamma_valid[i])
      s.max_abs_gamma_prime_pu2 =
          std::max(s.max_abs_gamma_prime_pu2, std::abs(r.gate.gamma_prime[i]));
    if (r.omega_qss.valid[i]) {
      const double hz = r.omega_qss.values[i] / kTwoPi;
      if (std::isnan(s.min_omega_qss_hz) || hz < s.min_omega_qss_hz) s.min_omega_qss_hz = hz;
      if (std::isnan(s.max_omega_qss_hz) || hz > s.max_omega_qss_hz) s.max_omega_qss_hz = hz;
    }
  }
  s.conventional_exceeds_critical = s.max_abs_rocof_conventional_hz_s > kCriticalRocofHzPerS;
  s.qss_exceeds_critical = s.max_abs_rocof_qss_hz_s > kCriticalRocofHzPerS;
  return s;
}

void write_summary_csv(const AnalysisSummary& s, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "metric,value\n";
  out << "samples," << s.samples << '\n';
  out << "max_abs_rocof_conventional_hz_s," << format_double(s.max_abs_rocof_conventional_hz_s)
      << '\n';
  out << "max_abs_rocof_qss_hz_s," << format_double(s.max_abs_rocof_qss_hz_s) << '\n';
  out << "conventional_exceeds_critical," << (s.conventional_exceeds_critical ? 1 : 0) << '\n';
  out << "qss_exceeds_critical," << (s.qss_exceeds_critical ? 1 : 0) << '\n';
  out << "max_abs_gamma_prime_pu2," << format_double(s.max_abs_gamma_prime_pu2) << '\n';
  out << "min_omega_qss_hz," << format_double(s.min_omega_qss_hz) << '\n';
  out << "max_omega_qss_hz," << format_double(s.max_omega_qss_hz) << '\n';
  out << "min_effective_window_s," << format_double(s.min_effective_window_s) << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

std::vector<EpsilonSweepPoint> sweep_epsilon(const AnalysisResult& result,
                                             double event_start_s,
                                             std::span<const double> epsilons,
                                             double base_frequency_hz) {
  if (epsilons.empty()) throw std::invalid_argument("sweep_epsilon: empty threshold range");
  if (!(base_frequency_hz > 0.0))
    throw std::invalid_argument("sweep_epsilon: base frequency must be positive");

  const double hold_s = 1.0 / base_frequency_hz;
  std::vector<EpsilonSweepPoint> points;
  points.reserve(epsilons.size());

  GateTrace gate;
  gate.sample_rate_hz = result.gate.sample_rate_hz;
  gate.t0_s = result.gate.t0_s;
  gate.gamma_prime = result.gate.gamma_prime;
  gate.gamma_valid = result.gate.gamma_valid;
  gate.tout.assign(gate.gamma_prime.size(), 0);

  for (const double epsilon : epsilons) {
    if (!(epsilon > 0.0))
      throw std::invalid_argument("sweep_epsilon: thresholds must be positive");
    gate.epsilon = epsilon;
    for (std::size_t i = 0; i < gate.size(); ++i)
      gate.tout[i] = gate.gamma_valid[i] && std::abs(gate.gamma_prime[i]) <= epsilon;
    gate.first_recovery_s = first_recovery(gate, event_start_s, hold_s);
    points.push_back({epsilon, gate.first_recovery_s.value_or(0.0)});
  }
  return points;
}

std::vector<double> log_spaced(double lo, double hi, std::size_t count) {
  if (!(lo > 0.0) || !(hi > lo) || count < 2)
    throw std::invalid_argument("log_spaced: need 0 < lo < hi and count >= 2");
  std::vector<double> out(count);
  const double step = std::log(hi / lo) / static_cast<double>(count - 1);
  for (std::size_t i = 0; i < count; ++i)
    out[i] = lo * std::exp(step * static_cast<double>(i));
  out.back() = hi;
  return out;
}

EpsilonRecommendation recommend_epsilon(const AnalysisResult& result) {
  EpsilonRecommendation rec;
  std::vector<double> magnitudes;
  magnitudes.reserve(result.size());
  for (std::size_t i = 0; i < result.size(); ++i)
    if (result.gate.gamma_valid[i]) magnitudes.push_back(std::abs(result.gate.gamma_prime[i]));
  if (magnitudes.empty())
    throw std::invalid_argument("recommend_epsilon: no valid circulation samples");

  rec.max_abs_gamma_prime = *std::max_element(magnitudes.begin(), magnitudes.end());
  rec.epsilon = 10.0 * rec.max_abs_gamma_prime;

  // A stationary record has its largest |gamma'| within the bulk noise level;
  // a lone excursion an order of magnitude above the 95th percentile points
  // at a transient in the record.
  std::nth_element(magnitudes.begin(), magnitudes.begin() + magnitudes.size() * 95 / 100,
                   magnitudes.end());
  const double p95 = magnitudes[magnitudes.size() * 95 / 100];
  rec.stationary = rec.max_abs_gamma_prime <= std::max(10.0 * p95, 1e-9);
  return rec;
}

}  // namespace qss
