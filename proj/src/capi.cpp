#include "qssrocof.h"

#include <cmath>
#include <cstring>
#include <limits>
#include <memory>
#include <string>

#include "qss/pipeline.hpp"
#include "qss/relay.hpp"

extern "C" {

struct qss_waveform {
  qss::SampledWaveform rep;
};

struct qss_analysis {
  qss::AnalysisResult rep;
  double base_frequency_hz;
  std::vector<double> series[13];  // filled at construction; aliased by accessors
};

}  // extern "C"

namespace {

thread_local std::string t_last_error;

qss_status fail(qss_status status, const char* message) {
  t_last_error = message;
  return status;
}

template <typename Fn>
qss_status guarded(Fn&& fn) {
  try {
    fn();
    t_last_error.clear();
    return QSS_OK;
  } catch (const qss::ParseError& e) {
    return fail(QSS_ERR_PARSE, e.what());
  } catch (const qss::IoError& e) {
    return fail(QSS_ERR_IO, e.what());
  } catch (const std::invalid_argument& e) {
    return fail(QSS_ERR_INVALID_ARGUMENT, e.what());
  } catch (const std::exception& e) {
    return fail(QSS_ERR_INTERNAL, e.what());
  }
}

qss::SignalSpec convert(const qss_signal_spec& spec) {
  qss::SignalSpec out;
  switch (spec.kind) {
    case QSS_SIGNAL_BALANCED: out.kind = qss::SignalKind::kBalanced; break;
    case QSS_SIGNAL_CHIRP: out.kind = qss::SignalKind::kChirp; break;
    case QSS_SIGNAL_AMPLITUDE_STEP: out.kind = qss::SignalKind::kAmplitudeStep; break;
    case QSS_SIGNAL_POLLUTED: out.kind = qss::SignalKind::kPolluted; break;
    case QSS_SIGNAL_TRANSIENT_EVENT: out.kind = qss::SignalKind::kTransientEvent; break;
    default: throw std::invalid_argument("unknown signal kind");
  }
  out.base_frequency_hz = spec.base_frequency_hz;
  out.amplitude_pu = spec.amplitude_pu;
  out.duration_s = spec.duration_s;
  out.ramp_hz_per_s = spec.ramp_hz_per_s;
  out.step_ratio = spec.step_ratio;
  out.step_time_s = spec.step_time_s;
  out.noise_stddev_pu = spec.noise_stddev_pu;
  out.seed = spec.seed;
  out.event_start_s = spec.event_start_s;
  out.event_length_s = spec.event_length_s;
  if (spec.harmonic_count > 0) {
    if (!spec.harmonic_orders || !spec.harmonic_amplitudes)
      throw std::invalid_argument("harmonic arrays are null with harmonic_count > 0");
    for (size_t i = 0; i < spec.harmonic_count; ++i)
      out.harmonics.push_back({spec.harmonic_orders[i], spec.harmonic_amplitudes[i]});
  }
  return out;
}

qss::AnalysisConfig convert(const qss_analysis_config& config) {
  qss::AnalysisConfig out;
  out.base_frequency_hz = config.base_frequency_hz;
  out.epsilon = config.epsilon;
  out.window_s = config.window_s;
  out.qss_window_s = config.qss_window_s;
  out.butterworth_cutoff_hz = config.butterworth_cutoff_hz;
  out.washout_tau_s = config.washout_tau_s;
  out.pll_kp = config.pll_kp;
  out.pll_ki = config.pll_ki;
  out.lookback_s = config.lookback_s;
  return out;
}

qss::RelayConfig convert(const qss_relay_config& config) {
  qss::RelayConfig out;
  out.mode = config.mode == QSS_RELAY_QSS ? qss::RelayMode::kQss
                                          : qss::RelayMode::kConventional;
  out.d_omega_1 = config.d_omega_1;
  out.d_omega_2 = config.d_omega_2;
  out.delta_t_delta_1 = config.delta_t_delta_1;
  out.delta_t_delta_2 = config.delta_t_delta_2;
  out.delta_ls_1 = config.delta_ls_1;
  out.delta_ls_2 = config.delta_ls_2;
  out.window_s = config.window_s;
  out.epsilon = config.epsilon;
  return out;
}

void require(bool ok, const char* message) {
  if (!ok) throw std::invalid_argument(message);
}

constexpr double kNan = std::numeric_limits<double>::quiet_NaN();

void fill_series(qss_analysis& a, qss_series series) {
  auto& cache = a.series[static_cast<size_t>(series)];
  const auto& r = a.rep;
  const std::size_t n = r.size();
  cache.resize(n);
  auto from_trace = [&](const qss::FrequencyTrace& t) {
    for (std::size_t i = 0; i < n; ++i) cache[i] = t.valid[i] ? t.values[i] : kNan;
  };
  switch (series) {
    case QSS_SERIES_TIME_S:
      for (std::size_t i = 0; i < n; ++i) cache[i] = r.omega_v.time(i);
      break;
    case QSS_SERIES_OMEGA_V_RAD_S: from_trace(r.omega_v); break;
    case QSS_SERIES_OMEGA_V_FILTERED_RAD_S: from_trace(r.omega_v_filtered); break;
    case QSS_SERIES_RHO_V_RAD_S: from_trace(r.rho_v); break;
    case QSS_SERIES_OMEGA_PLL_RAD_S: from_trace(r.omega_pll); break;
    case QSS_SERIES_PERIOD_S:
      for (std::size_t i = 0; i < n; ++i)
        cache[i] = r.periods.valid[i] ? r.periods.period_s[i] : kNan;
      break;
    case QSS_SERIES_OMEGA_QSS_RAD_S: from_trace(r.omega_qss); break;
    case QSS_SERIES_GAMMA_PRIME_PU2:
      for (std::size_t i = 0; i < n; ++i)
        cache[i] = r.gate.gamma_valid[i] ? r.gate.gamma_prime[i] : kNan;
      break;
    case QSS_SERIES_TOUT:
      for (std::size_t i = 0; i < n; ++i) cache[i] = r.gate.tout[i] ? 1.0 : 0.0;
      break;
    case QSS_SERIES_ROCOF_CONVENTIONAL_HZ_S:
      for (std::size_t i = 0; i < n; ++i)
        cache[i] = r.rocof_conventional.defined[i] ? r.rocof_conventional.values[i] : kNan;
      break;
    case QSS_SERIES_ROCOF_QSS_HZ_S:
      for (std::size_t i = 0; i < n; ++i)
        cache[i] = r.rocof_qss.defined[i] ? r.rocof_qss.values[i] : kNan;
      break;
    case QSS_SERIES_ROCOF_QSS_HELD_HZ_S:
      for (std::size_t i = 0; i < n; ++i) cache[i] = r.rocof_qss.held[i];
      break;
    case QSS_SERIES_EFFECTIVE_WINDOW_S:
      for (std::size_t i = 0; i < n; ++i) cache[i] = r.rocof_qss.effective_window_s[i];
      break;
    default:
      throw std::invalid_argument("unknown series");
  }
}

void fill_events(const std::vector<qss::TripEvent>& events, qss_trip_event* out,
                 size_t capacity, size_t* count) {
  size_t written = 0;
  for (const auto& e : events) {
    if (written >= capacity) break;
    out[written++] = {e.stage, e.t_detect_s, e.t_trip_s, e.shed_pu};
  }
  *count = written;
}

}  // namespace

extern "C" {

const char* qss_version(void) { return QSS_ROCOF_VERSION; }

const char* qss_status_name(qss_status status) {
  switch (status) {
    case QSS_OK: return "ok";
    case QSS_ERR_INVALID_ARGUMENT: return "invalid argument";
    case QSS_ERR_PARSE: return "parse error";
    case QSS_ERR_IO: return "io error";
    case QSS_ERR_INTERNAL: return "internal error";
  }
  return "unknown";
}

const char* qss_last_error(void) { return t_last_error.c_str(); }

void qss_signal_spec_init(qss_signal_spec* spec, qss_signal_kind kind) {
  if (!spec) return;
  std::memset(spec, 0, sizeof(*spec));
  spec->kind = kind;
  spec->base_frequency_hz = 50.0;
  spec->amplitude_pu = 1.0;
  spec->duration_s = 2.0;
  spec->step_ratio = 1.2;
  spec->step_time_s = 1.0;
  spec->event_start_s = 1.0;
  spec->event_length_s = 0.02;
}

qss_status qss_waveform_generate(const qss_signal_spec* spec, double sample_rate_hz,
                                 qss_waveform** out) {
  return guarded([&] {
    require(spec && out, "null argument");
    auto* w = new qss_waveform{qss::generate(convert(*spec), sample_rate_hz)};
    *out = w;
  });
}

qss_status qss_waveform_read_csv(const char* path, qss_waveform** out) {
  return guarded([&] {
    require(path && out, "null argument");
    *out = new qss_waveform{qss::read_waveform_csv(path)};
  });
}

qss_status qss_waveform_write_csv(const qss_waveform* waveform, const char* path) {
  return guarded([&] {
    require(waveform && path, "null argument");
    qss::write_waveform_csv(waveform->rep, path);
  });
}

size_t qss_waveform_length(const qss_waveform* waveform) {
  return waveform ? waveform->rep.size() : 0;
}

double qss_waveform_sample_rate(const qss_waveform* waveform) {
  return waveform ? waveform->rep.sample_rate_hz : 0.0;
}

double qss_waveform_start_time(const qss_waveform* waveform) {
  return waveform ? waveform->rep.t0_s : 0.0;
}

qss_status qss_waveform_samples(const qss_waveform* waveform, int phase,
                                const double** data, size_t* length) {
  return guarded([&] {
    require(waveform && data && length, "null argument");
    require(phase >= 0 && phase < 3, "phase must be 0, 1 or 2");
    *data = waveform->rep.phases[static_cast<size_t>(phase)].data();
    *length = waveform->rep.size();
  });
}

void qss_waveform_free(qss_waveform* waveform) { delete waveform; }

void qss_analysis_config_init(qss_analysis_config* config) {
  if (!config) return;
  const qss::AnalysisConfig defaults;
  config->base_frequency_hz = defaults.base_frequency_hz;
  config->epsilon = defaults.epsilon;
  config->window_s = defaults.window_s;
  config->qss_window_s = defaults.qss_window_s;
  config->butterworth_cutoff_hz = defaults.butterworth_cutoff_hz;
  config->washout_tau_s = defaults.washout_tau_s;
  config->pll_kp = defaults.pll_kp;
  config->pll_ki = defaults.pll_ki;
  config->lookback_s = defaults.lookback_s;
}

qss_status qss_analyze(const qss_waveform* waveform, const qss_analysis_config* config,
                       qss_analysis** out) {
  return guarded([&] {
    require(waveform && config && out, "null argument");
    const qss::AnalysisConfig cfg = convert(*config);
    auto a = std::make_unique<qss_analysis>();
    a->rep = qss::run_analysis(waveform->rep, cfg);
    a->base_frequency_hz = cfg.base_frequency_hz;
    for (int s = QSS_SERIES_TIME_S; s <= QSS_SERIES_EFFECTIVE_WINDOW_S; ++s)
      fill_series(*a, static_cast<qss_series>(s));
    *out = a.release();
  });
}

size_t qss_analysis_length(const qss_analysis* analysis) {
  return analysis ? analysis->rep.size() : 0;
}

qss_status qss_analysis_series(const qss_analysis* analysis, qss_series series,
                               const double** data, size_t* length) {
  return guarded([&] {
    require(analysis && data && length, "null argument");
    require(series >= QSS_SERIES_TIME_S && series <= QSS_SERIES_EFFECTIVE_WINDOW_S,
            "unknown series");
    const auto& view = analysis->series[static_cast<size_t>(series)];
    *data = view.data();
    *length = view.size();
  });
}

qss_status qss_analysis_write_csv(const qss_analysis* analysis, const char* path) {
  return guarded([&] {
    require(analysis && path, "null argument");
    qss::write_analysis_csv(analysis->rep, path);
  });
}

qss_status qss_analysis_summarize(const qss_analysis* analysis, qss_analysis_summary* out) {
  return guarded([&] {
    require(analysis && out, "null argument");
    const qss::AnalysisSummary s = qss::summarize(analysis->rep);
    out->samples = s.samples;
    out->max_abs_rocof_conventional_hz_s = s.max_abs_rocof_conventional_hz_s;
    out->max_abs_rocof_qss_hz_s = s.max_abs_rocof_qss_hz_s;
    out->conventional_exceeds_critical = s.conventional_exceeds_critical ? 1 : 0;
    out->qss_exceeds_critical = s.qss_exceeds_critical ? 1 : 0;
    out->max_abs_gamma_prime_pu2 = s.max_abs_gamma_prime_pu2;
    out->min_omega_qss_hz = s.min_omega_qss_hz;
    out->max_omega_qss_hz = s.max_omega_qss_hz;
    out->min_effective_window_s = s.min_effective_window_s;
  });
}

qss_status qss_analysis_write_summary_csv(const qss_analysis* analysis, const char* path) {
  return guarded([&] {
    require(analysis && path, "null argument");
    qss::write_summary_csv(qss::summarize(analysis->rep), path);
  });
}

qss_status qss_analysis_first_recovery(const qss_analysis* analysis, double event_start_s,
                                       double* span_s, int* found) {
  return guarded([&] {
    require(analysis && span_s && found, "null argument");
    const double hold_s = 1.0 / analysis->base_frequency_hz;
    const auto span = qss::first_recovery(analysis->rep.gate, event_start_s, hold_s);
    *found = span.has_value() ? 1 : 0;
    *span_s = span.value_or(0.0);
  });
}

void qss_analysis_free(qss_analysis* analysis) { delete analysis; }

void qss_relay_config_init(qss_relay_config* config, qss_relay_mode mode) {
  if (!config) return;
  const qss::RelayConfig defaults;
  config->mode = mode;
  config->d_omega_1 = defaults.d_omega_1;
  config->d_omega_2 = defaults.d_omega_2;
  config->delta_t_delta_1 = defaults.delta_t_delta_1;
  config->delta_t_delta_2 = defaults.delta_t_delta_2;
  config->delta_ls_1 = defaults.delta_ls_1;
  config->delta_ls_2 = defaults.delta_ls_2;
  config->window_s = mode == QSS_RELAY_QSS ? 0.25 : defaults.window_s;
  config->epsilon = defaults.epsilon;
}

qss_status qss_relay_config_read(const char* path, qss_relay_config* config) {
  return guarded([&] {
    require(path && config, "null argument");
    const qss::RelayConfig cfg = qss::load_relay_config(path);
    config->mode =
        cfg.mode == qss::RelayMode::kQss ? QSS_RELAY_QSS : QSS_RELAY_CONVENTIONAL;
    config->d_omega_1 = cfg.d_omega_1;
    config->d_omega_2 = cfg.d_omega_2;
    config->delta_t_delta_1 = cfg.delta_t_delta_1;
    config->delta_t_delta_2 = cfg.delta_t_delta_2;
    config->delta_ls_1 = cfg.delta_ls_1;
    config->delta_ls_2 = cfg.delta_ls_2;
    config->window_s = cfg.window_s;
    config->epsilon = cfg.epsilon;
  });
}

qss_status qss_relay_simulate(const qss_waveform* waveform,
                              const qss_analysis_config* analysis,
                              const qss_relay_config* config, qss_trip_event* events,
                              size_t capacity, size_t* count) {
  return guarded([&] {
    require(waveform && analysis && config && events && count, "null argument");
    qss::AnalysisConfig cfg = convert(*analysis);
    const qss::RelayConfig relay_cfg = convert(*config);
    relay_cfg.validate();
    if (relay_cfg.mode == qss::RelayMode::kQss) {
      cfg.qss_window_s = relay_cfg.window_s;
      cfg.epsilon = relay_cfg.epsilon;
    } else {
      cfg.window_s = relay_cfg.window_s;
    }
    const qss::AnalysisResult result = qss::run_analysis(waveform->rep, cfg);
    const auto& trace = relay_cfg.mode == qss::RelayMode::kQss ? result.rocof_qss
                                                               : result.rocof_conventional;
    fill_events(qss::simulate_relay(trace, relay_cfg, cfg.base_frequency_hz), events,
                capacity, count);
  });
}

qss_status qss_trip_events_write_csv(const qss_trip_event* events, size_t count,
                                     const char* path) {
  return guarded([&] {
    require(path && (events || count == 0), "null argument");
    std::vector<qss::TripEvent> converted;
    converted.reserve(count);
    for (size_t i = 0; i < count; ++i)
      converted.push_back(
          {events[i].stage, events[i].t_detect_s, events[i].t_trip_s, events[i].shed_pu});
    qss::write_trip_events_csv(converted, path);
  });
}

qss_status qss_compare_schemes(const qss_waveform* waveform,
                               const qss_analysis_config* analysis,
                               const qss_relay_config* conventional,
                               const qss_relay_config* qss_config, qss_compare_report* out) {
  return guarded([&] {
    require(waveform && analysis && conventional && qss_config && out, "null argument");
    const qss::ComparisonReport report =
        qss::compare_schemes(waveform->rep, convert(*conventional), convert(*qss_config),
                             convert(*analysis));
    fill_events(report.conventional.trips, out->conventional_events, 2,
                &out->conventional_count);
    fill_events(report.qss.trips, out->qss_events, 2, &out->qss_count);
    out->conventional_shed_pu = report.conventional.shed_total_pu;
    out->qss_shed_pu = report.qss.shed_total_pu;
    out->stage1_detection_advantage_s =
        report.stage1_detection_advantage_s.value_or(kNan);
  });
}

qss_status qss_sweep_epsilon(const qss_waveform* waveform,
                             const qss_analysis_config* analysis, double event_start_s,
                             const double* epsilons, size_t count, double* recovery_s) {
  return guarded([&] {
    require(waveform && analysis && epsilons && recovery_s, "null argument");
    require(count > 0, "empty threshold range");
    const qss::AnalysisConfig cfg = convert(*analysis);
    const qss::AnalysisResult result = qss::run_analysis(waveform->rep, cfg);
    const auto points = qss::sweep_epsilon(result, event_start_s, {epsilons, count},
                                           cfg.base_frequency_hz);
    for (size_t i = 0; i < points.size(); ++i) recovery_s[i] = points[i].recovery_span_s;
  });
}

qss_status qss_epsilon_recommend(const qss_waveform* waveform,
                                 const qss_analysis_config* analysis, double* epsilon,
                                 int* stationary) {
  return guarded([&] {
    require(waveform && analysis && epsilon && stationary, "null argument");
    const qss::AnalysisResult result =
        qss::run_analysis(waveform->rep, convert(*analysis));
    const qss::EpsilonRecommendation rec = qss::recommend_epsilon(result);
    *epsilon = rec.epsilon;
    *stationary = rec.stationary ? 1 : 0;
  });
}

}  // extern "C"
