/*
 * qssrocof — RoCoF estimation from quasi-steady-state frequency.
 *
 * C interface to the analysis core: synthetic three-phase waveform
 * generation, geometric / QSS frequency estimation, circulation-derivative
 * gating, conventional and gated rolling-average RoCoF, and a two-step
 * semi-adaptive UFLS relay simulation.
 *
 * All functions returning qss_status set a thread-local message retrievable
 * via qss_last_error() on failure.  Objects returned through out-pointers are
 * owned by the caller and released with the matching _free function.  Series
 * pointers returned by accessors alias internal storage and stay valid until
 * the owning object is freed.
 */

#ifndef QSSROCOF_H
#define QSSROCOF_H

#include <stddef.h>
#include <stdint.h>

#ifdef __cplusplus
extern "C" {
#endif

#define QSS_ROCOF_VERSION "0.1.0"

typedef enum qss_status {
  QSS_OK = 0,
  QSS_ERR_INVALID_ARGUMENT = 1,
  QSS_ERR_PARSE = 2,
  QSS_ERR_IO = 3,
  QSS_ERR_INTERNAL = 4,
} qss_status;

const char* qss_version(void);
const char* qss_status_name(qss_status status);
/* Message for the last failing call on this thread; empty string if none. */
const char* qss_last_error(void);

/* ---------------------------------------------------------------- waveforms */

typedef struct qss_waveform qss_waveform;

typedef enum qss_signal_kind {
  QSS_SIGNAL_BALANCED = 0,
  QSS_SIGNAL_CHIRP = 1,
  QSS_SIGNAL_AMPLITUDE_STEP = 2,
  QSS_SIGNAL_POLLUTED = 3,
  QSS_SIGNAL_TRANSIENT_EVENT = 4,
} qss_signal_kind;

typedef struct qss_signal_spec {
  qss_signal_kind kind;
  double base_frequency_hz;
  double amplitude_pu;
  double duration_s;
  double ramp_hz_per_s;   /* chirp: from t=0; transient event: from onset */
  double step_ratio;      /* amplitude step */
  double step_time_s;
  double noise_stddev_pu; /* any kind; Gaussian, per phase */
  uint64_t seed;
  const int* harmonic_orders;          /* polluted; may be NULL */
  const double* harmonic_amplitudes;   /* pu of fundamental */
  size_t harmonic_count;
  double event_start_s;   /* transient event */
  double event_length_s;
} qss_signal_spec;

/* Fills defaults: 50 Hz, 1 pu, 2 s, no pollution, event at 1 s for 20 ms. */
void qss_signal_spec_init(qss_signal_spec* spec, qss_signal_kind kind);

qss_status qss_waveform_generate(const qss_signal_spec* spec, double sample_rate_hz,
                                 qss_waveform** out);
qss_status qss_waveform_read_csv(const char* path, qss_waveform** out);
qss_status qss_waveform_write_csv(const qss_waveform* waveform, const char* path);
size_t qss_waveform_length(const qss_waveform* waveform);
double qss_waveform_sample_rate(const qss_waveform* waveform);
double qss_waveform_start_time(const qss_waveform* waveform);
/* phase: 0=a, 1=b, 2=c. */
qss_status qss_waveform_samples(const qss_waveform* waveform, int phase,
                                const double** data, size_t* length);
void qss_waveform_free(qss_waveform* waveform);

/* ----------------------------------------------------------------- analysis */

typedef struct qss_analysis_config {
  double base_frequency_hz;     /* 50 */
  double epsilon;               /* 0.05 pu^2 */
  double window_s;              /* 0.5  (conventional estimator) */
  double qss_window_s;          /* 0.25 (gated estimator) */
  double butterworth_cutoff_hz; /* 50 */
  double washout_tau_s;         /* 0.01 */
  double pll_kp;                /* 0.2 */
  double pll_ki;                /* 0.03 */
  double lookback_s;            /* 0.1 */
} qss_analysis_config;

void qss_analysis_config_init(qss_analysis_config* config);

typedef struct qss_analysis qss_analysis;

qss_status qss_analyze(const qss_waveform* waveform, const qss_analysis_config* config,
                       qss_analysis** out);
size_t qss_analysis_length(const qss_analysis* analysis);

typedef enum qss_series {
  QSS_SERIES_TIME_S = 0,
  QSS_SERIES_OMEGA_V_RAD_S = 1,
  QSS_SERIES_OMEGA_V_FILTERED_RAD_S = 2,
  QSS_SERIES_RHO_V_RAD_S = 3,
  QSS_SERIES_OMEGA_PLL_RAD_S = 4,
  QSS_SERIES_PERIOD_S = 5,
  QSS_SERIES_OMEGA_QSS_RAD_S = 6,
  QSS_SERIES_GAMMA_PRIME_PU2 = 7,
  QSS_SERIES_TOUT = 8,                /* 0 / 1 */
  QSS_SERIES_ROCOF_CONVENTIONAL_HZ_S = 9,
  QSS_SERIES_ROCOF_QSS_HZ_S = 10,
  QSS_SERIES_ROCOF_QSS_HELD_HZ_S = 11,
  QSS_SERIES_EFFECTIVE_WINDOW_S = 12,
} qss_series;

/* Invalid / undefined samples read as NaN (tout reads as 0). */
qss_status qss_analysis_series(const qss_analysis* analysis, qss_series series,
                               const double** data, size_t* length);
qss_status qss_analysis_write_csv(const qss_analysis* analysis, const char* path);

typedef struct qss_analysis_summary {
  size_t samples;
  double max_abs_rocof_conventional_hz_s;
  double max_abs_rocof_qss_hz_s;
  int conventional_exceeds_critical; /* |RoCoF| above 1 Hz/s */
  int qss_exceeds_critical;
  double max_abs_gamma_prime_pu2;
  double min_omega_qss_hz;
  double max_omega_qss_hz;
  double min_effective_window_s;
} qss_analysis_summary;

qss_status qss_analysis_summarize(const qss_analysis* analysis, qss_analysis_summary* out);
qss_status qss_analysis_write_summary_csv(const qss_analysis* analysis, const char* path);

/* Span after event_start_s during which |gamma'| > epsilon (one-nominal-
 * period stability hold).  found=0 when the gate never drops. */
qss_status qss_analysis_first_recovery(const qss_analysis* analysis, double event_start_s,
                                       double* span_s, int* found);
void qss_analysis_free(qss_analysis* analysis);

/* -------------------------------------------------------------------- relay */

typedef enum qss_relay_mode {
  QSS_RELAY_CONVENTIONAL = 0,
  QSS_RELAY_QSS = 1,
} qss_relay_mode;

typedef struct qss_relay_config {
  qss_relay_mode mode;
  double d_omega_1;      /* pu/s, positive magnitude */
  double d_omega_2;
  double delta_t_delta_1; /* s */
  double delta_t_delta_2;
  double delta_ls_1;     /* pu of local load */
  double delta_ls_2;
  double window_s;
  double epsilon;        /* pu^2, qss mode */
} qss_relay_config;

/* Reference defaults: thresholds 0.012 / 0.024 pu/s, 0.2 s delays, 0.2 pu
 * sheds; window 0.5 s (conventional) or 0.25 s (qss). */
void qss_relay_config_init(qss_relay_config* config, qss_relay_mode mode);
/* `key = value` file with keys matching the struct field names. */
qss_status qss_relay_config_read(const char* path, qss_relay_config* config);

typedef struct qss_trip_event {
  int stage;
  double t_detect_s;
  double t_trip_s;
  double shed_pu;
} qss_trip_event;

/* Runs the pipeline on the waveform and folds the relay over the estimator
 * selected by config->mode.  Writes up to `capacity` events (two stages). */
qss_status qss_relay_simulate(const qss_waveform* waveform,
                              const qss_analysis_config* analysis,
                              const qss_relay_config* config, qss_trip_event* events,
                              size_t capacity, size_t* count);
qss_status qss_trip_events_write_csv(const qss_trip_event* events, size_t count,
                                     const char* path);

typedef struct qss_compare_report {
  qss_trip_event conventional_events[2];
  size_t conventional_count;
  qss_trip_event qss_events[2];
  size_t qss_count;
  double conventional_shed_pu;
  double qss_shed_pu;
  /* t_detect(conventional) - t_detect(qss) for stage 1; NaN unless both
   * schemes tripped stage 1. */
  double stage1_detection_advantage_s;
} qss_compare_report;

qss_status qss_compare_schemes(const qss_waveform* waveform,
                               const qss_analysis_config* analysis,
                               const qss_relay_config* conventional,
                               const qss_relay_config* qss, qss_compare_report* out);

/* ---------------------------------------------------------- epsilon tooling */

/* recovery_s[i]: gate-unusable span after event_start_s at epsilons[i];
 * 0 when the gate never drops, trace-end span when it never recovers. */
qss_status qss_sweep_epsilon(const qss_waveform* waveform,
                             const qss_analysis_config* analysis, double event_start_s,
                             const double* epsilons, size_t count, double* recovery_s);

/* Threshold suggestion from a stationary record: 10 x max |gamma'|.
 * stationary=0 flags a suspected transient in the record. */
qss_status qss_epsilon_recommend(const qss_waveform* waveform,
                                 const qss_analysis_config* analysis, double* epsilon,
                                 int* stationary);

#ifdef __cplusplus
}
#endif

#endif /* QSSROCOF_H */
