// qss-rocof: command-line front end for the qssrocof shared library.
//
// Subcommands: generate | analyze | relay | sweep-epsilon | epsilon-recommend.
// Exit codes: 0 success, 1 usage error, 2 data error.

#include <cmath>
#include <cstdio>
#include <fstream>
#include <memory>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "qssrocof.h"

namespace {

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitData = 2;

int exit_code_for(qss_status status) {
  switch (status) {
    case QSS_OK: return kExitOk;
    case QSS_ERR_INVALID_ARGUMENT: return kExitUsage;
    default: return kExitData;
  }
}

[[noreturn]] void bail(qss_status status) {
  std::fprintf(stderr, "qss-rocof: %s: %s\n", qss_status_name(status), qss_last_error());
  std::exit(exit_code_for(status));
}

void check(qss_status status) {
  if (status != QSS_OK) bail(status);
}

using WaveformPtr = std::unique_ptr<qss_waveform, decltype(&qss_waveform_free)>;
using AnalysisPtr = std::unique_ptr<qss_analysis, decltype(&qss_analysis_free)>;

WaveformPtr read_waveform(const std::string& path) {
  qss_waveform* w = nullptr;
  check(qss_waveform_read_csv(path.c_str(), &w));
  return {w, &qss_waveform_free};
}

struct AnalysisFlags {
  qss_analysis_config config;
  double window_ms = 0.0;      // CLI-facing, milliseconds
  double qss_window_ms = 0.0;

  AnalysisFlags() {
    qss_analysis_config_init(&config);
    window_ms = config.window_s * 1000.0;
    qss_window_ms = config.qss_window_s * 1000.0;
  }

  void add_to(CLI::App& cmd) {
    cmd.add_option("--f-base", config.base_frequency_hz, "Nominal frequency, Hz")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd.add_option("--epsilon", config.epsilon, "Circulation threshold, pu^2")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd.add_option("--window-ms", window_ms, "Conventional rolling window, ms")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd.add_option("--qss-window-ms", qss_window_ms, "Gated rolling window, ms")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd.add_option("--butterworth-cutoff", config.butterworth_cutoff_hz,
                   "First-order Butterworth cutoff, Hz")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd.add_option("--washout-tau", config.washout_tau_s, "Washout time constant, s")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd.add_option("--pll-kp", config.pll_kp, "PLL proportional gain")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd.add_option("--pll-ki", config.pll_ki, "PLL integral gain")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
    cmd.add_option("--lookback", config.lookback_s, "Period-detection lookback, s")
        ->capture_default_str()
        ->check(CLI::PositiveNumber);
  }

  qss_analysis_config resolve() const {
    qss_analysis_config out = config;
    out.window_s = window_ms / 1000.0;
    out.qss_window_s = qss_window_ms / 1000.0;
    return out;
  }
};

struct GenerateArgs {
  std::string kind;
  std::string out;
  double f0 = 50.0;
  double fs = 5000.0;
  double dur = 2.0;
  double amplitude = 1.0;
  double ramp = 0.0;
  double step_ratio = 1.2;
  double step_time = 1.0;
  double noise = 0.0;
  std::uint64_t seed = 0;
  double event_start = 1.0;
  double event_len = 0.02;
  std::vector<std::string> harmonics;
};

int run_generate(const GenerateArgs& args) {
  qss_signal_kind kind;
  if (args.kind == "balanced") kind = QSS_SIGNAL_BALANCED;
  else if (args.kind == "chirp") kind = QSS_SIGNAL_CHIRP;
  else if (args.kind == "amplitude-step") kind = QSS_SIGNAL_AMPLITUDE_STEP;
  else if (args.kind == "polluted") kind = QSS_SIGNAL_POLLUTED;
  else if (args.kind == "transient-event") kind = QSS_SIGNAL_TRANSIENT_EVENT;
  else {
    std::fprintf(stderr, "qss-rocof: unknown --kind '%s'\n", args.kind.c_str());
    return kExitUsage;
  }

  qss_signal_spec spec;
  qss_signal_spec_init(&spec, kind);
  spec.base_frequency_hz = args.f0;
  spec.amplitude_pu = args.amplitude;
  spec.duration_s = args.dur;
  spec.ramp_hz_per_s = args.ramp;
  spec.step_ratio = args.step_ratio;
  spec.step_time_s = args.step_time;
  spec.noise_stddev_pu = args.noise;
  spec.seed = args.seed;
  spec.event_start_s = args.event_start;
  spec.event_length_s = args.event_len;

  std::vector<int> orders;
  std::vector<double> amps;
  for (const auto& h : args.harmonics) {
    const auto colon = h.find(':');
    try {
      if (colon == std::string::npos) throw std::invalid_argument(h);
      orders.push_back(std::stoi(h.substr(0, colon)));
      amps.push_back(std::stod(h.substr(colon + 1)));
    } catch (const std::exception&) {
      std::fprintf(stderr, "qss-rocof: bad --harmonic '%s' (expected ORDER:AMPLITUDE)\n",
                   h.c_str());
      return kExitUsage;
    }
  }
  spec.harmonic_orders = orders.data();
  spec.harmonic_amplitudes = amps.data();
  spec.harmonic_count = orders.size();

  qss_waveform* w = nullptr;
  check(qss_waveform_generate(&spec, args.fs, &w));
  WaveformPtr holder(w, &qss_waveform_free);
  check(qss_waveform_write_csv(w, args.out.c_str()));
  std::printf("wrote %zu samples to %s\n", qss_waveform_length(w), args.out.c_str());
  return kExitOk;
}

void print_summary(const qss_analysis_summary& s) {
  std::printf("samples                          %zu\n", s.samples);
  std::printf("max |RoCoF| conventional         %.6g Hz/s\n",
              s.max_abs_rocof_conventional_hz_s);
  std::printf("max |RoCoF| qss-gated            %.6g Hz/s\n", s.max_abs_rocof_qss_hz_s);
  std::printf("conventional exceeds +/-1 Hz/s   %s\n",
              s.conventional_exceeds_critical ? "yes" : "no");
  std::printf("qss-gated exceeds +/-1 Hz/s      %s\n", s.qss_exceeds_critical ? "yes" : "no");
  std::printf("max |gamma'|                     %.6g pu^2\n", s.max_abs_gamma_prime_pu2);
  std::printf("omega_qss range                  [%.6g, %.6g] Hz\n", s.min_omega_qss_hz,
              s.max_omega_qss_hz);
  std::printf("min effective window             %.6g s\n", s.min_effective_window_s);
}

int run_analyze(const std::string& in, const std::string& out, const std::string& summary,
                const AnalysisFlags& flags) {
  const auto waveform = read_waveform(in);
  const qss_analysis_config config = flags.resolve();
  qss_analysis* a = nullptr;
  check(qss_analyze(waveform.get(), &config, &a));
  AnalysisPtr holder(a, &qss_analysis_free);
  check(qss_analysis_write_csv(a, out.c_str()));
  qss_analysis_summary s;
  check(qss_analysis_summarize(a, &s));
  print_summary(s);
  if (!summary.empty()) check(qss_analysis_write_summary_csv(a, summary.c_str()));
  return kExitOk;
}

int run_relay(const std::string& in, const std::string& conv_path, const std::string& qss_path,
              const std::string& prefix, const AnalysisFlags& flags) {
  const auto waveform = read_waveform(in);

  qss_relay_config conv;
  qss_relay_config_init(&conv, QSS_RELAY_CONVENTIONAL);
  if (!conv_path.empty()) check(qss_relay_config_read(conv_path.c_str(), &conv));
  qss_relay_config qss_cfg;
  qss_relay_config_init(&qss_cfg, QSS_RELAY_QSS);
  if (!qss_path.empty()) check(qss_relay_config_read(qss_path.c_str(), &qss_cfg));

  const qss_analysis_config config = flags.resolve();
  qss_compare_report report;
  check(qss_compare_schemes(waveform.get(), &config, &conv, &qss_cfg, &report));

  check(qss_trip_events_write_csv(report.conventional_events, report.conventional_count,
                                  (prefix + "_conventional_trips.csv").c_str()));
  check(qss_trip_events_write_csv(report.qss_events, report.qss_count,
                                  (prefix + "_qss_trips.csv").c_str()));

  auto print_scheme = [](const char* name, const qss_trip_event* events, size_t count,
                         double shed) {
    std::printf("%s: %zu trip(s), %.3g pu shed\n", name, count, shed);
    for (size_t i = 0; i < count; ++i)
      std::printf("  stage %d: detect %.6g s, trip %.6g s, shed %.3g pu\n", events[i].stage,
                  events[i].t_detect_s, events[i].t_trip_s, events[i].shed_pu);
  };
  print_scheme("conventional", report.conventional_events, report.conventional_count,
               report.conventional_shed_pu);
  print_scheme("qss", report.qss_events, report.qss_count, report.qss_shed_pu);
  if (std::isnan(report.stage1_detection_advantage_s))
    std::printf("stage-1 detection advantage: n/a\n");
  else
    std::printf("stage-1 detection advantage: %.6g s\n",
                report.stage1_detection_advantage_s);
  return kExitOk;
}

int run_sweep(const std::string& in, double event_start, double eps_min, double eps_max,
              std::size_t points, const std::string& out, const AnalysisFlags& flags) {
  if (!(eps_min > 0.0) || !(eps_max > eps_min) || points < 2) {
    std::fprintf(stderr, "qss-rocof: need 0 < --eps-min < --eps-max and --points >= 2\n");
    return kExitUsage;
  }
  const auto waveform = read_waveform(in);
  std::vector<double> epsilons(points);
  const double step = std::log(eps_max / eps_min) / static_cast<double>(points - 1);
  for (std::size_t i = 0; i < points; ++i)
    epsilons[i] = eps_min * std::exp(step * static_cast<double>(i));
  epsilons.back() = eps_max;

  std::vector<double> recovery(points, 0.0);
  const qss_analysis_config config = flags.resolve();
  check(qss_sweep_epsilon(waveform.get(), &config, event_start, epsilons.data(), points,
                          recovery.data()));

  std::ofstream file(out, std::ios::binary);
  if (!file) {
    std::fprintf(stderr, "qss-rocof: cannot open '%s' for writing\n", out.c_str());
    return kExitData;
  }
  file << "epsilon,recovery_span_s\n";
  char buf[64];
  for (std::size_t i = 0; i < points; ++i) {
    std::snprintf(buf, sizeof(buf), "%.17g,%.17g\n", epsilons[i], recovery[i]);
    file << buf;
  }
  std::printf("wrote %zu sweep points to %s\n", points, out.c_str());
  return kExitOk;
}

int run_recommend(const std::string& in, const AnalysisFlags& flags) {
  const auto waveform = read_waveform(in);
  const qss_analysis_config config = flags.resolve();
  double epsilon = 0.0;
  int stationary = 0;
  check(qss_epsilon_recommend(waveform.get(), &config, &epsilon, &stationary));
  if (!stationary)
    std::fprintf(stderr,
                 "warning: record does not look stationary (lone circulation excursion); "
                 "recommendation may be inflated\n");
  std::printf("recommended epsilon: %.6g pu^2\n", epsilon);
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"RoCoF estimation from quasi-steady-state frequency"};
  app.set_version_flag("--version", qss_version());
  app.require_subcommand(1);

  GenerateArgs gen;
  auto* generate = app.add_subcommand("generate", "Write a synthetic three-phase waveform CSV");
  generate->add_option("--kind", gen.kind,
                       "balanced | chirp | amplitude-step | polluted | transient-event")
      ->required();
  generate->add_option("--out", gen.out, "Output CSV path")->required();
  generate->add_option("--f0", gen.f0, "Base frequency, Hz")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  generate->add_option("--fs", gen.fs, "Sample rate, Hz")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  generate->add_option("--dur", gen.dur, "Duration, s")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  generate->add_option("--amplitude", gen.amplitude, "Peak amplitude, pu")
      ->capture_default_str()
      ->check(CLI::PositiveNumber);
  generate->add_option("--ramp", gen.ramp, "Frequency ramp, Hz/s")->capture_default_str();
  generate->add_option("--step-ratio", gen.step_ratio, "Amplitude step ratio")
      ->capture_default_str();
  generate->add_option("--step-time", gen.step_time, "Amplitude step time, s")
      ->capture_default_str();
  generate->add_option("--noise", gen.noise, "Gaussian noise std-dev, pu")
      ->capture_default_str()
      ->check(CLI::NonNegativeNumber);
  generate->add_option("--seed", gen.seed, "Noise seed")->capture_default_str();
  generate->add_option("--harmonic", gen.harmonics,
                       "Harmonic pollution ORDER:AMPLITUDE (repeatable)");
  generate->add_option("--event-start", gen.event_start, "Transient event onset, s")
      ->capture_default_str();
  generate->add_option("--event-len", gen.event_len, "Transient event length, s")
      ->capture_default_str();

  std::string in_path, out_path, summary_path;
  AnalysisFlags analyze_flags;
  auto* analyze = app.add_subcommand("analyze", "Run the full estimation chain on a CSV");
  analyze->add_option("--in", in_path, "Input waveform CSV")->required();
  analyze->add_option("--out", out_path, "Output time-series CSV")->required();
  analyze->add_option("--summary", summary_path, "Optional summary CSV path");
  analyze_flags.add_to(*analyze);

  std::string conv_config, qss_config, relay_prefix = "relay";
  AnalysisFlags relay_flags;
  auto* relay = app.add_subcommand("relay", "Compare conventional and QSS UFLS schemes");
  relay->add_option("--in", in_path, "Input waveform CSV")->required();
  relay->add_option("--conv-config", conv_config, "Conventional relay config file");
  relay->add_option("--qss-config", qss_config, "QSS relay config file");
  relay->add_option("--out-prefix", relay_prefix, "Prefix for trip-event CSVs")
      ->capture_default_str();
  relay_flags.add_to(*relay);

  double event_start = 1.0, eps_min = 1e-4, eps_max = 1.0;
  std::size_t points = 41;
  AnalysisFlags sweep_flags;
  auto* sweep = app.add_subcommand("sweep-epsilon",
                                   "Recovery-span table over a threshold range");
  sweep->add_option("--in", in_path, "Input waveform CSV")->required();
  sweep->add_option("--out", out_path, "Output CSV path")->required();
  sweep->add_option("--event-start", event_start, "Event onset, s")->capture_default_str();
  sweep->add_option("--eps-min", eps_min, "Smallest threshold, pu^2")->capture_default_str();
  sweep->add_option("--eps-max", eps_max, "Largest threshold, pu^2")->capture_default_str();
  sweep->add_option("--points", points, "Number of log-spaced points")->capture_default_str();
  sweep_flags.add_to(*sweep);

  AnalysisFlags recommend_flags;
  auto* recommend = app.add_subcommand(
      "epsilon-recommend", "Suggest a threshold from a stationary record");
  recommend->add_option("--in", in_path, "Input waveform CSV")->required();
  recommend_flags.add_to(*recommend);

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? kExitOk : kExitUsage;
  }

  if (generate->parsed()) return run_generate(gen);
  if (analyze->parsed()) return run_analyze(in_path, out_path, summary_path, analyze_flags);
  if (relay->parsed())
    return run_relay(in_path, conv_config, qss_config, relay_prefix, relay_flags);
  if (sweep->parsed())
    return run_sweep(in_path, event_start, eps_min, eps_max, points, out_path, sweep_flags);
  if (recommend->parsed()) return run_recommend(in_path, recommend_flags);
  return kExitUsage;
}
