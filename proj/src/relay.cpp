#include "qss/relay.hpp"

#include <charconv>
#include <fstream>

#include "qss/pipeline.hpp"

namespace qss {

void RelayConfig::validate() const {
  if (!(d_omega_1 > 0.0) || !(d_omega_2 > d_omega_1))
    throw std::invalid_argument("relay config: need 0 < d_omega_1 < d_omega_2");
  if (delta_t_delta_1 < 0.0 || delta_t_delta_2 < 0.0)
    throw std::invalid_argument("relay config: trip delays must be >= 0");
  if (!(delta_ls_1 > 0.0 && delta_ls_1 <= 1.0) || !(delta_ls_2 > 0.0 && delta_ls_2 <= 1.0))
    throw std::invalid_argument("relay config: shed fractions must lie in (0, 1]");
  if (!(window_s > 0.0)) throw std::invalid_argument("relay config: window_s must be positive");
  if (mode == RelayMode::kQss && !(epsilon > 0.0))
    throw std::invalid_argument("relay config: epsilon must be positive in qss mode");
}

RelayConfig load_relay_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path + "' for reading");

  RelayConfig cfg;
  std::string line;
  std::size_t line_no = 0;
  while (std::getline(in, line)) {
    ++line_no;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    const std::size_t hash = line.find('#');
    if (hash != std::string::npos) line.erase(hash);
    std::size_t begin = line.find_first_not_of(" \t");
    if (begin == std::string::npos) continue;
    const std::size_t eq = line.find('=');
    if (eq == std::string::npos)
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected 'key = value'");
    auto strip = [](std::string s) {
      const std::size_t a = s.find_first_not_of(" \t");
      const std::size_t b = s.find_last_not_of(" \t");
      return a == std::string::npos ? std::string() : s.substr(a, b - a + 1);
    };
    const std::string key = strip(line.substr(0, eq));
    const std::string value = strip(line.substr(eq + 1));
    if (key.empty() || value.empty())
      throw ParseError(path + ":" + std::to_string(line_no) + ": expected 'key = value'");

    if (key == "mode") {
      if (value == "conventional")
        cfg.mode = RelayMode::kConventional;
      else if (value == "qss")
        cfg.mode = RelayMode::kQss;
      else
        throw ParseError(path + ":" + std::to_string(line_no) + ": unknown mode '" + value +
                         "' (expected conventional or qss)");
      continue;
    }

    double parsed = 0.0;
    const char* first = value.data();
    auto [ptr, ec] = std::from_chars(first, first + value.size(), parsed);
    if (ec != std::errc() || ptr != first + value.size())
      throw ParseError(path + ":" + std::to_string(line_no) + ": bad number '" + value + "'");

    if (key == "d_omega_1") cfg.d_omega_1 = parsed;
    else if (key == "d_omega_2") cfg.d_omega_2 = parsed;
    else if (key == "delta_t_delta_1") cfg.delta_t_delta_1 = parsed;
    else if (key == "delta_t_delta_2") cfg.delta_t_delta_2 = parsed;
    else if (key == "delta_ls_1") cfg.delta_ls_1 = parsed;
    else if (key == "delta_ls_2") cfg.delta_ls_2 = parsed;
    else if (key == "window_s") cfg.window_s = parsed;
    else if (key == "epsilon") cfg.epsilon = parsed;
    else
      throw ParseError(path + ":" + std::to_string(line_no) + ": unknown key '" + key + "'");
  }
  cfg.validate();
  return cfg;
}

void write_trip_events_csv(const std::vector<TripEvent>& events, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError("cannot open '" + path + "' for writing");
  out << "stage,t_detect_s,t_trip_s,shed_pu\n";
  char buf[32];
  auto fmt = [&buf](double v) {
    auto [end, ec] = std::to_chars(buf, buf + sizeof(buf), v);
    (void)ec;
    return std::string(buf, end);
  };
  for (const auto& e : events)
    out << e.stage << ',' << fmt(e.t_detect_s) << ',' << fmt(e.t_trip_s) << ','
        << fmt(e.shed_pu) << '\n';
  if (!out) throw IoError("write failed for '" + path + "'");
}

UflsRelay::UflsRelay(const RelayConfig& config) {
  config.validate();
  stages_[0] = {config.d_omega_1, config.delta_t_delta_1, config.delta_ls_1,
                false, false, false, 0.0, 0.0};
  stages_[1] = {config.d_omega_2, config.delta_t_delta_2, config.delta_ls_2,
                false, false, false, 0.0, 0.0};
}

std::vector<TripEvent> UflsRelay::step(double rocof_pu_s, bool defined, double t_s) {
  if (started_ && !(t_s > t_prev_))
    throw std::invalid_argument("relay: time must be strictly increasing");
  const double dt = started_ ? t_s - t_prev_ : 0.0;
  started_ = true;
  t_prev_ = t_s;

  std::vector<TripEvent> trips;
  for (int s = 0; s < 2; ++s) {
    Stage& stage = stages_[s];
    if (stage.tripped) continue;
    if (!defined) {
      // Gated-out intervals carry no information: the armed timer freezes.
      stage.crediting = false;
      continue;
    }
    if (rocof_pu_s <= -stage.threshold) {
      if (!stage.armed) {
        stage.armed = true;
        stage.t_detect_s = t_s;
        stage.armed_time_s = 0.0;
      } else if (stage.crediting) {
        stage.armed_time_s += dt;
      }
      stage.crediting = true;
      if (stage.armed_time_s >= stage.delay_s - 1e-12) {
        stage.tripped = true;
        trips.push_back({s + 1, stage.t_detect_s, t_s, stage.shed_pu});
      }
    } else {
      stage.armed = false;
      stage.crediting = false;
    }
  }
  return trips;
}

std::vector<TripEvent> simulate_relay(const RocofTrace& rocof, const RelayConfig& config,
                                      double base_frequency_hz) {
  if (!(base_frequency_hz > 0.0))
    throw std::invalid_argument("simulate_relay: base frequency must be positive");
  if (rocof.unit != Unit::kHertzPerSecond)
    throw std::invalid_argument("simulate_relay: trace must be Hz/s");
  UflsRelay relay(config);
  std::vector<TripEvent> events;
  for (std::size_t i = 0; i < rocof.size(); ++i) {
    const bool defined = rocof.defined[i] != 0;
    const double pu = defined ? rocof.values[i] / base_frequency_hz : 0.0;
    for (auto& e : relay.step(pu, defined, rocof.time(i))) events.push_back(e);
  }
  return events;
}

ComparisonReport compare_schemes(const SampledWaveform& waveform, const RelayConfig& conv_cfg,
                                 const RelayConfig& qss_cfg, const AnalysisConfig& analysis) {
  conv_cfg.validate();
  qss_cfg.validate();

  AnalysisConfig cfg = analysis;
  cfg.window_s = conv_cfg.window_s;
  cfg.qss_window_s = qss_cfg.window_s;
  cfg.epsilon = qss_cfg.epsilon;
  const AnalysisResult result = run_analysis(waveform, cfg);

  ComparisonReport report;
  report.conventional.trips =
      simulate_relay(result.rocof_conventional, conv_cfg, cfg.base_frequency_hz);
  report.qss.trips = simulate_relay(result.rocof_qss, qss_cfg, cfg.base_frequency_hz);
  for (const auto& e : report.conventional.trips) report.conventional.shed_total_pu += e.shed_pu;
  for (const auto& e : report.qss.trips) report.qss.shed_total_pu += e.shed_pu;

  auto stage1 = [](const std::vector<TripEvent>& events) -> const TripEvent* {
    for (const auto& e : events)
      if (e.stage == 1) return &e;
    return nullptr;
  };
  const TripEvent* conv1 = stage1(report.conventional.trips);
  const TripEvent* qss1 = stage1(report.qss.trips);
  if (conv1 && qss1)
    report.stage1_detection_advantage_s = conv1->t_detect_s - qss1->t_detect_s;
  return report;
}

}  // namespace qss
