#ifndef QSS_TYPES_HPP
#define QSS_TYPES_HPP

#include <cmath>
#include <cstddef>
#include <cstdint>
#include <numbers>
#include <stdexcept>
#include <string>
#include <vector>

namespace qss {

inline constexpr double kTwoPi = 2.0 * std::numbers::pi;

/// Thrown on malformed input files; the message carries the file name and
/// the 1-based line number of the offending row.
class ParseError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// Thrown when a file cannot be opened or written.
class IoError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// 3-vector in the stationary alpha/beta/gamma frame (x=alpha, y=beta, z=gamma).
struct Vec3 {
  double x = 0.0;
  double y = 0.0;
  double z = 0.0;
};

inline Vec3 operator+(Vec3 a, Vec3 b) { return {a.x + b.x, a.y + b.y, a.z + b.z}; }
inline Vec3 operator-(Vec3 a, Vec3 b) { return {a.x - b.x, a.y - b.y, a.z - b.z}; }
inline Vec3 operator*(double s, Vec3 v) { return {s * v.x, s * v.y, s * v.z}; }

inline double dot(Vec3 a, Vec3 b) { return a.x * b.x + a.y * b.y + a.z * b.z; }

inline Vec3 cross(Vec3 a, Vec3 b) {
  return {a.y * b.z - a.z * b.y, a.z * b.x - a.x * b.z, a.x * b.y - a.y * b.x};
}

inline double norm2(Vec3 v) { return dot(v, v); }
inline double norm(Vec3 v) { return std::sqrt(norm2(v)); }

/// Unit tag for scalar per-sample series.
enum class Unit {
  kRadPerSecond,
  kHertz,
  kPerUnit,        // on a nominal frequency base
  kHertzPerSecond, // frequency derivatives
  kPerUnitPerSecond,
};

/// Uniformly sampled scalar series with a per-sample validity mask.
/// Values at invalid samples are finite placeholders and carry no meaning.
struct FrequencyTrace {
  double sample_rate_hz = 0.0;
  double t0_s = 0.0;
  Unit unit = Unit::kRadPerSecond;
  std::vector<double> values;
  std::vector<std::uint8_t> valid;

  std::size_t size() const { return values.size(); }
  double time(std::size_t i) const { return t0_s + static_cast<double>(i) / sample_rate_hz; }

  /// First valid sample index; size() when the trace is entirely invalid.
  std::size_t valid_from() const {
    for (std::size_t i = 0; i < valid.size(); ++i)
      if (valid[i]) return i;
    return valid.size();
  }
};

inline FrequencyTrace make_trace(double fs, double t0, std::size_t n, Unit unit) {
  FrequencyTrace t;
  t.sample_rate_hz = fs;
  t.t0_s = t0;
  t.unit = unit;
  t.values.assign(n, 0.0);
  t.valid.assign(n, 1);
  return t;
}

/// rad/s -> Hz, exact by definition.
FrequencyTrace to_hertz(const FrequencyTrace& trace);
/// Hz -> pu on the given frequency base.
FrequencyTrace to_per_unit(const FrequencyTrace& trace, double base_frequency_hz);

}  // namespace qss

#endif  // QSS_TYPES_HPP
