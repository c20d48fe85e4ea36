#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

namespace sdkey {

inline constexpr const char* kVersion = "0.3.0";

struct WilsonInterval {
  double lo = 0.0;
  double hi = 1.0;
  double half_width() const { return 0.5 * (hi - lo); }
};

/// Wilson score interval for `successes` out of `trials` (z = 1.96 gives 95%).
WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z = 1.96);

struct Metric {
  std::string name;
  double value = 0.0;
  /// Exact enumeration value, as opposed to a Monte-Carlo estimate.
  bool exact = false;
  std::optional<WilsonInterval> interval;
  std::size_t count = 0;
  std::size_t trials = 0;
};

/// Metrics of one run plus an echo of the configuration that produced it.
struct SimulationReport {
  std::vector<std::pair<std::string, std::string>> config;
  std::vector<Metric> metrics;
  std::uint64_t seed = 0;
  std::string version = kVersion;
  /// Measured but never serialized, so reports stay byte-identical.
  double wall_seconds = 0.0;

  void add_exact(const std::string& name, double value);
  void add_estimate(const std::string& name, double value, std::size_t trials);
  void add_proportion(const std::string& name, std::size_t count, std::size_t trials);
  void echo(const std::string& key, const std::string& value);

  const Metric& metric(const std::string& name) const;
  bool has(const std::string& name) const;
};

/// "%.12g"
std::string format_number(double x);
/// Quotes a CSV field when it contains a comma, quote or newline.
std::string csv_field(const std::string& s);

/// Config echo as `# key = value` comment lines, then the header
/// `metric,kind,value,lo,hi,count,trials` and one row per metric.
void write_report_csv(std::ostream& os, const SimulationReport& report);

}  // namespace sdkey
