#include "sdkey/report.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <ostream>

#include "sdkey/error.hpp"

namespace sdkey {

WilsonInterval wilson_interval(std::size_t successes, std::size_t trials, double z) {
  if (trials == 0) return {};
  const double n = static_cast<double>(trials);
  const double p = static_cast<double>(successes) / n;
  const double z2 = z * z;
  const double denom = 1.0 + z2 / n;
  const double center = (p + z2 / (2.0 * n)) / denom;
  const double half = z * std::sqrt(p * (1.0 - p) / n + z2 / (4.0 * n * n)) / denom;
  return {std::max(0.0, center - half), std::min(1.0, center + half)};
}

void SimulationReport::add_exact(const std::string& name, double value) {
  metrics.push_back(Metric{name, value, true, std::nullopt, 0, 0});
}

void SimulationReport::add_estimate(const std::string& name, double value, std::size_t trials) {
  metrics.push_back(Metric{name, value, false, std::nullopt, 0, trials});
}

void SimulationReport::add_proportion(const std::string& name, std::size_t count, std::size_t trials) {
  const double v = trials ? static_cast<double>(count) / static_cast<double>(trials) : 0.0;
  metrics.push_back(Metric{name, v, false, wilson_interval(count, trials), count, trials});
}

void SimulationReport::echo(const std::string& key, const std::string& value) { config.emplace_back(key, value); }

const Metric& SimulationReport::metric(const std::string& name) const {
  for (const auto& m : metrics) {
    if (m.name == name) return m;
  }
  throw ValidationError("report has no metric '" + name + "'");
}

bool SimulationReport::has(const std::string& name) const {
  for (const auto& m : metrics) {
    if (m.name == name) return true;
  }
  return false;
}

std::string format_number(double x) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.12g", x);
  return buf;
}

std::string csv_field(const std::string& s) {
  if (s.find_first_of(",\"\n") == std::string::npos) return s;
  std::string out = "\"";
  for (char c : s) {
    if (c == '"') out += '"';
    out += c;
  }
  return out + '"';
}

void write_report_csv(std::ostream& os, const SimulationReport& r) {
  os << "# sdkey " << r.version << '\n';
  os << "# seed = " << r.seed << '\n';
  for (const auto& [k, v] : r.config) os << "# " << k << " = " << v << '\n';
  os << "metric,kind,value,lo,hi,count,trials\n";
  for (const auto& m : r.metrics) {
    os << csv_field(m.name) << ',' << (m.exact ? "exact" : "estimated") << ',' << format_number(m.value) << ',';
    if (m.interval) os << format_number(m.interval->lo) << ',' << format_number(m.interval->hi);
    else os << ',';
    os << ',';
    if (!m.exact && m.interval) os << m.count;
    os << ',';
    if (!m.exact) os << m.trials;
    os << '\n';
  }
}

}  // namespace sdkey
