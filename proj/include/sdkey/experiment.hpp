#pragma once

#include <cstddef>
#include <cstdint>
#include <iosfwd>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "sdkey/bounds.hpp"
#include "sdkey/channel.hpp"
#include "sdkey/report.hpp"
#include "sdkey/round1.hpp"
#include "sdkey/round2.hpp"

namespace sdkey {

enum class Task {
  common_lb,
  common_ub,
  degraded,
  private_inner,
  private_outer,
  corollary2,
  stuck_at_closed_form,
  modadd_closed_form,
  sim_round1,
  sim_round2,
  sweep,
};

std::string task_name(Task task);
Task parse_task(const std::string& name);

/// `name:key=value,key=value`, e.g. `modulo-additive:p_s=0,p1=0.1,p2=0.3`.
struct BuilderSpec {
  std::string name;
  std::vector<std::pair<std::string, std::string>> params;

  static BuilderSpec parse(const std::string& text);
  std::string to_string() const;
  std::optional<std::string> get(const std::string& key) const;
  double number(const std::string& key, double fallback) const;
  /// Replaces an existing key or appends a new one.
  void set(const std::string& key, const std::string& value);
};

/// Channels: stuck-at (p, eve = uninformative | reads-memory),
/// modulo-additive (p_s, p1, p2, coupling = independent | cascade),
/// parallel-bsc (p_s, p1, p2, p_e, tap = sum | x2-side). Any of them accepts
/// constant-eve=1.
SdMacSpec build_channel(const BuilderSpec& b);
/// Round-one schemes: trivial, copy-input (alpha), single-input (alpha).
AuxiliaryScheme build_aux_scheme(const BuilderSpec& b, const SdMacSpec& spec);
/// Round-two schemes: test-channel (q1, q2), parallel-test-channel (q1, q2, bias).
Round2Scheme build_round2_scheme(const BuilderSpec& b, const SdMacSpec& spec);

struct ExperimentConfig {
  Task task = Task::common_lb;
  std::optional<BuilderSpec> channel;
  std::string channel_file;
  std::optional<BuilderSpec> scheme;
  std::string scheme_file;

  double r_c = 1.0;
  bool proof_consistent = false;
  double tolerance = 1e-9;
  SearchConfig search;
  Round1Config round1;
  Round2Config round2;

  std::size_t trials = 1000;
  std::size_t codebook_batch = 0;
  bool exact = false;
  std::uint64_t seed = 1;
  /// Worker threads. Never part of the output.
  std::size_t threads = 1;
  std::string out;
  /// Optional path for the achieving scheme of a bound task.
  std::string scheme_out;

  Task sweep_task = Task::common_lb;
  std::string sweep_axis;
  std::vector<std::string> sweep_values;

  /// Sets one parameter by name; the same names are used by config files,
  /// `--set key=value` and sweep axes. Throws ValidationError naming the key.
  void set(const std::string& key, const std::string& value);
  /// Loads a reference configuration (round1-reference, round1-leakage-trend,
  /// round1-error-trend, round2-reference, round2-exact-reference).
  void apply_preset(const std::string& name);

  /// Checks the fields the task needs.
  void validate() const;
  /// Parameters relevant to `task`, in a fixed order.
  std::vector<std::pair<std::string, std::string>> echo() const;
};

/// Names accepted by ExperimentConfig::set that a sweep may vary.
bool is_sweepable(const std::string& key);

// Config file: the structured-text dialect of channel specs.
//
//   format = 1
//   task = sim-round1
//   channel = modulo-additive:p_s=0,p1=0.1,p2=0.3
//   n = 6
//   [sweep]
//   task = common-lb
//   axis = channel.p
//   values = 0.1 0.2 0.3
//
// Top-level keys go through ExperimentConfig::set in file order.
ExperimentConfig read_experiment_config(std::istream& in, const std::string& source = "<stream>");
ExperimentConfig load_experiment_config(const std::string& path);

SdMacSpec resolve_channel(const ExperimentConfig& cfg);

/// Runs a single (non-sweep) task.
SimulationReport run(const ExperimentConfig& cfg);

struct SweepTable {
  std::string axis;
  std::vector<std::string> values;
  std::vector<SimulationReport> rows;
};

/// Runs cfg.sweep_task once per axis value. Point i uses seed
/// derive_seed(cfg.seed, kSweepStream, i); rows come back in axis order.
SweepTable sweep(const ExperimentConfig& cfg);

inline constexpr std::uint64_t kSweepStream = 0x5eeb;

/// Header comments, then `<axis>,<metric>...` with `_lo`/`_hi` columns for
/// proportions; one row per axis value.
void write_sweep_csv(std::ostream& os, const ExperimentConfig& cfg, const SweepTable& table);

/// Runs the task (or sweep) and writes its CSV to `os`.
void run_to_csv(const ExperimentConfig& cfg, std::ostream& os);

}  // namespace sdkey
