#include "sdkey/experiment.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <iostream>
#include <sstream>

#include "sdkey/error.hpp"
#include "sdkey/parallel.hpp"
#include "sdkey/presets.hpp"
#include "sdkey/rng.hpp"
#include "sdkey/spec_io.hpp"
#include "sdkey/text_format.hpp"

namespace sdkey {

namespace {

const std::vector<std::pair<Task, std::string>>& task_names() {
  static const std::vector<std::pair<Task, std::string>> names{
      {Task::common_lb, "common-lb"},
      {Task::common_ub, "common-ub"},
      {Task::degraded, "degraded"},
      {Task::private_inner, "private-inner"},
      {Task::private_outer, "private-outer"},
      {Task::corollary2, "corollary2"},
      {Task::stuck_at_closed_form, "stuck-at-closed-form"},
      {Task::modadd_closed_form, "modadd-closed-form"},
      {Task::sim_round1, "sim-round1"},
      {Task::sim_round2, "sim-round2"},
      {Task::sweep, "sweep"},
  };
  return names;
}

std::string field(const std::string& key) { return "parameter '" + key + "'"; }

double to_double(const std::string& key, const std::string& value) { return parse_double(value, field(key)); }

std::size_t to_count(const std::string& key, const std::string& value) {
  const long long v = parse_int(value, field(key));
  if (v < 0) throw ValidationError(field(key) + " must be nonnegative");
  return static_cast<std::size_t>(v);
}

bool to_bool(const std::string& key, const std::string& value) {
  if (value == "1" || value == "true" || value == "yes" || value == "on") return true;
  if (value == "0" || value == "false" || value == "no" || value == "off") return false;
  throw ValidationError(field(key) + ": expected a boolean, got '" + value + "'");
}

Decoder to_decoder(const std::string& value) {
  if (value == "typicality") return Decoder::typicality;
  if (value == "ml" || value == "max-likelihood") return Decoder::max_likelihood;
  throw ValidationError(field("decoder") + ": expected typicality or ml, got '" + value + "'");
}

std::string decoder_text(Decoder d) { return d == Decoder::typicality ? "typicality" : "ml"; }

TieBreak to_tie_break(const std::string& value) {
  if (value == "uniform") return TieBreak::uniform;
  if (value == "lowest-index" || value == "lowest") return TieBreak::lowest_index;
  throw ValidationError(field("tie_break") + ": expected uniform or lowest-index, got '" + value + "'");
}

std::string tie_break_text(TieBreak t) { return t == TieBreak::uniform ? "uniform" : "lowest-index"; }

std::string num(double x) { return exact_decimal(x); }

std::vector<std::string> split_values(const std::string& text) {
  std::string s = text;
  std::replace(s.begin(), s.end(), ',', ' ');
  return split_ws(s);
}

void check_keys(const BuilderSpec& b, std::initializer_list<const char*> allowed) {
  for (const auto& [k, v] : b.params) {
    bool ok = k == "constant-eve";
    for (const char* a : allowed) ok = ok || k == a;
    if (!ok) throw ValidationError("unknown parameter '" + k + "' for builder '" + b.name + "'");
  }
}

double required(const BuilderSpec& b, const std::string& key) {
  const auto v = b.get(key);
  if (!v) throw ValidationError("builder '" + b.name + "' needs parameter '" + key + "'");
  return parse_double(*v, "builder '" + b.name + "' parameter '" + key + "'");
}

bool needs_aux(Task t) { return t == Task::degraded || t == Task::sim_round1; }
bool needs_round2(Task t) {
  return t == Task::private_inner || t == Task::private_outer || t == Task::corollary2 || t == Task::sim_round2;
}

AuxiliaryScheme resolve_aux(const ExperimentConfig& cfg, const SdMacSpec& spec) {
  if (cfg.scheme) return build_aux_scheme(*cfg.scheme, spec);
  if (!cfg.scheme_file.empty()) {
    std::ifstream in(cfg.scheme_file);
    if (!in) throw ValidationError("cannot open " + cfg.scheme_file);
    return read_aux_scheme(in, spec, cfg.scheme_file);
  }
  throw ValidationError("task " + task_name(cfg.task) + " needs a round-one scheme (--scheme or --scheme-file)");
}

Round2Scheme resolve_round2(const ExperimentConfig& cfg, const SdMacSpec& spec) {
  if (cfg.scheme) return build_round2_scheme(*cfg.scheme, spec);
  if (!cfg.scheme_file.empty()) {
    std::ifstream in(cfg.scheme_file);
    if (!in) throw ValidationError("cannot open " + cfg.scheme_file);
    return read_round2_scheme(in, spec, cfg.scheme_file);
  }
  throw ValidationError("task " + task_name(cfg.task) + " needs a round-two scheme (--scheme or --scheme-file)");
}

void add_rate_point(SimulationReport& rep, const RatePoint& rp) {
  const std::pair<const char*, const std::optional<double>*> rates[] = {
      {"r0", &rp.r0}, {"r1", &rp.r1}, {"r2", &rp.r2}};
  const std::optional<double>* raws[] = {&rp.raw_r0, &rp.raw_r1, &rp.raw_r2};
  for (int i = 0; i < 3; ++i) {
    if (!*rates[i].second) continue;
    rep.add_exact(rates[i].first, **rates[i].second);
    if (*raws[i]) rep.add_exact(std::string("raw_") + rates[i].first, **raws[i]);
  }
  rep.add_exact("feasible", rp.feasible ? 1.0 : 0.0);
  for (const auto& [name, value] : rp.terms) rep.add_exact(name, value);
  for (const auto& c : rp.constraints) {
    rep.add_exact(c.name + ".lhs", c.lhs);
    rep.add_exact(c.name + ".rhs", c.rhs);
    rep.add_exact(c.name + ".satisfied", c.satisfied ? 1.0 : 0.0);
  }
}

void save_achieving_scheme(const RatePoint& rp, const std::string& path) {
  if (path.empty()) return;
  std::ofstream os(path);
  if (!os) throw ValidationError("cannot write " + path);
  if (const auto* a = std::get_if<AuxiliaryScheme>(&rp.scheme)) {
    write_aux_scheme(os, *a);
  } else if (const auto* r = std::get_if<Round2Scheme>(&rp.scheme)) {
    write_round2_scheme(os, *r);
  } else if (const auto* law = std::get_if<InputLaw>(&rp.scheme)) {
    os << "# input law p(x1 x2 | s)\n" << to_text(law->law);
  } else {
    os << "# no achieving scheme\n";
  }
}

BoundOptions bound_options(const ExperimentConfig& cfg) {
  BoundOptions o;
  o.proof_consistent = cfg.proof_consistent;
  o.tolerance = cfg.tolerance;
  return o;
}

SearchConfig search_config(const ExperimentConfig& cfg) {
  SearchConfig s = cfg.search;
  s.seed = cfg.seed;
  s.threads = cfg.threads;
  s.tolerance = cfg.tolerance;
  s.proof_consistent = cfg.proof_consistent;
  return s;
}

void copy_metrics(SimulationReport& to, const SimulationReport& from) {
  to.metrics.insert(to.metrics.end(), from.metrics.begin(), from.metrics.end());
}

void check_trials(const ExperimentConfig& cfg) {
  if (cfg.trials == 0) throw ValidationError(field("trials") + " must be >= 1");
}

}  // namespace

std::string task_name(Task task) {
  for (const auto& [t, name] : task_names()) {
    if (t == task) return name;
  }
  return "?";
}

Task parse_task(const std::string& name) {
  for (const auto& [t, n] : task_names()) {
    if (n == name) return t;
  }
  std::string known;
  for (const auto& [t, n] : task_names()) known += (known.empty() ? "" : ", ") + n;
  throw ValidationError(field("task") + ": unknown task '" + name + "' (known: " + known + ")");
}

BuilderSpec BuilderSpec::parse(const std::string& text) {
  BuilderSpec b;
  const std::string t = trim(text);
  const auto colon = t.find(':');
  b.name = trim(t.substr(0, colon));
  if (b.name.empty()) throw ValidationError("builder '" + text + "' has no name");
  if (colon == std::string::npos) return b;
  std::istringstream is(t.substr(colon + 1));
  std::string item;
  while (std::getline(is, item, ',')) {
    item = trim(item);
    if (item.empty()) continue;
    const auto eq = item.find('=');
    if (eq == std::string::npos) throw ValidationError("builder '" + text + "': expected key=value, got '" + item + "'");
    b.set(trim(item.substr(0, eq)), trim(item.substr(eq + 1)));
  }
  return b;
}

std::string BuilderSpec::to_string() const {
  std::string s = name;
  for (std::size_t i = 0; i < params.size(); ++i) {
    s += (i == 0 ? ":" : ",") + params[i].first + "=" + params[i].second;
  }
  return s;
}

std::optional<std::string> BuilderSpec::get(const std::string& key) const {
  for (const auto& [k, v] : params) {
    if (k == key) return v;
  }
  return std::nullopt;
}

double BuilderSpec::number(const std::string& key, double fallback) const {
  const auto v = get(key);
  return v ? parse_double(*v, "builder '" + name + "' parameter '" + key + "'") : fallback;
}

void BuilderSpec::set(const std::string& key, const std::string& value) {
  for (auto& [k, v] : params) {
    if (k == key) {
      v = value;
      return;
    }
  }
  params.emplace_back(key, value);
}

SdMacSpec build_channel(const BuilderSpec& b) {
  auto finish = [&](SdMacSpec spec) {
    const auto ce = b.get("constant-eve");
    if (ce && to_bool("constant-eve", *ce)) return with_constant_eavesdropper(spec);
    return spec;
  };
  if (b.name == "stuck-at") {
    check_keys(b, {"p", "eve"});
    const std::string eve = b.get("eve").value_or("uninformative");
    EveMode mode;
    if (eve == "uninformative") mode = EveMode::uninformative;
    else if (eve == "reads-memory") mode = EveMode::reads_memory;
    else throw ValidationError("stuck-at: eve must be uninformative or reads-memory, got '" + eve + "'");
    return finish(build_stuck_at(required(b, "p"), mode));
  }
  if (b.name == "modulo-additive") {
    check_keys(b, {"p_s", "p1", "p2", "coupling"});
    const std::string c = b.get("coupling").value_or("independent");
    NoiseCoupling coupling;
    if (c == "independent") coupling = NoiseCoupling::independent;
    else if (c == "cascade") coupling = NoiseCoupling::degraded_cascade;
    else throw ValidationError("modulo-additive: coupling must be independent or cascade, got '" + c + "'");
    std::vector<std::string> warnings;
    SdMacSpec spec = build_modulo_additive(b.number("p_s", 0.0), required(b, "p1"), required(b, "p2"), coupling,
                                           &warnings);
    for (const auto& w : warnings) std::clog << "warning: " << w << '\n';
    return finish(std::move(spec));
  }
  if (b.name == "parallel-bsc") {
    check_keys(b, {"p_s", "p1", "p2", "p_e", "tap"});
    const std::string tap = b.get("tap").value_or("sum");
    EveTap t;
    if (tap == "sum") t = EveTap::sum;
    else if (tap == "x2-side") t = EveTap::x2_side;
    else throw ValidationError("parallel-bsc: tap must be sum or x2-side, got '" + tap + "'");
    return finish(
        build_parallel_bsc(b.number("p_s", 0.0), required(b, "p1"), required(b, "p2"), required(b, "p_e"), t));
  }
  throw ValidationError("unknown channel builder '" + b.name +
                        "' (known: stuck-at, modulo-additive, parallel-bsc)");
}

AuxiliaryScheme build_aux_scheme(const BuilderSpec& b, const SdMacSpec& spec) {
  if (b.name == "trivial") {
    check_keys(b, {});
    return trivial_scheme(spec);
  }
  if (b.name == "copy-input") {
    check_keys(b, {"alpha"});
    return copy_input_scheme(spec, b.number("alpha", 0.5));
  }
  if (b.name == "single-input") {
    check_keys(b, {"alpha"});
    return single_input_scheme(spec, b.number("alpha", 0.5));
  }
  throw ValidationError("unknown round-one scheme '" + b.name + "' (known: trivial, copy-input, single-input)");
}

Round2Scheme build_round2_scheme(const BuilderSpec& b, const SdMacSpec& spec) {
  if (b.name == "test-channel") {
    check_keys(b, {"q1", "q2"});
    return binary_test_channel_scheme(spec, required(b, "q1"), required(b, "q2"));
  }
  if (b.name == "parallel-test-channel") {
    check_keys(b, {"q1", "q2", "bias"});
    return parallel_test_channel_scheme(spec, required(b, "q1"), required(b, "q2"), b.number("bias", 0.5));
  }
  throw ValidationError("unknown round-two scheme '" + b.name + "' (known: test-channel, parallel-test-channel)");
}

void ExperimentConfig::set(const std::string& key, const std::string& value) {
  auto per_transmitter = [&](const std::string& base, std::array<double, 2>& slot) {
    if (key == base) {
      slot[0] = slot[1] = to_double(key, value);
      return true;
    }
    if (key == base + "1" || key == base + "2") {
      slot[key.back() - '1'] = to_double(key, value);
      return true;
    }
    return false;
  };

  if (key == "task") task = parse_task(value);
  else if (key == "channel") {
    channel = BuilderSpec::parse(value);
    channel_file.clear();
  } else if (key == "channel_file") {
    channel_file = value;
    channel.reset();
  } else if (key == "scheme") {
    scheme = BuilderSpec::parse(value);
    scheme_file.clear();
  } else if (key == "scheme_file") {
    scheme_file = value;
    scheme.reset();
  } else if (key == "preset") apply_preset(value);
  else if (key == "r_c") r_c = to_double(key, value);
  else if (key == "proof_consistent") proof_consistent = to_bool(key, value);
  else if (key == "tolerance") tolerance = to_double(key, value);
  else if (key == "restarts") search.restarts = to_count(key, value);
  else if (key == "iterations") search.refine_iterations = to_count(key, value);
  else if (key == "u_cap") search.u_cap = to_count(key, value);
  else if (key == "v_cap") search.v_cap = to_count(key, value);
  else if (key == "n") round1.n = round2.n = to_count(key, value);
  else if (key == "eps") round1.eps = round2.eps = to_double(key, value);
  else if (key == "decoder") round1.decoder = to_decoder(value);
  else if (key == "tie_break") round1.tie_break = round2.tie_break = to_tie_break(value);
  else if (key == "rate_u") round1.rate_u = to_double(key, value);
  else if (key == "rate_v_total") round1.rate_v_total = to_double(key, value);
  else if (key == "rate_v_bins") round1.rate_v_bins = to_double(key, value);
  else if (per_transmitter("rate_t", round2.rate_t) || per_transmitter("rate_bins", round2.rate_bins) ||
           per_transmitter("rate_subbins", round2.rate_subbins)) {
  } else if (key == "trials") trials = to_count(key, value);
  else if (key == "codebook_batch") codebook_batch = to_count(key, value);
  else if (key == "exact") exact = to_bool(key, value);
  else if (key == "seed") {
    const long long s = parse_int(value, field(key));
    if (s < 0) throw ValidationError(field(key) + " must be nonnegative");
    seed = static_cast<std::uint64_t>(s);
  } else if (key == "threads") {
    threads = to_count(key, value);
    if (threads == 0) throw ValidationError(field(key) + " must be >= 1");
  } else if (key == "out") out = value;
  else if (key == "scheme_out") scheme_out = value;
  else if (key == "sweep.task") sweep_task = parse_task(value);
  else if (key == "sweep.axis") sweep_axis = value;
  else if (key == "sweep.values") sweep_values = split_values(value);
  else if (key.rfind("channel.", 0) == 0) {
    if (!channel) throw ValidationError(field(key) + " needs a channel builder");
    channel->set(key.substr(8), value);
  } else if (key.rfind("scheme.", 0) == 0) {
    if (!scheme) throw ValidationError(field(key) + " needs a scheme builder");
    scheme->set(key.substr(7), value);
  } else {
    throw ValidationError("unknown " + field(key));
  }
}

void ExperimentConfig::apply_preset(const std::string& name) {
  if (name.rfind("round1-", 0) == 0) {
    Round1Setup s = [&] {
      if (name == "round1-reference") return round1_reference(round1.n);
      if (name == "round1-leakage-trend") return round1_leakage_trend(round1.n);
      if (name == "round1-error-trend") return round1_error_trend(round1.n);
      throw ValidationError("unknown preset '" + name + "'");
    }();
    channel = BuilderSpec::parse("modulo-additive:p_s=0,p1=0.1,p2=0.3");
    scheme = BuilderSpec::parse("single-input:alpha=0.5");
    channel_file.clear();
    scheme_file.clear();
    round1 = s.cfg;
    r_c = s.cfg.r_c;
    if (name == "round1-error-trend") codebook_batch = 1;
    return;
  }
  if (name == "round2-reference" || name == "round2-exact-reference") {
    const Round2Setup s = name == "round2-reference" ? round2_reference() : round2_exact_reference();
    channel = BuilderSpec::parse("parallel-bsc:p_s=0,p1=0.01,p2=0.01,p_e=0.1");
    scheme = BuilderSpec::parse("parallel-test-channel:q1=0.03,q2=0.03,bias=0.15");
    channel_file.clear();
    scheme_file.clear();
    round2 = s.cfg;
    return;
  }
  throw ValidationError("unknown preset '" + name +
                        "' (known: round1-reference, round1-leakage-trend, round1-error-trend, round2-reference, "
                        "round2-exact-reference)");
}

bool is_sweepable(const std::string& key) {
  static const std::vector<std::string> names{
      "r_c",          "proof_consistent", "tolerance",     "restarts",     "iterations",    "u_cap",
      "v_cap",        "n",                "eps",           "decoder",      "tie_break",     "rate_u",
      "rate_v_total", "rate_v_bins",      "rate_t",        "rate_t1",      "rate_t2",       "rate_bins",
      "rate_bins1",   "rate_bins2",       "rate_subbins",  "rate_subbins1", "rate_subbins2", "trials",
      "codebook_batch", "exact"};
  if (key.rfind("channel.", 0) == 0 && key.size() > 8) return true;
  if (key.rfind("scheme.", 0) == 0 && key.size() > 7) return true;
  return std::find(names.begin(), names.end(), key) != names.end();
}

void ExperimentConfig::validate() const {
  if (channel && !channel_file.empty()) throw ValidationError("give either a channel builder or a channel file");
  if (!channel && channel_file.empty()) throw ValidationError("no channel: give --builder or --channel");
  if (task == Task::sweep) {
    if (sweep_task == Task::sweep) throw ValidationError(field("sweep.task") + " cannot itself be a sweep");
    if (!is_sweepable(sweep_axis)) throw ValidationError(field("sweep.axis") + ": '" + sweep_axis + "' cannot be swept");
    if (sweep_values.empty()) throw ValidationError(field("sweep.values") + " is empty");
    if (sweep_axis.rfind("channel.", 0) == 0 && !channel) {
      throw ValidationError(field("sweep.axis") + ": sweeping a channel parameter needs a channel builder");
    }
    if (sweep_axis.rfind("scheme.", 0) == 0 && !scheme) {
      throw ValidationError(field("sweep.axis") + ": sweeping a scheme parameter needs a scheme builder");
    }
    return;
  }
  if ((task == Task::sim_round1 || task == Task::sim_round2) && !exact && trials == 0) {
    throw ValidationError(field("trials") + " must be >= 1");
  }
  if (task == Task::sim_round1) round1.validate();
  if (task == Task::sim_round2) round2.validate();
  if ((needs_aux(task) || needs_round2(task)) && !scheme && scheme_file.empty()) {
    throw ValidationError("task " + task_name(task) + " needs a scheme (--scheme or --scheme-file)");
  }
  if (task == Task::stuck_at_closed_form && (!channel || channel->name != "stuck-at")) {
    throw ValidationError("task stuck-at-closed-form needs the stuck-at builder");
  }
  if (task == Task::modadd_closed_form && (!channel || channel->name != "modulo-additive")) {
    throw ValidationError("task modadd-closed-form needs the modulo-additive builder");
  }
}

std::vector<std::pair<std::string, std::string>> ExperimentConfig::echo() const {
  std::vector<std::pair<std::string, std::string>> e;
  e.emplace_back("task", task_name(task));
  if (channel) e.emplace_back("channel", channel->to_string());
  else e.emplace_back("channel_file", channel_file);
  if (scheme) e.emplace_back("scheme", scheme->to_string());
  else if (!scheme_file.empty()) e.emplace_back("scheme_file", scheme_file);

  const Task t = task == Task::sweep ? sweep_task : task;
  if (task == Task::sweep) {
    e.emplace_back("sweep.task", task_name(sweep_task));
    e.emplace_back("sweep.axis", sweep_axis);
    std::string v;
    for (const auto& s : sweep_values) v += (v.empty() ? "" : " ") + s;
    e.emplace_back("sweep.values", v);
  }
  auto search_fields = [&] {
    e.emplace_back("restarts", std::to_string(search.restarts));
    e.emplace_back("iterations", std::to_string(search.refine_iterations));
    e.emplace_back("u_cap", std::to_string(search.u_cap));
    e.emplace_back("v_cap", std::to_string(search.v_cap));
  };
  switch (t) {
    case Task::common_lb:
      e.emplace_back("r_c", num(r_c));
      e.emplace_back("proof_consistent", proof_consistent ? "1" : "0");
      e.emplace_back("tolerance", num(tolerance));
      if (!scheme && scheme_file.empty()) search_fields();
      break;
    case Task::common_ub:
      e.emplace_back("restarts", std::to_string(search.restarts));
      e.emplace_back("iterations", std::to_string(search.refine_iterations));
      break;
    case Task::degraded:
      e.emplace_back("r_c", num(r_c));
      e.emplace_back("proof_consistent", proof_consistent ? "1" : "0");
      e.emplace_back("tolerance", num(tolerance));
      break;
    case Task::private_inner:
    case Task::corollary2:
      e.emplace_back("tolerance", num(tolerance));
      break;
    case Task::modadd_closed_form:
      e.emplace_back("r_c", num(r_c));
      break;
    case Task::sim_round1:
      e.emplace_back("n", std::to_string(round1.n));
      e.emplace_back("rate_u", num(round1.rate_u));
      e.emplace_back("rate_v_total", num(round1.rate_v_total));
      e.emplace_back("rate_v_bins", num(round1.rate_v_bins));
      e.emplace_back("r_c", num(r_c));
      e.emplace_back("eps", num(round1.eps));
      e.emplace_back("decoder", decoder_text(round1.decoder));
      e.emplace_back("tie_break", tie_break_text(round1.tie_break));
      break;
    case Task::sim_round2:
      e.emplace_back("n", std::to_string(round2.n));
      for (int i = 0; i < 2; ++i) {
        const std::string s = std::to_string(i + 1);
        e.emplace_back("rate_t" + s, num(round2.rate_t[i]));
        e.emplace_back("rate_bins" + s, num(round2.rate_bins[i]));
        e.emplace_back("rate_subbins" + s, num(round2.rate_subbins[i]));
      }
      e.emplace_back("eps", num(round2.eps));
      e.emplace_back("tie_break", tie_break_text(round2.tie_break));
      break;
    default:
      break;
  }
  if (t == Task::sim_round1 || t == Task::sim_round2) {
    e.emplace_back("exact", exact ? "1" : "0");
    if (!exact) {
      e.emplace_back("trials", std::to_string(trials));
      e.emplace_back("codebook_batch", std::to_string(codebook_batch));
    }
  }
  return e;
}

ExperimentConfig read_experiment_config(std::istream& in, const std::string& source) {
  const TextDocument doc = TextDocument::parse(in, source);
  doc.require_format(1);
  ExperimentConfig cfg;
  for (const auto& sec : doc.sections()) {
    if (!sec.name.empty() && sec.name != "sweep") {
      throw ValidationError(doc.where(sec.number) + ": unknown section [" + sec.name + "]");
    }
    const std::string prefix = sec.name.empty() ? "" : "sweep.";
    for (const auto& line : sec.lines) {
      if (!line.is_assignment) throw ValidationError(doc.where(line.number) + ": expected key = value");
      if (prefix.empty() && line.key == "format") continue;
      try {
        cfg.set(prefix + line.key, line.value);
      } catch (const ValidationError& e) {
        throw ValidationError(doc.where(line.number) + ": " + e.what());
      }
    }
  }
  return cfg;
}

ExperimentConfig load_experiment_config(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  return read_experiment_config(in, path);
}

SdMacSpec resolve_channel(const ExperimentConfig& cfg) {
  if (cfg.channel) return build_channel(*cfg.channel);
  if (!cfg.channel_file.empty()) return load_spec(cfg.channel_file);
  throw ValidationError("no channel: give --builder or --channel");
}

SimulationReport run(const ExperimentConfig& cfg) {
  if (cfg.task == Task::sweep) throw ValidationError("run() takes a single task; use sweep()");
  cfg.validate();
  const SdMacSpec spec = resolve_channel(cfg);
  SimulationReport rep;
  rep.seed = cfg.seed;
  for (const auto& [k, v] : cfg.echo()) rep.echo(k, v);

  switch (cfg.task) {
    case Task::common_lb: {
      const RatePoint rp = (cfg.scheme || !cfg.scheme_file.empty())
                               ? common_key_lb_objective(spec, resolve_aux(cfg, spec), cfg.r_c, bound_options(cfg))
                               : optimize_common_key_lb(spec, cfg.r_c, search_config(cfg));
      add_rate_point(rep, rp);
      save_achieving_scheme(rp, cfg.scheme_out);
      break;
    }
    case Task::common_ub: {
      const RatePoint rp = common_key_ub(spec, search_config(cfg));
      add_rate_point(rep, rp);
      save_achieving_scheme(rp, cfg.scheme_out);
      break;
    }
    case Task::degraded:
      add_rate_point(rep, degraded_common_key_capacity(spec, resolve_aux(cfg, spec), cfg.r_c, bound_options(cfg),
                                                       cfg.tolerance));
      break;
    case Task::private_inner:
      add_rate_point(rep, private_key_inner_point(spec, resolve_round2(cfg, spec), bound_options(cfg)));
      break;
    case Task::private_outer:
      add_rate_point(rep, private_key_outer_point(spec, resolve_round2(cfg, spec)));
      break;
    case Task::corollary2:
      add_rate_point(rep, corollary2_point(spec, resolve_round2(cfg, spec), bound_options(cfg), cfg.tolerance));
      break;
    case Task::stuck_at_closed_form: {
      const ClosedForm cf = stuck_at_lb_closed_form(cfg.channel->number("p", 0.0));
      rep.add_exact("rate", cf.rate);
      rep.add_exact("raw_rate", cf.raw_rate);
      rep.add_exact("constraint", cf.constraint);
      break;
    }
    case Task::modadd_closed_form: {
      const double alpha = cfg.scheme ? cfg.scheme->number("alpha", 0.5) : 0.5;
      const BuilderSpec& b = *cfg.channel;
      const ClosedForm cf =
          modadd_lb_closed_form(alpha, b.number("p_s", 0.0), b.number("p1", 0.0), b.number("p2", 0.0), cfg.r_c);
      rep.add_exact("rate", cf.rate);
      rep.add_exact("raw_rate", cf.raw_rate);
      rep.add_exact("constraint", cf.constraint);
      const RatePoint tab = common_key_lb_objective(spec, single_input_scheme(spec, alpha), cfg.r_c);
      rep.add_exact("tabular_objective", *tab.raw_r0);
      break;
    }
    case Task::sim_round1: {
      Round1Config c = cfg.round1;
      c.r_c = cfg.r_c;
      c.seed = cfg.seed;
      const Round1System sys(spec, resolve_aux(cfg, spec), c);
      if (cfg.exact) {
        const Round1Exact ex = exact_round1_metrics(sys, round1_codebook_for_batch(sys, 0));
        rep.add_exact("p_err", ex.p_err);
        rep.add_exact("leakage_per_symbol", ex.leakage_per_symbol);
        rep.add_exact("key_entropy", ex.key_entropy);
        rep.add_exact("conference_failure", ex.conference_failure);
        rep.add_exact("encoder_failure", ex.encoder_failure);
        rep.add_exact("log2_bins", ex.log2_bins);
      } else {
        check_trials(cfg);
        copy_metrics(rep, monte_carlo_round1(sys, McOptions{cfg.trials, cfg.codebook_batch, cfg.threads}));
      }
      break;
    }
    case Task::sim_round2: {
      Round2Config c = cfg.round2;
      c.seed = cfg.seed;
      const Round2System sys(spec, resolve_round2(cfg, spec), c);
      if (cfg.exact) {
        const Round2Exact ex = exact_round2_metrics(sys, round2_codebooks_for_batch(sys, 0));
        for (int i = 0; i < 2; ++i) {
          const std::string s = std::to_string(i + 1);
          rep.add_exact("p_err" + s, ex.p_err[i]);
          rep.add_exact("leak_eve" + s, ex.leak_eve[i]);
          rep.add_exact("leak_cross" + s, ex.leak_cross[i]);
          rep.add_exact("key_entropy" + s, ex.key_entropy[i]);
          rep.add_exact("log2_subbins" + s, ex.log2_subbins[i]);
        }
        rep.add_exact("key_coupling", ex.key_coupling);
      } else {
        check_trials(cfg);
        copy_metrics(rep, monte_carlo_round2(sys, McOptions{cfg.trials, cfg.codebook_batch, cfg.threads}));
      }
      break;
    }
    case Task::sweep:
      break;
  }
  return rep;
}

SweepTable sweep(const ExperimentConfig& cfg) {
  if (cfg.task != Task::sweep) throw ValidationError("sweep() needs task = sweep");
  cfg.validate();
  SweepTable table;
  table.axis = cfg.sweep_axis;
  table.values = cfg.sweep_values;
  std::vector<ExperimentConfig> points;
  for (std::size_t i = 0; i < cfg.sweep_values.size(); ++i) {
    ExperimentConfig p = cfg;
    p.task = cfg.sweep_task;
    p.set(cfg.sweep_axis, cfg.sweep_values[i]);
    p.seed = derive_seed(cfg.seed, kSweepStream, i);
    p.threads = 1;
    p.scheme_out.clear();
    p.validate();
    points.push_back(std::move(p));
  }
  table.rows.resize(points.size());
  parallel_for(points.size(), cfg.threads, [&](std::size_t i) { table.rows[i] = run(points[i]); });
  return table;
}

void write_sweep_csv(std::ostream& os, const ExperimentConfig& cfg, const SweepTable& table) {
  os << "# sdkey " << kVersion << '\n';
  os << "# seed = " << cfg.seed << '\n';
  for (const auto& [k, v] : cfg.echo()) os << "# " << k << " = " << v << '\n';
  if (table.rows.empty()) return;
  const auto& first = table.rows.front().metrics;
  os << csv_field(table.axis) << ",point_seed";
  for (const auto& m : first) {
    os << ',' << csv_field(m.name);
    if (m.interval) os << ',' << csv_field(m.name + "_lo") << ',' << csv_field(m.name + "_hi");
  }
  os << '\n';
  for (std::size_t i = 0; i < table.rows.size(); ++i) {
    const auto& ms = table.rows[i].metrics;
    if (ms.size() != first.size()) throw ValidationError("sweep points produced different metric sets");
    os << csv_field(table.values[i]) << ',' << table.rows[i].seed;
    for (std::size_t j = 0; j < ms.size(); ++j) {
      if (ms[j].name != first[j].name || ms[j].interval.has_value() != first[j].interval.has_value()) {
        throw ValidationError("sweep points produced different metric sets");
      }
      os << ',' << format_number(ms[j].value);
      if (ms[j].interval) os << ',' << format_number(ms[j].interval->lo) << ',' << format_number(ms[j].interval->hi);
    }
    os << '\n';
  }
}

void run_to_csv(const ExperimentConfig& cfg, std::ostream& os) {
  if (cfg.task == Task::sweep) {
    write_sweep_csv(os, cfg, sweep(cfg));
  } else {
    write_report_csv(os, run(cfg));
  }
}

}  // namespace sdkey
