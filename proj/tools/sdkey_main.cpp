// sdkey: command-line driver for bounds, protocol simulations and sweeps.
//
//   sdkey bounds common-lb --builder modulo-additive:p_s=0,p1=0.1,p2=0.3 --scheme single-input:alpha=0.5
//   sdkey sim round1 --preset round1-reference --n 6 --trials 10000 --out r1.csv
//   sdkey sweep --config sweep.txt
//   sdkey channel make --builder stuck-at:p=0.3 --out stuck.txt
//
// Exit status: 0 success, 1 invalid input, 2 enumeration budget exceeded.

#include <exception>
#include <fstream>
#include <iostream>
#include <sstream>
#include <string>
#include <utility>
#include <vector>

#include "CLI11.hpp"
#include "sdkey/error.hpp"
#include "sdkey/experiment.hpp"
#include "sdkey/spec_io.hpp"

namespace {

using namespace sdkey;

constexpr int kExitValidation = 1;
constexpr int kExitBudget = 2;

struct CommonFlags {
  std::string config, channel, builder, scheme, scheme_file, preset, out, scheme_out, decoder;
  std::string rc, n, trials, seed, eps, threads;
  bool exact = false;
  bool proof_consistent = false;
  std::vector<std::string> sets;
  std::vector<std::pair<CLI::Option*, std::string>> tracked;
};

void add_common(CLI::App* app, CommonFlags& f, bool sim) {
  auto track = [&](CLI::Option* o, const std::string& key) { f.tracked.emplace_back(o, key); };
  app->add_option("--config", f.config, "Experiment config file (structured text)");
  track(app->add_option("--channel", f.channel, "Channel spec file"), "channel_file");
  track(app->add_option("--builder", f.builder, "Channel builder, name:k=v,..."), "channel");
  track(app->add_option("--scheme", f.scheme, "Scheme builder, name:k=v,..."), "scheme");
  track(app->add_option("--scheme-file", f.scheme_file, "Scheme file"), "scheme_file");
  track(app->add_option("--rc", f.rc, "Conferencing rate R_C (bits/use)"), "r_c");
  track(app->add_option("--seed", f.seed, "Master seed"), "seed");
  track(app->add_option("--threads", f.threads, "Worker threads (output does not depend on it)"), "threads");
  track(app->add_option("--out", f.out, "Output CSV path (default: stdout)"), "out");
  app->add_flag("--proof-consistent", f.proof_consistent, "Flip the auxiliary constraints of the lower bound");
  app->add_option("--set", f.sets, "Any parameter as key=value; repeatable")->take_all();
  if (sim) {
    app->add_option("--preset", f.preset, "Reference configuration");
    track(app->add_option("--n", f.n, "Blocklength"), "n");
    track(app->add_option("--trials", f.trials, "Monte-Carlo trials"), "trials");
    track(app->add_option("--eps", f.eps, "Typicality tolerance"), "eps");
    track(app->add_option("--decoder", f.decoder, "typicality | ml"), "decoder");
    app->add_flag("--exact", f.exact, "Exact enumeration instead of Monte-Carlo");
  } else {
    track(app->add_option("--scheme-out", f.scheme_out, "Write the achieving scheme here"), "scheme_out");
    track(app->add_option("--n", f.n, "Blocklength"), "n");
    track(app->add_option("--trials", f.trials, "Monte-Carlo trials"), "trials");
  }
}

ExperimentConfig assemble(const CommonFlags& f) {
  if (!f.channel.empty() && !f.builder.empty()) throw ValidationError("give either --builder or --channel, not both");
  ExperimentConfig cfg = f.config.empty() ? ExperimentConfig{} : load_experiment_config(f.config);
  // --n before --preset so round-one presets pick up the blocklength.
  for (const auto& [opt, key] : f.tracked) {
    if (key == "n" && opt->count()) cfg.set("n", opt->as<std::string>());
  }
  if (!f.preset.empty()) cfg.apply_preset(f.preset);
  for (const auto& [opt, key] : f.tracked) {
    if (opt->count()) cfg.set(key, opt->as<std::string>());
  }
  if (f.proof_consistent) cfg.proof_consistent = true;
  if (f.exact) cfg.exact = true;
  for (const auto& kv : f.sets) {
    const auto eq = kv.find('=');
    if (eq == std::string::npos) throw ValidationError("--set expects key=value, got '" + kv + "'");
    cfg.set(kv.substr(0, eq), kv.substr(eq + 1));
  }
  return cfg;
}

void emit(const ExperimentConfig& cfg) {
  if (cfg.out.empty()) {
    run_to_csv(cfg, std::cout);
    return;
  }
  // Render fully before touching the file so a failed run leaves no partial output.
  std::ostringstream buf;
  run_to_csv(cfg, buf);
  std::ofstream os(cfg.out, std::ios::binary);
  if (!os) throw ValidationError("cannot write " + cfg.out);
  os << buf.str();
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Secret-key bounds and protocol simulator for state-dependent multiple access channels"};
  app.require_subcommand(1);
  app.set_version_flag("--version", std::string(sdkey::kVersion));

  CommonFlags bounds_flags, sim_flags, sweep_flags;
  std::string bound_task, round;

  auto* bounds = app.add_subcommand("bounds", "Evaluate or optimize a single-letter bound");
  bounds->add_option("task", bound_task,
                     "common-lb | common-ub | degraded | private-inner | private-outer | corollary2 | "
                     "stuck-at-closed-form | modadd-closed-form")
      ->required();
  add_common(bounds, bounds_flags, false);

  auto* sim = app.add_subcommand("sim", "Run a protocol round (Monte-Carlo or exact)");
  sim->add_option("round", round, "round1 | round2")->required()->check(CLI::IsMember({"round1", "round2"}));
  add_common(sim, sim_flags, true);

  auto* sweep_cmd = app.add_subcommand("sweep", "Run a task over a list of parameter values");
  std::string sweep_task, sweep_axis, sweep_values;
  sweep_cmd->add_option("--task", sweep_task, "Task run at each point");
  sweep_cmd->add_option("--axis", sweep_axis, "Parameter to vary, e.g. channel.p or n");
  sweep_cmd->add_option("--values", sweep_values, "Comma or space separated values");
  add_common(sweep_cmd, sweep_flags, true);

  auto* channel = app.add_subcommand("channel", "Create or check channel-spec files");
  channel->require_subcommand(1);
  auto* make = channel->add_subcommand("make", "Write a built-in channel as a spec file");
  std::string make_builder, make_out;
  make->add_option("--builder", make_builder, "Channel builder, name:k=v,...")->required();
  make->add_option("--out", make_out, "Output path (default: stdout)");
  auto* validate = channel->add_subcommand("validate", "Load a spec file and report its shape");
  std::string validate_path;
  validate->add_option("file", validate_path, "Spec file")->required();

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : kExitValidation;
  }

  try {
    if (*bounds) {
      ExperimentConfig cfg = assemble(bounds_flags);
      cfg.task = parse_task(bound_task);
      if (cfg.task == Task::sim_round1 || cfg.task == Task::sim_round2 || cfg.task == Task::sweep) {
        throw ValidationError("'" + bound_task + "' is not a bound task");
      }
      emit(cfg);
    } else if (*sim) {
      ExperimentConfig cfg = assemble(sim_flags);
      cfg.task = round == "round1" ? Task::sim_round1 : Task::sim_round2;
      emit(cfg);
    } else if (*sweep_cmd) {
      ExperimentConfig cfg = assemble(sweep_flags);
      cfg.task = Task::sweep;
      if (!sweep_task.empty()) cfg.set("sweep.task", sweep_task);
      if (!sweep_axis.empty()) cfg.set("sweep.axis", sweep_axis);
      if (!sweep_values.empty()) cfg.set("sweep.values", sweep_values);
      emit(cfg);
    } else if (*make) {
      const SdMacSpec spec = build_channel(BuilderSpec::parse(make_builder));
      if (make_out.empty()) {
        write_spec(std::cout, spec);
      } else {
        save_spec(spec, make_out);
      }
    } else if (*validate) {
      const SdMacSpec spec = load_spec(validate_path);
      std::cout << validate_path << ": ok (|S|=" << spec.s().alphabet.size() << " |T|=" << spec.t().alphabet.size()
                << " |X1|=" << spec.x1().alphabet.size() << " |X2|=" << spec.x2().alphabet.size()
                << " |Y|=" << spec.y().alphabet.size() << " |Z|=" << spec.z().alphabet.size() << ")\n";
    }
  } catch (const BudgetExceeded& e) {
    std::cerr << "sdkey: " << e.what() << '\n';
    return kExitBudget;
  } catch (const ValidationError& e) {
    std::cerr << "sdkey: " << e.what() << '\n';
    return kExitValidation;
  } catch (const std::exception& e) {
    std::cerr << "sdkey: " << e.what() << '\n';
    return kExitValidation;
  }
  return 0;
}
