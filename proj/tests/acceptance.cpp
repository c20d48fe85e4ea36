// Acceptance suite: one PASS/FAIL line per criterion.
//
//   sdkey_acceptance --sdkey build/sdkey --workdir /tmp/acc [--only 1,3] [--known-unattainable 2]
//
// Exit status is nonzero when a criterion fails that is not listed as known
// unattainable, or when a listed one unexpectedly passes.

#include <chrono>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <set>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "random_models.hpp"
#include "reference_enumeration.hpp"
#include "sdkey/bounds.hpp"
#include "sdkey/presets.hpp"
#include "sdkey/round1.hpp"
#include "sdkey/round2.hpp"

namespace {

using namespace sdkey;
using Clock = std::chrono::steady_clock;

struct Outcome {
  bool pass = false;
  std::string detail;
};

double seconds_since(Clock::time_point t0) { return std::chrono::duration<double>(Clock::now() - t0).count(); }

std::string fmt(const char* f, auto... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, f, args...);
  return buf;
}

// 1. Closed form against I(V;Y) - I(V;Z) from the tabular joint.
Outcome closed_form_regression() {
  const auto t0 = Clock::now();
  const double grid[] = {0.0, 0.1, 0.2, 0.3, 0.4, 0.5};
  double worst = 0.0;
  std::size_t points = 0;
  for (double alpha : grid)
    for (double ps : grid)
      for (double p1 : grid)
        for (double p2 : grid) {
          if (p1 > p2) continue;
          const SdMacSpec spec = build_modulo_additive(ps, p1, p2);
          const JointPmf j = full_joint_round1(spec, single_input_scheme(spec, alpha));
          const double brute = mutual_information(j, {var::V}, {var::Y}) - mutual_information(j, {var::V}, {var::Z});
          const ClosedForm cf = modadd_lb_closed_form(alpha, ps, p1, p2, 1.0);
          worst = std::max({worst, std::abs(cf.raw_rate - brute), std::abs(cf.rate - std::max(0.0, brute))});
          ++points;
        }
  const double secs = seconds_since(t0);
  return {worst <= 1e-9 && secs < 10.0, fmt("%zu grid points, max |closed - tabular| = %.3g, %.2f s", points, worst, secs)};
}

// V = S when stuck, V = (clean, free bit) otherwise; X1 follows V.
AuxiliaryScheme stuck_witness(const SdMacSpec& spec) {
  const Variable u{var::U, Alphabet::singleton("U")};
  const Variable v{var::V, Alphabet("V", {"s0", "s1", "c0", "c1"})};
  const std::vector<double> v_rows{1, 0, 0, 0, 0, 1, 0, 0, 0, 0, 0.5, 0.5};
  std::vector<std::size_t> x1_map, x2_map;
  for (std::size_t vv = 0; vv < 4; ++vv)
    for (std::size_t s = 0; s < 3; ++s) {
      x1_map.push_back(vv % 2);
      x2_map.push_back(0);
    }
  return AuxiliaryScheme(ConditionalPmf({spec.s()}, {u}, {1, 1, 1}), ConditionalPmf({u, spec.s()}, {v}, v_rows),
                         ConditionalPmf::deterministic({u, v, spec.s()}, {spec.x1()}, x1_map),
                         ConditionalPmf::deterministic({u, v, spec.s()}, {spec.x2()}, x2_map));
}

// 2. Stuck-at: p - 0.02 <= r0 <= p + 1e-6.
Outcome stuck_at_reproduction() {
  bool pass = true;
  std::string detail;
  for (double p : {0.1, 0.3, 0.5}) {
    const auto t0 = Clock::now();
    const SdMacSpec spec = build_stuck_at(p);
    const RatePoint rp = optimize_common_key_lb(spec, 1.0);
    const double secs = seconds_since(t0);
    const RatePoint w = common_key_lb_objective(spec, stuck_witness(spec), 1.0);
    const bool ok = rp.r0.value() >= p - 0.02 && rp.r0.value() <= p + 1e-6 && secs < 300.0;
    pass = pass && ok;
    detail += fmt("%sp=%.1f r0=%.4f (%.1f s, witness %.4f %s)", detail.empty() ? "" : "; ", p, rp.r0.value(), secs,
                  w.r0.value(), w.feasible ? "feasible" : "infeasible");
  }
  return {pass, detail};
}

// 3. I(V;Y,T|U) - I(V;Z|U) = I(V;Y,T|U,Z) on degraded cascades.
Outcome degraded_identity() {
  Rng rng(derive_seed(2026, 3));
  double worst = 0.0;
  for (int k = 0; k < 50; ++k) {
    const SdMacSpec spec = testing::random_binary_spec(rng, true);
    const AuxiliaryScheme aux = testing::random_aux(rng, spec, 1 + rng.index(3), 2 + rng.index(3));
    const double lhs = common_key_lb_objective(spec, aux, 1.0).raw_r0.value();
    const double rhs = degraded_common_key_capacity(spec, aux, 1.0).raw_r0.value();
    worst = std::max(worst, std::abs(lhs - rhs));
  }
  return {worst <= 1e-9, fmt("50 cascade specs, max difference %.3g", worst)};
}

// 4. Optimized lower bound <= upper bound.
Outcome sandwich() {
  const auto t0 = Clock::now();
  Rng rng(derive_seed(2026, 4));
  std::size_t violations = 0;
  double worst = -1e9;
  for (int k = 0; k < 100; ++k) {
    const SdMacSpec spec = testing::random_binary_spec(rng, rng.index(2) == 1);
    SearchConfig cfg;
    cfg.seed = derive_seed(4, static_cast<std::uint64_t>(k));
    const double lb = optimize_common_key_lb(spec, 1.0, cfg).r0.value();
    const double ub = common_key_ub(spec, cfg).r0.value();
    worst = std::max(worst, lb - ub);
    if (lb > ub + 1e-6) ++violations;
  }
  return {violations == 0,
          fmt("100 specs, %zu violations, max lb - ub = %.4f, %.1f s", violations, worst, seconds_since(t0))};
}

// 5. Inner point <= outer point on random round-two schemes.
Outcome inner_outer() {
  Rng rng(derive_seed(2026, 5));
  auto count = [&](bool observe_state) {
    std::size_t bad = 0;
    for (int k = 0; k < 100; ++k) {
      const SdMacSpec spec = testing::random_binary_spec(rng, false, observe_state);
      const Round2Scheme sch = testing::random_round2_scheme(rng, spec);
      const RatePoint in = private_key_inner_point(spec, sch), out = private_key_outer_point(spec, sch);
      if (in.r1.value() > out.r1.value() + 1e-6 || in.r2.value() > out.r2.value() + 1e-6) ++bad;
    }
    return bad;
  };
  const std::size_t bad = count(false);
  const std::size_t with_t = count(true);
  return {bad == 0, fmt("100 schemes with constant T: %zu violations (informative T, not required: %zu/100)", bad,
                        with_t)};
}

// 6. Monte-Carlo P_err within 3 Wilson half-widths of the exact value.
Outcome round1_oracle() {
  const Round1Setup ref = round1_reference(6);
  const Round1System sys(ref.spec, ref.aux, ref.cfg);
  const auto cb = round1_codebook_for_batch(sys, 0);
  const Round1Exact ex = exact_round1_metrics(sys, cb);
  McOptions mc;
  mc.trials = 10000;
  const Metric m = monte_carlo_round1(sys, mc).metric("p_err");
  const double hw = m.interval->half_width();
  const bool close = std::abs(m.value - ex.p_err) <= 3.0 * hw;

  const Round1System quiet(with_constant_eavesdropper(ref.spec), ref.aux, ref.cfg);
  const double leak = exact_round1_metrics(quiet, cb).leakage_per_symbol;
  return {close && leak == 0.0, fmt("exact %.5f, MC %.5f (half-width %.5f); constant-eve leakage %.3g", ex.p_err,
                                    m.value, hw, leak)};
}

// 7. Leakage and error trends over n.
Outcome round1_trends() {
  const auto t0 = Clock::now();
  const std::size_t batches = 10, seeds = 50;
  std::size_t leak_ok = 0;
  for (std::size_t b = 0; b < batches; ++b) {
    double prev = INFINITY;
    bool mono = true;
    for (std::size_t n : {4u, 6u, 8u}) {
      const Round1Setup s = round1_leakage_trend(n);
      const Round1System sys(s.spec, s.aux, s.cfg);
      double mean = 0.0;
      for (std::size_t k = 0; k < seeds; ++k) {
        mean += exact_round1_metrics(sys, round1_codebook_for_batch(sys, b * seeds + k)).leakage_per_symbol / seeds;
      }
      mono = mono && mean <= prev + 1e-12;
      prev = mean;
    }
    leak_ok += mono ? 1 : 0;
  }
  std::size_t err_ok = 0;
  for (std::size_t b = 0; b < batches; ++b) {
    double prev = INFINITY;
    bool mono = true;
    for (std::size_t n : {4u, 8u, 12u}) {
      Round1Setup s = round1_error_trend(n);
      s.cfg.seed = derive_seed(7, b);
      const Round1System sys(s.spec, s.aux, s.cfg);
      McOptions mc;
      mc.trials = 20000;
      mc.codebook_batch = 1;
      const double p = monte_carlo_round1(sys, mc).metric("p_err").value;
      mono = mono && p <= prev;
      prev = p;
    }
    err_ok += mono ? 1 : 0;
  }
  const bool pass = leak_ok * 10 >= batches * 9 && err_ok * 10 >= batches * 9;
  return {pass, fmt("leakage non-increasing in %zu/%zu batches, P_err in %zu/%zu, %.0f s", leak_ok, batches, err_ok,
                    batches, seconds_since(t0))};
}

// 8. H(K_0) >= 0.95 log2(bins) at n = 8.
Outcome round1_uniformity() {
  const Round1Setup ref = round1_reference(8);
  const Round1System sys(ref.spec, ref.aux, ref.cfg);
  const auto cb = round1_codebook_for_batch(sys, 0);
  const Round1Exact ex = exact_round1_metrics(sys, cb);
  return {ex.key_entropy >= 0.95 * ex.log2_bins,
          fmt("H(K0) = %.4f, log2 bins = %.4f (%zu bins)", ex.key_entropy, ex.log2_bins, cb.bins)};
}

// 9. Agreement at n = 10 and second-path leakages at n = 6.
Outcome round2_reliability_secrecy() {
  const Round2Setup ref = round2_reference();
  const Round2System sys(ref.spec, ref.scheme, ref.cfg);
  bool margin = true;
  for (int i = 0; i < 2; ++i) {
    margin = margin && ref.cfg.rate_t[i] - ref.cfg.rate_bins[i] <= 0.8 * sys.packing_threshold(i + 1);
  }
  McOptions mc;
  mc.trials = 10000;
  mc.codebook_batch = 100;
  const SimulationReport rep = monte_carlo_round2(sys, mc);
  const double a1 = rep.metric("key_agreement1").value, a2 = rep.metric("key_agreement2").value;

  const Round2Setup ex_ref = round2_exact_reference();
  const Round2System ex_sys(ex_ref.spec, ex_ref.scheme, ex_ref.cfg);
  const auto cbs = round2_codebooks_for_batch(ex_sys, 0);
  const Round2Exact ex = exact_round2_metrics(ex_sys, cbs);
  const auto alt = testing::reference_round2_leakage(ex_ref.spec, ex_ref.scheme, ex_ref.cfg, cbs);
  double diff = 0.0;
  for (int i = 0; i < 2; ++i) {
    diff = std::max({diff, std::abs(ex.leak_eve[i] - alt.leak_eve[i]), std::abs(ex.leak_cross[i] - alt.leak_cross[i])});
  }
  const bool pass = margin && a1 >= 0.9 && a2 >= 0.9 && diff <= 1e-12;
  return {pass, fmt("agreement %.4f / %.4f, packing margin %s, leak_eve %.5f / %.5f, leak_cross %.5f / %.5f, "
                    "second path max diff %.3g",
                    a1, a2, margin ? "ok" : "violated", ex.leak_eve[0], ex.leak_eve[1], ex.leak_cross[0],
                    ex.leak_cross[1], diff)};
}

// 10. Chain rule, nonnegativity, data processing on random pmfs.
Outcome information_measures() {
  Rng rng(derive_seed(2026, 10));
  std::size_t failures = 0;
  for (int k = 0; k < 1000; ++k) {
    const JointPmf p = testing::random_pmf(rng, {2 + rng.index(2), 2 + rng.index(2), 2, 2});
    const double whole = conditional_mutual_information(p, {"A"}, {"B", "C"}, {"D"});
    const double split = conditional_mutual_information(p, {"A"}, {"B"}, {"D"}) +
                         conditional_mutual_information(p, {"A"}, {"C"}, {"B", "D"});
    if (std::abs(whole - split) > 1e-10) ++failures;
    for (double v : {whole, entropy(p, {"A", "B"}), conditional_entropy(p, {"C"}, {"A", "D"}),
                     conditional_mutual_information(p, {"B"}, {"D"}, {"A"})}) {
      if (v < -1e-10) ++failures;
    }
    // A -> B -> C built by composing kernels
    const JointPmf a = p.marginal({"A"});
    const Variable b{"B", Alphabet::range("B", 3)}, c{"C", Alphabet::range("C", 2)};
    const JointPmf chain = compose(compose(a, ConditionalPmf(a.variables(), {b}, testing::random_rows(rng, a.size(), 3))),
                                   ConditionalPmf({b}, {c}, testing::random_rows(rng, 3, 2)));
    if (mutual_information(chain, {"A"}, {"C"}) > mutual_information(chain, {"A"}, {"B"}) + 1e-10) ++failures;
  }
  return {failures == 0, fmt("1000 pmfs, %zu failed checks", failures)};
}

std::string read_file(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

// 11. Same output at --threads 1 and --threads 4.
Outcome cli_determinism(const std::string& sdkey, const std::filesystem::path& dir) {
  const std::string modadd = "--builder modulo-additive:p_s=0.2,p1=0.1,p2=0.3";
  const std::string small = "--set restarts=2 --set iterations=300";
  const std::vector<std::pair<std::string, std::string>> tasks = {
      {"common-lb", "bounds common-lb " + modadd + " " + small},
      {"common-ub", "bounds common-ub " + modadd + " " + small},
      {"degraded", "bounds degraded --builder modulo-additive:p_s=0.2,p1=0.1,p2=0.3,coupling=cascade "
                   "--scheme single-input:alpha=0.5"},
      {"private-inner", "bounds private-inner " + modadd + " --scheme test-channel:q1=0.1,q2=0.2"},
      {"private-outer", "bounds private-outer " + modadd + " --scheme test-channel:q1=0.1,q2=0.2"},
      {"corollary2", "bounds corollary2 --builder parallel-bsc:p_s=0.3,p1=0.05,p2=0.1,p_e=0.2,tap=x2-side "
                     "--scheme parallel-test-channel:q1=0.05,q2=0.1,bias=0.4"},
      {"stuck-at-closed-form", "bounds stuck-at-closed-form --builder stuck-at:p=0.3"},
      {"modadd-closed-form", "bounds modadd-closed-form " + modadd + " --scheme single-input:alpha=0.3"},
      {"sim-round1", "sim round1 --preset round1-reference --n 6 --trials 2000 --set codebook_batch=100"},
      {"sim-round1-exact", "sim round1 --preset round1-reference --n 6 --exact"},
      {"sim-round2", "sim round2 --preset round2-reference --trials 2000 --set codebook_batch=100"},
      {"sim-round2-exact", "sim round2 --preset round2-exact-reference --exact"},
      {"sweep", "sweep --task sim-round1 --axis n --values 4,6,8 --preset round1-error-trend --trials 1000"},
  };
  std::filesystem::create_directories(dir);
  std::size_t identical = 0;
  std::string failed;
  for (const auto& [name, args] : tasks) {
    std::string outputs[2];
    bool ran = true;
    for (int r = 0; r < 2; ++r) {
      const auto path = dir / (name + (r == 0 ? ".t1.csv" : ".t4.csv"));
      std::filesystem::remove(path);
      const std::string cmd = "\"" + sdkey + "\" " + args + " --seed 11 --threads " + (r == 0 ? "1" : "4") +
                              " --out \"" + path.string() + "\"";
      ran = ran && std::system(cmd.c_str()) == 0;
      outputs[r] = read_file(path);
    }
    if (ran && !outputs[0].empty() && outputs[0] == outputs[1]) {
      ++identical;
    } else {
      failed += " " + name;
    }
  }
  return {identical == tasks.size(),
          fmt("%zu/%zu tasks byte-identical%s%s", identical, tasks.size(), failed.empty() ? "" : "; differing:",
              failed.c_str())};
}

std::set<int> parse_list(const std::string& s) {
  std::set<int> out;
  std::stringstream ss(s);
  std::string item;
  while (std::getline(ss, item, ',')) {
    if (!item.empty()) out.insert(std::stoi(item));
  }
  return out;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Acceptance criteria"};
  std::string sdkey_path = "sdkey", workdir = "acceptance_work", only, known;
  app.add_option("--sdkey", sdkey_path, "Path to the sdkey executable");
  app.add_option("--workdir", workdir, "Scratch directory for CLI outputs");
  app.add_option("--only", only, "Comma-separated criteria to run");
  app.add_option("--known-unattainable", known, "Comma-separated criteria expected to fail");
  CLI11_PARSE(app, argc, argv);

  const std::set<int> selected = parse_list(only);
  const std::set<int> expected_fail = parse_list(known);

  const std::vector<std::pair<std::string, std::function<Outcome()>>> criteria = {
      {"closed-form regression", closed_form_regression},
      {"stuck-at reproduction", stuck_at_reproduction},
      {"degraded identity", degraded_identity},
      {"lower bound below upper bound", sandwich},
      {"inner/outer ordering", inner_outer},
      {"round-one exact oracle", round1_oracle},
      {"round-one trends", round1_trends},
      {"round-one key uniformity", round1_uniformity},
      {"round-two reliability and secrecy", round2_reliability_secrecy},
      {"information-measure properties", information_measures},
      {"CLI determinism", [&] { return cli_determinism(sdkey_path, workdir); }},
  };

  int unexpected = 0;
  for (std::size_t k = 0; k < criteria.size(); ++k) {
    const int id = static_cast<int>(k + 1);
    if (!selected.empty() && !selected.count(id)) continue;
    Outcome o;
    try {
      o = criteria[k].second();
    } catch (const std::exception& e) {
      o = {false, std::string("exception: ") + e.what()};
    }
    const bool known_bad = expected_fail.count(id) > 0;
    std::printf("%s %2d %s: %s%s\n", o.pass ? "PASS" : "FAIL", id, criteria[k].first.c_str(), o.detail.c_str(),
                known_bad ? (o.pass ? " [listed as unattainable but passed]" : " [known unattainable]") : "");
    std::fflush(stdout);
    if (o.pass == known_bad) ++unexpected;
  }
  return unexpected == 0 ? 0 : 1;
}
