#include "sdkey/bounds.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <sstream>

#include "sdkey/error.hpp"
#include "sdkey/parallel.hpp"
#include "sdkey/rng.hpp"
#include "sdkey/spec_io.hpp"

namespace sdkey {

double RatePoint::term(const std::string& name) const {
  for (const auto& [k, v] : terms) {
    if (k == name) return v;
  }
  throw ValidationError("rate point has no term '" + name + "'");
}

namespace {

using var::S;
using var::T;
using var::T1;
using var::T2;
using var::U;
using var::V;
using var::X1;
using var::X2;
using var::Y;
using var::Z;

Constraint make_constraint(std::string name, double lhs, double rhs, double tol) {
  return Constraint{std::move(name), lhs, rhs, lhs <= rhs + tol};
}

bool all_satisfied(const std::vector<Constraint>& cs) {
  return std::all_of(cs.begin(), cs.end(), [](const Constraint& c) { return c.satisfied; });
}

double violation(const std::vector<Constraint>& cs) {
  double v = 0.0;
  for (const auto& c : cs) v += std::max(0.0, c.lhs - c.rhs);
  return v;
}

// Auxiliary-rate and conferencing constraints on a joint holding S, T, U, V, Y.
std::vector<Constraint> lower_bound_constraints(const JointPmf& j, double r_c, const BoundOptions& opts,
                                                double i_v_yt_u) {
  const double i_u_y_t = conditional_mutual_information(j, {U}, {Y}, {T});
  const double i_u_s = mutual_information(j, {U}, {S});
  const double i_v_s_u = conditional_mutual_information(j, {V}, {S}, {U});
  const double h_uv_s = conditional_entropy(j, {U, V}, {S});
  std::vector<Constraint> cs;
  if (opts.proof_consistent) {
    cs.push_back(make_constraint("I(U;S)<=I(U;Y|T)", i_u_s, i_u_y_t, opts.tolerance));
    cs.push_back(make_constraint("I(V;S|U)<=I(V;Y,T|U)", i_v_s_u, i_v_yt_u, opts.tolerance));
  } else {
    cs.push_back(make_constraint("I(U;Y|T)<=I(U;S)", i_u_y_t, i_u_s, opts.tolerance));
    cs.push_back(make_constraint("I(V;Y,T|U)<=I(V;S|U)", i_v_yt_u, i_v_s_u, opts.tolerance));
  }
  cs.push_back(make_constraint("H(U,V|S)<=R_C", h_uv_s, r_c, opts.tolerance));
  return cs;
}

// ---- search machinery -------------------------------------------------------

struct Score {
  bool feasible = false;
  double value = -std::numeric_limits<double>::infinity();

  bool better_than(const Score& o) const {
    if (feasible != o.feasible) return feasible;
    return value > o.value;
  }
};

void normalize(std::span<double> row) {
  double sum = 0.0;
  for (double p : row) sum += p;
  for (double& p : row) p /= sum;
}

void random_simplex_point(Rng& rng, std::span<double> out) {
  for (double& p : out) p = -std::log(1.0 - rng.uniform());
  normalize(out);
}

// Moves `row` toward a random vertex or a random simplex point.
void perturb_row(Rng& rng, std::span<double> row, double step) {
  std::vector<double> target(row.size(), 0.0);
  if (rng.uniform() < 0.5) {
    target[rng.index(row.size())] = 1.0;
  } else {
    random_simplex_point(rng, target);
  }
  const double lambda = step * (1.0 - rng.uniform());
  for (std::size_t i = 0; i < row.size(); ++i) row[i] = (1.0 - lambda) * row[i] + lambda * target[i];
  for (double& p : row) {
    if (p < 1e-15) p = 0.0;
  }
  normalize(row);
}

// Generic stochastic hill climb over a parameter vector made of simplex rows
// (each `row_len` long) and discrete entries with per-entry alphabet sizes.
struct Params {
  std::vector<double> rows;
  std::size_t row_len = 1;
  std::vector<std::size_t> discrete;
  std::vector<std::size_t> discrete_sizes;
};

template <typename Eval>
struct ClimbResult {
  Score best_score;
  Params best;
  bool any_feasible = false;
};

template <typename Eval>
ClimbResult<Eval> hill_climb(Params start, Eval& eval, Rng& rng, const SearchConfig& cfg) {
  ClimbResult<Eval> res;
  Params cur = std::move(start);
  Score cur_score = eval(cur);
  res.best = cur;
  res.best_score = cur_score;
  const std::size_t nrows = cur.rows.size() / cur.row_len;
  const std::size_t ndisc = cur.discrete.size();
  std::size_t movable_disc = 0;
  for (auto sz : cur.discrete_sizes) movable_disc += sz > 1 ? 1 : 0;
  const bool rows_movable = cur.row_len > 1 && nrows > 0;
  if (!rows_movable && movable_disc == 0) return res;

  double step = cfg.initial_step;
  std::size_t stale = 0;
  for (std::size_t it = 0; it < cfg.refine_iterations; ++it) {
    Params cand = cur;
    const double pick = rng.uniform();
    const double row_share = rows_movable ? (movable_disc ? 0.7 : 1.0) : 0.0;
    if (pick < row_share) {
      const std::size_t r = rng.index(nrows);
      perturb_row(rng, std::span<double>(cand.rows.data() + r * cand.row_len, cand.row_len), step);
    } else {
      std::size_t k;
      do {
        k = rng.index(ndisc);
      } while (cand.discrete_sizes[k] < 2);
      const std::size_t alt = rng.index(cand.discrete_sizes[k] - 1);
      cand.discrete[k] = alt >= cand.discrete[k] ? alt + 1 : alt;
    }
    const Score s = eval(cand);
    if (s.better_than(cur_score)) {
      cur = std::move(cand);
      cur_score = s;
      stale = 0;
      if (cur_score.better_than(res.best_score)) {
        res.best = cur;
        res.best_score = cur_score;
      }
    } else if (++stale >= cfg.patience) {
      step *= cfg.step_decay;
      stale = 0;
      if (step < cfg.min_step) step = cfg.initial_step;  // restart the schedule
    }
  }
  return res;
}

// ---- lower-bound parameterization ----------------------------------------------

struct AuxShape {
  std::size_t ns, nu, nv, nx1, nx2;
};

// Two blocks of simplex rows are packed into one vector. u rows have length nu
// and v rows length nv; to keep a single row length we store them separately.
struct AuxParams {
  std::vector<double> u_rows;  // ns x nu
  std::vector<double> v_rows;  // (nu*ns) x nv
  std::vector<std::size_t> x1, x2;  // nu*nv*ns
};

AuxiliaryScheme to_scheme(const SdMacSpec& spec, const AuxShape& sh, const AuxParams& p) {
  const Variable u{U, Alphabet::range("U", sh.nu)};
  const Variable v{V, Alphabet::range("V", sh.nv)};
  return AuxiliaryScheme(ConditionalPmf({spec.s()}, {u}, p.u_rows), ConditionalPmf({u, spec.s()}, {v}, p.v_rows),
                         ConditionalPmf::deterministic({u, v, spec.s()}, {spec.x1()}, p.x1),
                         ConditionalPmf::deterministic({u, v, spec.s()}, {spec.x2()}, p.x2));
}

// Packs AuxParams into the generic Params: rows padded to a common length with
// a mask is awkward, so we use row_len = max(nu, nv) and zero padding that the
// perturbation keeps at zero by renormalizing only the live prefix.
struct AuxCodec {
  AuxShape sh;
  std::size_t len;

  Params encode(const AuxParams& a) const {
    Params p;
    p.row_len = len;
    const std::size_t nu_rows = sh.ns, nv_rows = sh.nu * sh.ns;
    p.rows.assign((nu_rows + nv_rows) * len, 0.0);
    for (std::size_t r = 0; r < nu_rows; ++r)
      for (std::size_t k = 0; k < sh.nu; ++k) p.rows[r * len + k] = a.u_rows[r * sh.nu + k];
    for (std::size_t r = 0; r < nv_rows; ++r)
      for (std::size_t k = 0; k < sh.nv; ++k) p.rows[(nu_rows + r) * len + k] = a.v_rows[r * sh.nv + k];
    p.discrete = a.x1;
    p.discrete.insert(p.discrete.end(), a.x2.begin(), a.x2.end());
    p.discrete_sizes.assign(a.x1.size(), sh.nx1);
    p.discrete_sizes.insert(p.discrete_sizes.end(), a.x2.size(), sh.nx2);
    return p;
  }

  AuxParams decode(const Params& p) const {
    AuxParams a;
    const std::size_t nu_rows = sh.ns, nv_rows = sh.nu * sh.ns;
    a.u_rows.resize(nu_rows * sh.nu);
    a.v_rows.resize(nv_rows * sh.nv);
    for (std::size_t r = 0; r < nu_rows; ++r) {
      std::span<double> row(a.u_rows.data() + r * sh.nu, sh.nu);
      for (std::size_t k = 0; k < sh.nu; ++k) row[k] = p.rows[r * len + k];
      fix_row(row);
    }
    for (std::size_t r = 0; r < nv_rows; ++r) {
      std::span<double> row(a.v_rows.data() + r * sh.nv, sh.nv);
      for (std::size_t k = 0; k < sh.nv; ++k) row[k] = p.rows[(nu_rows + r) * len + k];
      fix_row(row);
    }
    const std::size_t m = sh.nu * sh.nv * sh.ns;
    a.x1.assign(p.discrete.begin(), p.discrete.begin() + static_cast<long>(m));
    a.x2.assign(p.discrete.begin() + static_cast<long>(m), p.discrete.end());
    return a;
  }

  static void fix_row(std::span<double> row) {
    double sum = 0.0;
    for (double x : row) sum += x;
    if (sum <= 0.0) {
      std::fill(row.begin(), row.end(), 0.0);
      row[0] = 1.0;
      return;
    }
    for (double& x : row) x /= sum;
  }
};

AuxParams random_aux(Rng& rng, const AuxShape& sh, bool vertices) {
  AuxParams a;
  a.u_rows.assign(sh.ns * sh.nu, 0.0);
  a.v_rows.assign(sh.nu * sh.ns * sh.nv, 0.0);
  for (std::size_t r = 0; r < sh.ns; ++r) {
    std::span<double> row(a.u_rows.data() + r * sh.nu, sh.nu);
    if (vertices) row[rng.index(sh.nu)] = 1.0; else random_simplex_point(rng, row);
  }
  for (std::size_t r = 0; r < sh.nu * sh.ns; ++r) {
    std::span<double> row(a.v_rows.data() + r * sh.nv, sh.nv);
    if (vertices) row[rng.index(sh.nv)] = 1.0; else random_simplex_point(rng, row);
  }
  const std::size_t m = sh.nu * sh.nv * sh.ns;
  for (std::size_t i = 0; i < m; ++i) {
    a.x1.push_back(rng.index(sh.nx1));
    a.x2.push_back(rng.index(sh.nx2));
  }
  return a;
}

AuxParams trivial_aux(const AuxShape& sh) {
  AuxParams a;
  a.u_rows.assign(sh.ns * sh.nu, 0.0);
  a.v_rows.assign(sh.nu * sh.ns * sh.nv, 0.0);
  for (std::size_t r = 0; r < sh.ns; ++r) a.u_rows[r * sh.nu] = 1.0;
  for (std::size_t r = 0; r < sh.nu * sh.ns; ++r) a.v_rows[r * sh.nv] = 1.0;
  a.x1.assign(sh.nu * sh.nv * sh.ns, 0);
  a.x2.assign(sh.nu * sh.nv * sh.ns, 0);
  return a;
}

// Restarts are merged by value, ties broken by the smaller serialization.
template <typename SchemeT>
bool prefer(double va, const SchemeT& a, double vb, const SchemeT& b) {
  if (va != vb) return va > vb;
  return to_text(a) < to_text(b);
}

}  // namespace

RatePoint common_key_lb_objective(const SdMacSpec& spec, const AuxiliaryScheme& aux, double r_c,
                                  const BoundOptions& opts) {
  const JointPmf j = reduced_joint_round1(spec, aux);
  const double i_v_yt_u = conditional_mutual_information(j, {V}, {Y, T}, {U});
  const double i_v_z_u = conditional_mutual_information(j, {V}, {Z}, {U});
  RatePoint rp;
  rp.raw_r0 = i_v_yt_u - i_v_z_u;
  rp.r0 = std::max(0.0, *rp.raw_r0);
  rp.terms = {{"I(V;Y,T|U)", i_v_yt_u}, {"I(V;Z|U)", i_v_z_u}};
  rp.constraints = lower_bound_constraints(j, r_c, opts, i_v_yt_u);
  rp.feasible = all_satisfied(rp.constraints);
  rp.scheme = aux;
  return rp;
}

RatePoint optimize_common_key_lb(const SdMacSpec& spec, double r_c, const SearchConfig& cfg) {
  if (cfg.restarts < 1) throw ValidationError("SearchConfig.restarts must be >= 1");
  if (!(r_c >= 0.0)) throw ValidationError("conferencing rate R_C must be nonnegative");
  AuxShape sh;
  sh.ns = spec.s().alphabet.size();
  sh.nu = cfg.u_cap ? cfg.u_cap : sh.ns + 1;
  sh.nv = cfg.v_cap ? cfg.v_cap : sh.ns + 2;
  sh.nx1 = spec.x1().alphabet.size();
  sh.nx2 = spec.x2().alphabet.size();
  const AuxCodec codec{sh, std::max(sh.nu, sh.nv)};
  const BoundOptions opts{cfg.proof_consistent, cfg.tolerance};

  struct Best {
    bool found = false;
    double value = 0.0;
    std::optional<AuxiliaryScheme> scheme;
  };
  std::vector<Best> per_restart(cfg.restarts);

  parallel_for(cfg.restarts, cfg.threads, [&](std::size_t r) {
    Rng rng(derive_seed(cfg.seed, r));
    auto eval = [&](Params& p) {
      // keep padded tails of u rows at zero
      const std::size_t nu_rows = sh.ns;
      for (std::size_t i = 0; i < p.rows.size() / codec.len; ++i) {
        const std::size_t live = i < nu_rows ? sh.nu : sh.nv;
        std::span<double> row(p.rows.data() + i * codec.len, codec.len);
        bool changed = false;
        for (std::size_t k = live; k < codec.len; ++k) {
          if (row[k] != 0.0) {
            row[k] = 0.0;
            changed = true;
          }
        }
        if (changed) AuxCodec::fix_row(row.first(live));
      }
      const RatePoint rp = common_key_lb_objective(spec, to_scheme(spec, sh, codec.decode(p)), r_c, opts);
      Score s;
      s.feasible = rp.feasible;
      s.value = rp.feasible ? *rp.raw_r0 : -violation(rp.constraints);
      return s;
    };
    AuxParams start = r == 0 ? trivial_aux(sh) : random_aux(rng, sh, r % 2 == 1);
    auto res = hill_climb(codec.encode(start), eval, rng, cfg);
    if (res.best_score.feasible) {
      per_restart[r].found = true;
      per_restart[r].value = res.best_score.value;
      per_restart[r].scheme = to_scheme(spec, sh, codec.decode(res.best));
    }
  });

  const Best* best = nullptr;
  for (const auto& b : per_restart) {
    if (!b.found) continue;
    if (!best || prefer(b.value, *b.scheme, best->value, *best->scheme)) best = &b;
  }
  if (!best) {
    RatePoint rp = common_key_lb_objective(spec, trivial_scheme(spec), r_c, opts);
    rp.r0 = 0.0;
    rp.feasible = false;
    return rp;
  }
  return common_key_lb_objective(spec, *best->scheme, r_c, opts);
}

double common_key_ub_value(const SdMacSpec& spec, const ConditionalPmf& input_law) {
  const JointPmf j = channel_joint(spec, input_law);
  return conditional_mutual_information(j, {X1, X2, S}, {Y, T}, {Z});
}

RatePoint common_key_ub(const SdMacSpec& spec, const SearchConfig& cfg) {
  if (cfg.restarts < 1) throw ValidationError("SearchConfig.restarts must be >= 1");
  const std::size_t ns = spec.s().alphabet.size();
  const std::size_t nx = spec.x1().alphabet.size() * spec.x2().alphabet.size();
  const std::vector<Variable> given{spec.s()};
  const std::vector<Variable> target{spec.x1(), spec.x2()};
  auto law_of = [&](const std::vector<double>& rows) { return ConditionalPmf(given, target, rows); };

  // Vertex scan: every deterministic map S -> (X1, X2), when there are few.
  std::vector<std::pair<double, std::vector<double>>> starts;
  double count = std::pow(static_cast<double>(nx), static_cast<double>(ns));
  if (count <= 4096.0) {
    std::vector<std::size_t> digit(ns, 0);
    for (std::size_t m = 0; m < static_cast<std::size_t>(count); ++m) {
      std::size_t rem = m;
      for (std::size_t s = 0; s < ns; ++s) {
        digit[s] = rem % nx;
        rem /= nx;
      }
      std::vector<double> rows(ns * nx, 0.0);
      for (std::size_t s = 0; s < ns; ++s) rows[s * nx + digit[s]] = 1.0;
      starts.emplace_back(common_key_ub_value(spec, law_of(rows)), std::move(rows));
    }
    std::stable_sort(starts.begin(), starts.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
  }

  struct Best {
    double value = -1.0;
    std::vector<double> rows;
  };
  std::vector<Best> per_restart(cfg.restarts);
  parallel_for(cfg.restarts, cfg.threads, [&](std::size_t r) {
    Rng rng(derive_seed(cfg.seed, 0x5eedULL, r));
    Params p;
    p.row_len = nx;
    if (r < starts.size() && r < (cfg.restarts + 1) / 2) {
      p.rows = starts[r].second;
    } else if (r == 0 || r % 2 == 0) {
      p.rows = std::vector<double>(ns * nx, 1.0 / static_cast<double>(nx));
      if (r != 0) {
        for (std::size_t s = 0; s < ns; ++s) random_simplex_point(rng, std::span<double>(p.rows.data() + s * nx, nx));
      }
    } else {
      p.rows.assign(ns * nx, 0.0);
      for (std::size_t s = 0; s < ns; ++s) random_simplex_point(rng, std::span<double>(p.rows.data() + s * nx, nx));
    }
    auto eval = [&](Params& q) {
      Score sc;
      sc.feasible = true;
      sc.value = common_key_ub_value(spec, law_of(q.rows));
      return sc;
    };
    auto res = hill_climb(p, eval, rng, cfg);
    per_restart[r].value = res.best_score.value;
    per_restart[r].rows = res.best.rows;
  });

  double best_value = -1.0;
  std::vector<double> best_rows;
  auto consider = [&](double v, const std::vector<double>& rows) {
    if (v > best_value || (v == best_value && to_text(law_of(rows)) < to_text(law_of(best_rows)))) {
      best_value = v;
      best_rows = rows;
    }
  };
  for (const auto& s : starts) consider(s.first, s.second);
  for (const auto& b : per_restart) consider(b.value, b.rows);

  RatePoint rp;
  rp.raw_r0 = best_value;
  rp.r0 = std::max(0.0, best_value);
  rp.terms = {{"I(X1,X2,S;Y,T|Z)", best_value}};
  rp.scheme = InputLaw{law_of(best_rows)};
  return rp;
}

RatePoint degraded_common_key_capacity(const SdMacSpec& spec, const AuxiliaryScheme& aux, double r_c,
                                       const BoundOptions& opts, double markov_tolerance) {
  const JointPmf j = reduced_joint_round1(spec, aux);
  const double leak = conditional_mutual_information(j, {U, V}, {Z}, {Y});
  if (leak > markov_tolerance) {
    std::ostringstream os;
    os.precision(12);
    os << "eavesdropper is not degraded: I(U,V;Z|Y) = " << leak << " exceeds " << markov_tolerance;
    throw ValidationError(os.str());
  }
  const double rate = conditional_mutual_information(j, {V}, {Y, T}, {U, Z});
  const double i_v_yt_u = conditional_mutual_information(j, {V}, {Y, T}, {U});
  const double i_v_z_u = conditional_mutual_information(j, {V}, {Z}, {U});
  RatePoint rp;
  rp.raw_r0 = rate;
  rp.r0 = std::max(0.0, rate);
  rp.terms = {{"I(V;Y,T|U,Z)", rate},
              {"I(V;Y,T|U)-I(V;Z|U)", i_v_yt_u - i_v_z_u},
              {"I(U,V;Z|Y)", leak}};
  rp.constraints = lower_bound_constraints(j, r_c, opts, i_v_yt_u);
  rp.feasible = all_satisfied(rp.constraints);
  rp.scheme = aux;
  return rp;
}

RatePoint private_key_inner_point(const SdMacSpec& spec, const Round2Scheme& scheme, const BoundOptions& opts) {
  const JointPmf j = full_joint_round2(spec, scheme);
  RatePoint rp;
  for (int i = 1; i <= 2; ++i) {
    const std::string ti = i == 1 ? T1 : T2;
    const std::string xi = i == 1 ? X1 : X2;
    const std::string xc = i == 1 ? X2 : X1;
    const std::string tag = std::to_string(i);
    const double own = conditional_mutual_information(j, {ti}, {xi, S}, {T});
    const double cross = conditional_mutual_information(j, {ti}, {xc, S}, {T});
    const double eve = mutual_information(j, {ti}, {Z});
    const double cover = conditional_mutual_information(j, {ti}, {Y}, {T});
    const double raw = std::min(own - cross, own - eve);
    rp.terms.emplace_back("I(T" + tag + ";X" + tag + ",S|T)", own);
    rp.terms.emplace_back("I(T" + tag + ";X" + (i == 1 ? "2" : "1") + ",S|T)", cross);
    rp.terms.emplace_back("I(T" + tag + ";Z)", eve);
    rp.terms.emplace_back("I(T" + tag + ";Y|T)", cover);
    rp.constraints.push_back(
        make_constraint("I(T" + tag + ";X" + tag + ",S|T)<=I(T" + tag + ";Y|T)", own, cover, opts.tolerance));
    (i == 1 ? rp.raw_r1 : rp.raw_r2) = raw;
    (i == 1 ? rp.r1 : rp.r2) = std::max(0.0, raw);
  }
  rp.feasible = all_satisfied(rp.constraints);
  rp.scheme = scheme;
  return rp;
}

RatePoint private_key_outer_point(const SdMacSpec& spec, const Round2Scheme& scheme) {
  const JointPmf j = full_joint_round2(spec, scheme);
  RatePoint rp;
  for (int i = 1; i <= 2; ++i) {
    const std::string ti = i == 1 ? T1 : T2;
    const std::string xi = i == 1 ? X1 : X2;
    const std::string xc = i == 1 ? X2 : X1;
    const std::string tag = std::to_string(i);
    const double a = conditional_mutual_information(j, {ti}, {xi, S}, {Z});
    const double b = conditional_mutual_information(j, {ti}, {xi}, {xc, S});
    rp.terms.emplace_back("I(T" + tag + ";X" + tag + ",S|Z)", a);
    rp.terms.emplace_back("I(T" + tag + ";X" + tag + "|X" + (i == 1 ? "2" : "1") + ",S)", b);
    const double raw = std::min(a, b);
    (i == 1 ? rp.raw_r1 : rp.raw_r2) = raw;
    (i == 1 ? rp.r1 : rp.r2) = std::max(0.0, raw);
  }
  rp.scheme = scheme;
  return rp;
}

RatePoint corollary2_point(const SdMacSpec& spec, const Round2Scheme& scheme, const BoundOptions& opts,
                           double markov_tolerance) {
  const JointPmf j = full_joint_round2(spec, scheme);
  const double first = conditional_mutual_information(j, {X1, T1}, {X2, T2}, {S, T});
  const double second = conditional_mutual_information(j, {S, T}, {Z}, {X2, T2});
  if (first > markov_tolerance || second > markov_tolerance) {
    std::ostringstream os;
    os.precision(12);
    os << "Markov chain (X1,T1)-(S,T)-(X2,T2)-Z violated: I(X1,T1;X2,T2|S,T) = " << first
       << ", I(S,T;Z|X2,T2) = " << second << " (tolerance " << markov_tolerance << ")";
    throw ValidationError(os.str());
  }
  RatePoint rp;
  for (int i = 1; i <= 2; ++i) {
    const std::string ti = i == 1 ? T1 : T2;
    const std::string xi = i == 1 ? X1 : X2;
    const std::string xc = i == 1 ? X2 : X1;
    const std::string tag = std::to_string(i);
    const double rate = conditional_mutual_information(j, {ti}, {xi}, {S, xc});
    const double own = conditional_mutual_information(j, {ti}, {xi, S}, {T});
    const double cover = conditional_mutual_information(j, {ti}, {Y}, {T});
    rp.terms.emplace_back("I(T" + tag + ";X" + tag + "|S,X" + (i == 1 ? "2" : "1") + ")", rate);
    rp.constraints.push_back(
        make_constraint("I(T" + tag + ";X" + tag + ",S|T)<=I(T" + tag + ";Y|T)", own, cover, opts.tolerance));
    (i == 1 ? rp.raw_r1 : rp.raw_r2) = rate;
    (i == 1 ? rp.r1 : rp.r2) = std::max(0.0, rate);
  }
  rp.terms.emplace_back("I(X1,T1;X2,T2|S,T)", first);
  rp.terms.emplace_back("I(S,T;Z|X2,T2)", second);
  rp.feasible = all_satisfied(rp.constraints);
  rp.scheme = scheme;
  return rp;
}

ClosedForm stuck_at_lb_closed_form(double p) {
  if (!(p >= 0.0 && p <= 1.0)) throw ValidationError("stuck-at fault probability outside [0,1]");
  return ClosedForm{p, p, 1.0 - p};
}

ClosedForm modadd_lb_closed_form(double alpha, double p_s, double p1, double p2, double r_c) {
  for (double x : {alpha, p_s, p1, p2}) {
    if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("modulo-additive closed form: probability outside [0,1]");
  }
  const double a_s = binary_convolution(alpha, p_s);
  const double raw = binary_entropy(binary_convolution(a_s, p1)) + binary_entropy(binary_convolution(p_s, p2)) -
                     binary_entropy(binary_convolution(a_s, p2)) - binary_entropy(binary_convolution(p_s, p1));
  const double limit = binary_entropy(alpha) + binary_entropy(binary_convolution(alpha, p1)) -
                       binary_entropy(binary_convolution(a_s, p1));
  return ClosedForm{std::max(0.0, raw), raw, std::min(limit, r_c)};
}

}  // namespace sdkey
