#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "sdkey/channel.hpp"

namespace sdkey {

struct Constraint {
  std::string name;
  double lhs = 0.0;
  double rhs = 0.0;
  bool satisfied = true;
};

/// Input law p(x1, x2 | s) that achieves an upper-bound value.
struct InputLaw {
  ConditionalPmf law;
};

using AchievingScheme = std::variant<std::monostate, AuxiliaryScheme, Round2Scheme, InputLaw>;

/// Evaluated bound. Reported rates are clamped at zero; the signed values are
/// kept in the raw_* fields.
struct RatePoint {
  std::optional<double> r0, r1, r2;
  std::optional<double> raw_r0, raw_r1, raw_r2;
  /// Named component expressions (min-terms, objective parts).
  std::vector<std::pair<std::string, double>> terms;
  std::vector<Constraint> constraints;
  bool feasible = true;
  AchievingScheme scheme;

  double term(const std::string& name) const;
};

struct BoundOptions {
  /// Flip the two auxiliary-rate constraints of the common-key lower bound to
  /// the covering/packing direction (I(U;S) <= I(U;Y|T), I(V;S|U) <= I(V;Y,T|U)).
  bool proof_consistent = false;
  double tolerance = 1e-9;
};

struct SearchConfig {
  /// Auxiliary alphabet caps; 0 selects |U| = |S|+1, |V| = |S|+2.
  std::size_t u_cap = 0;
  std::size_t v_cap = 0;
  std::size_t restarts = 6;
  std::size_t refine_iterations = 1500;
  double initial_step = 0.6;
  double step_decay = 0.5;
  /// Iterations without improvement before the step shrinks.
  std::size_t patience = 60;
  double min_step = 1e-4;
  std::uint64_t seed = 1;
  double tolerance = 1e-9;
  bool proof_consistent = false;
  /// Worker threads for restarts; the result does not depend on this.
  std::size_t threads = 1;
};

RatePoint common_key_lb_objective(const SdMacSpec& spec, const AuxiliaryScheme& aux, double r_c,
                                  const BoundOptions& opts = {});
RatePoint optimize_common_key_lb(const SdMacSpec& spec, double r_c, const SearchConfig& cfg = {});

/// I(X1,X2,S; Y,T | Z) under a fixed input law.
double common_key_ub_value(const SdMacSpec& spec, const ConditionalPmf& input_law);
/// Maximum of common_key_ub_value over input laws (vertex scan + local search).
RatePoint common_key_ub(const SdMacSpec& spec, const SearchConfig& cfg = {});

/// Degraded-eavesdropper rate I(V;Y,T|U,Z) with the lower-bound constraints.
/// Throws ValidationError if I((U,V);Z|Y) exceeds `markov_tolerance`.
RatePoint degraded_common_key_capacity(const SdMacSpec& spec, const AuxiliaryScheme& aux, double r_c,
                                       const BoundOptions& opts = {}, double markov_tolerance = 1e-9);

RatePoint private_key_inner_point(const SdMacSpec& spec, const Round2Scheme& scheme,
                                  const BoundOptions& opts = {});
RatePoint private_key_outer_point(const SdMacSpec& spec, const Round2Scheme& scheme);
/// r_i = I(T_i; X_i | S, X_ic). Throws unless (X1,T1) -> (S,T) -> (X2,T2) -> Z
/// holds on consecutive triples within `markov_tolerance`.
RatePoint corollary2_point(const SdMacSpec& spec, const Round2Scheme& scheme, const BoundOptions& opts = {},
                           double markov_tolerance = 1e-9);

struct ClosedForm {
  double rate = 0.0;
  double raw_rate = 0.0;
  /// Upper limit on H(V|S).
  double constraint = 0.0;
};

/// (p, 1 - p) for the stuck-at memory.
ClosedForm stuck_at_lb_closed_form(double p);
/// Modulo-additive closed form with U = T = const, X1 = X2 = V ~ Bern(alpha).
ClosedForm modadd_lb_closed_form(double alpha, double p_s, double p1, double p2, double r_c);

}  // namespace sdkey
