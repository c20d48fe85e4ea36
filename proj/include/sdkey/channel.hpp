#pragma once

#include <string>
#include <vector>

#include "sdkey/probability.hpp"

namespace sdkey {

/// Canonical variable names used by every joint built in this library.
namespace var {
inline const std::string S = "S";
inline const std::string T = "T";
inline const std::string U = "U";
inline const std::string V = "V";
inline const std::string X1 = "X1";
inline const std::string X2 = "X2";
inline const std::string Y = "Y";
inline const std::string Z = "Z";
inline const std::string T1 = "T1";
inline const std::string T2 = "T2";
}  // namespace var

/// State-dependent MAC with an eavesdropper: p(s), p(t|s), p(y,z|x1,x2,s).
/// Extended memorylessly across the blocklength.
class SdMacSpec {
 public:
  SdMacSpec(Alphabet s, Alphabet t, Alphabet x1, Alphabet x2, Alphabet y, Alphabet z,
            std::vector<double> state_pmf, std::vector<double> degrade_rows,
            std::vector<double> channel_rows);

  Variable s() const { return {var::S, s_}; }
  Variable t() const { return {var::T, t_}; }
  Variable x1() const { return {var::X1, x1_}; }
  Variable x2() const { return {var::X2, x2_}; }
  Variable y() const { return {var::Y, y_}; }
  Variable z() const { return {var::Z, z_}; }

  const JointPmf& state_pmf() const { return state_pmf_; }
  /// p(t | s).
  const ConditionalPmf& degrade_kernel() const { return degrade_; }
  /// p(y, z | x1, x2, s); row index = (x1 * |X2| + x2) * |S| + s, entry = y * |Z| + z.
  const ConditionalPmf& channel_kernel() const { return channel_; }

  bool operator==(const SdMacSpec& other) const;

 private:
  Alphabet s_, t_, x1_, x2_, y_, z_;
  JointPmf state_pmf_;
  ConditionalPmf degrade_;
  ConditionalPmf channel_;
};

/// Auxiliary laws p(u|s), p(v|u,s) and input maps p(x1|u,v,s), p(x2|u,v,s).
class AuxiliaryScheme {
 public:
  AuxiliaryScheme(ConditionalPmf u_kernel, ConditionalPmf v_kernel, ConditionalPmf x1_kernel,
                  ConditionalPmf x2_kernel);

  const ConditionalPmf& u_kernel() const { return u_; }
  const ConditionalPmf& v_kernel() const { return v_; }
  const ConditionalPmf& x1_kernel() const { return x1_; }
  const ConditionalPmf& x2_kernel() const { return x2_; }
  Variable u() const { return u_.target()[0]; }
  Variable v() const { return v_.target()[0]; }

  /// Checks kernel shapes against a channel.
  void check_compatible(const SdMacSpec& spec) const;

 private:
  ConditionalPmf u_, v_, x1_, x2_;
};

/// Round-two law: inputs p(x1,x2|s) and receiver test channels p(t1|y,t), p(t2|y,t).
/// T1 and T2 are conditionally independent given (Y, T) by construction.
class Round2Scheme {
 public:
  Round2Scheme(ConditionalPmf input_law, ConditionalPmf t1_kernel, ConditionalPmf t2_kernel);

  const ConditionalPmf& input_law() const { return input_; }
  const ConditionalPmf& t1_kernel() const { return t1_; }
  const ConditionalPmf& t2_kernel() const { return t2_; }
  const ConditionalPmf& t_kernel(int i) const { return i == 1 ? t1_ : t2_; }

  void check_compatible(const SdMacSpec& spec) const;

 private:
  ConditionalPmf input_, t1_, t2_;
};

/// Joint over (S, T, U, V, X1, X2, Y, Z) in factorization order.
JointPmf full_joint_round1(const SdMacSpec& spec, const AuxiliaryScheme& aux);
/// Joint over (S, T, X1, X2, Y, Z, T1, T2).
JointPmf full_joint_round2(const SdMacSpec& spec, const Round2Scheme& scheme);
/// Joint over (S, T, X1, X2, Y, Z) for an input law p(x1, x2 | s).
JointPmf channel_joint(const SdMacSpec& spec, const ConditionalPmf& input_law);
/// Marginal of full_joint_round1 on (S, T, U, V, Y, Z), built without the X layer.
JointPmf reduced_joint_round1(const SdMacSpec& spec, const AuxiliaryScheme& aux);

enum class EveMode { uninformative, reads_memory };
enum class NoiseCoupling { independent, degraded_cascade };

/// Binary memory with stuck-at faults: S in {stuck0, stuck1, clean} with masses
/// (p/2, p/2, 1-p); one effective input X1; X2 and T are singletons.
SdMacSpec build_stuck_at(double p, EveMode eve = EveMode::uninformative);

/// Binary Y = X1^X2^S^N1, Z = X1^X2^S^N2. With degraded_cascade, Z = Y^N' where
/// N' ~ Bern((p2-p1)/(1-2p1)), which gives the same marginal noise on Z.
/// Parameters outside 0 <= p1 <= p2 <= 1/2 append a message to `warnings`.
SdMacSpec build_modulo_additive(double p_s, double p1, double p2,
                                NoiseCoupling coupling = NoiseCoupling::independent,
                                std::vector<std::string>* warnings = nullptr);

enum class EveTap { sum, x2_side };

/// Two-component output: Y = (X1^S^N1, X2^S^N2) with Y symbols "ab"; the
/// eavesdropper sees X1^X2^Ne (sum) or X2^Ne (x2_side). S ~ Bern(p_s).
SdMacSpec build_parallel_bsc(double p_s, double p1, double p2, double p_e, EveTap tap = EveTap::sum);

/// Eavesdropper replaced by a constant observation.
SdMacSpec with_constant_eavesdropper(const SdMacSpec& spec);

/// |U| = |V| = 1, both inputs fixed to their first symbol.
AuxiliaryScheme trivial_scheme(const SdMacSpec& spec);
/// U constant, V ~ Bern(alpha) independent of S, X1 = X2 = V. Binary inputs only.
AuxiliaryScheme copy_input_scheme(const SdMacSpec& spec, double alpha);

/// U constant, V ~ Bern(alpha) independent of S, X1 = V, X2 fixed to its first
/// symbol. On the modulo-additive channel this makes X1 ^ X2 = V.
AuxiliaryScheme single_input_scheme(const SdMacSpec& spec, double alpha);
/// Inputs uniform and independent of S and of each other.
ConditionalPmf uniform_input_law(const SdMacSpec& spec);
/// Binary inputs X1 ~ Bern(a1), X2 ~ Bern(a2), independent of S and of each other.
ConditionalPmf bernoulli_input_law(const SdMacSpec& spec, double a1, double a2);
/// T_i = Y ^ Bern(q_i) for binary Y.
Round2Scheme binary_test_channel_scheme(const SdMacSpec& spec, double q1, double q2);
/// T_i = (component i of Y) ^ Bern(q_i) for the two-component output of
/// build_parallel_bsc. Inputs are Bern(input_bias) each.
Round2Scheme parallel_test_channel_scheme(const SdMacSpec& spec, double q1, double q2, double input_bias = 0.5);

}  // namespace sdkey
