#pragma once

#include <cstddef>
#include <cstdint>
#include <utility>
#include <vector>

#include "sdkey/channel.hpp"
#include "sdkey/report.hpp"
#include "sdkey/sequences.hpp"

namespace sdkey {

enum class Decoder { typicality, max_likelihood };

/// How an encoder picks among several typical candidates. `uniform` draws one
/// at random; exact enumeration averages over that draw. `lowest_index` takes
/// the first candidate.
enum class TieBreak { uniform, lowest_index };

struct Round1Config {
  std::size_t n = 6;
  double rate_u = 0.0;
  /// Rate of each satellite list (R~_V) and of its bin partition (R_V).
  double rate_v_total = 0.0;
  double rate_v_bins = 0.0;
  double r_c = 1.0;
  double eps = 0.25;
  Decoder decoder = Decoder::typicality;
  TieBreak tie_break = TieBreak::uniform;
  std::uint64_t seed = 1;
  /// Upper limit on words per list.
  std::size_t max_words = std::size_t{1} << 20;

  void validate() const;
};

/// Cloud centers u(m_u) and, per center, satellites v(m_u, m_v) with bins.
struct SuperpositionCodebook {
  std::vector<Sequence> u_words;
  std::vector<std::vector<Sequence>> v_words;
  std::vector<std::vector<std::uint32_t>> bin_of;
  std::size_t bins = 1;

  std::size_t m_u() const { return u_words.size(); }
  std::size_t m_v() const { return v_words.empty() ? 0 : v_words[0].size(); }
};

using IndexPair = std::pair<std::uint32_t, std::uint32_t>;

struct DecodeResult {
  IndexPair indices{0, 0};
  std::uint32_t k0_hat = 0;
  bool ok = false;
};

struct Round1Transcript {
  Sequence s_seq, t_seq;
  IndexPair chosen{0, 0};
  /// Indices ENC 2 ended up using (differs when conferencing failed).
  IndexPair chosen_enc2{0, 0};
  bool encoder_found = false;
  double conference_bits_used = 0.0;
  bool conference_ok = true;
  Sequence x1_seq, x2_seq, y_seq, z_seq;
  std::uint32_t k0 = 0;   // K_01
  std::uint32_t k02 = 0;  // K_02
  std::uint32_t k0_hat = 0;
  bool decode_ok = false;
};

/// Precomputed per-symbol laws and tests for one (channel, scheme, config).
/// Input maps x_j(u, v, s) must be deterministic.
class Round1System {
 public:
  Round1System(SdMacSpec spec, AuxiliaryScheme aux, Round1Config cfg);

  const SdMacSpec& spec() const { return spec_; }
  const AuxiliaryScheme& aux() const { return aux_; }
  const Round1Config& config() const { return cfg_; }
  std::size_t n() const { return cfg_.n; }

  SuperpositionCodebook generate_codebook(Rng& rng) const;

  /// All (m_u, m_v) with (s, u) and (s, u, v) jointly typical, in index order.
  std::vector<IndexPair> encoder_candidates(const SuperpositionCodebook& cb, const Sequence& s_seq) const;
  /// Typical pair chosen per the tie-break rule, or (0, 0) when none exists.
  /// `rng` is used only for the uniform rule.
  std::pair<IndexPair, bool> encode_conference(const SuperpositionCodebook& cb, const Sequence& s_seq,
                                               Rng& rng) const;
  /// Bits needed at this blocklength: max over typical m_u of
  /// log2(|typical centers| * |typical satellites of m_u|).
  double conferencing_budget(const SuperpositionCodebook& cb, const Sequence& s_seq) const;
  /// H(U,V|S) of the scheme, the per-symbol sufficient rate.
  double asymptotic_budget() const;

  Sequence input_sequence(int j, const SuperpositionCodebook& cb, IndexPair idx, const Sequence& s_seq) const;
  std::pair<Sequence, Sequence> channel_transmit(const Sequence& x1, const Sequence& x2, const Sequence& s,
                                                 Rng& rng) const;
  DecodeResult decode_common_key(const SuperpositionCodebook& cb, const Sequence& y_seq,
                                 const Sequence& t_seq) const;

  /// One full protocol run on a fixed codebook.
  Round1Transcript run_trial(const SuperpositionCodebook& cb, Rng& rng) const;

  // per-symbol laws used by enumeration code
  std::span<const double> state_probs() const { return spec_.state_pmf().table(); }
  std::span<const double> degrade_row(std::size_t s) const { return spec_.degrade_kernel().row(s); }
  std::span<const double> channel_row(std::size_t x1, std::size_t x2, std::size_t s) const;

 private:
  SdMacSpec spec_;
  AuxiliaryScheme aux_;
  Round1Config cfg_;
  std::size_t ns_, nt_, nu_, nv_, nx1_, nx2_, ny_, nz_;
  std::vector<std::size_t> x1_map_, x2_map_;
  std::vector<double> u_marginal_;
  std::vector<double> v_given_u_;  // nu x nv
  TypicalityTest enc_su_, enc_suv_, dec_tyu_, dec_tyuv_;
  std::vector<double> log_lik_;  // ((u*nv+v)*ny + y)*nt + t
  double h_uv_s_ = 0.0;
};

SuperpositionCodebook generate_codebook(const SdMacSpec& spec, const AuxiliaryScheme& aux, const Round1Config& cfg,
                                        Rng& rng);

struct Round1Exact {
  double p_err = 0.0;
  double leakage_per_symbol = 0.0;
  double key_entropy = 0.0;
  /// Probability that the conferencing budget exceeds n * r_c.
  double conference_failure = 0.0;
  /// Probability that no typical encoder pair exists.
  double encoder_failure = 0.0;
  double log2_bins = 0.0;
};

/// Exact P(K^_0 != K_01), I(K_01; Z^n)/n and H(K_01) for a fixed codebook, by
/// enumeration of state, degraded-state and output sequences. Throws
/// BudgetExceeded when the enumeration exceeds `budget` leaf visits.
Round1Exact exact_round1_metrics(const Round1System& sys, const SuperpositionCodebook& cb,
                                 std::uint64_t budget = std::uint64_t{1} << 28);

struct McOptions {
  std::size_t trials = 1000;
  /// Trials per freshly drawn codebook; 0 keeps one codebook for every trial.
  std::size_t codebook_batch = 0;
  std::size_t threads = 1;
};

/// Monte-Carlo estimates of error, agreement and key statistics. Trial t uses
/// an RNG derived from (seed, t); codebook b from (seed, b).
SimulationReport monte_carlo_round1(const Round1System& sys, const McOptions& opts);

/// The codebook Monte-Carlo uses when codebook_batch = 0, or batch b otherwise.
SuperpositionCodebook round1_codebook_for_batch(const Round1System& sys, std::size_t batch);

}  // namespace sdkey
