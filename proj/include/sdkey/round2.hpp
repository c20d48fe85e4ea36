#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <vector>

#include "sdkey/channel.hpp"
#include "sdkey/report.hpp"
#include "sdkey/round1.hpp"
#include "sdkey/sequences.hpp"

namespace sdkey {

struct Round2Config {
  std::size_t n = 6;
  /// Per transmitter: word rate R_Ti, bin rate R'_Ti (public), sub-bin rate R''_Ti (key).
  std::array<double, 2> rate_t{0.0, 0.0};
  std::array<double, 2> rate_bins{0.0, 0.0};
  std::array<double, 2> rate_subbins{0.0, 0.0};
  double eps = 0.25;
  TieBreak tie_break = TieBreak::uniform;
  std::uint64_t seed = 1;
  std::size_t max_words = std::size_t{1} << 20;

  void validate() const;
};

struct DoubleBinnedCodebook {
  std::vector<Sequence> t_words;
  std::vector<std::uint32_t> bin_of;
  std::vector<std::uint32_t> subbin_of;
  std::size_t bins = 1;
  std::size_t subbins = 1;

  std::size_t size() const { return t_words.size(); }
};

using CodebookPair = std::array<DoubleBinnedCodebook, 2>;

struct ReceiverChoice {
  std::uint32_t word = 0;
  std::uint32_t psi = 0;  // public message: bin index
  std::uint32_t key = 0;  // sub-bin index
  bool found = false;
};

struct Reconstruction {
  std::uint32_t word = 0;
  std::uint32_t key_hat = 0;
  bool ok = false;
};

struct Round2Transcript {
  Sequence s_seq, t_seq, x1_seq, x2_seq, y_seq, z_seq;
  std::array<ReceiverChoice, 2> receiver;
  std::array<Reconstruction, 2> transmitter;
};

/// Per-symbol laws and typicality tests for one (channel, round-2 scheme, config).
/// Index i is 1 or 2 throughout.
class Round2System {
 public:
  Round2System(SdMacSpec spec, Round2Scheme scheme, Round2Config cfg);

  const SdMacSpec& spec() const { return spec_; }
  const Round2Scheme& scheme() const { return scheme_; }
  const Round2Config& config() const { return cfg_; }
  std::size_t n() const { return cfg_.n; }

  CodebookPair generate_t_codebooks(Rng& rng) const;

  /// Words jointly typical with (y, t) under p(t_i, y, t), in index order.
  std::vector<std::uint32_t> receiver_candidates(int i, const DoubleBinnedCodebook& cb, const Sequence& y_seq,
                                                 const Sequence& t_seq) const;
  ReceiverChoice receiver_key_gen(int i, const DoubleBinnedCodebook& cb, const Sequence& y_seq,
                                  const Sequence& t_seq, Rng& rng) const;
  /// Unique word of bin `psi` jointly typical with (x_i, s); otherwise ok = false
  /// and the lowest typical index (or the first word of the bin) is reported.
  Reconstruction transmitter_reconstruct(int i, const Sequence& x_seq, const Sequence& s_seq, std::uint32_t psi,
                                         const DoubleBinnedCodebook& cb) const;

  Round2Transcript run_trial(const CodebookPair& cbs, Rng& rng) const;

  /// I(T_i; Y | T), the covering threshold for rate_t.
  double covering_threshold(int i) const { return covering_[i - 1]; }
  /// I(X_i, S; T_i | T), the packing threshold for rate_t - rate_bins.
  double packing_threshold(int i) const { return packing_[i - 1]; }

  std::span<const double> state_probs() const { return spec_.state_pmf().table(); }
  std::span<const double> degrade_row(std::size_t s) const { return spec_.degrade_kernel().row(s); }
  std::span<const double> input_row(std::size_t s) const { return scheme_.input_law().row(s); }
  std::span<const double> channel_row(std::size_t x1, std::size_t x2, std::size_t s) const;
  /// Full per-symbol joint over (S, T, X1, X2, Y, Z, T1, T2).
  const JointPmf& joint() const { return joint_; }

 private:
  SdMacSpec spec_;
  Round2Scheme scheme_;
  Round2Config cfg_;
  JointPmf joint_;
  std::size_t ns_, nx2_, nz_;
  std::array<std::vector<double>, 2> t_marginal_;
  std::vector<TypicalityTest> receiver_test_;     // (T_i, Y, T)
  std::vector<TypicalityTest> transmitter_test_;  // (X_i, S, T_i)
  std::array<double, 2> covering_{}, packing_{};
};

CodebookPair generate_t_codebooks(const SdMacSpec& spec, const Round2Scheme& scheme, const Round2Config& cfg,
                                  Rng& rng);

struct Round2Exact {
  std::array<double, 2> p_err{};
  /// I(K_i; Z^n, Psi_1, Psi_2) / n
  std::array<double, 2> leak_eve{};
  /// I(K_i; X_ic^n, K_ic, S^n, Psi_1, Psi_2) / n
  std::array<double, 2> leak_cross{};
  std::array<double, 2> key_entropy{};
  std::array<double, 2> log2_subbins{};
  /// I(K_1; K_2) / n
  double key_coupling = 0.0;
};

/// Exact metrics for fixed codebooks. Receiver choices are averaged over the
/// tie-break rule. Throws BudgetExceeded past `budget` enumeration leaves.
Round2Exact exact_round2_metrics(const Round2System& sys, const CodebookPair& cbs,
                                 std::uint64_t budget = std::uint64_t{1} << 27);

CodebookPair round2_codebooks_for_batch(const Round2System& sys, std::size_t batch);

SimulationReport monte_carlo_round2(const Round2System& sys, const McOptions& opts);

}  // namespace sdkey
