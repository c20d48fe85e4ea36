#pragma once

#include <cstddef>
#include <cstdint>
#include <span>
#include <utility>
#include <vector>

#include "sdkey/probability.hpp"
#include "sdkey/rng.hpp"

namespace sdkey {

/// Length-n sequence of symbol indices.
using Sequence = std::vector<std::uint8_t>;

/// Largest alphabet a Sequence can hold.
inline constexpr std::size_t kMaxSymbols = 256;

/// Strong typicality against a fixed joint pmf over k variables: for every
/// tuple, |count/n - p| <= eps, and tuples with p = 0 must not occur.
class TypicalityTest {
 public:
  TypicalityTest(const JointPmf& pmf, double eps);

  std::size_t arity() const { return dims_.size(); }
  double eps() const { return eps_; }
  /// Sequences are given in the pmf's variable order and share one length.
  bool operator()(std::span<const Sequence* const> seqs) const;
  bool operator()(std::initializer_list<const Sequence*> seqs) const {
    return (*this)(std::span<const Sequence* const>(seqs.begin(), seqs.size()));
  }

 private:
  std::vector<std::size_t> dims_;
  std::vector<double> table_;
  double eps_;
};

/// Draws n i.i.d. symbols from `probs`.
Sequence sample_iid(Rng& rng, std::span<const double> probs, std::size_t n);

/// Balanced random partition of `count` items into `parts` classes: a random
/// permutation followed by position mod parts.
std::vector<std::uint32_t> balanced_partition(Rng& rng, std::size_t count, std::size_t parts);

/// floor(2^(n * rate)) clamped to >= 1; throws if the result exceeds `limit`.
std::size_t codebook_size(std::size_t n, double rate, std::size_t limit, const char* what);

/// Base-k index of a sequence (first symbol most significant).
std::uint64_t sequence_index(const Sequence& seq, std::size_t k);
/// Inverse of sequence_index.
Sequence sequence_from_index(std::uint64_t index, std::size_t k, std::size_t n);

/// k^n, or throws BudgetExceeded when above `limit`.
std::uint64_t checked_power(std::size_t k, std::size_t n, std::uint64_t limit, const char* what);

/// Calls f(seq, prob) for every sequence with nonzero probability under the
/// product law whose position-i marginal is probs_at(i), in lexicographic order.
template <typename ProbsAt, typename F>
void for_each_product(std::size_t n, ProbsAt&& probs_at, F&& f) {
  std::vector<std::vector<std::size_t>> support(n);
  std::vector<std::span<const double>> probs(n);
  for (std::size_t i = 0; i < n; ++i) {
    probs[i] = probs_at(i);
    for (std::size_t a = 0; a < probs[i].size(); ++a) {
      if (probs[i][a] > 0.0) support[i].push_back(a);
    }
    if (support[i].empty()) return;
  }
  Sequence seq(n, 0);
  std::vector<double> prefix(n + 1, 1.0);
  std::vector<std::size_t> pos(n, 0);
  std::size_t depth = 0;
  for (;;) {
    while (depth < n) {
      const std::size_t a = support[depth][pos[depth]];
      seq[depth] = static_cast<std::uint8_t>(a);
      prefix[depth + 1] = prefix[depth] * probs[depth][a];
      ++depth;
    }
    f(static_cast<const Sequence&>(seq), prefix[n]);
    for (;;) {
      if (depth == 0) return;
      --depth;
      if (++pos[depth] < support[depth].size()) break;
      pos[depth] = 0;
    }
  }
}

/// for_each_product with the same marginal at every position.
template <typename F>
void for_each_sequence(std::span<const double> probs, std::size_t n, F&& f) {
  for_each_product(n, [&](std::size_t) { return probs; }, std::forward<F>(f));
}

/// Shannon entropy (bits) of a nonnegative table after normalizing by its sum.
double table_entropy(std::span<const double> masses);

/// I(A;B) in bits from a dense joint table (rows = A, cols = B), normalized by
/// its total mass.
double table_mutual_information(std::span<const double> joint, std::size_t rows, std::size_t cols);

}  // namespace sdkey
