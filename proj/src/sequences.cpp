#include "sdkey/sequences.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "sdkey/error.hpp"

namespace sdkey {

TypicalityTest::TypicalityTest(const JointPmf& pmf, double eps) : table_(pmf.table()), eps_(eps) {
  if (!(eps >= 0.0)) throw ValidationError("typicality eps must be nonnegative");
  for (const auto& v : pmf.variables()) dims_.push_back(v.alphabet.size());
}

bool TypicalityTest::operator()(std::span<const Sequence* const> seqs) const {
  if (seqs.size() != dims_.size()) throw ValidationError("typicality test: wrong number of sequences");
  const std::size_t n = seqs[0]->size();
  for (const auto* s : seqs) {
    if (s->size() != n) throw ValidationError("typicality test: sequence lengths differ");
  }
  if (n == 0) return true;
  std::vector<std::uint32_t> counts(table_.size(), 0);
  for (std::size_t i = 0; i < n; ++i) {
    std::size_t idx = 0;
    for (std::size_t k = 0; k < dims_.size(); ++k) idx = idx * dims_[k] + (*seqs[k])[i];
    if (table_[idx] == 0.0) return false;
    ++counts[idx];
  }
  const double inv_n = 1.0 / static_cast<double>(n);
  for (std::size_t c = 0; c < table_.size(); ++c) {
    if (std::abs(counts[c] * inv_n - table_[c]) > eps_) return false;
  }
  return true;
}

Sequence sample_iid(Rng& rng, std::span<const double> probs, std::size_t n) {
  Sequence out(n);
  for (auto& x : out) x = static_cast<std::uint8_t>(rng.sample(probs));
  return out;
}

std::vector<std::uint32_t> balanced_partition(Rng& rng, std::size_t count, std::size_t parts) {
  std::vector<std::uint32_t> order(count);
  for (std::size_t i = 0; i < count; ++i) order[i] = static_cast<std::uint32_t>(i);
  rng.shuffle(order);
  std::vector<std::uint32_t> cls(count);
  for (std::size_t pos = 0; pos < count; ++pos) cls[order[pos]] = static_cast<std::uint32_t>(pos % parts);
  return cls;
}

std::size_t codebook_size(std::size_t n, double rate, std::size_t limit, const char* what) {
  if (!(rate >= 0.0)) throw ValidationError(std::string(what) + ": rate must be nonnegative");
  const double bits = static_cast<double>(n) * rate;
  if (bits > 62.0 || std::exp2(bits) > static_cast<double>(limit) + 1.0) {
    throw ValidationError(std::string(what) + ": 2^(" + std::to_string(bits) + ") words exceed the limit of " +
                          std::to_string(limit) + " (about " +
                          std::to_string(std::exp2(bits) * static_cast<double>(n) / 1048576.0) +
                          " MiB per word list)");
  }
  const auto size = static_cast<std::size_t>(std::floor(std::exp2(bits) + 1e-9));
  return size < 1 ? 1 : size;
}

std::uint64_t sequence_index(const Sequence& seq, std::size_t k) {
  std::uint64_t idx = 0;
  for (auto x : seq) idx = idx * k + x;
  return idx;
}

Sequence sequence_from_index(std::uint64_t index, std::size_t k, std::size_t n) {
  Sequence out(n);
  for (std::size_t i = n; i-- > 0;) {
    out[i] = static_cast<std::uint8_t>(index % k);
    index /= k;
  }
  return out;
}

std::uint64_t checked_power(std::size_t k, std::size_t n, std::uint64_t limit, const char* what) {
  std::uint64_t r = 1;
  for (std::size_t i = 0; i < n; ++i) {
    if (r > limit / std::max<std::size_t>(k, 1)) {
      throw BudgetExceeded(std::string(what) + ": " + std::to_string(k) + "^" + std::to_string(n) +
                           " exceeds the enumeration budget; use Monte-Carlo instead");
    }
    r *= k;
  }
  return r;
}

double table_entropy(std::span<const double> masses) {
  double total = 0.0;
  for (double m : masses) total += m;
  if (total <= 0.0) return 0.0;
  double h = 0.0;
  for (double m : masses) {
    if (m > 0.0) {
      const double p = m / total;
      h -= p * std::log2(p);
    }
  }
  return h;
}

double table_mutual_information(std::span<const double> joint, std::size_t rows, std::size_t cols) {
  std::vector<double> pr(rows, 0.0), pc(cols, 0.0);
  double total = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double m = joint[r * cols + c];
      pr[r] += m;
      pc[c] += m;
      total += m;
    }
  }
  if (total <= 0.0) return 0.0;
  double mi = 0.0;
  for (std::size_t r = 0; r < rows; ++r) {
    for (std::size_t c = 0; c < cols; ++c) {
      const double m = joint[r * cols + c];
      if (m > 0.0) mi += m * std::log2((m * total) / (pr[r] * pc[c]));
    }
  }
  return std::max(0.0, mi / total);
}

}  // namespace sdkey
