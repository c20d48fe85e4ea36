#pragma once

#include <cstddef>
#include <span>
#include <string>
#include <vector>

namespace sdkey {

using VarList = std::vector<std::string>;

/// Ordered list of distinct symbol labels. A one-symbol alphabet stands for an
/// absent or constant variable.
class Alphabet {
 public:
  Alphabet(std::string name, std::vector<std::string> symbols);

  /// Alphabet {"0", ..., "size-1"}.
  static Alphabet range(std::string name, std::size_t size);
  /// One-symbol alphabet {"-"}.
  static Alphabet singleton(std::string name);

  const std::string& name() const { return name_; }
  const std::vector<std::string>& symbols() const { return symbols_; }
  std::size_t size() const { return symbols_.size(); }
  const std::string& symbol(std::size_t i) const { return symbols_.at(i); }
  /// Position of `label`; throws ValidationError if absent.
  std::size_t index_of(const std::string& label) const;

  bool operator==(const Alphabet& other) const { return symbols_ == other.symbols_; }

 private:
  std::string name_;
  std::vector<std::string> symbols_;
};

struct Variable {
  std::string name;
  Alphabet alphabet;
};

/// Number of cells in the Cartesian product of the variables' alphabets.
std::size_t product_size(std::span<const Variable> vars);

/// Dense joint pmf over an ordered variable tuple. The table is row-major with
/// the last variable varying fastest. Immutable after construction.
class JointPmf {
 public:
  /// Validates entries, renormalizes drift below 1e-9, rejects larger drift.
  JointPmf(std::vector<Variable> vars, std::vector<double> table);

  static JointPmf point_mass(std::vector<Variable> vars, std::span<const std::size_t> cell);
  static JointPmf uniform(std::vector<Variable> vars);

  const std::vector<Variable>& variables() const { return vars_; }
  const std::vector<double>& table() const { return table_; }
  std::size_t size() const { return table_.size(); }
  bool has(const std::string& name) const;
  std::size_t position(const std::string& name) const;
  const Variable& variable(const std::string& name) const { return vars_[position(name)]; }

  /// Flat index of a full symbol-index tuple.
  std::size_t flat_index(std::span<const std::size_t> cell) const;
  double prob(std::span<const std::size_t> cell) const { return table_[flat_index(cell)]; }

  /// Marginal over `keep`, with variables in the order given.
  JointPmf marginal(const VarList& keep) const;

  /// Shannon entropy in bits of the marginal on `names` (empty list gives 0).
  double entropy(const VarList& names) const;

 private:
  std::vector<Variable> vars_;
  std::vector<double> table_;
};

/// Row-stochastic kernel p(target | given). Rows are indexed by the flat index
/// of the given tuple, entries by the flat index of the target tuple.
class ConditionalPmf {
 public:
  ConditionalPmf(std::vector<Variable> given, std::vector<Variable> target, std::vector<double> rows);

  /// Kernel whose every row is the same pmf.
  static ConditionalPmf constant(std::vector<Variable> given, const JointPmf& target);
  /// Deterministic kernel: row g puts unit mass on target index map[g].
  static ConditionalPmf deterministic(std::vector<Variable> given, std::vector<Variable> target,
                                      std::span<const std::size_t> map);

  const std::vector<Variable>& given() const { return given_; }
  const std::vector<Variable>& target() const { return target_; }
  std::size_t given_count() const { return given_count_; }
  std::size_t target_count() const { return target_count_; }
  const std::vector<double>& rows() const { return rows_; }
  std::span<const double> row(std::size_t g) const {
    return {rows_.data() + g * target_count_, target_count_};
  }
  double prob(std::size_t g, std::size_t t) const { return rows_[g * target_count_ + t]; }

  /// Every row has a single unit entry.
  bool is_deterministic() const;
  /// For a deterministic kernel, the target index selected by row g.
  std::size_t argmax(std::size_t g) const;

 private:
  std::vector<Variable> given_;
  std::vector<Variable> target_;
  std::size_t given_count_;
  std::size_t target_count_;
  std::vector<double> rows_;
};

JointPmf marginalize(const JointPmf& pmf, const VarList& keep);

/// result(a, b) = base(a) * kernel(b | a restricted to kernel.given).
JointPmf compose(const JointPmf& base, const ConditionalPmf& kernel);

/// p(target | given) extracted from a joint. Rows with zero mass are uniform.
ConditionalPmf conditional(const JointPmf& pmf, const VarList& target, const VarList& given);

double entropy(const JointPmf& pmf, const VarList& vars);
/// H(A | C).
double conditional_entropy(const JointPmf& pmf, const VarList& a, const VarList& c);
/// I(A; B | C); C may be empty. A, B, C must be disjoint.
double conditional_mutual_information(const JointPmf& pmf, const VarList& a, const VarList& b,
                                      const VarList& c = {});
inline double mutual_information(const JointPmf& pmf, const VarList& a, const VarList& b) {
  return conditional_mutual_information(pmf, a, b, {});
}

/// H_b(x) in bits with H_b(0) = H_b(1) = 0.
double binary_entropy(double x);
/// a * b = a(1-b) + (1-a)b.
double binary_convolution(double a, double b);

/// True iff I(A; C | B) <= tol.
bool is_markov_chain(const JointPmf& pmf, const VarList& a, const VarList& b, const VarList& c,
                     double tol = 1e-10);

/// Shannon entropy in bits of an unnormalized-safe probability vector (0 log 0 = 0).
double entropy_bits(std::span<const double> probs);

}  // namespace sdkey
