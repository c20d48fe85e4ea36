#include "sdkey/probability.hpp"

#include <algorithm>
#include <cmath>
#include <set>
#include <sstream>

#include "sdkey/error.hpp"

namespace sdkey {

namespace {

constexpr double kDriftLimit = 1e-9;
// Sums this close to one are left untouched so that normalized tables survive
// a save/load round trip bit for bit.
constexpr double kRenormalizeThreshold = 1e-14;

std::string join(std::span<const Variable> vars) {
  std::ostringstream os;
  for (std::size_t i = 0; i < vars.size(); ++i) os << (i ? "," : "") << vars[i].name;
  return os.str();
}

void check_entries(std::vector<double>& values, std::size_t begin, std::size_t count,
                   const std::string& what) {
  double sum = 0.0;
  for (std::size_t i = begin; i < begin + count; ++i) {
    double& v = values[i];
    if (!std::isfinite(v)) throw ValidationError(what + ": non-finite probability");
    if (v < 0.0) {
      if (v < -1e-15) throw ValidationError(what + ": negative probability " + std::to_string(v));
      v = 0.0;
    }
    sum += v;
  }
  if (std::abs(sum - 1.0) > kDriftLimit) {
    std::ostringstream os;
    os.precision(12);
    os << what << ": probabilities sum to " << sum << " (allowed drift 1e-9)";
    throw ValidationError(os.str());
  }
  if (std::abs(sum - 1.0) > kRenormalizeThreshold) {
    for (std::size_t i = begin; i < begin + count; ++i) values[i] /= sum;
  }
}

void check_distinct_names(std::span<const Variable> vars, const std::string& what) {
  std::set<std::string> seen;
  for (const auto& v : vars) {
    if (v.name.empty()) throw ValidationError(what + ": empty variable name");
    if (!seen.insert(v.name).second) throw ValidationError(what + ": duplicate variable " + v.name);
  }
}

// Accumulates the marginal over the variable positions `keep` into `out`.
void accumulate_marginal(const std::vector<Variable>& vars, const std::vector<double>& table,
                         const std::vector<std::size_t>& keep, std::vector<double>& out) {
  const std::size_t nv = vars.size();
  std::vector<std::size_t> out_stride(nv, 0);
  std::size_t out_size = 1;
  for (std::size_t k = keep.size(); k-- > 0;) {
    out_stride[keep[k]] = out_size;
    out_size *= vars[keep[k]].alphabet.size();
  }
  out.assign(out_size, 0.0);
  if (nv == 0) {
    out[0] = table.empty() ? 0.0 : table[0];
    return;
  }
  std::vector<std::size_t> digit(nv, 0);
  std::size_t out_index = 0;
  for (std::size_t cell = 0; cell < table.size(); ++cell) {
    out[out_index] += table[cell];
    for (std::size_t p = nv; p-- > 0;) {
      if (++digit[p] < vars[p].alphabet.size()) {
        out_index += out_stride[p];
        break;
      }
      out_index -= out_stride[p] * (digit[p] - 1);
      digit[p] = 0;
    }
  }
}

std::vector<std::size_t> positions_of(const JointPmf& pmf, const VarList& names) {
  std::vector<std::size_t> pos;
  pos.reserve(names.size());
  std::set<std::string> seen;
  for (const auto& n : names) {
    if (!seen.insert(n).second) throw ValidationError("variable listed twice: " + n);
    pos.push_back(pmf.position(n));
  }
  return pos;
}

VarList concat(const VarList& a, const VarList& b) {
  VarList out = a;
  out.insert(out.end(), b.begin(), b.end());
  return out;
}

void require_disjoint(const VarList& a, const VarList& b, const char* la, const char* lb) {
  for (const auto& x : a) {
    if (std::find(b.begin(), b.end(), x) != b.end()) {
      throw ValidationError(std::string("variable lists ") + la + " and " + lb + " overlap on " + x);
    }
  }
}

}  // namespace

Alphabet::Alphabet(std::string name, std::vector<std::string> symbols)
    : name_(std::move(name)), symbols_(std::move(symbols)) {
  if (symbols_.empty()) throw ValidationError("alphabet " + name_ + " is empty");
  std::set<std::string> seen;
  for (const auto& s : symbols_) {
    if (s.empty()) throw ValidationError("alphabet " + name_ + " has an empty symbol label");
    if (!seen.insert(s).second) throw ValidationError("alphabet " + name_ + " repeats symbol " + s);
  }
}

Alphabet Alphabet::range(std::string name, std::size_t size) {
  std::vector<std::string> symbols;
  for (std::size_t i = 0; i < size; ++i) symbols.push_back(std::to_string(i));
  return Alphabet(std::move(name), std::move(symbols));
}

Alphabet Alphabet::singleton(std::string name) { return Alphabet(std::move(name), {"-"}); }

std::size_t Alphabet::index_of(const std::string& label) const {
  auto it = std::find(symbols_.begin(), symbols_.end(), label);
  if (it == symbols_.end()) {
    throw ValidationError("symbol '" + label + "' is not in alphabet " + name_);
  }
  return static_cast<std::size_t>(it - symbols_.begin());
}

std::size_t product_size(std::span<const Variable> vars) {
  std::size_t n = 1;
  for (const auto& v : vars) n *= v.alphabet.size();
  return n;
}

JointPmf::JointPmf(std::vector<Variable> vars, std::vector<double> table)
    : vars_(std::move(vars)), table_(std::move(table)) {
  check_distinct_names(vars_, "joint pmf");
  if (table_.size() != product_size(vars_)) {
    throw ValidationError("joint pmf over (" + join(vars_) + "): table has " +
                          std::to_string(table_.size()) + " entries, expected " +
                          std::to_string(product_size(vars_)));
  }
  check_entries(table_, 0, table_.size(), "joint pmf over (" + join(vars_) + ")");
}

JointPmf JointPmf::point_mass(std::vector<Variable> vars, std::span<const std::size_t> cell) {
  if (cell.size() != vars.size()) throw ValidationError("point_mass: cell arity mismatch");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < vars.size(); ++i) {
    if (cell[i] >= vars[i].alphabet.size()) throw ValidationError("point_mass: index out of range");
    idx = idx * vars[i].alphabet.size() + cell[i];
  }
  std::vector<double> table(product_size(vars), 0.0);
  table[idx] = 1.0;
  return JointPmf(std::move(vars), std::move(table));
}

JointPmf JointPmf::uniform(std::vector<Variable> vars) {
  const std::size_t n = product_size(vars);
  return JointPmf(std::move(vars), std::vector<double>(n, 1.0 / static_cast<double>(n)));
}

bool JointPmf::has(const std::string& name) const {
  return std::any_of(vars_.begin(), vars_.end(), [&](const Variable& v) { return v.name == name; });
}

std::size_t JointPmf::position(const std::string& name) const {
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (vars_[i].name == name) return i;
  }
  throw ValidationError("unknown variable '" + name + "' (pmf has " + join(vars_) + ")");
}

std::size_t JointPmf::flat_index(std::span<const std::size_t> cell) const {
  if (cell.size() != vars_.size()) throw ValidationError("cell arity does not match pmf");
  std::size_t idx = 0;
  for (std::size_t i = 0; i < vars_.size(); ++i) {
    if (cell[i] >= vars_[i].alphabet.size()) throw ValidationError("cell index out of range");
    idx = idx * vars_[i].alphabet.size() + cell[i];
  }
  return idx;
}

JointPmf JointPmf::marginal(const VarList& keep) const {
  const auto pos = positions_of(*this, keep);
  std::vector<double> out;
  accumulate_marginal(vars_, table_, pos, out);
  std::vector<Variable> kept;
  for (auto p : pos) kept.push_back(vars_[p]);
  return JointPmf(std::move(kept), std::move(out));
}

double JointPmf::entropy(const VarList& names) const {
  if (names.empty()) return 0.0;
  const auto pos = positions_of(*this, names);
  std::vector<double> out;
  accumulate_marginal(vars_, table_, pos, out);
  return entropy_bits(out);
}

ConditionalPmf::ConditionalPmf(std::vector<Variable> given, std::vector<Variable> target,
                               std::vector<double> rows)
    : given_(std::move(given)), target_(std::move(target)), rows_(std::move(rows)) {
  std::vector<Variable> all = given_;
  all.insert(all.end(), target_.begin(), target_.end());
  check_distinct_names(all, "conditional pmf");
  if (target_.empty()) throw ValidationError("conditional pmf has no target variables");
  given_count_ = product_size(given_);
  target_count_ = product_size(target_);
  const std::string what = "kernel p(" + join(target_) + "|" + join(given_) + ")";
  if (rows_.size() != given_count_ * target_count_) {
    throw ValidationError(what + ": expected " + std::to_string(given_count_ * target_count_) +
                          " entries, got " + std::to_string(rows_.size()));
  }
  for (std::size_t g = 0; g < given_count_; ++g) {
    check_entries(rows_, g * target_count_, target_count_, what + " row " + std::to_string(g));
  }
}

ConditionalPmf ConditionalPmf::constant(std::vector<Variable> given, const JointPmf& target) {
  const std::size_t g = product_size(given);
  std::vector<double> rows;
  rows.reserve(g * target.size());
  for (std::size_t i = 0; i < g; ++i) rows.insert(rows.end(), target.table().begin(), target.table().end());
  return ConditionalPmf(std::move(given), target.variables(), std::move(rows));
}

ConditionalPmf ConditionalPmf::deterministic(std::vector<Variable> given, std::vector<Variable> target,
                                             std::span<const std::size_t> map) {
  const std::size_t g = product_size(given);
  const std::size_t t = product_size(target);
  if (map.size() != g) throw ValidationError("deterministic kernel: map size mismatch");
  std::vector<double> rows(g * t, 0.0);
  for (std::size_t i = 0; i < g; ++i) {
    if (map[i] >= t) throw ValidationError("deterministic kernel: target index out of range");
    rows[i * t + map[i]] = 1.0;
  }
  return ConditionalPmf(std::move(given), std::move(target), std::move(rows));
}

bool ConditionalPmf::is_deterministic() const {
  for (std::size_t g = 0; g < given_count_; ++g) {
    std::size_t ones = 0;
    for (double p : row(g)) {
      if (p == 1.0) {
        ++ones;
      } else if (p != 0.0) {
        return false;
      }
    }
    if (ones != 1) return false;
  }
  return true;
}

std::size_t ConditionalPmf::argmax(std::size_t g) const {
  auto r = row(g);
  return static_cast<std::size_t>(std::max_element(r.begin(), r.end()) - r.begin());
}

JointPmf marginalize(const JointPmf& pmf, const VarList& keep) { return pmf.marginal(keep); }

JointPmf compose(const JointPmf& base, const ConditionalPmf& kernel) {
  for (const auto& t : kernel.target()) {
    if (base.has(t.name)) throw ValidationError("compose: variable name clash on " + t.name);
  }
  std::vector<std::size_t> given_pos;
  for (const auto& g : kernel.given()) {
    const auto p = base.position(g.name);
    if (!(base.variables()[p].alphabet == g.alphabet)) {
      throw ValidationError("compose: alphabet mismatch for variable " + g.name);
    }
    given_pos.push_back(p);
  }
  const auto& vars = base.variables();
  const std::size_t nv = vars.size();
  std::vector<std::size_t> gstride(nv, 0);
  std::size_t s = 1;
  for (std::size_t k = given_pos.size(); k-- > 0;) {
    gstride[given_pos[k]] = s;
    s *= vars[given_pos[k]].alphabet.size();
  }
  const std::size_t tc = kernel.target_count();
  std::vector<double> out(base.size() * tc, 0.0);
  std::vector<std::size_t> digit(nv, 0);
  std::size_t g = 0;
  for (std::size_t cell = 0; cell < base.size(); ++cell) {
    const double pb = base.table()[cell];
    if (pb != 0.0) {
      auto row = kernel.row(g);
      for (std::size_t t = 0; t < tc; ++t) out[cell * tc + t] = pb * row[t];
    }
    for (std::size_t p = nv; p-- > 0;) {
      if (++digit[p] < vars[p].alphabet.size()) {
        g += gstride[p];
        break;
      }
      g -= gstride[p] * (digit[p] - 1);
      digit[p] = 0;
    }
  }
  std::vector<Variable> all = vars;
  all.insert(all.end(), kernel.target().begin(), kernel.target().end());
  return JointPmf(std::move(all), std::move(out));
}

ConditionalPmf conditional(const JointPmf& pmf, const VarList& target, const VarList& given) {
  require_disjoint(target, given, "target", "given");
  const JointPmf m = pmf.marginal(concat(given, target));
  std::vector<Variable> gv(m.variables().begin(), m.variables().begin() + static_cast<long>(given.size()));
  std::vector<Variable> tv(m.variables().begin() + static_cast<long>(given.size()), m.variables().end());
  const std::size_t gc = product_size(gv);
  const std::size_t tc = product_size(tv);
  std::vector<double> rows(m.table());
  for (std::size_t g = 0; g < gc; ++g) {
    double sum = 0.0;
    for (std::size_t t = 0; t < tc; ++t) sum += rows[g * tc + t];
    for (std::size_t t = 0; t < tc; ++t) {
      rows[g * tc + t] = sum > 0.0 ? rows[g * tc + t] / sum : 1.0 / static_cast<double>(tc);
    }
  }
  return ConditionalPmf(std::move(gv), std::move(tv), std::move(rows));
}

double entropy(const JointPmf& pmf, const VarList& vars) { return pmf.entropy(vars); }

double conditional_entropy(const JointPmf& pmf, const VarList& a, const VarList& c) {
  require_disjoint(a, c, "A", "C");
  return pmf.entropy(concat(a, c)) - pmf.entropy(c);
}

double conditional_mutual_information(const JointPmf& pmf, const VarList& a, const VarList& b,
                                      const VarList& c) {
  require_disjoint(a, b, "A", "B");
  require_disjoint(a, c, "A", "C");
  require_disjoint(b, c, "B", "C");
  if (a.empty() || b.empty()) return 0.0;
  const VarList ac = concat(a, c);
  const VarList bc = concat(b, c);
  const VarList abc = concat(a, bc);
  return pmf.entropy(ac) + pmf.entropy(bc) - pmf.entropy(abc) - pmf.entropy(c);
}

double binary_entropy(double x) {
  if (!(x >= 0.0 && x <= 1.0)) throw ValidationError("binary_entropy: argument outside [0,1]");
  if (x == 0.0 || x == 1.0) return 0.0;
  return -x * std::log2(x) - (1.0 - x) * std::log2(1.0 - x);
}

double binary_convolution(double a, double b) {
  if (!(a >= 0.0 && a <= 1.0) || !(b >= 0.0 && b <= 1.0)) {
    throw ValidationError("binary_convolution: argument outside [0,1]");
  }
  return a * (1.0 - b) + (1.0 - a) * b;
}

bool is_markov_chain(const JointPmf& pmf, const VarList& a, const VarList& b, const VarList& c,
                     double tol) {
  return conditional_mutual_information(pmf, a, c, b) <= tol;
}

double entropy_bits(std::span<const double> probs) {
  double h = 0.0;
  for (double p : probs) {
    if (p > 0.0) h -= p * std::log2(p);
  }
  return h;
}

}  // namespace sdkey
