#include "sdkey/spec_io.hpp"

#include <cmath>
#include <fstream>
#include <sstream>

#include "sdkey/error.hpp"
#include "sdkey/text_format.hpp"

namespace sdkey {

namespace {

Alphabet read_alphabet(const TextDocument& doc, const TextSection& sec, const std::string& name) {
  for (const auto& l : sec.lines) {
    if (l.is_assignment && l.key == name) {
      auto symbols = split_ws(l.value);
      if (symbols.empty()) throw ValidationError(doc.where(l.number) + ": alphabet " + name + " is empty");
      try {
        return Alphabet(name, std::move(symbols));
      } catch (const ValidationError& e) {
        throw ValidationError(doc.where(l.number) + ": " + e.what());
      }
    }
  }
  throw ValidationError(doc.source() + " [alphabets]: missing alphabet " + name);
}

void check_alphabet_keys(const TextDocument& doc, const TextSection& sec, std::initializer_list<const char*> allowed) {
  for (const auto& l : sec.lines) {
    if (!l.is_assignment) throw ValidationError(doc.where(l.number) + ": expected 'NAME = symbols...'");
    bool ok = false;
    for (const char* a : allowed) ok = ok || l.key == a;
    if (!ok) throw ValidationError(doc.where(l.number) + ": unknown alphabet '" + l.key + "'");
  }
}

void write_alphabet(std::ostream& os, const std::string& name, const Alphabet& a) {
  os << name << " =";
  for (const auto& s : a.symbols()) os << ' ' << s;
  os << '\n';
}

ConditionalPmf read_kernel(const TextDocument& doc, const std::string& section, std::vector<Variable> given,
                           std::vector<Variable> target) {
  const auto& sec = doc.require(section);
  auto rows = read_kernel_rows(doc, sec, given, product_size(target));
  try {
    return ConditionalPmf(std::move(given), std::move(target), std::move(rows));
  } catch (const ValidationError& e) {
    throw ValidationError(doc.source() + " [" + section + "]: " + e.what());
  }
}

void require_kind(const TextDocument& doc, const std::string& kind) {
  const auto k = doc.sections().front().get("kind");
  if (!k || *k != kind) throw ValidationError(doc.source() + ": expected 'kind = " + kind + "'");
}

}  // namespace

SdMacSpec read_spec(std::istream& in, const std::string& source) {
  const TextDocument doc = TextDocument::parse(in, source);
  doc.require_format(1);
  const auto& al = doc.require("alphabets");
  check_alphabet_keys(doc, al, {"S", "T", "X1", "X2", "Y", "Z"});
  Alphabet s = read_alphabet(doc, al, "S");
  Alphabet t = read_alphabet(doc, al, "T");
  Alphabet x1 = read_alphabet(doc, al, "X1");
  Alphabet x2 = read_alphabet(doc, al, "X2");
  Alphabet y = read_alphabet(doc, al, "Y");
  Alphabet z = read_alphabet(doc, al, "Z");

  const auto& sp = doc.require("state_pmf");
  if (sp.lines.size() != 1 || sp.lines[0].is_assignment || !sp.lines[0].key.empty()) {
    throw ValidationError(doc.source() + " [state_pmf]: expected a single row of probabilities");
  }
  const auto toks = split_ws(sp.lines[0].value);
  const std::string ctx = doc.where(sp.lines[0].number) + " [state_pmf]";
  if (toks.size() != s.size()) {
    throw ValidationError(ctx + ": " + std::to_string(toks.size()) + " entries for " + std::to_string(s.size()) +
                          " states");
  }
  std::vector<double> state;
  double sum = 0.0;
  for (const auto& tok : toks) {
    state.push_back(parse_double(tok, ctx));
    sum += state.back();
  }
  if (std::abs(sum - 1.0) > 1e-9) {
    std::ostringstream os;
    os.precision(12);
    os << ctx << ": state pmf sums to " << sum << ", not normalized";
    throw ValidationError(os.str());
  }
  const std::vector<Variable> sv{{var::S, s}};
  auto degrade = read_kernel_rows(doc, doc.require("degrade_kernel"), sv, t.size());
  auto channel = read_kernel_rows(doc, doc.require("channel_kernel"),
                                  {{var::X1, x1}, {var::X2, x2}, {var::S, s}}, y.size() * z.size());
  try {
    return SdMacSpec(std::move(s), std::move(t), std::move(x1), std::move(x2), std::move(y), std::move(z),
                     std::move(state), std::move(degrade), std::move(channel));
  } catch (const ValidationError& e) {
    throw ValidationError(doc.source() + ": " + e.what());
  }
}

void write_spec(std::ostream& os, const SdMacSpec& spec) {
  os << "# state-dependent MAC with eavesdropper\n";
  os << "format = 1\n\n[alphabets]\n";
  write_alphabet(os, "S", spec.s().alphabet);
  write_alphabet(os, "T", spec.t().alphabet);
  write_alphabet(os, "X1", spec.x1().alphabet);
  write_alphabet(os, "X2", spec.x2().alphabet);
  write_alphabet(os, "Y", spec.y().alphabet);
  write_alphabet(os, "Z", spec.z().alphabet);
  os << "\n[state_pmf]\n";
  const auto& st = spec.state_pmf().table();
  for (std::size_t i = 0; i < st.size(); ++i) os << (i ? " " : "") << exact_decimal(st[i]);
  os << "\n\n[degrade_kernel]\n# S : p(T|S)\n";
  write_kernel_rows(os, spec.degrade_kernel());
  os << "\n[channel_kernel]\n# X1 X2 S : p(Y,Z|X1,X2,S), Z fastest\n";
  write_kernel_rows(os, spec.channel_kernel());
}

SdMacSpec load_spec(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open channel spec " + path);
  return read_spec(in, path);
}

void save_spec(const SdMacSpec& spec, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw ValidationError("cannot write " + path);
  write_spec(out, spec);
}

AuxiliaryScheme read_aux_scheme(std::istream& in, const SdMacSpec& spec, const std::string& source) {
  const TextDocument doc = TextDocument::parse(in, source);
  doc.require_format(1);
  require_kind(doc, "round1");
  const auto& al = doc.require("alphabets");
  check_alphabet_keys(doc, al, {"U", "V"});
  const Variable u{var::U, read_alphabet(doc, al, "U")};
  const Variable v{var::V, read_alphabet(doc, al, "V")};
  return AuxiliaryScheme(read_kernel(doc, "u_kernel", {spec.s()}, {u}),
                         read_kernel(doc, "v_kernel", {u, spec.s()}, {v}),
                         read_kernel(doc, "x1_kernel", {u, v, spec.s()}, {spec.x1()}),
                         read_kernel(doc, "x2_kernel", {u, v, spec.s()}, {spec.x2()}));
}

void write_aux_scheme(std::ostream& os, const AuxiliaryScheme& aux) {
  os << "format = 1\nkind = round1\n\n[alphabets]\n";
  write_alphabet(os, "U", aux.u().alphabet);
  write_alphabet(os, "V", aux.v().alphabet);
  os << "\n[u_kernel]\n";
  write_kernel_rows(os, aux.u_kernel());
  os << "\n[v_kernel]\n";
  write_kernel_rows(os, aux.v_kernel());
  os << "\n[x1_kernel]\n";
  write_kernel_rows(os, aux.x1_kernel());
  os << "\n[x2_kernel]\n";
  write_kernel_rows(os, aux.x2_kernel());
}

Round2Scheme read_round2_scheme(std::istream& in, const SdMacSpec& spec, const std::string& source) {
  const TextDocument doc = TextDocument::parse(in, source);
  doc.require_format(1);
  require_kind(doc, "round2");
  const auto& al = doc.require("alphabets");
  check_alphabet_keys(doc, al, {"T1", "T2"});
  const Variable t1{var::T1, read_alphabet(doc, al, "T1")};
  const Variable t2{var::T2, read_alphabet(doc, al, "T2")};
  return Round2Scheme(read_kernel(doc, "input_law", {spec.s()}, {spec.x1(), spec.x2()}),
                      read_kernel(doc, "t1_kernel", {spec.y(), spec.t()}, {t1}),
                      read_kernel(doc, "t2_kernel", {spec.y(), spec.t()}, {t2}));
}

void write_round2_scheme(std::ostream& os, const Round2Scheme& scheme) {
  os << "format = 1\nkind = round2\n\n[alphabets]\n";
  write_alphabet(os, "T1", scheme.t1_kernel().target()[0].alphabet);
  write_alphabet(os, "T2", scheme.t2_kernel().target()[0].alphabet);
  os << "\n[input_law]\n# S : p(X1,X2|S), X2 fastest\n";
  write_kernel_rows(os, scheme.input_law());
  os << "\n[t1_kernel]\n";
  write_kernel_rows(os, scheme.t1_kernel());
  os << "\n[t2_kernel]\n";
  write_kernel_rows(os, scheme.t2_kernel());
}

std::string to_text(const SdMacSpec& spec) {
  std::ostringstream os;
  write_spec(os, spec);
  return os.str();
}

std::string to_text(const AuxiliaryScheme& aux) {
  std::ostringstream os;
  write_aux_scheme(os, aux);
  return os.str();
}

std::string to_text(const Round2Scheme& scheme) {
  std::ostringstream os;
  write_round2_scheme(os, scheme);
  return os.str();
}

std::string to_text(const ConditionalPmf& kernel) {
  std::ostringstream os;
  write_kernel_rows(os, kernel);
  return os.str();
}

}  // namespace sdkey
