#include "sdkey/text_format.hpp"

#include <charconv>
#include <cmath>
#include <fstream>
#include <map>
#include <sstream>

#include "sdkey/error.hpp"

namespace sdkey {

std::optional<std::string> TextSection::get(const std::string& key) const {
  for (const auto& l : lines) {
    if (l.is_assignment && l.key == key) return l.value;
  }
  return std::nullopt;
}

std::string trim(const std::string& s) {
  const auto b = s.find_first_not_of(" \t\r");
  if (b == std::string::npos) return {};
  const auto e = s.find_last_not_of(" \t\r");
  return s.substr(b, e - b + 1);
}

std::vector<std::string> split_ws(const std::string& s) {
  std::vector<std::string> out;
  std::istringstream is(s);
  std::string tok;
  while (is >> tok) out.push_back(tok);
  return out;
}

TextDocument TextDocument::parse(std::istream& in, const std::string& source) {
  TextDocument doc;
  doc.source_ = source;
  doc.sections_.push_back(TextSection{});
  std::string raw;
  std::size_t number = 0;
  while (std::getline(in, raw)) {
    ++number;
    const auto hash = raw.find('#');
    const std::string line = trim(hash == std::string::npos ? raw : raw.substr(0, hash));
    if (line.empty()) continue;
    if (line.front() == '[') {
      if (line.back() != ']') throw ValidationError(doc.where(number) + ": unterminated section header");
      TextSection sec;
      sec.name = trim(line.substr(1, line.size() - 2));
      sec.number = number;
      if (sec.name.empty()) throw ValidationError(doc.where(number) + ": empty section name");
      if (doc.find(sec.name)) throw ValidationError(doc.where(number) + ": duplicate section [" + sec.name + "]");
      doc.sections_.push_back(std::move(sec));
      continue;
    }
    TextLine tl;
    tl.number = number;
    const auto eq = line.find('=');
    const auto colon = line.find(':');
    if (eq != std::string::npos && (colon == std::string::npos || eq < colon)) {
      tl.is_assignment = true;
      tl.key = trim(line.substr(0, eq));
      tl.value = trim(line.substr(eq + 1));
      if (tl.key.empty()) throw ValidationError(doc.where(number) + ": assignment without a key");
    } else if (colon != std::string::npos) {
      tl.key = trim(line.substr(0, colon));
      tl.value = trim(line.substr(colon + 1));
    } else {
      tl.value = line;
    }
    doc.sections_.back().lines.push_back(std::move(tl));
  }
  return doc;
}

TextDocument TextDocument::parse_file(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw ValidationError("cannot open " + path);
  return parse(in, path);
}

const TextSection* TextDocument::find(const std::string& name) const {
  for (const auto& s : sections_) {
    if (s.name == name) return &s;
  }
  return nullptr;
}

const TextSection& TextDocument::require(const std::string& name) const {
  const TextSection* s = find(name);
  if (!s) throw ValidationError(source_ + ": missing section [" + name + "]");
  return *s;
}

void TextDocument::require_format(int expected) const {
  const auto v = sections_.front().get("format");
  if (!v) throw ValidationError(source_ + ": missing 'format = " + std::to_string(expected) + "'");
  if (*v != std::to_string(expected)) {
    throw ValidationError(source_ + ": unsupported format " + *v + " (expected " + std::to_string(expected) + ")");
  }
}

std::string TextDocument::where(std::size_t line) const { return source_ + ":" + std::to_string(line); }

std::string exact_decimal(double x) {
  char buf[64];
  auto res = std::to_chars(buf, buf + sizeof(buf), x);
  return std::string(buf, res.ptr);
}

double parse_double(const std::string& token, const std::string& context) {
  double v = 0.0;
  const char* b = token.data();
  const char* e = b + token.size();
  if (!token.empty() && *b == '+') ++b;
  auto res = std::from_chars(b, e, v);
  if (res.ec != std::errc() || res.ptr != e || !std::isfinite(v)) {
    throw ValidationError(context + ": '" + token + "' is not a decimal number");
  }
  return v;
}

long long parse_int(const std::string& token, const std::string& context) {
  long long v = 0;
  auto res = std::from_chars(token.data(), token.data() + token.size(), v);
  if (res.ec != std::errc() || res.ptr != token.data() + token.size()) {
    throw ValidationError(context + ": '" + token + "' is not an integer");
  }
  return v;
}

std::vector<double> read_kernel_rows(const TextDocument& doc, const TextSection& section,
                                     const std::vector<Variable>& given, std::size_t target_count) {
  const std::size_t gc = product_size(given);
  std::vector<double> rows(gc * target_count, 0.0);
  std::vector<bool> seen(gc, false);
  for (const auto& line : section.lines) {
    const std::string ctx = doc.where(line.number) + " [" + section.name + "]";
    if (line.is_assignment) throw ValidationError(ctx + ": unexpected assignment '" + line.key + "'");
    const auto labels = split_ws(line.key);
    if (labels.size() != given.size()) {
      throw ValidationError(ctx + ": row key needs " + std::to_string(given.size()) + " symbol(s), got " +
                            std::to_string(labels.size()));
    }
    std::size_t g = 0;
    std::string tuple;
    for (std::size_t i = 0; i < given.size(); ++i) {
      std::size_t idx;
      try {
        idx = given[i].alphabet.index_of(labels[i]);
      } catch (const ValidationError&) {
        throw ValidationError(ctx + ": '" + labels[i] + "' is not a symbol of " + given[i].name);
      }
      g = g * given[i].alphabet.size() + idx;
      tuple += (i ? "," : "") + given[i].name + "=" + labels[i];
    }
    if (given.empty()) tuple = "()";
    if (seen[g]) throw ValidationError(ctx + ": duplicate row for (" + tuple + ")");
    seen[g] = true;
    const auto toks = split_ws(line.value);
    if (toks.size() != target_count) {
      throw ValidationError(ctx + ": row (" + tuple + ") has " + std::to_string(toks.size()) +
                            " entries, expected " + std::to_string(target_count));
    }
    double sum = 0.0;
    for (std::size_t k = 0; k < target_count; ++k) {
      const double p = parse_double(toks[k], ctx);
      if (p < 0.0) throw ValidationError(ctx + ": negative probability in row (" + tuple + ")");
      rows[g * target_count + k] = p;
      sum += p;
    }
    if (std::abs(sum - 1.0) > 1e-9) {
      std::ostringstream os;
      os.precision(12);
      os << ctx << ": row (" << tuple << ") sums to " << sum << ", not normalized";
      throw ValidationError(os.str());
    }
  }
  for (std::size_t g = 0; g < gc; ++g) {
    if (!seen[g]) {
      throw ValidationError(doc.source() + " [" + section.name + "]: missing row " + std::to_string(g));
    }
  }
  return rows;
}

void write_kernel_rows(std::ostream& os, const ConditionalPmf& kernel) {
  const auto& given = kernel.given();
  std::vector<std::size_t> digit(given.size(), 0);
  for (std::size_t g = 0; g < kernel.given_count(); ++g) {
    std::size_t rem = g;
    for (std::size_t i = given.size(); i-- > 0;) {
      digit[i] = rem % given[i].alphabet.size();
      rem /= given[i].alphabet.size();
    }
    for (std::size_t i = 0; i < given.size(); ++i) os << (i ? " " : "") << given[i].alphabet.symbol(digit[i]);
    os << " :";
    for (double p : kernel.row(g)) os << ' ' << exact_decimal(p);
    os << '\n';
  }
}

}  // namespace sdkey
