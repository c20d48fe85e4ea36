#pragma once

#include <cstddef>
#include <iosfwd>
#include <optional>
#include <string>
#include <vector>

#include "sdkey/probability.hpp"

namespace sdkey {

/// One meaningful line of a structured-text document. Assignments look like
/// `key = value`; table rows look like `a b : 0.5 0.5` or just `0.5 0.5`.
struct TextLine {
  std::size_t number = 0;
  bool is_assignment = false;
  std::string key;    // assignment key, or row label (text before ':')
  std::string value;  // assignment value, or row payload
};

struct TextSection {
  std::string name;  // empty for lines before the first header
  std::size_t number = 0;
  std::vector<TextLine> lines;

  /// Value of `key`, if assigned in this section.
  std::optional<std::string> get(const std::string& key) const;
};

/// INI-like dialect shared by channel specs, scheme files and experiment
/// configs. `#` starts a comment.
class TextDocument {
 public:
  static TextDocument parse(std::istream& in, const std::string& source);
  static TextDocument parse_file(const std::string& path);

  const std::string& source() const { return source_; }
  const std::vector<TextSection>& sections() const { return sections_; }
  const TextSection* find(const std::string& name) const;
  const TextSection& require(const std::string& name) const;
  /// Throws unless the top-level `format` field equals `expected`.
  void require_format(int expected) const;

  /// "source:line: message"
  std::string where(std::size_t line) const;

 private:
  std::string source_;
  std::vector<TextSection> sections_;
};

std::vector<std::string> split_ws(const std::string& s);
std::string trim(const std::string& s);

/// Shortest decimal literal that parses back to the same double.
std::string exact_decimal(double x);
/// Strict decimal parse; throws ValidationError with `context` on failure.
double parse_double(const std::string& token, const std::string& context);
long long parse_int(const std::string& token, const std::string& context);

/// Reads a kernel table whose rows are keyed by the symbols of `given`.
/// Every given tuple must appear once with exactly `target_count` entries.
std::vector<double> read_kernel_rows(const TextDocument& doc, const TextSection& section,
                                     const std::vector<Variable>& given, std::size_t target_count);
void write_kernel_rows(std::ostream& os, const ConditionalPmf& kernel);

}  // namespace sdkey
