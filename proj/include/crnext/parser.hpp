#pragma once

// Plain-text reaction network format (.crn):
//
//   # comment
//   X1 + X2 -> 2 X2
//   S + E <-> SE        reversible: forward reaction first, then backward
//   P -> 0              "0" is the empty complex
//
// complex ::= "0" | term ("+" term)*
// term    ::= [positive integer] identifier
// identifier ::= letter (letter | digit | "_" | "-")*

#include <algorithm>
#include <cctype>
#include <cstddef>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <string_view>
#include <vector>

#include "crnext/errors.hpp"
#include "crnext/model.hpp"

namespace crnext {

namespace detail {

inline bool is_ident_start(char c) { return std::isalpha(static_cast<unsigned char>(c)) != 0; }
inline bool is_ident_char(char c) {
  return std::isalnum(static_cast<unsigned char>(c)) != 0 || c == '_' || c == '-';
}
inline bool is_space(char c) { return c == ' ' || c == '\t' || c == '\r'; }

// Parses one side of a reaction. `offset` is the 0-based column of text[0] in the line.
inline NetworkBuilder::Terms parse_complex(std::string_view text, std::size_t line, std::size_t offset) {
  std::size_t begin = 0, end = text.size();
  while (begin < end && is_space(text[begin])) ++begin;
  while (end > begin && is_space(text[end - 1])) --end;
  if (begin == end) throw SyntaxError(line, offset + begin + 1, "missing complex");
  if (text.substr(begin, end - begin) == "0") return {};

  NetworkBuilder::Terms terms;
  std::size_t pos = begin;
  while (true) {
    while (pos < end && is_space(text[pos])) ++pos;
    const std::size_t term_col = offset + pos + 1;
    if (pos >= end || text[pos] == '+') throw SyntaxError(line, term_col, "empty term");

    long coeff = 1;
    if (std::isdigit(static_cast<unsigned char>(text[pos]))) {
      coeff = 0;
      while (pos < end && std::isdigit(static_cast<unsigned char>(text[pos]))) {
        coeff = coeff * 10 + (text[pos] - '0');
        if (coeff > 1'000'000) throw SyntaxError(line, term_col, "coefficient too large");
        ++pos;
      }
      if (coeff == 0) throw SyntaxError(line, term_col, "coefficient must be positive");
      while (pos < end && is_space(text[pos])) ++pos;
    }
    if (pos >= end || !is_ident_start(text[pos]))
      throw SyntaxError(line, offset + pos + 1, "expected species identifier");
    std::size_t id_begin = pos;
    while (pos < end && is_ident_char(text[pos])) ++pos;
    terms.emplace_back(std::string(text.substr(id_begin, pos - id_begin)), static_cast<int>(coeff));

    while (pos < end && is_space(text[pos])) ++pos;
    if (pos == end) break;
    if (text[pos] != '+') throw SyntaxError(line, offset + pos + 1, std::string("unexpected character '") + text[pos] + "'");
    ++pos;
  }
  return terms;
}

inline std::string_view strip_comment(std::string_view line) {
  auto hash = line.find('#');
  return hash == std::string_view::npos ? line : line.substr(0, hash);
}

inline bool is_blank(std::string_view s) {
  return std::all_of(s.begin(), s.end(), [](char c) { return is_space(c); });
}

inline void parse_line(NetworkBuilder& builder, std::string_view line, std::size_t lineno) {
  std::size_t arrow = line.find("<->");
  bool reversible = arrow != std::string_view::npos;
  std::size_t arrow_len = reversible ? 3 : 2;
  if (!reversible) arrow = line.find("->");
  if (arrow == std::string_view::npos) throw SyntaxError(lineno, 1, "missing arrow");
  std::string_view lhs = line.substr(0, arrow);
  std::string_view rhs = line.substr(arrow + arrow_len);
  if (auto extra = rhs.find("->"); extra != std::string_view::npos)
    throw SyntaxError(lineno, arrow + arrow_len + extra + 1, "more than one arrow");
  if (auto stray = lhs.find('<'); stray != std::string_view::npos)
    throw SyntaxError(lineno, stray + 1, "unexpected character '<'");
  if (auto stray = rhs.find_first_of("<>"); stray != std::string_view::npos)
    throw SyntaxError(lineno, arrow + arrow_len + stray + 1, "unexpected arrow character");

  auto source = parse_complex(lhs, lineno, 0);
  auto product = parse_complex(rhs, lineno, arrow + arrow_len);
  builder.add_reaction(source, product);
  if (reversible) builder.add_reaction(product, source);
}

}  // namespace detail

// Parses a whole .crn text into a validated network.
inline ReactionNetwork parse_network(std::string_view text) {
  NetworkBuilder builder;
  std::size_t lineno = 0;
  std::size_t start = 0;
  while (start <= text.size()) {
    std::size_t nl = text.find('\n', start);
    std::string_view raw = text.substr(start, nl == std::string_view::npos ? std::string_view::npos : nl - start);
    ++lineno;
    std::string_view line = detail::strip_comment(raw);
    if (!detail::is_blank(line)) detail::parse_line(builder, line, lineno);
    if (nl == std::string_view::npos) break;
    start = nl + 1;
  }
  if (builder.num_reactions() == 0) throw ValidationError("empty network");
  return builder.build();
}

inline std::string render_complex(const ReactionNetwork& net, std::size_t i) {
  const auto& c = net.complex(i);
  std::string out;
  for (std::size_t s = 0; s < c.coeffs.size(); ++s) {
    if (c.coeffs[s] == 0) continue;
    if (!out.empty()) out += "+";
    if (c.coeffs[s] != 1) out += std::to_string(c.coeffs[s]) + " ";
    out += net.species()[s].name;
  }
  return out.empty() ? "0" : out;
}

inline std::string render_edge(const ReactionNetwork& net, const Reaction& e) {
  return render_complex(net, e.source) + " -> " + render_complex(net, e.product);
}

// One irreversible reaction per line; reparses to the same network.
inline std::string render_network(const ReactionNetwork& net) {
  std::string out;
  for (const auto& r : net.reactions()) out += render_edge(net, r) + "\n";
  return out;
}

struct NetworkDocument {
  std::string name;                        // file stem, or "inline"
  std::vector<std::string> reaction_lines; // comments and blank lines removed
  std::vector<std::size_t> line_numbers;   // 1-based source line of each entry
  std::string origin;                      // file path or "inline"

  std::string text() const {
    std::string out;
    for (const auto& l : reaction_lines) out += l + "\n";
    return out;
  }
};

// Parses a document, reporting syntax errors against the original file lines.
inline ReactionNetwork parse_document(const NetworkDocument& doc) {
  NetworkBuilder builder;
  for (std::size_t i = 0; i < doc.reaction_lines.size(); ++i)
    detail::parse_line(builder, doc.reaction_lines[i], doc.line_numbers[i]);
  if (builder.num_reactions() == 0) throw ValidationError("empty network");
  return builder.build();
}

inline NetworkDocument make_document(std::string name, std::string_view text, std::string origin = "inline") {
  NetworkDocument doc{std::move(name), {}, {}, std::move(origin)};
  std::istringstream in{std::string(text)};
  std::string raw;
  std::size_t lineno = 0;
  while (std::getline(in, raw)) {
    ++lineno;
    std::string_view line = detail::strip_comment(raw);
    if (detail::is_blank(line)) continue;
    doc.reaction_lines.emplace_back(line);
    doc.line_numbers.push_back(lineno);
  }
  return doc;
}

inline NetworkDocument read_document(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError("cannot read " + path.string());
  std::ostringstream buf;
  buf << in.rdbuf();
  auto doc = make_document(path.stem().string(), buf.str(), path.string());
  if (doc.reaction_lines.empty()) throw ValidationError(path.string() + ": no reaction lines");
  return doc;
}

struct LoadFailure {
  std::string origin;
  std::string message;
};

struct BatchLoad {
  std::vector<NetworkDocument> documents;
  std::vector<LoadFailure> failures;
};

// One document per regular file with the given extension, sorted by file name.
// Unreadable or empty files are recorded as failures.
inline BatchLoad load_batch(const std::filesystem::path& dir, const std::string& extension = ".crn") {
  namespace fs = std::filesystem;
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw IoError("not a directory: " + dir.string());
  std::vector<fs::path> files;
  for (const auto& entry : fs::directory_iterator(dir, ec))
    if (entry.is_regular_file() && entry.path().extension() == extension) files.push_back(entry.path());
  if (ec) throw IoError("cannot list " + dir.string() + ": " + ec.message());
  std::sort(files.begin(), files.end(),
            [](const fs::path& a, const fs::path& b) { return a.filename() < b.filename(); });

  BatchLoad out;
  for (const auto& f : files) {
    try {
      out.documents.push_back(read_document(f));
    } catch (const Error& e) {
      out.failures.push_back({f.string(), e.what()});
    }
  }
  return out;
}

}  // namespace crnext
