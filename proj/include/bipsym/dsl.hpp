/*
 * Copyright 2026 The bipsym Authors
 *
 * Licensed under the Apache License, Version 2.0 (the "License");
 * you may not use this file except in compliance with the License.
 * You may obtain a copy of the License at
 *
 *     http://www.apache.org/licenses/LICENSE-2.0
 *
 * Unless required by applicable law or agreed to in writing, software
 * distributed under the License is distributed on an "AS IS" BASIS,
 * WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
 * See the License for the specific language governing permissions and
 * limitations under the License.
 */

// Text format for systems (.bip-lite):
//
//   system modulo8 {
//     atom B1 {
//       ports p, q;
//       states init l1, l2;
//       trans l1 -[p]-> l2;
//       trans l2 -[p q]-> l1;
//     }
//     ...
//     connector x = p' [[q r]' [[s t]' u]];
//     priority maximal_progress;          # or: priority {p} < {p q r} ...;
//   }
//
// Juxtaposition is fusion, brackets group, an apostrophe marks a trigger.
// A connector is always a fusion at its top level, as is every bracket.
// "#" starts a comment that runs to the end of the line.

#pragma once

#include <cstdint>
#include <fstream>
#include <map>
#include <optional>
#include <sstream>
#include <string>
#include <string_view>
#include <utility>
#include <vector>

#include "bipsym/connector.hpp"
#include "bipsym/error.hpp"
#include "bipsym/interaction.hpp"
#include "bipsym/model.hpp"

namespace bipsym {

struct SourcePos {
  int line = 0;
  int column = 0;
};

struct ParseResult {
  std::optional<SystemModel> model;  // set iff there are no diagnostics
  std::vector<Diagnostic> diagnostics;
  /// Declaration positions keyed like Diagnostic::location ("atom B1",
  /// "connector x", "port p", "priority", "atom B1, transition 2").
  std::map<std::string, SourcePos> locations;

  [[nodiscard]] bool ok() const noexcept { return diagnostics.empty(); }
};

namespace dsl_detail {

enum class Tok { Name, Number, LBrace, RBrace, LBracket, RBracket, Semi, Comma, Eq, Quote, Less,
                 LabelOpen, LabelClose, End, Bad };

struct Token {
  Tok kind;
  std::string text;
  SourcePos pos;
};

inline const char* describe(Tok t) {
  switch (t) {
    case Tok::Name: return "a name";
    case Tok::Number: return "a number";
    case Tok::LBrace: return "'{'";
    case Tok::RBrace: return "'}'";
    case Tok::LBracket: return "'['";
    case Tok::RBracket: return "']'";
    case Tok::Semi: return "';'";
    case Tok::Comma: return "','";
    case Tok::Eq: return "'='";
    case Tok::Quote: return "'''";
    case Tok::Less: return "'<'";
    case Tok::LabelOpen: return "'-['";
    case Tok::LabelClose: return "']->'";
    case Tok::End: return "end of input";
    case Tok::Bad: return "an invalid character";
  }
  return "?";
}

class Lexer {
 public:
  explicit Lexer(std::string_view text) : text_(text) {
    if (text_.substr(0, 3) == "\xEF\xBB\xBF") advance(3);
  }

  Token next() {
    skip_space();
    const SourcePos pos{line_, col_};
    if (i_ >= text_.size()) return {Tok::End, "", pos};
    const char c = text_[i_];
    auto is_head = [](char ch) { return (ch >= 'a' && ch <= 'z') || (ch >= 'A' && ch <= 'Z') || ch == '_'; };
    auto is_digit = [](char ch) { return ch >= '0' && ch <= '9'; };
    if (is_head(c)) {
      std::size_t j = i_;
      while (j < text_.size() && (is_head(text_[j]) || is_digit(text_[j]))) ++j;
      std::string word(text_.substr(i_, j - i_));
      advance(j - i_);
      return {Tok::Name, std::move(word), pos};
    }
    if (is_digit(c)) {
      std::size_t j = i_;
      while (j < text_.size() && is_digit(text_[j])) ++j;
      std::string word(text_.substr(i_, j - i_));
      advance(j - i_);
      return {Tok::Number, std::move(word), pos};
    }
    if (text_.substr(i_, 2) == "-[") {
      advance(2);
      return {Tok::LabelOpen, "-[", pos};
    }
    if (text_.substr(i_, 3) == "]->") {
      advance(3);
      return {Tok::LabelClose, "]->", pos};
    }
    advance(1);
    switch (c) {
      case '{': return {Tok::LBrace, "{", pos};
      case '}': return {Tok::RBrace, "}", pos};
      case '[': return {Tok::LBracket, "[", pos};
      case ']': return {Tok::RBracket, "]", pos};
      case ';': return {Tok::Semi, ";", pos};
      case ',': return {Tok::Comma, ",", pos};
      case '=': return {Tok::Eq, "=", pos};
      case '\'': return {Tok::Quote, "'", pos};
      case '<': return {Tok::Less, "<", pos};
      default: break;
    }
    const auto byte = static_cast<unsigned char>(c);
    std::ostringstream text;
    if (byte >= 0x20 && byte < 0x7f) {
      text << '\'' << c << '\'';
    } else {
      text << "byte 0x" << std::hex << static_cast<int>(byte);
    }
    return {Tok::Bad, text.str(), pos};
  }

 private:
  void advance(std::size_t n) {
    for (std::size_t k = 0; k < n && i_ < text_.size(); ++k, ++i_) {
      if (text_[i_] == '\n') {
        ++line_;
        col_ = 1;
      } else {
        ++col_;
      }
    }
  }

  void skip_space() {
    while (i_ < text_.size()) {
      const char c = text_[i_];
      if (c == '#') {
        while (i_ < text_.size() && text_[i_] != '\n') advance(1);
      } else if (c == ' ' || c == '\t' || c == '\n' || c == '\r') {
        advance(1);
      } else {
        break;
      }
    }
  }

  std::string_view text_;
  std::size_t i_ = 0;
  int line_ = 1;
  int col_ = 1;
};

struct SyntaxError {
  Diagnostic diag;
};

class Parser {
 public:
  static constexpr int kMaxNesting = 200;

  explicit Parser(std::string_view text) : lex_(text) { tok_ = lex_.next(); }

  ParseResult run() {
    ParseResult out;
    try {
      SystemModel m = system();
      out.locations = std::move(locations_);
      for (auto& d : semantic_) out.diagnostics.push_back(std::move(d));
      for (auto d : validate(m)) {
        auto it = out.locations.find(d.location);
        if (it == out.locations.end()) {
          const auto comma = d.location.find(',');
          if (comma != std::string::npos) it = out.locations.find(d.location.substr(0, comma));
        }
        if (it != out.locations.end()) {
          d.line = it->second.line;
          d.column = it->second.column;
        } else {
          d.line = system_pos_.line;
          d.column = system_pos_.column;
        }
        out.diagnostics.push_back(std::move(d));
      }
      if (out.diagnostics.empty()) out.model = std::move(m);
    } catch (const SyntaxError& e) {
      out.diagnostics.push_back(e.diag);
    }
    return out;
  }

 private:
  [[noreturn]] void fail(const std::string& msg, SourcePos pos) {
    throw SyntaxError{Diagnostic{tok_.kind == Tok::Bad ? "lexical" : "syntax", "", msg, pos.line, pos.column}};
  }

  [[noreturn]] void unexpected(const char* wanted) {
    std::string got = tok_.kind == Tok::Name || tok_.kind == Tok::Number ? "'" + tok_.text + "'"
                      : tok_.kind == Tok::Bad                           ? tok_.text
                                                                       : describe(tok_.kind);
    fail(std::string("expected ") + wanted + ", found " + got, tok_.pos);
  }

  Token take() {
    Token t = std::move(tok_);
    tok_ = lex_.next();
    return t;
  }

  Token expect(Tok kind) {
    if (tok_.kind != kind) unexpected(describe(kind));
    return take();
  }

  bool at_keyword(const char* word) const { return tok_.kind == Tok::Name && tok_.text == word; }

  void expect_keyword(const char* word) {
    if (!at_keyword(word)) unexpected((std::string("'") + word + "'").c_str());
    take();
  }

  void note(const std::string& key, SourcePos pos, bool overwrite = false) {
    if (overwrite) {
      locations_[key] = pos;
    } else {
      locations_.emplace(key, pos);
    }
  }

  void semantic(std::string kind, std::string where, std::string msg, SourcePos pos) {
    semantic_.push_back(Diagnostic{std::move(kind), std::move(where), std::move(msg), pos.line, pos.column});
  }

  SystemModel system() {
    system_pos_ = tok_.pos;
    expect_keyword("system");
    SystemModel m;
    m.name = expect(Tok::Name).text;
    m.priority = PriorityModel::none();
    expect(Tok::LBrace);
    while (at_keyword("atom")) m.atoms.push_back(atom());
    while (at_keyword("connector")) m.connectors.push_back(connector());
    if (at_keyword("priority")) m.priority = priority();
    if (tok_.kind != Tok::RBrace) {
      unexpected(m.connectors.empty() && m.priority == PriorityModel::none()
                     ? "'atom', 'connector', 'priority' or '}'"
                     : "'connector', 'priority' or '}'");
    }
    take();
    if (tok_.kind != Tok::End) unexpected("end of input");
    return m;
  }

  // NAME ((",")? NAME)*, possibly empty when `allow_empty`.
  std::vector<std::pair<std::string, SourcePos>> names(bool allow_empty) {
    std::vector<std::pair<std::string, SourcePos>> out;
    if (tok_.kind != Tok::Name) {
      if (!allow_empty) unexpected("a name");
      return out;
    }
    while (true) {
      Token t = take();
      out.emplace_back(std::move(t.text), t.pos);
      if (tok_.kind == Tok::Comma) {
        take();
        if (tok_.kind != Tok::Name) unexpected("a name");
        continue;
      }
      if (tok_.kind != Tok::Name) break;
    }
    return out;
  }

  AtomicBehavior atom() {
    take();
    AtomicBehavior a;
    const Token name = expect(Tok::Name);
    a.name = name.text;
    const std::string where = "atom " + a.name;
    note(where, name.pos);
    expect(Tok::LBrace);

    expect_keyword("ports");
    for (auto& [p, pos] : names(true)) {
      note("port " + p, pos, true);
      a.ports.push_back(std::move(p));
    }
    expect(Tok::Semi);

    const SourcePos states_pos = tok_.pos;
    expect_keyword("states");
    std::optional<StateIndex> init;
    while (true) {
      bool marked = false;
      if (at_keyword("init")) {
        // "init" is the marker only when a state name follows.
        Token t = take();
        if (tok_.kind == Tok::Name) {
          marked = true;
        } else {
          a.states.push_back(t.text);
          if (tok_.kind != Tok::Comma) break;
          take();
          continue;
        }
      }
      const Token s = expect(Tok::Name);
      if (marked) {
        if (init) {
          semantic("init", where, "more than one initial state", s.pos);
        } else {
          init = static_cast<StateIndex>(a.states.size());
        }
      }
      a.states.push_back(s.text);
      if (tok_.kind != Tok::Comma) break;
      take();
    }
    expect(Tok::Semi);
    if (!init) {
      semantic("init", where, "no state is marked init", states_pos);
      init = 0;
    }
    a.init = *init;

    while (at_keyword("trans")) {
      const SourcePos tpos = tok_.pos;
      take();
      const Token from = expect(Tok::Name);
      expect(Tok::LabelOpen);
      std::vector<PortName> label;
      for (auto& [p, pos] : names(true)) label.push_back(std::move(p));
      expect(Tok::LabelClose);
      const Token to = expect(Tok::Name);
      expect(Tok::Semi);
      const std::string tw = where + ", transition " + std::to_string(a.transitions.size() + 1);
      note(tw, tpos);
      auto index = [&](const Token& t) -> StateIndex {
        auto s = a.state_index(t.text);
        if (!s) {
          semantic("transition", tw, "unknown state '" + t.text + "'", t.pos);
          return 0;
        }
        return *s;
      };
      a.transitions.push_back({index(from), Interaction(std::move(label)), index(to)});
    }
    if (tok_.kind != Tok::RBrace) unexpected("'trans' or '}'");
    take();
    return a;
  }

  Connector connector() {
    take();
    const Token name = expect(Tok::Name);
    note("connector " + name.text, name.pos);
    expect(Tok::Eq);
    AcTerm term = fusion(0);
    expect(Tok::Semi);
    return {name.text, std::move(term)};
  }

  AcTerm fusion(int depth) {
    if (depth > kMaxNesting) fail("connector brackets nested too deeply", tok_.pos);
    std::vector<AcFactor> factors;
    while (true) {
      AcTerm t = AcTerm::one();
      if (tok_.kind == Tok::Name) {
        t = AcTerm::port(take().text);
      } else if (tok_.kind == Tok::Number && (tok_.text == "0" || tok_.text == "1")) {
        t = take().text == "0" ? AcTerm::zero() : AcTerm::one();
      } else if (tok_.kind == Tok::LBracket) {
        take();
        t = fusion(depth + 1);
        expect(Tok::RBracket);
      } else {
        if (factors.empty()) unexpected("a port, '0', '1' or '['");
        break;
      }
      bool trigger = false;
      if (tok_.kind == Tok::Quote) {
        take();
        trigger = true;
      }
      factors.push_back(AcFactor{std::move(t), trigger});
    }
    return AcTerm::fusion(std::move(factors));
  }

  Interaction braced() {
    expect(Tok::LBrace);
    std::vector<PortName> ports;
    for (auto& [p, pos] : names(true)) ports.push_back(std::move(p));
    expect(Tok::RBrace);
    return Interaction(std::move(ports));
  }

  PriorityModel priority() {
    note("priority", tok_.pos);
    take();
    if (at_keyword("maximal_progress")) {
      take();
      expect(Tok::Semi);
      return PriorityModel::maximal_progress();
    }
    std::vector<std::pair<Interaction, Interaction>> pairs;
    do {
      Interaction lo = braced();
      expect(Tok::Less);
      Interaction hi = braced();
      pairs.emplace_back(std::move(lo), std::move(hi));
    } while (tok_.kind == Tok::LBrace);
    expect(Tok::Semi);
    return PriorityModel::explicit_pairs(std::move(pairs));
  }

  Lexer lex_;
  Token tok_;
  SourcePos system_pos_;
  std::map<std::string, SourcePos> locations_;
  std::vector<Diagnostic> semantic_;
};

}  // namespace dsl_detail

/// Parses a model. Never throws on malformed input; problems come back as
/// diagnostics with line and column.
inline ParseResult parse(std::string_view text) { return dsl_detail::Parser(text).run(); }

inline std::string format_diagnostic(const Diagnostic& d, std::string_view file = {}) {
  std::string out;
  if (!file.empty()) out += std::string(file) + ":";
  if (d.line > 0) out += std::to_string(d.line) + ":" + std::to_string(d.column) + ": ";
  out += d.kind + ": ";
  if (!d.location.empty()) out += d.location + ": ";
  out += d.message;
  return out;
}

/// parse(), throwing InputError that lists every diagnostic.
inline SystemModel parse_or_throw(std::string_view text, std::string_view file = {}) {
  ParseResult r = parse(text);
  if (!r.ok()) {
    std::string msg;
    for (const auto& d : r.diagnostics) msg += (msg.empty() ? "" : "\n") + format_diagnostic(d, file);
    throw InputError(msg);
  }
  return std::move(*r.model);
}

/// Canonical text. parse(serialize(m)) == m whenever every connector term is
/// a fusion, which is what the parser produces.
inline std::string serialize(const SystemModel& m) {
  if (m.atoms.empty() && m.connectors.empty() && m.priority == PriorityModel::none()) {
    return "system " + m.name + " { }\n";
  }
  std::ostringstream os;
  os << "system " << m.name << " {\n";
  for (const auto& a : m.atoms) {
    os << "  atom " << a.name << " {\n";
    os << "    ports";
    for (std::size_t i = 0; i < a.ports.size(); ++i) os << (i == 0 ? " " : ", ") << a.ports[i];
    os << ";\n    states";
    for (std::size_t i = 0; i < a.states.size(); ++i) {
      os << (i == 0 ? " " : ", ") << (i == a.init ? "init " : "") << a.states[i];
    }
    os << ";\n";
    for (const auto& t : a.transitions) {
      os << "    trans " << a.states.at(t.from) << " -[" << t.label.str() << "]-> " << a.states.at(t.to)
         << ";\n";
    }
    os << "  }\n";
  }
  for (const auto& c : m.connectors) os << "  connector " << c.name << " = " << to_string(c.term) << ";\n";
  if (m.priority.is_maximal_progress()) {
    os << "  priority maximal_progress;\n";
  } else if (!m.priority.pairs.empty()) {
    os << "  priority";
    for (const auto& [lo, hi] : m.priority.pairs) os << " {" << lo.str() << "} < {" << hi.str() << "}";
    os << ";\n";
  }
  os << "}\n";
  return os.str();
}

inline std::string read_text_file(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw InputError("cannot open " + path);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

inline SystemModel load_model(const std::string& path) { return parse_or_throw(read_text_file(path), path); }

inline void save_model(const SystemModel& m, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw InputError("cannot write " + path);
  out << serialize(m);
}

}  // namespace bipsym
