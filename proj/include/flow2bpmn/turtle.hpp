#pragma once

#include <cctype>
#include <string>
#include <string_view>
#include <vector>

#include "flow2bpmn/errors.hpp"
#include "flow2bpmn/rdf.hpp"
#include "flow2bpmn/vocab.hpp"

namespace flow2bpmn {

// Turtle subset: @prefix directives, IRIs, prefixed names, `a`, string and
// integer literals, optional ^^datatype, `;` and `,` continuation, `#`
// comments. No blank nodes, collections or language tags.
namespace turtle_detail {

enum class TokKind { iriref, pname, keyword_a, string_lit, integer_lit, dot,
                     semicolon, comma, hathat, prefix_directive, eof };

struct Token {
  TokKind kind = TokKind::eof;
  std::string text;
  int line = 1;
  int col = 1;
};

class Lexer {
 public:
  explicit Lexer(std::string_view input) : in_(input) {}

  Token next() {
    skip_trivia();
    Token t;
    t.line = line_;
    t.col = col_;
    if (eof()) {
      t.kind = TokKind::eof;
      return t;
    }
    char c = peek();
    if (c == '<') return lex_iriref(t);
    if (c == '"') return lex_string(t);
    if (c == '.') { get(); t.kind = TokKind::dot; return t; }
    if (c == ';') { get(); t.kind = TokKind::semicolon; return t; }
    if (c == ',') { get(); t.kind = TokKind::comma; return t; }
    if (c == '^') {
      get();
      if (eof() || peek() != '^') err("expected '^^'");
      get();
      t.kind = TokKind::hathat;
      return t;
    }
    if (c == '@') return lex_directive(t);
    if (c == '+' || c == '-' || std::isdigit(static_cast<unsigned char>(c)))
      return lex_integer(t);
    if (is_name_start(c)) return lex_pname(t);
    err(std::string("unexpected character '") + c + "'");
  }

  [[noreturn]] void err(const std::string& msg) const {
    fail(ErrorCode::TurtleSyntax,
         msg + " at line " + std::to_string(line_) + ", column " + std::to_string(col_));
  }

 private:
  bool eof() const { return pos_ >= in_.size(); }
  char peek() const { return in_[pos_]; }
  char get() {
    char c = in_[pos_++];
    if (c == '\n') {
      ++line_;
      col_ = 1;
    } else {
      ++col_;
    }
    return c;
  }

  void skip_trivia() {
    while (!eof()) {
      char c = peek();
      if (c == '#') {
        while (!eof() && peek() != '\n') get();
      } else if (std::isspace(static_cast<unsigned char>(c))) {
        get();
      } else {
        break;
      }
    }
  }

  static bool is_name_start(char c) {
    return std::isalpha(static_cast<unsigned char>(c)) || c == '_' || c == ':';
  }
  static bool is_name_char(char c) {
    return std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-' ||
           c == '.' || c == ':';
  }

  Token lex_iriref(Token t) {
    get();  // '<'
    std::string out;
    while (true) {
      if (eof()) err("unterminated IRI");
      char c = get();
      if (c == '>') break;
      if (c == '<' || c == '"' || c == '{' || c == '}' || c == '|' || c == '^' ||
          c == '`' || c == '\\' || std::isspace(static_cast<unsigned char>(c)))
        err("invalid character in IRI");
      out += c;
    }
    t.kind = TokKind::iriref;
    t.text = std::move(out);
    return t;
  }

  Token lex_string(Token t) {
    get();  // '"'
    std::string out;
    while (true) {
      if (eof()) err("unterminated string literal");
      char c = get();
      if (c == '"') break;
      if (c == '\\') {
        if (eof()) err("unterminated escape");
        char e = get();
        switch (e) {
          case 'n': out += '\n'; break;
          case 't': out += '\t'; break;
          case 'r': out += '\r'; break;
          case '"': out += '"'; break;
          case '\\': out += '\\'; break;
          default: err(std::string("unknown escape '\\") + e + "'");
        }
      } else {
        out += c;
      }
    }
    t.kind = TokKind::string_lit;
    t.text = std::move(out);
    return t;
  }

  Token lex_integer(Token t) {
    std::string out;
    if (peek() == '+' || peek() == '-') out += get();
    if (eof() || !std::isdigit(static_cast<unsigned char>(peek())))
      err("malformed number");
    while (!eof() && std::isdigit(static_cast<unsigned char>(peek()))) out += get();
    t.kind = TokKind::integer_lit;
    t.text = std::move(out);
    return t;
  }

  Token lex_directive(Token t) {
    std::string out;
    get();  // '@'
    while (!eof() && std::isalpha(static_cast<unsigned char>(peek()))) out += get();
    if (out != "prefix") err("unsupported directive '@" + out + "'");
    t.kind = TokKind::prefix_directive;
    return t;
  }

  Token lex_pname(Token t) {
    std::string out;
    while (!eof() && is_name_char(peek())) out += get();
    // A trailing '.' is the statement terminator, not part of the name.
    while (!out.empty() && out.back() == '.') {
      out.pop_back();
      unget_dot();
    }
    if (out == "a") {
      t.kind = TokKind::keyword_a;
      return t;
    }
    t.kind = TokKind::pname;
    t.text = std::move(out);
    return t;
  }

  void unget_dot() {
    --pos_;
    --col_;
  }

  std::string_view in_;
  std::size_t pos_ = 0;
  int line_ = 1;
  int col_ = 1;
};

}  // namespace turtle_detail

class TurtleParser {
 public:
  explicit TurtleParser(std::string_view input, Layer layer = Layer::abox)
      : lex_(input), layer_(layer) {}

  TripleGraph parse() {
    TripleGraph g;
    advance();
    while (cur_.kind != turtle_detail::TokKind::eof) {
      if (cur_.kind == turtle_detail::TokKind::prefix_directive) {
        parse_prefix(g);
      } else {
        parse_statement(g);
      }
    }
    return g;
  }

 private:
  using TokKind = turtle_detail::TokKind;

  void advance() { cur_ = lex_.next(); }

  void expect(TokKind k, const char* what) {
    if (cur_.kind != k) lex_.err(std::string("expected ") + what);
  }

  void parse_prefix(TripleGraph& g) {
    advance();
    expect(TokKind::pname, "prefix name");
    std::string name = cur_.text;
    if (name.empty() || name.back() != ':') lex_.err("prefix name must end with ':'");
    name.pop_back();
    advance();
    expect(TokKind::iriref, "IRI");
    prefixes_[name] = cur_.text;
    g.add_prefix(name, cur_.text);
    advance();
    expect(TokKind::dot, "'.'");
    advance();
  }

  std::string parse_iri() {
    if (cur_.kind == TokKind::iriref) {
      std::string out = cur_.text;
      advance();
      return out;
    }
    if (cur_.kind == TokKind::pname) {
      std::string out = expand_pname(cur_.text);
      advance();
      return out;
    }
    lex_.err("expected IRI or prefixed name");
  }

  std::string expand_pname(const std::string& pname) {
    auto colon = pname.find(':');
    if (colon == std::string::npos) lex_.err("prefixed name missing ':'");
    std::string pfx = pname.substr(0, colon);
    std::string local = pname.substr(colon + 1);
    auto it = prefixes_.find(pfx);
    if (it == prefixes_.end()) lex_.err("undeclared prefix '" + pfx + ":'");
    return it->second + local;
  }

  Term parse_object() {
    if (cur_.kind == TokKind::string_lit) {
      std::string lexical = cur_.text;
      advance();
      std::string datatype = kXsdString;
      if (cur_.kind == TokKind::hathat) {
        advance();
        datatype = parse_iri();
      }
      return Term{TermKind::literal, std::move(lexical), std::move(datatype)};
    }
    if (cur_.kind == TokKind::integer_lit) {
      Term t{TermKind::literal, cur_.text, kXsdInteger};
      advance();
      return t;
    }
    return Term::iri(parse_iri());
  }

  void parse_statement(TripleGraph& g) {
    std::string subject = parse_iri();
    while (true) {
      std::string predicate;
      if (cur_.kind == TokKind::keyword_a) {
        predicate = vocab::rdf_type;
        advance();
      } else {
        predicate = parse_iri();
      }
      while (true) {
        Term object = parse_object();
        g.insert(Triple{subject, predicate, std::move(object)}, layer_);
        if (cur_.kind == TokKind::comma) {
          advance();
          continue;
        }
        break;
      }
      if (cur_.kind == TokKind::semicolon) {
        advance();
        if (cur_.kind == TokKind::dot) break;  // dangling ';' before '.'
        continue;
      }
      break;
    }
    expect(TokKind::dot, "'.'");
    advance();
  }

  turtle_detail::Lexer lex_;
  turtle_detail::Token cur_;
  Layer layer_;
  std::map<std::string, std::string> prefixes_;
};

inline TripleGraph parse_turtle(std::string_view input, Layer layer = Layer::abox) {
  return TurtleParser(input, layer).parse();
}

namespace turtle_detail {

inline bool valid_local_part(std::string_view s) {
  for (char c : s) {
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '_' || c == '-'))
      return false;
  }
  return !s.empty();
}

inline std::string compact_iri(const std::string& iri,
                               const std::map<std::string, std::string>& prefixes) {
  for (const auto& [name, expansion] : prefixes) {
    if (iri.size() > expansion.size() && iri.compare(0, expansion.size(), expansion) == 0) {
      std::string local = iri.substr(expansion.size());
      if (valid_local_part(local)) return name + ":" + local;
    }
  }
  return "<" + iri + ">";
}

inline std::string quote_string(const std::string& s) {
  std::string out = "\"";
  for (char c : s) {
    switch (c) {
      case '"': out += "\\\""; break;
      case '\\': out += "\\\\"; break;
      case '\n': out += "\\n"; break;
      case '\t': out += "\\t"; break;
      case '\r': out += "\\r"; break;
      default: out += c;
    }
  }
  out += '"';
  return out;
}

}  // namespace turtle_detail

/// Canonical serialization: sorted @prefix block, then one triple per line
/// sorted by subject, predicate, object. parse_turtle(serialize_turtle(g))
/// reproduces the triple set exactly.
inline std::string serialize_turtle(const TripleGraph& g) {
  std::string out;
  for (const auto& [name, expansion] : g.prefixes())
    out += "@prefix " + name + ": <" + expansion + "> .\n";
  if (!g.prefixes().empty() && !g.all().empty()) out += "\n";
  for (const auto& [t, layer] : g.all()) {
    (void)layer;
    out += turtle_detail::compact_iri(t.s, g.prefixes());
    out += ' ';
    if (t.p == vocab::rdf_type)
      out += "a";
    else
      out += turtle_detail::compact_iri(t.p, g.prefixes());
    out += ' ';
    if (t.o.is_iri()) {
      out += turtle_detail::compact_iri(t.o.value, g.prefixes());
    } else if (t.o.datatype == kXsdInteger) {
      out += t.o.value;
    } else if (t.o.datatype == kXsdString) {
      out += turtle_detail::quote_string(t.o.value);
    } else {
      out += turtle_detail::quote_string(t.o.value);
      out += "^^<" + t.o.datatype + ">";
    }
    out += " .\n";
  }
  return out;
}

}  // namespace flow2bpmn
