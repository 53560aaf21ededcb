// SPDX-License-Identifier: Apache-2.0
#include "figr/figscript/parser.hpp"

#include <array>
#include <cctype>
#include <charconv>
#include <cmath>
#include <set>
#include <string>

namespace figr::figscript {
namespace {

enum class Usage { Statement, Nested, Math };

struct KeywordInfo {
  std::string_view name;
  std::size_t min_args;
  std::size_t max_args;
  Usage usage;
  StatementKind kind;
};

constexpr std::size_t kMany = static_cast<std::size_t>(-1);

constexpr std::array kKeywords{
    KeywordInfo{"point", 1, 2, Usage::Nested, StatementKind::DefinePoint},
    KeywordInfo{"line", 2, 2, Usage::Nested, StatementKind::DefineLine},
    KeywordInfo{"segment", 2, 2, Usage::Nested, StatementKind::DefineSegment},
    KeywordInfo{"circle", 2, 3, Usage::Nested, StatementKind::DefineCircle},
    KeywordInfo{"polygon", 3, kMany, Usage::Nested, StatementKind::DefinePolygon},
    KeywordInfo{"plot", 3, 3, Usage::Statement, StatementKind::DefineFunctionPlot},
    KeywordInfo{"intersect", 2, 2, Usage::Nested, StatementKind::Intersect},
    KeywordInfo{"distance", 2, 2, Usage::Nested, StatementKind::Measure},
    KeywordInfo{"length", 1, 1, Usage::Nested, StatementKind::Measure},
    KeywordInfo{"area", 1, 1, Usage::Nested, StatementKind::Measure},
    KeywordInfo{"angle", 3, 3, Usage::Nested, StatementKind::Measure},
    KeywordInfo{"count", 1, 1, Usage::Nested, StatementKind::Measure},
    KeywordInfo{"crossings", 2, kMany, Usage::Nested, StatementKind::Measure},
    KeywordInfo{"lattice", 1, 1, Usage::Nested, StatementKind::Measure},
    KeywordInfo{"roots", 1, 1, Usage::Nested, StatementKind::Measure},
    KeywordInfo{"label", 2, 2, Usage::Statement, StatementKind::Label},
    KeywordInfo{"assert", 1, 1, Usage::Statement, StatementKind::Assert},
    KeywordInfo{"window", 4, 4, Usage::Statement, StatementKind::Window},
    KeywordInfo{"sin", 1, 1, Usage::Math, StatementKind::Measure},
    KeywordInfo{"cos", 1, 1, Usage::Math, StatementKind::Measure},
    KeywordInfo{"tan", 1, 1, Usage::Math, StatementKind::Measure},
    KeywordInfo{"sqrt", 1, 1, Usage::Math, StatementKind::Measure},
    KeywordInfo{"abs", 1, 1, Usage::Math, StatementKind::Measure},
    KeywordInfo{"exp", 1, 1, Usage::Math, StatementKind::Measure},
    KeywordInfo{"log", 1, 1, Usage::Math, StatementKind::Measure},
    KeywordInfo{"min", 2, 2, Usage::Math, StatementKind::Measure},
    KeywordInfo{"max", 2, 2, Usage::Math, StatementKind::Measure},
};

const KeywordInfo* find_keyword(std::string_view name) noexcept {
  for (const auto& k : kKeywords)
    if (k.name == name) return &k;
  return nullptr;
}

bool is_reserved(std::string_view name) noexcept { return name == "x" || name == "pi" || find_keyword(name); }

enum class Tok { Ident, Number, String, LParen, RParen, Comma, Assign, Op, Cmp, End };

struct Token {
  Tok kind = Tok::End;
  std::string text;
  double number = 0.0;
  std::size_t column = 0;  // 1-based
};

struct Failure {
  std::size_t column;
  std::string message;
};

/// Tokenises one line; comments start at '#'.
bool lex_line(std::string_view line, std::vector<Token>& out, Failure& fail) {
  std::size_t i = 0;
  while (i < line.size()) {
    const char c = line[i];
    const std::size_t col = i + 1;
    if (c == ' ' || c == '\t' || c == '\r') {
      ++i;
      continue;
    }
    if (c == '#') break;
    if (std::isalpha(static_cast<unsigned char>(c)) || c == '_') {
      std::size_t j = i;
      while (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '_')) ++j;
      out.push_back({Tok::Ident, std::string(line.substr(i, j - i)), 0.0, col});
      i = j;
      continue;
    }
    if (std::isdigit(static_cast<unsigned char>(c)) || (c == '.' && i + 1 < line.size() &&
                                                         std::isdigit(static_cast<unsigned char>(line[i + 1])))) {
      std::size_t j = i;
      while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
      if (j < line.size() && line[j] == '.') {
        ++j;
        while (j < line.size() && std::isdigit(static_cast<unsigned char>(line[j]))) ++j;
      }
      if (j < line.size() && (line[j] == 'e' || line[j] == 'E')) {
        std::size_t k = j + 1;
        if (k < line.size() && (line[k] == '+' || line[k] == '-')) ++k;
        if (k >= line.size() || !std::isdigit(static_cast<unsigned char>(line[k]))) {
          fail = {col, "malformed number '" + std::string(line.substr(i, k - i)) + "'"};
          return false;
        }
        while (k < line.size() && std::isdigit(static_cast<unsigned char>(line[k]))) ++k;
        j = k;
      }
      if (j < line.size() && (std::isalnum(static_cast<unsigned char>(line[j])) || line[j] == '.' || line[j] == '_')) {
        std::size_t k = j;
        while (k < line.size() && (std::isalnum(static_cast<unsigned char>(line[k])) || line[k] == '.' || line[k] == '_'))
          ++k;
        fail = {col, "malformed number '" + std::string(line.substr(i, k - i)) + "'"};
        return false;
      }
      const std::string_view lexeme = line.substr(i, j - i);
      double value = 0.0;
      const auto res = std::from_chars(lexeme.data(), lexeme.data() + lexeme.size(), value);
      if (res.ec != std::errc() || res.ptr != lexeme.data() + lexeme.size() || !std::isfinite(value)) {
        fail = {col, "malformed number '" + std::string(lexeme) + "'"};
        return false;
      }
      out.push_back({Tok::Number, std::string(lexeme), value, col});
      i = j;
      continue;
    }
    if (c == '"') {
      std::string text;
      std::size_t j = i + 1;
      bool closed = false;
      while (j < line.size()) {
        if (line[j] == '\\' && j + 1 < line.size() && (line[j + 1] == '"' || line[j + 1] == '\\')) {
          text.push_back(line[j + 1]);
          j += 2;
          continue;
        }
        if (line[j] == '"') {
          closed = true;
          ++j;
          break;
        }
        text.push_back(line[j++]);
      }
      if (!closed) {
        fail = {col, "unterminated string literal"};
        return false;
      }
      out.push_back({Tok::String, std::move(text), 0.0, col});
      i = j;
      continue;
    }
    const char n = i + 1 < line.size() ? line[i + 1] : '\0';
    switch (c) {
      case '(': out.push_back({Tok::LParen, "(", 0.0, col}); ++i; continue;
      case ')': out.push_back({Tok::RParen, ")", 0.0, col}); ++i; continue;
      case ',': out.push_back({Tok::Comma, ",", 0.0, col}); ++i; continue;
      case '+': case '-': case '*': case '/': case '^':
        out.push_back({Tok::Op, std::string(1, c), 0.0, col});
        ++i;
        continue;
      case '=':
        if (n == '=') {
          out.push_back({Tok::Cmp, "==", 0.0, col});
          i += 2;
        } else {
          out.push_back({Tok::Assign, "=", 0.0, col});
          ++i;
        }
        continue;
      case '!':
        if (n == '=') {
          out.push_back({Tok::Cmp, "!=", 0.0, col});
          i += 2;
          continue;
        }
        break;
      case '<': case '>':
        if (n == '=') {
          out.push_back({Tok::Cmp, std::string{c, '='}, 0.0, col});
          i += 2;
        } else {
          out.push_back({Tok::Cmp, std::string(1, c), 0.0, col});
          ++i;
        }
        continue;
      default: break;
    }
    fail = {col, std::string("unexpected character '") + c + "'"};
    return false;
  }
  out.push_back({Tok::End, "", 0.0, line.size() + 1});
  return true;
}

class LineParser {
 public:
  LineParser(const std::vector<Token>& toks, std::size_t max_nesting) : toks_(toks), max_nesting_(max_nesting) {}

  bool parse_statement(Statement& st, Failure& fail) {
    try {
      if (peek().kind == Tok::Ident && toks_.size() > 1 && toks_[1].kind == Tok::Assign) {
        const Token& name = next();
        if (is_reserved(name.text)) throw Failure{name.column, "cannot bind reserved name '" + name.text + "'"};
        next();
        st.binder = name.text;
        binder_column_ = name.column;
      }
      st.expr = parse_expr(0);
      if (peek().kind != Tok::End) throw Failure{peek().column, "unexpected '" + peek().text + "'"};
      classify(st);
      return true;
    } catch (const Failure& f) {
      fail = f;
      return false;
    }
  }

 private:
  const Token& peek() const { return toks_[pos_]; }
  const Token& next() { return toks_[pos_ < toks_.size() - 1 ? pos_++ : pos_]; }

  void expect(Tok kind, std::string_view what) {
    if (peek().kind != kind) {
      const auto& t = peek();
      throw Failure{t.column, "expected " + std::string(what) + (t.kind == Tok::End ? " at end of line" : ", found '" + t.text + "'")};
    }
    next();
  }

  struct DepthGuard {
    std::size_t& depth;
    DepthGuard(std::size_t& d, std::size_t limit, std::size_t column) : depth(d) {
      if (++depth > limit) throw Failure{column, "expression nested too deeply"};
    }
    ~DepthGuard() { --depth; }
  };

  Expr parse_expr(std::size_t) {
    DepthGuard guard(depth_, max_nesting_, peek().column);
    Expr lhs = parse_additive();
    if (peek().kind == Tok::Cmp) {
      const Token op = next();
      Expr rhs = parse_additive();
      Expr e{ExprKind::Compare, 0.0, op.text, {}, op.column};
      e.args.push_back(std::move(lhs));
      e.args.push_back(std::move(rhs));
      return e;
    }
    return lhs;
  }

  Expr parse_additive() {
    Expr lhs = parse_term();
    while (peek().kind == Tok::Op && (peek().text == "+" || peek().text == "-")) {
      const Token op = next();
      Expr e{ExprKind::Binary, 0.0, op.text, {}, op.column};
      e.args.push_back(std::move(lhs));
      e.args.push_back(parse_term());
      lhs = std::move(e);
    }
    return lhs;
  }

  Expr parse_term() {
    Expr lhs = parse_unary();
    while (peek().kind == Tok::Op && (peek().text == "*" || peek().text == "/")) {
      const Token op = next();
      Expr e{ExprKind::Binary, 0.0, op.text, {}, op.column};
      e.args.push_back(std::move(lhs));
      e.args.push_back(parse_unary());
      lhs = std::move(e);
    }
    return lhs;
  }

  Expr parse_unary() {
    DepthGuard guard(depth_, max_nesting_, peek().column);
    if (peek().kind == Tok::Op && (peek().text == "-" || peek().text == "+")) {
      const Token op = next();
      Expr e{ExprKind::Unary, 0.0, op.text, {}, op.column};
      e.args.push_back(parse_unary());
      return e;
    }
    return parse_power();
  }

  Expr parse_power() {
    Expr base = parse_primary();
    if (peek().kind == Tok::Op && peek().text == "^") {
      const Token op = next();
      Expr e{ExprKind::Binary, 0.0, "^", {}, op.column};
      e.args.push_back(std::move(base));
      e.args.push_back(parse_unary());
      return e;
    }
    return base;
  }

  Expr parse_primary() {
    const Token& t = peek();
    switch (t.kind) {
      case Tok::Number: {
        next();
        return Expr{ExprKind::Number, t.number, "", {}, t.column};
      }
      case Tok::String: {
        next();
        return Expr{ExprKind::String, 0.0, t.text, {}, t.column};
      }
      case Tok::Ident: {
        const Token name = next();
        if (peek().kind != Tok::LParen) return Expr{ExprKind::Identifier, 0.0, name.text, {}, name.column};
        const KeywordInfo* kw = find_keyword(name.text);
        if (!kw) throw Failure{name.column, "unknown keyword \"" + name.text + "\""};
        next();
        Expr call{ExprKind::Call, 0.0, name.text, {}, name.column};
        if (peek().kind != Tok::RParen) {
          call.args.push_back(parse_expr(0));
          while (peek().kind == Tok::Comma) {
            next();
            call.args.push_back(parse_expr(0));
          }
        }
        expect(Tok::RParen, "')'");
        const std::size_t n = call.args.size();
        if (n < kw->min_args || n > kw->max_args) {
          std::string want = std::to_string(kw->min_args);
          if (kw->max_args == kMany)
            want = "at least " + want;
          else if (kw->max_args != kw->min_args)
            want += " or " + std::to_string(kw->max_args);
          throw Failure{name.column, "'" + name.text + "' expects " + want + " argument" +
                                         (kw->min_args == 1 && kw->max_args == 1 ? "" : "s") + ", got " +
                                         std::to_string(n)};
        }
        return call;
      }
      case Tok::LParen: {
        const std::size_t col = t.column;
        next();
        Expr first = parse_expr(0);
        if (peek().kind == Tok::Comma) {
          next();
          Expr tuple{ExprKind::Tuple, 0.0, "", {}, col};
          tuple.args.push_back(std::move(first));
          tuple.args.push_back(parse_expr(0));
          expect(Tok::RParen, "')' closing point literal");
          return tuple;
        }
        expect(Tok::RParen, "')'");
        return first;
      }
      case Tok::End: throw Failure{t.column, "unexpected end of line"};
      default: throw Failure{t.column, "unexpected '" + t.text + "'"};
    }
  }

  // Statement kind from the top-level expression, plus placement checks.
  void classify(Statement& st) {
    const Expr& e = st.expr;
    bool in_assert = false;
    if (e.kind == ExprKind::Call) {
      const KeywordInfo* kw = find_keyword(e.text);
      if (kw->usage == Usage::Math)
        st.kind = StatementKind::Measure;
      else
        st.kind = kw->kind;
      in_assert = st.kind == StatementKind::Assert;
      if (st.binder && (st.kind == StatementKind::Label || st.kind == StatementKind::Assert ||
                        st.kind == StatementKind::Window))
        throw Failure{binder_column_, "'" + e.text + "' does not produce a value"};
      if (st.kind == StatementKind::Label && e.args[1].kind != ExprKind::String)
        throw Failure{e.args[1].column, "label text must be a string literal"};
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        const bool allow_compare = in_assert && i == 0;
        const bool allow_string = st.kind == StatementKind::Label && i == 1;
        const bool plot_body = st.kind == StatementKind::DefineFunctionPlot && i == 0;
        check_nested(e.args[i], allow_compare, allow_string, plot_body);
      }
      if (in_assert && e.args[0].kind != ExprKind::Compare)
        throw Failure{e.args[0].column, "assert expects a comparison"};
      return;
    }
    if (e.kind == ExprKind::Tuple)
      st.kind = StatementKind::DefinePoint;
    else
      st.kind = StatementKind::Measure;
    check_nested(e, false, false, false);
  }

  void check_nested(const Expr& e, bool allow_compare, bool allow_string, bool plot_body) {
    switch (e.kind) {
      case ExprKind::Compare:
        if (!allow_compare) throw Failure{e.column, "comparison is only allowed inside assert"};
        break;
      case ExprKind::String:
        if (!allow_string) throw Failure{e.column, "string literal is only allowed as label text"};
        return;
      case ExprKind::Call: {
        const KeywordInfo* kw = find_keyword(e.text);
        if (kw->usage == Usage::Statement) throw Failure{e.column, "'" + e.text + "' must be a statement"};
        if (plot_body && kw->usage != Usage::Math)
          throw Failure{e.column, "plot body may only use arithmetic and math functions"};
        break;
      }
      case ExprKind::Tuple:
        if (plot_body) throw Failure{e.column, "plot body must be a scalar expression"};
        break;
      default: break;
    }
    for (const auto& a : e.args) check_nested(a, false, false, plot_body);
  }

  const std::vector<Token>& toks_;
  std::size_t max_nesting_;
  std::size_t pos_ = 0;
  std::size_t depth_ = 0;
  std::size_t binder_column_ = 0;
};

}  // namespace

bool is_keyword(std::string_view name) noexcept { return find_keyword(name) != nullptr; }

ParseResult parse(std::string_view source, const ParseLimits& limits) {
  Program program;
  program.source = std::string(source);
  if (source.size() > limits.max_source_bytes)
    return ExecError{ExecErrorKind::LimitExceeded, 0, 0, 0,
                     "source exceeds " + std::to_string(limits.max_source_bytes) + " bytes"};
  std::set<std::string, std::less<>> bound;
  std::size_t offset = 0;
  std::size_t line_no = 0;
  while (offset <= source.size()) {
    std::size_t end = source.find('\n', offset);
    if (end == std::string_view::npos) end = source.size();
    const std::string_view line = source.substr(offset, end - offset);
    ++line_no;
    std::vector<Token> toks;
    Failure fail{0, ""};
    const std::size_t index = program.statements.size();
    if (!lex_line(line, toks, fail))
      return ExecError{ExecErrorKind::ParseError, index, fail.column, offset + fail.column - 1, fail.message};
    if (toks.size() > 1) {
      if (program.statements.size() >= limits.max_statements)
        return ExecError{ExecErrorKind::LimitExceeded, index, 1, offset,
                         "more than " + std::to_string(limits.max_statements) + " statements"};
      Statement st;
      st.line = line_no;
      st.offset = offset + toks.front().column - 1;
      LineParser parser(toks, limits.max_nesting);
      if (!parser.parse_statement(st, fail))
        return ExecError{ExecErrorKind::ParseError, index, fail.column, offset + fail.column - 1, fail.message};
      if (st.binder) {
        if (bound.count(*st.binder))
          return ExecError{ExecErrorKind::ParseError, index, toks.front().column, st.offset,
                           "identifier '" + *st.binder + "' is already bound"};
        bound.insert(*st.binder);
      }
      program.statements.push_back(std::move(st));
    }
    if (end == source.size()) break;
    offset = end + 1;
  }
  return program;
}

}  // namespace figr::figscript
