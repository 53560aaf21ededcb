// SPDX-License-Identifier: Apache-2.0
#include "figr/figscript/program.hpp"

#include <charconv>

#include "figr/figscript/errors.hpp"

namespace figr::figscript {

std::string_view to_string(StatementKind kind) noexcept {
  switch (kind) {
    case StatementKind::DefinePoint: return "DefinePoint";
    case StatementKind::DefineLine: return "DefineLine";
    case StatementKind::DefineSegment: return "DefineSegment";
    case StatementKind::DefineCircle: return "DefineCircle";
    case StatementKind::DefinePolygon: return "DefinePolygon";
    case StatementKind::DefineFunctionPlot: return "DefineFunctionPlot";
    case StatementKind::Intersect: return "Intersect";
    case StatementKind::Measure: return "Measure";
    case StatementKind::Label: return "Label";
    case StatementKind::Assert: return "Assert";
    case StatementKind::Window: return "Window";
  }
  return "Unknown";
}

std::string_view to_string(ExecErrorKind kind) noexcept {
  switch (kind) {
    case ExecErrorKind::ParseError: return "ParseError";
    case ExecErrorKind::UnboundIdentifier: return "UnboundIdentifier";
    case ExecErrorKind::DomainError: return "DomainError";
    case ExecErrorKind::LimitExceeded: return "LimitExceeded";
    case ExecErrorKind::EmptyScene: return "EmptyScene";
  }
  return "Unknown";
}

std::string ExecError::describe() const {
  std::string out(to_string(kind));
  out += " at statement " + std::to_string(statement);
  if (column > 0) out += ", column " + std::to_string(column);
  out += ": " + message;
  return out;
}

bool is_drawable(StatementKind kind) noexcept {
  switch (kind) {
    case StatementKind::DefinePoint:
    case StatementKind::DefineLine:
    case StatementKind::DefineSegment:
    case StatementKind::DefineCircle:
    case StatementKind::DefinePolygon:
    case StatementKind::DefineFunctionPlot:
    case StatementKind::Intersect:
    case StatementKind::Label:
      return true;
    default:
      return false;
  }
}

bool is_measurable(StatementKind kind) noexcept {
  return kind == StatementKind::Measure || kind == StatementKind::Intersect;
}

namespace {

int precedence(const Expr& e) noexcept {
  switch (e.kind) {
    case ExprKind::Compare: return 0;
    case ExprKind::Binary:
      if (e.text == "+" || e.text == "-") return 1;
      if (e.text == "*" || e.text == "/") return 2;
      return 4;  // ^
    case ExprKind::Unary: return 3;
    default: return 5;
  }
}

void append_number(std::string& out, double v) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof buf, v);
  out.append(buf, res.ptr);
}

void append_string_literal(std::string& out, const std::string& s) {
  out.push_back('"');
  for (char c : s) {
    if (c == '"' || c == '\\') out.push_back('\\');
    out.push_back(c);
  }
  out.push_back('"');
}

void print(std::string& out, const Expr& e);

void print_child(std::string& out, const Expr& child, bool wrap) {
  if (wrap) out.push_back('(');
  print(out, child);
  if (wrap) out.push_back(')');
}

void print(std::string& out, const Expr& e) {
  switch (e.kind) {
    case ExprKind::Number: append_number(out, e.number); break;
    case ExprKind::String: append_string_literal(out, e.text); break;
    case ExprKind::Identifier: out += e.text; break;
    case ExprKind::Call:
    case ExprKind::Tuple:
      if (e.kind == ExprKind::Call) out += e.text;
      out.push_back('(');
      for (std::size_t i = 0; i < e.args.size(); ++i) {
        if (i) out += ", ";
        print(out, e.args[i]);
      }
      out.push_back(')');
      break;
    case ExprKind::Unary:
      out += e.text;
      print_child(out, e.args[0], precedence(e.args[0]) < 3);
      break;
    case ExprKind::Binary:
    case ExprKind::Compare: {
      const int p = precedence(e);
      const bool right_assoc = e.text == "^";
      const int lp = precedence(e.args[0]);
      const int rp = precedence(e.args[1]);
      print_child(out, e.args[0], lp < p || (right_assoc && lp == p) || (right_assoc && lp == 3));
      out += ' ';
      out += e.text;
      out += ' ';
      print_child(out, e.args[1], rp < p || (!right_assoc && rp == p));
      break;
    }
  }
}

}  // namespace

std::string pretty_print(const Expr& expr) {
  std::string out;
  print(out, expr);
  return out;
}

std::string pretty_print(const Program& program) {
  std::string out;
  for (const auto& st : program.statements) {
    if (st.binder) out += *st.binder + " = ";
    print(out, st.expr);
    out.push_back('\n');
  }
  return out;
}

bool same_structure(const Expr& a, const Expr& b) noexcept {
  if (a.kind != b.kind || a.text != b.text || a.args.size() != b.args.size()) return false;
  if (a.kind == ExprKind::Number && a.number != b.number) return false;
  for (std::size_t i = 0; i < a.args.size(); ++i)
    if (!same_structure(a.args[i], b.args[i])) return false;
  return true;
}

bool same_statements(const Program& a, const Program& b) noexcept {
  if (a.statements.size() != b.statements.size()) return false;
  for (std::size_t i = 0; i < a.statements.size(); ++i) {
    const auto& x = a.statements[i];
    const auto& y = b.statements[i];
    if (x.kind != y.kind || x.binder != y.binder || !same_structure(x.expr, y.expr)) return false;
  }
  return true;
}

}  // namespace figr::figscript
