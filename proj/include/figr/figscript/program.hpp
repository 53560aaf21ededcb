// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

namespace figr::figscript {

enum class StatementKind {
  DefinePoint,
  DefineLine,
  DefineSegment,
  DefineCircle,
  DefinePolygon,
  DefineFunctionPlot,
  Intersect,
  Measure,
  Label,
  Assert,
  Window,
};

std::string_view to_string(StatementKind kind) noexcept;

enum class ExprKind { Number, String, Identifier, Call, Tuple, Unary, Binary, Compare };

struct Expr {
  ExprKind kind = ExprKind::Number;
  double number = 0.0;
  std::string text;  // identifier, string literal, callee, or operator
  std::vector<Expr> args;
  std::size_t column = 0;  // 1-based, within the statement's line
};

struct Statement {
  StatementKind kind = StatementKind::Measure;
  std::optional<std::string> binder;
  Expr expr;
  std::size_t line = 0;  // 1-based source line
  std::size_t offset = 0;  // byte offset of the statement in source
};

struct Program {
  std::vector<Statement> statements;
  std::string source;
};

/// Canonical one-statement-per-line source text. Numbers use the shortest
/// representation that parses back to the same double.
std::string pretty_print(const Program& program);
std::string pretty_print(const Expr& expr);

/// Structural equality, ignoring source positions.
bool same_structure(const Expr& a, const Expr& b) noexcept;
bool same_statements(const Program& a, const Program& b) noexcept;

/// Statements that put ink on the canvas.
bool is_drawable(StatementKind kind) noexcept;
/// Statements that report values in the textual feedback.
bool is_measurable(StatementKind kind) noexcept;

}  // namespace figr::figscript
