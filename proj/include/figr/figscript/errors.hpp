// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>

namespace figr::figscript {

enum class ExecErrorKind { ParseError, UnboundIdentifier, DomainError, LimitExceeded, EmptyScene };

std::string_view to_string(ExecErrorKind kind) noexcept;

struct ExecError {
  ExecErrorKind kind = ExecErrorKind::ParseError;
  std::size_t statement = 0;  // index into Program::statements
  std::size_t column = 0;  // 1-based column within the statement's line, 0 if unknown
  std::size_t offset = 0;  // byte offset in source
  std::string message;

  /// "DomainError at statement 0, column 1: radius must be positive"
  std::string describe() const;

  friend bool operator==(const ExecError&, const ExecError&) = default;
};

}  // namespace figr::figscript
