// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string_view>
#include <variant>

#include "figr/figscript/errors.hpp"
#include "figr/figscript/program.hpp"

namespace figr::figscript {

struct ParseLimits {
  std::size_t max_statements = 256;
  std::size_t max_source_bytes = 1 << 20;
  std::size_t max_nesting = 64;
};

using ParseResult = std::variant<Program, ExecError>;

/// Total: every input yields a Program or an ExecError (ParseError, or
/// LimitExceeded for oversized sources). Never throws on malformed text.
ParseResult parse(std::string_view source, const ParseLimits& limits = {});

/// Returns the keyword table entry's arity bounds; false for unknown names.
bool is_keyword(std::string_view name) noexcept;

}  // namespace figr::figscript
