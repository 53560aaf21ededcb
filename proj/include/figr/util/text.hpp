// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <string>
#include <string_view>
#include <vector>

namespace figr {

std::string_view trim(std::string_view s) noexcept;
std::vector<std::string_view> split_lines(std::string_view s);

/// Whitespace-delimited token count; the artifact's tokenizer rule.
std::size_t count_tokens(std::string_view s) noexcept;

/// Number of lines containing at least one non-whitespace character.
std::size_t count_nonempty_lines(std::string_view s) noexcept;

/// Compact, locale-independent rendering: integers without a fraction,
/// otherwise up to 10 significant digits. Negative zero prints as "0".
std::string format_number(double v);

std::string to_lower(std::string_view s);

}  // namespace figr
