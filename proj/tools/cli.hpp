// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <string>
#include <vector>

namespace figr::cli {

inline constexpr int kExitOk = 0;
inline constexpr int kExitDomain = 1;
inline constexpr int kExitUsage = 2;

/// Entry point shared by the figr binary and the tests. args[0] is the
/// program name.
int run(const std::vector<std::string>& args);

}  // namespace figr::cli
