// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <spdlog/spdlog.h>

namespace figr {

/// Applies FIGR_LOG={error,info,debug} to the default logger (default: info).
void init_logging_from_env();

}  // namespace figr
