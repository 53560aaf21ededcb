// SPDX-License-Identifier: Apache-2.0
#include "figr/util/log.hpp"

#include <cstdlib>
#include <string_view>

#include <spdlog/sinks/stdout_color_sinks.h>

namespace figr {

void init_logging_from_env() {
  auto logger = spdlog::stderr_color_mt("figr");
  spdlog::set_default_logger(logger);
  spdlog::set_pattern("[%l] %v");
  const char* env = std::getenv("FIGR_LOG");
  const std::string_view level = env ? env : "info";
  if (level == "debug")
    spdlog::set_level(spdlog::level::debug);
  else if (level == "error")
    spdlog::set_level(spdlog::level::err);
  else
    spdlog::set_level(spdlog::level::info);
}

}  // namespace figr
