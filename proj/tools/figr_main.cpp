// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include "figr/util/log.hpp"

int main(int argc, char** argv) {
  figr::init_logging_from_env();
  return figr::cli::run(std::vector<std::string>(argv, argv + argc));
}
