// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <filesystem>
#include <istream>
#include <ostream>
#include <string>
#include <vector>

#include <json.hpp>

#include "figr/rollout/trajectory.hpp"

namespace figr::rollout {

nlohmann::json problem_to_json(const evalbench::ProblemRecord& problem);
evalbench::ProblemRecord problem_from_json(const nlohmann::json& j);

nlohmann::json trajectory_to_json(const Trajectory& trajectory);
/// Figures are reloaded from `figure_root` when given; otherwise rasters are
/// absent and only their hashes survive.
Trajectory trajectory_from_json(const nlohmann::json& j, const std::filesystem::path& figure_root = {});

/// Writes unseen figures as <dir>/<sha256>.pgm and records their relative paths.
void write_figures(Trajectory& trajectory, const std::filesystem::path& run_dir, const std::string& subdir = "figures");

void write_jsonl(std::ostream& out, const std::vector<Trajectory>& trajectories);
std::vector<Trajectory> read_jsonl(std::istream& in, const std::filesystem::path& figure_root = {});

}  // namespace figr::rollout
