// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <cstddef>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>

#include "figr/figscript/errors.hpp"
#include "figr/figscript/program.hpp"
#include "figr/figscript/raster.hpp"

namespace figr::figscript {

struct ExecLimits {
  std::uint64_t instruction_cap = 100'000;
  std::size_t width = 128;
  std::size_t height = 128;
  std::size_t plot_samples = 256;
  std::size_t max_statements = 256;
};

struct ExecStats {
  std::size_t statements_run = 0;  // statements that completed
  std::uint64_t instructions = 0;
  friend bool operator==(const ExecStats&, const ExecStats&) = default;
};

struct ExecOutcome {
  bool exec_ok = false;
  std::string text_feedback;  // "NAME = value" lines, newline terminated
  std::optional<Raster> raster;
  std::optional<ExecError> error;
  ExecStats stats;

  /// Feedback as shown to a policy: value lines, then the error if any;
  /// "ok" when a successful run printed nothing.
  std::string feedback_for_context() const;

  friend bool operator==(const ExecOutcome&, const ExecOutcome&) = default;
};

/// Geometry evaluation without rasterisation.
struct Evaluation {
  Scene scene;
  std::optional<WorldWindow> explicit_window;
  std::string text_feedback;
  std::optional<ExecError> error;
  ExecStats stats;
  bool has_drawable = false;
  bool has_measurable = false;
};

Evaluation evaluate(const Program& program, const ExecLimits& limits = {});

ExecOutcome execute(const Program& program, const ExecLimits& limits = {});

/// parse + execute; parse failures come back as a failed outcome.
ExecOutcome run_source(std::string_view source, const ExecLimits& limits = {});

}  // namespace figr::figscript
