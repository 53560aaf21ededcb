// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <optional>
#include <string>

namespace figr::evalbench {

enum class ProblemSource { Synthetic, Imported };

struct ProblemRecord {
  std::string id;
  std::string question;
  std::string gold_answer;
  std::optional<int> suitability;  // s in {0, 1}; required for training
  std::string category;
  ProblemSource source = ProblemSource::Synthetic;

  friend bool operator==(const ProblemRecord&, const ProblemRecord&) = default;
};

}  // namespace figr::evalbench
