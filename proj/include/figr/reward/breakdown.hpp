// SPDX-License-Identifier: Apache-2.0
#pragma once

namespace figr::reward {

struct RewardBreakdown {
  int r_acc = 0;
  int r_fmt = 0;
  double r_vis = 0.0;
  double total = 0.0;
  bool answer_correct = false;
  bool format_ok = false;
  int suitability = 0;
  bool exec_ok = false;

  friend bool operator==(const RewardBreakdown&, const RewardBreakdown&) = default;
};

}  // namespace figr::reward
