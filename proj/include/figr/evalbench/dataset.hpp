// SPDX-License-Identifier: Apache-2.0
#pragma once

#include <istream>
#include <ostream>
#include <vector>

#include "figr/evalbench/problem.hpp"

namespace figr::evalbench {

/// One {id, question, gold_answer, s?, category?, source?} object per line.
/// Missing s defaults to 1 with a logged warning; records are marked imported
/// unless they say otherwise.
std::vector<ProblemRecord> read_dataset_jsonl(std::istream& in);
void write_dataset_jsonl(std::ostream& out, const std::vector<ProblemRecord>& problems);

}  // namespace figr::evalbench
