// SPDX-License-Identifier: Apache-2.0
#include "figr/evalbench/dataset.hpp"

#include <string>

#include <json.hpp>
#include <spdlog/spdlog.h>

#include "figr/util/error.hpp"

namespace figr::evalbench {

using nlohmann::json;

std::vector<ProblemRecord> read_dataset_jsonl(std::istream& in) {
  std::vector<ProblemRecord> out;
  std::string line;
  std::size_t lineno = 0, defaulted = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.find_first_not_of(" \t\r") == std::string::npos) continue;
    const auto where = "dataset line " + std::to_string(lineno);
    json j;
    try {
      j = json::parse(line);
    } catch (const json::exception& e) {
      throw Error(Errc::InvalidArgument, where + ": " + e.what());
    }
    if (!j.is_object()) throw Error(Errc::InvalidArgument, where + ": expected an object");
    for (const char* key : {"id", "question", "gold_answer"})
      if (!j.contains(key) || !j[key].is_string())
        throw Error(Errc::InvalidArgument, where + ": missing string field \"" + key + "\"");
    ProblemRecord p;
    p.id = j["id"].get<std::string>();
    p.question = j["question"].get<std::string>();
    p.gold_answer = j["gold_answer"].get<std::string>();
    if (p.gold_answer.empty()) throw Error(Errc::InvalidArgument, where + ": empty gold_answer");
    p.category = j.value("category", std::string("imported"));
    p.source = j.value("source", std::string("imported")) == "synthetic" ? ProblemSource::Synthetic
                                                                         : ProblemSource::Imported;
    if (j.contains("s") && !j["s"].is_null()) {
      const int s = j["s"].get<int>();
      if (s != 0 && s != 1) throw Error(Errc::InvalidArgument, where + ": s must be 0 or 1");
      p.suitability = s;
    } else {
      p.suitability = 1;
      ++defaulted;
    }
    out.push_back(std::move(p));
  }
  if (defaulted) spdlog::warn("{} imported problem(s) had no suitability tag; defaulted to s=1", defaulted);
  return out;
}

void write_dataset_jsonl(std::ostream& out, const std::vector<ProblemRecord>& problems) {
  for (const auto& p : problems) {
    json j = {{"id", p.id}, {"question", p.question}, {"gold_answer", p.gold_answer}, {"category", p.category}};
    j["s"] = p.suitability ? json(*p.suitability) : json(nullptr);
    j["source"] = p.source == ProblemSource::Synthetic ? "synthetic" : "imported";
    out << j.dump() << '\n';
  }
}

}  // namespace figr::evalbench
