// SPDX-License-Identifier: Apache-2.0
#include <doctest.h>

#include <unistd.h>

#include <algorithm>
#include <filesystem>
#include <fstream>
#include <sstream>

#include <json.hpp>

#include "cli.hpp"
#include "figr/util/hash.hpp"

namespace fs = std::filesystem;
using figr::cli::run;

namespace {

struct TempDir {
  fs::path path;
  TempDir() {
    static int n = 0;
    path = fs::temp_directory_path() / ("figr_cli_test_" + std::to_string(::getpid()) + "_" + std::to_string(n++));
    fs::remove_all(path);
    fs::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    fs::remove_all(path, ec);
  }
  std::string operator/(const std::string& s) const { return (path / s).string(); }
};

std::string slurp(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

int invoke(std::vector<std::string> args) {
  args.insert(args.begin(), "figr");
  return run(args);
}

const std::string kSamples = FIGR_SOURCE_DIR "/samples";

}  // namespace

TEST_CASE("render writes a figure and feedback") {
  TempDir d;
  CHECK(invoke({"render", kSamples + "/cross.figs", "-o", d / "out"}) == 0);
  CHECK(fs::exists(d / "out/cross.pgm"));
  CHECK(slurp(d / "out/cross.txt") == "ans = 1\n");
  CHECK(slurp(d / "out/cross.pgm").rfind("P5\n", 0) == 0);

  std::ofstream(d / "bad.figs") << "circle((0,0), -1)\n";
  CHECK(invoke({"render", d / "bad.figs", "-o", d / "out"}) == 1);
  CHECK(slurp(d / "out/bad.txt").find("DomainError") != std::string::npos);
}

TEST_CASE("usage errors exit with 2") {
  CHECK(invoke({"bogus"}) == 2);
  CHECK(invoke({}) == 2);
  CHECK(invoke({"render"}) == 2);
  CHECK(invoke({"gen", "--no-such-flag"}) == 2);
  CHECK(invoke({"train", "--iters", "1"}) == 2);
  CHECK(invoke({"eval", "--k", "1"}) == 2);
  CHECK(invoke({"gen", "--category", "nonsense"}) == 2);
  CHECK(invoke({"rollout", "--policy", "nobody"}) == 2);
}

TEST_CASE("domain errors exit with 1") {
  TempDir d;
  std::ofstream(d / "cfg.json") << R"({"train": {"clip": 3}})";
  CHECK(invoke({"train", "--config", d / "cfg.json", "--seed", "1", "--out", d / "runs"}) == 1);
  std::ofstream(d / "typo.json") << R"({"trian": {}})";
  CHECK(invoke({"train", "--config", d / "typo.json", "--seed", "1", "--out", d / "runs"}) == 1);
  CHECK(invoke({"eval", "--seed", "1", "--policy", "toy", "--checkpoint", d / "missing.ckpt", "--out", d / "runs"}) ==
        1);
}

TEST_CASE("train is reproducible from config and seed") {
  TempDir d;
  std::ofstream(d / "train.json") << R"({"train": {"iterations": 12}, "workers": 2})";
  const std::vector<std::string> args{"train", "--config", d / "train.json", "--seed", "7", "--out", d / "runs"};
  REQUIRE(invoke(args) == 0);
  REQUIRE(invoke(args) == 0);
  const auto a = slurp(d / "runs/train-seed7/metrics.csv");
  const auto b = slurp(d / "runs/train-seed7-1/metrics.csv");
  CHECK(a == b);
  CHECK(a.rfind("iteration,mean_reward,accuracy,code_ratio,kl,clip_fraction\n", 0) == 0);
  CHECK(std::count(a.begin(), a.end(), '\n') == 13);
  CHECK(fs::exists(d / "runs/train-seed7/policy.ckpt"));

  const auto m = nlohmann::json::parse(slurp(d / "runs/train-seed7/manifest.json"));
  CHECK(m["subcommand"] == "train");
  CHECK(m["seed"] == 7);
  CHECK(m["config"]["train"]["iterations"] == 12);
  REQUIRE(m["inputs"].size() == 1);
  CHECK(m["inputs"][0]["git_blob_sha1"] == figr::git_blob_sha1_hex(slurp(d / "train.json")));

  // Flags override the config file.
  REQUIRE(invoke({"train", "--config", d / "train.json", "--seed", "7", "--iters", "3", "--out", d / "runs"}) == 0);
  const auto c = slurp(d / "runs/train-seed7-2/metrics.csv");
  CHECK(std::count(c.begin(), c.end(), '\n') == 4);
  CHECK(a.rfind(c.substr(0, c.size()), 0) == 0);
}

TEST_CASE("gen, eval, rollout and replay") {
  TempDir d;
  REQUIRE(invoke({"gen", "--category", "polygon_lattice_points", "--n", "3", "--seed", "2", "-o", d / "ds.jsonl"}) == 0);
  const auto ds = slurp(d / "ds.jsonl");
  CHECK(std::count(ds.begin(), ds.end(), '\n') == 3);

  REQUIRE(invoke({"eval", "--dataset", d / "ds.jsonl", "--seed", "4", "--k", "2", "--out", d / "runs"}) == 0);
  const auto report = nlohmann::json::parse(slurp(d / "runs/eval-seed4/report.json"));
  CHECK(report["pass_at_1"] == 1.0);
  CHECK(fs::exists(d / "runs/eval-seed4/report.csv"));
  CHECK(fs::is_directory(d / "runs/eval-seed4/figures"));

  REQUIRE(invoke({"rollout", "--policy", "oracle", "--dataset", d / "ds.jsonl", "--index", "1", "--seed", "4", "--out",
                d / "runs"}) == 0);
  CHECK(fs::exists(d / "runs/rollout-seed4/trajectories.jsonl"));

  std::ofstream(d / "script.json") << R"(["```figscript\npoint((0,0))\n```", "<answer>5</answer> <End>"])";
  REQUIRE(invoke({"rollout", "--policy", "scripted", "--script", d / "script.json", "--seed", "9", "--out",
                d / "runs"}) == 0);

  CHECK(invoke({"replay", d / "runs/eval-seed4/trajectories.jsonl", "--out", d / "runs"}) == 0);
  CHECK(fs::exists(d / "runs/replay-seed0/contexts.jsonl"));

  // A tampered log no longer replays.
  auto lines = slurp(d / "runs/eval-seed4/trajectories.jsonl");
  const auto pos = lines.find("\"context_hash\":\"");
  REQUIRE(pos != std::string::npos);
  lines[pos + 16] = lines[pos + 16] == '0' ? '1' : '0';
  std::ofstream(d / "tampered.jsonl") << lines;
  CHECK(invoke({"replay", d / "tampered.jsonl", "--out", d / "runs"}) == 1);
}
