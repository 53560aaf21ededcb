// SPDX-License-Identifier: Apache-2.0
#include "cli.hpp"

#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <sstream>

#include <CLI11.hpp>
#include <fmt/format.h>
#include <json.hpp>
#include <spdlog/spdlog.h>

#include "figr/bridge/server.hpp"
#include "figr/evalbench/dataset.hpp"
#include "figr/evalbench/evaluate.hpp"
#include "figr/evalbench/strategies.hpp"
#include "figr/evalbench/synthetic.hpp"
#include "figr/figscript/raster.hpp"
#include "figr/grpo/experiment.hpp"
#include "figr/grpo/grpo.hpp"
#include "figr/rollout/scripted.hpp"
#include "figr/rollout/trajectory_io.hpp"
#include "figr/util/error.hpp"
#include "figr/util/hash.hpp"
#include "figr/util/parallel.hpp"
#include "figr/util/rng.hpp"

namespace figr::cli {

namespace fs = std::filesystem;
using nlohmann::json;

namespace {

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

struct Flags {
  std::string config, out, dataset, checkpoint, script;
  std::optional<std::string> policy;
  std::optional<std::uint64_t> seed;
  std::optional<unsigned> workers;
  std::optional<std::size_t> k, max_rounds, group_size, iters;
  std::optional<double> clip, kl_coef, lr;
};

std::string read_file(const fs::path& p) {
  std::ifstream in(p, std::ios::binary);
  if (!in) throw Error(Errc::Io, "cannot read " + p.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

void write_file(const fs::path& p, std::string_view content) {
  std::ofstream out(p, std::ios::binary);
  if (!out || !out.write(content.data(), static_cast<std::streamsize>(content.size())))
    throw Error(Errc::Io, "cannot write " + p.string());
}

void check_keys(const json& j, std::initializer_list<std::string_view> allowed, std::string_view where) {
  if (!j.is_object()) throw Error(Errc::InvalidArgument, fmt::format("config: {} must be an object", where));
  for (const auto& [key, _] : j.items())
    if (std::find(allowed.begin(), allowed.end(), key) == allowed.end())
      throw Error(Errc::InvalidArgument, fmt::format("config: unknown key \"{}\" in {}", key, where));
}

template <class T>
void get_if(const json& j, const char* key, T& dst) {
  if (j.contains(key)) dst = j.at(key).get<T>();
}

// Config file merged with flag overrides; flags win.
struct Settings {
  json config = json::object();
  std::optional<std::uint64_t> seed;
  unsigned workers = default_workers();
  std::size_t k = 1;
  rollout::EpisodeConfig episode;
  reward::AnswerMatchRule rule;
  grpo::TrainConfig train;

  std::uint64_t require_seed(std::string_view sub) const {
    if (!seed) throw UsageError(fmt::format("{} requires --seed (or \"seed\" in the config file)", sub));
    return *seed;
  }
  std::optional<std::string> str(const char* key) const {
    if (!config.contains(key)) return std::nullopt;
    return config.at(key).get<std::string>();
  }
};

Settings load_settings(const Flags& f) {
  Settings s;
  if (!f.config.empty()) {
    s.config = json::parse(read_file(f.config), nullptr, false);
    if (s.config.is_discarded()) throw Error(Errc::InvalidArgument, "config: " + f.config + " is not valid JSON");
  }
  json& c = s.config;
  check_keys(c, {"seed", "workers", "k", "dataset", "episode", "train", "match", "policy", "checkpoint", "script"},
             "the top level");
  if (f.policy) c["policy"] = *f.policy;
  if (!f.dataset.empty()) c["dataset"] = f.dataset;
  if (!f.checkpoint.empty()) c["checkpoint"] = f.checkpoint;
  if (!f.script.empty()) c["script"] = f.script;
  if (f.seed) c["seed"] = *f.seed;
  if (f.workers) c["workers"] = *f.workers;
  if (f.k) c["k"] = *f.k;
  if (f.max_rounds) c["episode"]["max_rounds"] = *f.max_rounds;
  if (f.group_size) c["train"]["group_size"] = *f.group_size;
  if (f.clip) c["train"]["clip"] = *f.clip;
  if (f.kl_coef) c["train"]["kl_coef"] = *f.kl_coef;
  if (f.lr) c["train"]["learning_rate"] = *f.lr;
  if (f.iters) c["train"]["iterations"] = *f.iters;

  try {
    if (c.contains("seed")) s.seed = c["seed"].get<std::uint64_t>();
    get_if(c, "workers", s.workers);
    get_if(c, "k", s.k);
    if (c.contains("episode")) {
      const auto& e = c["episode"];
      check_keys(e, {"max_rounds", "token_budget", "end_sentinel", "max_turns", "exec"}, "episode");
      get_if(e, "max_rounds", s.episode.max_rounds);
      get_if(e, "token_budget", s.episode.token_budget);
      get_if(e, "end_sentinel", s.episode.end_sentinel);
      get_if(e, "max_turns", s.episode.max_turns);
      if (e.contains("exec")) {
        const auto& x = e["exec"];
        check_keys(x, {"instruction_cap", "width", "height", "plot_samples", "max_statements"}, "episode.exec");
        auto& l = s.episode.exec_limits;
        get_if(x, "instruction_cap", l.instruction_cap);
        get_if(x, "width", l.width);
        get_if(x, "height", l.height);
        get_if(x, "plot_samples", l.plot_samples);
        get_if(x, "max_statements", l.max_statements);
      }
    }
    if (c.contains("match")) {
      const auto& m = c["match"];
      check_keys(m, {"mode", "abs_tol"}, "match");
      const auto mode = m.value("mode", std::string("normalized_numeric"));
      if (mode == "exact")
        s.rule.mode = reward::MatchMode::Exact;
      else if (mode == "normalized_numeric")
        s.rule.mode = reward::MatchMode::NormalizedNumeric;
      else
        throw Error(Errc::InvalidArgument, "config: match.mode must be exact or normalized_numeric");
      get_if(m, "abs_tol", s.rule.abs_tol);
    }
    auto& t = s.train;
    if (c.contains("train")) {
      const auto& j = c["train"];
      check_keys(j,
                 {"group_size", "clip", "kl_coef", "learning_rate", "iterations", "ppo_epochs", "bucket_count",
                  "temperature", "weights"},
                 "train");
      get_if(j, "group_size", t.group_size);
      get_if(j, "clip", t.clip);
      get_if(j, "kl_coef", t.kl_coef);
      get_if(j, "learning_rate", t.learning_rate);
      get_if(j, "iterations", t.iterations);
      get_if(j, "ppo_epochs", t.ppo_epochs);
      get_if(j, "bucket_count", t.bucket_count);
      get_if(j, "temperature", t.temperature);
      if (j.contains("weights")) {
        const auto& w = j["weights"];
        check_keys(w, {"acc", "fmt", "vis"}, "train.weights");
        get_if(w, "acc", t.weights.acc);
        get_if(w, "fmt", t.weights.fmt);
        get_if(w, "vis", t.weights.vis);
      }
    }
    for (const char* key : {"dataset", "policy", "checkpoint", "script"})
      if (c.contains(key) && !c[key].is_string())
        throw Error(Errc::InvalidArgument, fmt::format("config: \"{}\" must be a string", key));
  } catch (const json::exception& e) {
    throw Error(Errc::InvalidArgument, std::string("config: ") + e.what());
  }
  if (s.workers == 0) s.workers = default_workers();
  s.episode.validate();
  s.train.episode = s.episode;
  s.train.rule = s.rule;
  s.train.workers = s.workers;
  if (s.seed) s.train.seed = *s.seed;
  s.train.validate();
  return s;
}

fs::path make_run_dir(const Flags& f, std::string_view sub, std::uint64_t seed) {
  const fs::path base = f.out.empty() ? fs::path("runs") : fs::path(f.out);
  fs::create_directories(base);
  for (std::size_t n = 0;; ++n) {
    const auto name = n == 0 ? fmt::format("{}-seed{}", sub, seed) : fmt::format("{}-seed{}-{}", sub, seed, n);
    if (fs::create_directory(base / name)) return base / name;
  }
}

void write_manifest(const fs::path& dir, std::string_view sub, const std::vector<std::string>& args, const Flags& f,
                    const Settings& s, std::uint64_t seed, const std::vector<fs::path>& inputs) {
  json in = json::array();
  for (const auto& p : inputs)
    if (!p.empty()) in.push_back({{"path", p.string()}, {"git_blob_sha1", git_blob_sha1_hex(read_file(p))}});
  json m = {{"subcommand", sub},
            {"argv", args},
            {"config_path", f.config.empty() ? json(nullptr) : json(f.config)},
            {"config", s.config},
            {"seed", seed},
            {"output_dir", dir.string()},
            {"inputs", in}};
  write_file(dir / "manifest.json", m.dump(2) + "\n");
}

std::vector<evalbench::ProblemRecord> load_dataset(const std::optional<std::string>& path, std::uint64_t seed) {
  if (!path) return grpo::arm_dataset(seed);
  std::ifstream in(*path);
  if (!in) throw Error(Errc::Io, "cannot read " + *path);
  return evalbench::read_dataset_jsonl(in);
}

struct PolicyChoice {
  std::unique_ptr<grpo::ToyPolicy> toy;
  std::unique_ptr<rollout::PolicyHandle> handle;
};

PolicyChoice make_policy(const std::string& name, const Settings& s) {
  PolicyChoice pc;
  if (name == "oracle") {
    pc.handle = std::make_unique<rollout::OraclePolicy>();
  } else if (name == "silent") {
    pc.handle = std::make_unique<rollout::SilentPolicy>();
  } else if (name == "construct") {
    pc.handle = std::make_unique<evalbench::ConstructThenAnswerPolicy>();
  } else if (name == "scripted") {
    const auto path = s.str("script");
    if (!path) throw UsageError("--policy scripted needs --script");
    const auto j = json::parse(read_file(*path), nullptr, false);
    if (j.is_discarded() || !j.is_array()) throw Error(Errc::InvalidArgument, *path + ": expected a JSON array");
    pc.handle = std::make_unique<rollout::ScriptedPolicy>(j.get<std::vector<std::string>>());
  } else if (name == "toy") {
    const auto ckpt = s.str("checkpoint");
    pc.toy = std::make_unique<grpo::ToyPolicy>(
        ckpt ? grpo::load_checkpoint(*ckpt, s.train.temperature)
             : grpo::ToyPolicy(s.train.bucket_count, grpo::kTemplateCount, s.train.temperature));
    pc.handle = std::make_unique<grpo::ToyPolicyHandle>(*pc.toy);
  } else {
    throw UsageError("--policy must be one of oracle, silent, construct, scripted, toy; got " + name);
  }
  return pc;
}

std::vector<fs::path> input_paths(const Flags& f, const Settings& s, std::initializer_list<const char*> keys) {
  std::vector<fs::path> out;
  if (!f.config.empty()) out.emplace_back(f.config);
  for (const char* k : keys)
    if (const auto v = s.str(k)) out.emplace_back(*v);
  return out;
}

void write_trajectories(const fs::path& dir, std::vector<rollout::Trajectory>& ts) {
  for (auto& t : ts) rollout::write_figures(t, dir);
  std::ofstream out(dir / "trajectories.jsonl");
  rollout::write_jsonl(out, ts);
  if (!out) throw Error(Errc::Io, "cannot write " + (dir / "trajectories.jsonl").string());
}

// Subcommands.

int cmd_render(const Flags& f, const std::string& file) {
  const auto s = load_settings(f);
  const auto out = figscript::run_source(read_file(file), s.episode.exec_limits);
  const fs::path dir = f.out.empty() ? fs::path(".") : fs::path(f.out);
  fs::create_directories(dir);
  const auto stem = fs::path(file).stem().string();
  const auto text = out.feedback_for_context();
  write_file(dir / (stem + ".txt"), text.ends_with('\n') ? text : text + "\n");
  if (out.raster) {
    const auto pgm = figscript::to_pgm(*out.raster);
    write_file(dir / (stem + ".pgm"), std::string_view(reinterpret_cast<const char*>(pgm.data()), pgm.size()));
  }
  std::cout << text << (text.ends_with('\n') ? "" : "\n");
  if (!out.exec_ok) {
    std::cerr << json{{"error", "ExecError"}, {"message", out.error ? out.error->describe() : "failed"}}.dump()
              << "\n";
    return kExitDomain;
  }
  return kExitOk;
}

int cmd_gen(const Flags& f, const std::vector<std::string>& categories, std::size_t n) {
  const auto s = load_settings(f);
  const auto seed = s.seed.value_or(0);
  std::vector<evalbench::ProblemRecord> all;
  std::vector<std::string> names = categories;
  if (names.empty() || (names.size() == 1 && names[0] == "all"))
    names = {"segment_crossings", "circle_line_hits", "polygon_lattice_points", "arithmetic_no_figure"};
  for (const auto& name : names) {
    const auto cat = evalbench::category_from_string(name);
    if (!cat) throw UsageError("--category: unknown category " + name);
    const auto part = evalbench::generate_synthetic(*cat, n, seed);
    all.insert(all.end(), part.begin(), part.end());
  }
  if (f.out.empty() || f.out == "-") {
    evalbench::write_dataset_jsonl(std::cout, all);
  } else {
    if (const auto parent = fs::path(f.out).parent_path(); !parent.empty()) fs::create_directories(parent);
    std::ofstream out(f.out);
    evalbench::write_dataset_jsonl(out, all);
    if (!out) throw Error(Errc::Io, "cannot write " + f.out);
  }
  return kExitOk;
}

int cmd_rollout(const Flags& f, const std::vector<std::string>& args, const std::string& category, std::size_t index) {
  const auto s = load_settings(f);
  const auto seed = s.seed.value_or(0);
  std::vector<evalbench::ProblemRecord> ds;
  if (const auto path = s.str("dataset")) {
    ds = load_dataset(path, seed);
  } else {
    const auto cat = evalbench::category_from_string(category);
    if (!cat) throw UsageError("--category: unknown category " + category);
    ds = evalbench::generate_synthetic(*cat, index + 1, seed);
  }
  if (index >= ds.size()) throw UsageError(fmt::format("--index {} is past the {} problems", index, ds.size()));
  const auto policy = make_policy(s.str("policy").value_or("construct"), s);
  const auto dir = make_run_dir(f, "rollout", seed);
  write_manifest(dir, "rollout", args, f, s, seed, input_paths(f, s, {"dataset", "checkpoint", "script"}));

  const auto& problem = ds[index];
  std::vector<rollout::Trajectory> ts{rollout::run_episode(problem, *policy.handle, s.episode, seed)};
  auto& t = ts[0];
  if (problem.suitability) t.reward = reward::total_reward(t, problem, s.rule, s.train.weights);
  write_trajectories(dir, ts);
  std::cout << json{{"problem", problem.id},
                    {"final_answer", t.final_answer ? json(*t.final_answer) : json(nullptr)},
                    {"gold", problem.gold_answer},
                    {"reward", t.reward ? json(t.reward->total) : json(nullptr)},
                    {"turns", t.turns.size()},
                    {"context_hash", t.context_hash},
                    {"run_dir", dir.string()}}
                   .dump()
            << "\n";
  return kExitOk;
}

int cmd_train(const Flags& f, const std::vector<std::string>& args, bool ablate_visual) {
  auto s = load_settings(f);
  const auto seed = s.require_seed("train");
  if (ablate_visual) {
    s.train.weights.vis = 0.0;
    s.config["train"]["weights"]["vis"] = 0.0;
  }
  const auto ds = load_dataset(s.str("dataset"), seed);
  const auto dir = make_run_dir(f, "train", seed);
  write_manifest(dir, "train", args, f, s, seed, input_paths(f, s, {"dataset"}));
  const auto res = grpo::train(ds, s.train, [&](const grpo::IterationMetrics& m) {
    if (m.iteration % 50 == 0 || m.iteration + 1 == s.train.iterations)
      spdlog::info("iter {:4} reward {:.3f} acc {:.3f} code {:.3f} kl {:.4f}", m.iteration, m.mean_reward,
                   m.accuracy, m.code_ratio, m.kl);
  });
  {
    std::ofstream out(dir / "metrics.csv");
    grpo::write_metrics_csv(out, res.metrics);
    if (!out) throw Error(Errc::Io, "cannot write metrics.csv");
  }
  grpo::save_checkpoint(dir / "policy.ckpt", res.policy);
  const auto& last = res.metrics.back();
  const json summary = {{"iterations", res.metrics.size()}, {"mean_reward", last.mean_reward},
                        {"accuracy", last.accuracy},         {"code_ratio", last.code_ratio},
                        {"kl", last.kl},                     {"run_dir", dir.string()}};
  write_file(dir / "summary.json", summary.dump(2) + "\n");
  std::cout << summary.dump() << "\n";
  return kExitOk;
}

int cmd_eval(const Flags& f, const std::vector<std::string>& args) {
  const auto s = load_settings(f);
  const auto seed = s.require_seed("eval");
  const auto ds = load_dataset(s.str("dataset"), seed);
  const auto policy = make_policy(s.str("policy").value_or("construct"), s);
  const auto dir = make_run_dir(f, "eval", seed);
  write_manifest(dir, "eval", args, f, s, seed, input_paths(f, s, {"dataset", "checkpoint", "script"}));
  evalbench::EvalConfig ec{s.k, s.episode, s.rule, seed, s.workers};
  std::vector<rollout::Trajectory> ts;
  const auto report = evalbench::evaluate(ds, *policy.handle, ec, &ts);
  write_file(dir / "report.json", evalbench::report_to_json(report).dump(2) + "\n");
  write_file(dir / "report.csv", evalbench::report_to_csv(report));
  write_trajectories(dir, ts);
  json summary = {{"pass_at_1", report.pass_at_1},
                  {"code_ratio", report.behavior.code_ratio},
                  {"by_category", report.pass_at_1_by_category},
                  {"run_dir", dir.string()}};
  std::cout << summary.dump() << "\n";
  return kExitOk;
}

bool looks_like_transcript(const std::string& path) {
  std::ifstream in(path);
  std::string line;
  while (std::getline(in, line))
    if (line.find_first_not_of(" \t\r") != std::string::npos) {
      const auto j = json::parse(line, nullptr, false);
      return j.is_object() && j.contains("dir") && j.contains("frame");
    }
  return false;
}

int cmd_replay(const Flags& f, const std::vector<std::string>& args, const std::string& file) {
  const auto s = load_settings(f);
  const auto seed = s.seed.value_or(0);
  const auto dir = make_run_dir(f, "replay", seed);
  write_manifest(dir, "replay", args, f, s, seed, {fs::path(file)});
  std::size_t total = 0, matched = 0;
  std::vector<rollout::Trajectory> rebuilt;
  if (looks_like_transcript(file)) {
    std::ifstream in(file);
    for (auto& r : bridge::replay_transcript(bridge::read_transcript(in), s.episode)) {
      ++total;
      matched += r.matches();
      if (!r.matches()) spdlog::error("episode {} replays to {}, logged {}", r.episode_id, r.trajectory.context_hash,
                                      r.logged_hash);
      rebuilt.push_back(std::move(r.trajectory));
    }
  } else {
    std::ifstream in(file);
    if (!in) throw Error(Errc::Io, "cannot read " + file);
    for (const auto& t : rollout::read_jsonl(in)) {
      ++total;
      std::vector<std::string> payloads;
      for (const auto& turn : t.turns) payloads.push_back(turn.action.payload);
      auto again = rollout::run_episode(t.problem, rollout::ScriptedPolicy(payloads), t.config, t.seed);
      const bool ok = again.context_hash == t.context_hash && rollout::replay_context_hash(t) == t.context_hash;
      matched += ok;
      if (!ok) spdlog::error("trajectory {} replays to {}, logged {}", t.problem.id, again.context_hash, t.context_hash);
      rebuilt.push_back(std::move(again));
    }
  }
  for (auto& t : rebuilt) rollout::write_figures(t, dir);
  {
    std::ofstream out(dir / "contexts.jsonl");
    rollout::write_jsonl(out, rebuilt);
  }
  std::cout << json{{"replayed", total}, {"identical", matched}, {"run_dir", dir.string()}}.dump() << "\n";
  return matched == total ? kExitOk : kExitDomain;
}

int cmd_serve(const Flags& f, const std::vector<std::string>& args, const std::string& listen) {
  const auto s = load_settings(f);
  const auto seed = s.seed.value_or(0);
  const auto ds = load_dataset(s.str("dataset"), seed);
  std::vector<bridge::EpisodeJob> jobs;
  for (std::size_t pi = 0; pi < ds.size(); ++pi)
    for (std::size_t si = 0; si < s.k; ++si) jobs.push_back({ds[pi], derive_seed(seed, pi, si)});
  const auto dir = make_run_dir(f, "serve", seed);
  write_manifest(dir, "serve", args, f, s, seed, input_paths(f, s, {"dataset"}));
  bridge::WorkQueue queue(std::move(jobs));
  bridge::ServeConfig cfg;
  cfg.episode = s.episode;
  cfg.rule = s.rule;
  cfg.weights = s.train.weights;

  std::vector<bridge::SessionResult> sessions;
  if (listen.empty() || listen == "stdio") {
    bridge::FdChannel ch(0, 1, false);
    sessions.push_back(bridge::serve_session(ch, queue, cfg, "s0"));
  } else {
    const auto [host, port] = bridge::parse_endpoint(listen);
    bridge::TcpListener listener(host, port);
    spdlog::info("listening on {}:{}", host, listener.port());
    sessions = bridge::serve_tcp(listener, queue, cfg);
  }
  fs::create_directories(dir / "transcripts");
  std::vector<std::pair<std::size_t, rollout::Trajectory>> served;
  std::size_t errors = 0;
  for (auto& sr : sessions) {
    std::ofstream out(dir / "transcripts" / (sr.transcript.session_id + ".jsonl"));
    bridge::write_transcript(out, sr.transcript);
    errors += sr.error.has_value();
    for (auto& e : sr.episodes) served.emplace_back(e.job_index, std::move(e.trajectory));
  }
  std::sort(served.begin(), served.end(), [](const auto& a, const auto& b) { return a.first < b.first; });
  std::vector<rollout::Trajectory> ts;
  for (auto& [i, t] : served) ts.push_back(std::move(t));
  write_trajectories(dir, ts);
  spdlog::info("served {} of {} episodes over {} session(s), {} ended with an error", ts.size(), queue.size(),
               sessions.size(), errors);
  return errors == 0 ? kExitOk : kExitDomain;
}

}  // namespace

int run(const std::vector<std::string>& args) {
  CLI::App app{"figure-steered reasoning toolkit"};
  app.name(args.empty() ? "figr" : fs::path(args[0]).filename().string());
  app.require_subcommand(1);
  app.fallthrough();
  Flags f;
  app.add_option("--config", f.config, "JSON config file; flags override it");
  app.add_option("--seed", f.seed, "master seed");
  app.add_option("--workers", f.workers, "worker threads (default: all cores)");
  app.add_option("-o,--out", f.out, "output directory (render, runs) or file (gen)");
  app.add_option("--k", f.k, "samples per problem (eval, serve)");
  app.add_option("--max-rounds", f.max_rounds, "code rounds per episode");
  app.add_option("--group-size", f.group_size, "GRPO group size");
  app.add_option("--clip", f.clip, "ratio clip epsilon");
  app.add_option("--kl-coef", f.kl_coef, "KL coefficient");
  app.add_option("--lr", f.lr, "learning rate");
  app.add_option("--iters", f.iters, "training iterations");

  std::string file, category = "segment_crossings", listen;
  std::vector<std::string> categories;
  std::size_t index = 0, n = 10;
  bool ablate = false;

  auto* render = app.add_subcommand("render", "run a FigScript file and write <name>.pgm and <name>.txt");
  render->add_option("file", file, "FigScript source")->required()->check(CLI::ExistingFile);

  auto* rollout_cmd = app.add_subcommand("rollout", "run one episode with a named policy");
  auto* train = app.add_subcommand("train", "train the toy policy with GRPO");
  auto* eval = app.add_subcommand("eval", "evaluate a policy with pass@1 and behaviour metrics");
  auto* serve = app.add_subcommand("serve", "serve episodes to an external policy over NDJSON");
  auto* replay = app.add_subcommand("replay", "replay trajectory JSONL or a session transcript");
  replay->add_option("file", file, "trajectories.jsonl or transcript")->required()->check(CLI::ExistingFile);
  auto* gen = app.add_subcommand("gen", "write a synthetic dataset as JSONL");
  gen->add_option("--category", categories, "category name or all (repeatable)");
  gen->add_option("--n", n, "problems per category");

  for (auto* sub : {rollout_cmd, eval}) {
    sub->add_option("--policy", f.policy, "oracle, silent, construct, scripted or toy");
    sub->add_option("--checkpoint", f.checkpoint, "toy policy checkpoint");
    sub->add_option("--script", f.script, "JSON array of payloads for the scripted policy");
  }
  for (auto* sub : {rollout_cmd, train, eval, serve})
    sub->add_option("--dataset", f.dataset, "dataset JSONL (default: the built-in 40-problem set)");
  rollout_cmd->add_option("--category", category, "category when no dataset is given");
  rollout_cmd->add_option("--index", index, "problem index");
  train->add_flag("--ablate-visual", ablate, "zero the visual reward weight");
  serve->add_option("--listen", listen, "host:port, or stdio (default)");

  if (args.size() > 1 && !args[1].starts_with('-')) {
    bool known = false;
    for (const auto* sub : app.get_subcommands({})) known |= sub->get_name() == args[1];
    if (!known) {
      std::cerr << "usage error: unknown subcommand \"" << args[1] << "\"\n" << app.help();
      return kExitUsage;
    }
  }
  std::vector<std::string> rev(args.rbegin(), args.rend());
  if (!rev.empty()) rev.pop_back();
  try {
    app.parse(rev);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e) == 0 ? kExitOk : kExitUsage;
  } catch (const CLI::ParseError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  }

  try {
    if (render->parsed()) return cmd_render(f, file);
    if (gen->parsed()) return cmd_gen(f, categories, n);
    if (rollout_cmd->parsed()) return cmd_rollout(f, args, category, index);
    if (train->parsed()) return cmd_train(f, args, ablate);
    if (eval->parsed()) return cmd_eval(f, args);
    if (replay->parsed()) return cmd_replay(f, args, file);
    if (serve->parsed()) return cmd_serve(f, args, listen);
  } catch (const UsageError& e) {
    std::cerr << "usage error: " << e.what() << "\n";
    return kExitUsage;
  } catch (const Error& e) {
    std::cerr << json{{"error", to_string(e.code())}, {"message", e.what()}}.dump() << "\n";
    return kExitDomain;
  } catch (const std::exception& e) {
    std::cerr << json{{"error", "Io"}, {"message", e.what()}}.dump() << "\n";
    return kExitDomain;
  }
  return kExitUsage;
}

}  // namespace figr::cli
