#include "scenegen/scene_loop.hpp"

#include <cstdio>
#include <future>

#include "scenegen/errors.hpp"
#include "scenegen/io.hpp"
#include "scenegen/rng.hpp"
#include "scenegen/scene_json.hpp"
#include "scenegen/summary.hpp"

namespace scenegen {

using nlohmann::json;

std::size_t argmax_lowest(const std::vector<double>& scores) {
  std::size_t best = 0;
  for (std::size_t i = 1; i < scores.size(); ++i) {
    if (scores[i] > scores[best]) best = i;
  }
  return best;
}

json step_to_json(const std::string& prompt, const StepRecord& s) {
  json candidates = json::array();
  for (std::size_t i = 0; i < s.candidates.size(); ++i) {
    const auto& c = s.candidates[i];
    json outcomes = json::array();
    for (const auto& o : c.outcomes) outcomes.push_back(json{{"ok", o.ok}, {"reason", o.reason}});
    candidates.push_back(json{{"index", i},
                              {"action_text", c.action_text},
                              {"score", c.score},
                              {"failed", c.failed},
                              {"error", c.error},
                              {"outcomes", std::move(outcomes)},
                              {"in_context", c.in_context}});
  }
  return json{{"prompt", prompt},
              {"step", s.step},
              {"score_before", s.score_before},
              {"candidates", std::move(candidates)},
              {"chosen_index", s.chosen_index},
              {"committed", s.committed},
              {"committed_score", s.committed_score},
              {"scene_summary", s.scene_summary},
              {"views", s.views_path},
              {"scene", s.scene_path}};
}

namespace {

struct CandidateResult {
  CandidateRecord record;
  Scene scene;
};

std::string step_name(int step) {
  char buf[16];
  std::snprintf(buf, sizeof buf, "step_%03d", step);
  return buf;
}

}  // namespace

Trajectory run_scene_loop(const Scene& scene0, const std::string& prompt, PolicyBackend& policy, const Scorer& scorer,
                          const ExecutionContext& ctx, const std::vector<InContextEntry>& library,
                          const SceneLoopConfig& config, const std::filesystem::path* out_dir) {
  if (config.steps < 1 || config.candidates < 1) throw Error(ErrorKind::kInvalidInput, "steps and candidates must be >= 1");
  SceneMeshResolver resolver(ctx.assets);
  const MeshSource& meshes = ctx.meshes ? *ctx.meshes : static_cast<const MeshSource&>(resolver);

  Trajectory traj;
  traj.prompt = prompt;
  Scene current = scene0;
  double current_score = scorer.score(current, prompt);
  traj.initial_score = current_score;

  std::string log;
  for (int t = 0; t < config.steps; ++t) {
    StepRecord step;
    step.step = t;
    step.score_before = current_score;
    step.scene_summary = scene_summary(current, ctx.assets);

    ViewSet views;
    if (config.render) views = standard_viewset(current, meshes, config.views);
    if (out_dir && config.render) {
      step.views_path = "views/" + write_viewset(views, *out_dir / "views", step_name(t));
    }

    const auto run_candidate = [&](int i) {
      CandidateResult r;
      Rng rng(derive_seed({config.seed, static_cast<std::uint64_t>(t), static_cast<std::uint64_t>(i)}));
      ActRequest req;
      req.prompt = prompt;
      req.step = t;
      req.sample_index = i;
      req.candidates = config.candidates;
      req.views = config.render ? &views : nullptr;
      req.scene_summary = step.scene_summary;
      r.record.in_context = rng.sample(library.size(), config.in_context_k);
      for (auto k : r.record.in_context) req.in_context.push_back({library[k].prompt, library[k].action_text});
      try {
        r.record.action_text = policy.act(req);
        const auto program = parse_program(r.record.action_text);
        auto result = execute(program, current, ctx);
        r.record.outcomes = std::move(result.outcomes);
        r.record.score = scorer.score(result.scene, prompt);
        r.scene = std::move(result.scene);
      } catch (const std::exception& e) {
        r.record.failed = true;
        r.record.error = e.what();
        r.record.score = current_score;
      }
      return r;
    };

    std::vector<CandidateResult> results;
    if (config.parallel && config.candidates > 1) {
      std::vector<std::future<CandidateResult>> futures;
      for (int i = 0; i < config.candidates; ++i) futures.push_back(std::async(std::launch::async, run_candidate, i));
      for (auto& f : futures) results.push_back(f.get());
    } else {
      for (int i = 0; i < config.candidates; ++i) results.push_back(run_candidate(i));
    }

    std::vector<double> scores;
    for (const auto& r : results) scores.push_back(r.record.score);
    const std::size_t best = argmax_lowest(scores);
    step.chosen_index = static_cast<int>(best);
    step.committed = !results[best].record.failed && scores[best] >= current_score;
    if (step.committed) {
      current = std::move(results[best].scene);
      current_score = scores[best];
    }
    step.committed_score = current_score;
    for (auto& r : results) step.candidates.push_back(std::move(r.record));

    if (out_dir) {
      step.scene_path = "scenes/" + step_name(t) + ".json";
      write_file_atomic(*out_dir / step.scene_path, serialize_scene(current) + "\n");
      log += step_to_json(prompt, step).dump() + "\n";
    }
    traj.steps.push_back(std::move(step));
  }
  traj.final_scene = current;

  if (out_dir) {
    write_file_atomic(*out_dir / "trajectory.jsonl", log);
    write_file_atomic(*out_dir / "final_scene.json", serialize_scene(current) + "\n");
    const json summary{{"prompt", prompt},
                       {"initial_score", traj.initial_score},
                       {"final_score", traj.final_score()},
                       {"steps", config.steps},
                       {"candidates", config.candidates},
                       {"seed", config.seed}};
    write_file_atomic(*out_dir / "summary.json", summary.dump(2) + "\n");
  }
  return traj;
}

}  // namespace scenegen
