#include <cstdint>
#include <filesystem>
#include <iostream>
#include <memory>
#include <optional>
#include <string>

#include <CLI11.hpp>
#include <nlohmann/json.hpp>

#include "scenegen/asset_index.hpp"
#include "scenegen/asset_loop.hpp"
#include "scenegen/errors.hpp"
#include "scenegen/finetune.hpp"
#include "scenegen/io.hpp"
#include "scenegen/library.hpp"
#include "scenegen/remote.hpp"
#include "scenegen/render.hpp"
#include "scenegen/room_builder.hpp"
#include "scenegen/scene_json.hpp"
#include "scenegen/scene_loop.hpp"
#include "scenegen/scorer.hpp"
#include "scenegen/surfaces.hpp"

namespace fs = std::filesystem;
using nlohmann::json;
using namespace scenegen;

namespace {

enum ExitCode { kOk = 0, kUsage = 2, kValidation = 3, kBackend = 4, kInternal = 5 };

struct Common {
  std::string assets;
  std::string materials;
  double timeout_s = 30.0;
  int retries = 3;
  double backoff_s = 1.0;
};

struct Indexes {
  AssetIndex assets;
  MaterialIndex materials;
};

Indexes load_indexes(const Common& c) {
  Indexes ix;
  if (!c.assets.empty()) ix.assets = AssetIndex::load(c.assets);
  if (!c.materials.empty()) ix.materials = MaterialIndex::load(c.materials);
  return ix;
}

Scene load_scene(const std::string& path) { return deserialize_scene(read_text_file(path)); }

std::optional<std::string> selector_arg(const std::string& sel, const std::string& prefix) {
  if (sel.rfind(prefix, 0) == 0) return sel.substr(prefix.size());
  return std::nullopt;
}

RemoteOptions remote_options(const Common& c, const std::string& url) {
  RemoteOptions o;
  o.endpoint = url;
  o.timeout_s = c.timeout_s;
  o.retries = c.retries;
  o.backoff_base_s = c.backoff_s;
  return o;
}

std::unique_ptr<Scorer> make_scorer(const std::string& sel, const Common& c, const AssetIndex& assets) {
  if (sel == "lexical") return std::make_unique<LexicalScorer>(&assets, &assets.text());
  if (auto url = selector_arg(sel, "remote:")) return std::make_unique<RemoteScorer>(remote_options(c, *url), &assets);
  throw Error(ErrorKind::kInvalidInput, "unknown scorer selector " + sel);
}

[[noreturn]] void bad_selector(const std::string& what, const std::string& sel) {
  throw Error(ErrorKind::kInvalidInput, "unknown " + what + " selector " + sel);
}

int build_room_cmd(const std::string& layout, const std::string& out, const Common& c) {
  const auto spec = layout_from_json(parse_json_strict(read_text_file(layout)));
  const Indexes ix = load_indexes(c);
  const Scene scene = build_room(spec, c.materials.empty() ? nullptr : &ix.materials);
  write_file_atomic(out, serialize_scene(scene) + "\n");
  std::cout << "wrote " << out << " (" << scene.elements.size() << " elements)\n";
  return kOk;
}

struct SceneRunArgs {
  std::string scene;
  std::string prompt;
  std::string policy;
  std::string scorer = "lexical";
  int steps = 10;
  int candidates = 4;
  std::uint64_t seed = 0;
  std::string out_dir;
  std::string library;
  int view_size = 256;
  bool no_render = false;
  bool relax_collisions = false;
  bool serial = false;
};

int run_scene_cmd(const SceneRunArgs& a, const Common& c) {
  const Scene scene0 = load_scene(a.scene);
  const Indexes ix = load_indexes(c);
  const auto scorer = make_scorer(a.scorer, c, ix.assets);
  std::unique_ptr<PolicyBackend> policy;
  std::string policy_text;
  if (auto path = selector_arg(a.policy, "scripted:")) {
    policy_text = read_text_file(*path);
    policy = std::make_unique<ScriptedPolicy>(ScriptedPolicy::parse(policy_text));
  } else if (auto url = selector_arg(a.policy, "remote:")) {
    policy = std::make_unique<RemotePolicy>(remote_options(c, *url));
  } else {
    bad_selector("policy", a.policy);
  }
  std::vector<InContextEntry> library;
  if (!a.library.empty()) library = InContextLibrary::load(a.library).entries();

  ExecutionContext ctx;
  ctx.assets = &ix.assets;
  ctx.materials = &ix.materials;
  ctx.collision_gate = !a.relax_collisions;

  SceneLoopConfig cfg;
  cfg.steps = a.steps;
  cfg.candidates = a.candidates;
  cfg.seed = a.seed;
  cfg.render = !a.no_render;
  cfg.parallel = !a.serial;
  cfg.views.width = a.view_size;
  cfg.views.height = a.view_size;
  cfg.views.pano_height = a.view_size;

  const fs::path out(a.out_dir);
  fs::create_directories(out);
  const json config{{"command", "run-scene-policy"},
                    {"scene", a.scene},
                    {"prompt", a.prompt},
                    {"policy", a.policy},
                    {"scorer", a.scorer},
                    {"steps", a.steps},
                    {"candidates", a.candidates},
                    {"seed", a.seed},
                    {"assets", c.assets},
                    {"materials", c.materials},
                    {"library", a.library},
                    {"library_entries", library.size()},
                    {"view_size", a.view_size},
                    {"render", cfg.render},
                    {"collision_gate", ctx.collision_gate}};
  write_file_atomic(out / "config.json", config.dump(2) + "\n");
  write_file_atomic(out / "scene0.json", serialize_scene(scene0) + "\n");
  if (!policy_text.empty()) write_file_atomic(out / "policy.txt", policy_text);

  const Trajectory traj = run_scene_loop(scene0, a.prompt, *policy, *scorer, ctx, library, cfg, &out);
  int committed = 0;
  for (const auto& s : traj.steps) committed += s.committed ? 1 : 0;
  std::cout << "initial_score " << traj.initial_score << "\nfinal_score " << traj.final_score() << "\ncommitted_steps "
            << committed << "/" << traj.steps.size() << "\n";
  return kOk;
}

struct AssetRunArgs {
  std::string scene;
  std::string target;
  std::string prompt;
  std::string policy;
  std::uint64_t seed = 0;
  int max_placements = 10;
  int max_attempts = 30;
  std::string out_dir;
};

int run_asset_cmd(const AssetRunArgs& a, const Common& c) {
  const Scene scene = load_scene(a.scene);
  const Indexes ix = load_indexes(c);
  std::unique_ptr<PlacementPolicy> policy;
  if (auto path = selector_arg(a.policy, "scripted:")) {
    policy = std::make_unique<ScriptedPlacementPolicy>(ScriptedPlacementPolicy::load(*path));
  } else if (auto url = selector_arg(a.policy, "remote:")) {
    policy = std::make_unique<RemotePlacementPolicy>(remote_options(c, *url));
  } else {
    bad_selector("policy", a.policy);
  }
  AssetLoopConfig cfg;
  cfg.seed = a.seed;
  cfg.max_placements = a.max_placements;
  cfg.max_attempts = a.max_attempts;

  const fs::path out(a.out_dir);
  fs::create_directories(out);
  const json config{{"command", "run-asset-policy"}, {"scene", a.scene},       {"target", a.target},
                    {"prompt", a.prompt},            {"policy", a.policy},     {"seed", a.seed},
                    {"max_placements", a.max_placements}, {"max_attempts", a.max_attempts}, {"assets", c.assets}};
  write_file_atomic(out / "config.json", config.dump(2) + "\n");

  const auto result = run_asset_loop(scene, a.target, a.prompt, *policy, ix.assets, cfg);
  std::string log;
  for (const auto& r : result.rounds) log += round_to_json(r).dump() + "\n";
  write_file_atomic(out / "placements.jsonl", log);
  write_file_atomic(out / "scene.json", serialize_scene(result.scene) + "\n");
  const json summary{{"successes", result.successes}, {"rounds", result.rounds.size()}};
  write_file_atomic(out / "summary.json", summary.dump(2) + "\n");
  std::cout << "placed " << result.successes << " in " << result.rounds.size() << " rounds\n";
  return kOk;
}

int render_cmd(const std::string& scene_path, const std::string& which, const std::string& out, int size,
               const Common& c) {
  const Scene scene = load_scene(scene_path);
  const Indexes ix = load_indexes(c);
  const SceneMeshResolver meshes(&ix.assets);
  ViewOptions opt;
  opt.width = opt.height = opt.pano_height = size;
  const Aabb bounds = view_bounds(scene, meshes);
  const SceneRenderer renderer(scene, meshes);
  View view;
  if (which == "corner") {
    const Camera cam = corner_camera(bounds, false, opt);
    view = {which, cam, renderer.render(cam), make_axis_marks(scene, cam)};
  } else if (which == "pano") {
    const PanoCamera cam = center_pano_camera(bounds, opt);
    view = {which, cam, renderer.render(cam), {}};
  } else {
    const Camera cam = corner_camera(bounds, true, opt);
    view = {which, cam, renderer.render(cam), make_instance_labels(scene, meshes, cam)};
  }
  write_file_atomic(out, render_ppm(view));
  std::cout << "wrote " << out << " (" << view.maps.width << "x" << view.maps.height << ", "
            << view.maps.legend.size() << " visible elements)\n";
  return kOk;
}

int surfaces_cmd(const std::string& mesh_path, const SurfaceOptions& opt) {
  const TriangleMesh mesh = load_obj(mesh_path);
  const auto surfaces = detect_placeable_surfaces(mesh, opt);
  std::cout << surfaces.size() << " surfaces\n";
  for (std::size_t i = 0; i < surfaces.size(); ++i) {
    const json j{{"index", i},
                 {"area", round_significant(surfaces[i].area, 6)},
                 {"height", round_significant(surfaces[i].height_z, 6)},
                 {"triangles", surfaces[i].triangle_ids.size()}};
    std::cout << j.dump() << "\n";
  }
  return kOk;
}

int score_cmd(const std::string& scene_path, const std::string& prompt, const std::string& sel, const Common& c) {
  const Scene scene = load_scene(scene_path);
  const Indexes ix = load_indexes(c);
  const auto scorer = make_scorer(sel, c, ix.assets);
  std::cout << scorer->score(scene, prompt) << "\n";
  return kOk;
}

int export_cmd(const std::string& runs, std::size_t top_k, const std::string& out) {
  const auto records = collect_selfimprovement(load_runs(runs), top_k);
  std::string text;
  for (const auto& r : records) text += r.dump() + "\n";
  write_file_atomic(out, text);
  std::cout << "exported " << records.size() << " records\n";
  return kOk;
}

int library_cmd(const std::string& file, bool list, const std::string& ingest, const AdmissionRule& rule) {
  InContextLibrary lib = InContextLibrary::load(file);
  if (!ingest.empty()) {
    const auto added = update_library(lib, admissible_entries(fs::path(ingest) / "trajectory.jsonl", rule), file);
    std::cout << "added " << added << " entries (" << lib.size() << " total)\n";
  }
  if (list) {
    for (const auto& e : lib.entries()) std::cout << entry_to_json(e).dump() << "\n";
  }
  return kOk;
}

std::string_view category_name(int code) {
  switch (code) {
    case kUsage: return "usage";
    case kValidation: return "validation";
    case kBackend: return "backend";
    default: return "internal";
  }
}

int fail(int code, const std::string& message) {
  std::string one_line = message;
  for (auto& ch : one_line) {
    if (ch == '\n' || ch == '\r') ch = ' ';
  }
  std::cerr << "error: " << category_name(code) << ": " << one_line << "\n";
  return code;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Scene generation engine: room building, scene and asset policy loops"};
  app.require_subcommand(1);
  Common common;
  const auto add_common = [&](CLI::App* cmd, bool remote) {
    cmd->add_option("--assets", common.assets, "Asset manifest (JSONL)");
    cmd->add_option("--materials", common.materials, "Material manifest (JSONL)");
    if (remote) {
      cmd->add_option("--timeout", common.timeout_s, "Remote request timeout in seconds");
      cmd->add_option("--retries", common.retries, "Remote retries after the first attempt");
      cmd->add_option("--backoff", common.backoff_s, "Initial retry backoff in seconds (doubles each retry)");
    }
  };

  std::string layout, out;
  auto* build = app.add_subcommand("build-room", "Build a room scene from a layout JSON");
  build->add_option("--layout", layout, "Layout JSON")->required();
  build->add_option("--out", out, "Output scene JSON")->required();
  add_common(build, false);

  SceneRunArgs sr;
  auto* scene_run = app.add_subcommand("run-scene-policy", "Run the scene-level refinement loop");
  scene_run->add_option("--scene", sr.scene, "Input scene JSON")->required();
  scene_run->add_option("--prompt", sr.prompt, "Text prompt")->required();
  scene_run->add_option("--policy", sr.policy, "scripted:<file> | remote:<url>")->required();
  scene_run->add_option("--scorer", sr.scorer, "lexical | remote:<url>");
  scene_run->add_option("--steps", sr.steps, "Steps T")->check(CLI::PositiveNumber);
  scene_run->add_option("--candidates", sr.candidates, "Candidates N per step")->check(CLI::PositiveNumber);
  scene_run->add_option("--seed", sr.seed, "Random seed")->required();
  scene_run->add_option("--out-dir", sr.out_dir, "Run directory")->required();
  scene_run->add_option("--library", sr.library, "In-context library (JSONL) to sample examples from");
  scene_run->add_option("--view-size", sr.view_size, "Perspective view size in pixels")->check(CLI::PositiveNumber);
  scene_run->add_flag("--no-render", sr.no_render, "Skip rendering the view set");
  scene_run->add_flag("--relax-collisions", sr.relax_collisions, "Log collisions instead of rejecting edits");
  scene_run->add_flag("--serial", sr.serial, "Evaluate candidates one at a time");
  add_common(scene_run, true);

  AssetRunArgs ar;
  auto* asset_run = app.add_subcommand("run-asset-policy", "Place small objects onto a receptacle");
  asset_run->add_option("--scene", ar.scene, "Input scene JSON")->required();
  asset_run->add_option("--target", ar.target, "Receptacle element id")->required();
  asset_run->add_option("--prompt", ar.prompt, "Text prompt")->required();
  asset_run->add_option("--policy", ar.policy, "scripted:<jsonl> | remote:<url>")->required();
  asset_run->add_option("--seed", ar.seed, "Random seed")->required();
  asset_run->add_option("--max-placements", ar.max_placements, "Successful placements cap");
  asset_run->add_option("--max-attempts", ar.max_attempts, "Rounds cap");
  asset_run->add_option("--out-dir", ar.out_dir, "Run directory")->required();
  add_common(asset_run, true);

  std::string scene_path, view_kind = "corner";
  int view_size = 256;
  auto* render = app.add_subcommand("render", "Render one standard view to a PPM image");
  render->add_option("--scene", scene_path, "Scene JSON")->required();
  render->add_option("--view", view_kind, "corner | pano | labels")
      ->check(CLI::IsMember({"corner", "pano", "labels"}));
  render->add_option("--out", out, "Output PPM")->required();
  render->add_option("--size", view_size, "Image height in pixels")->check(CLI::PositiveNumber);
  add_common(render, false);

  std::string mesh_path;
  SurfaceOptions surf;
  auto* surfaces = app.add_subcommand("surfaces", "Detect placeable surfaces on an OBJ mesh");
  surfaces->add_option("--mesh", mesh_path, "OBJ mesh")->required();
  surfaces->add_option("--min-area", surf.min_area, "Minimum surface area (m^2)");
  surfaces->add_option("--height-tol", surf.height_tol, "Height tolerance within a surface (m)");

  std::string prompt, scorer_sel = "lexical";
  auto* score = app.add_subcommand("score", "Score a scene against a prompt");
  score->add_option("--scene", scene_path, "Scene JSON")->required();
  score->add_option("--prompt", prompt, "Text prompt")->required();
  score->add_option("--scorer", scorer_sel, "lexical | remote:<url>");
  add_common(score, true);

  std::string runs;
  std::size_t top_k = 1;
  auto* exp = app.add_subcommand("export-finetune", "Export top trajectories as fine-tuning records");
  exp->add_option("--runs", runs, "Directory of run directories")->required();
  exp->add_option("--top-k", top_k, "Runs kept per prompt")->required();
  exp->add_option("--out", out, "Output JSONL")->required();

  std::string lib_file, ingest;
  bool list = false;
  AdmissionRule rule;
  bool absolute = false;
  auto* lib = app.add_subcommand("library", "List or grow the in-context library");
  lib->add_option("--file", lib_file, "Library JSONL")->required();
  auto* list_flag = lib->add_flag("--list", list, "Print every entry");
  auto* ingest_opt = lib->add_option("--ingest", ingest, "Run directory whose improving steps are added");
  lib->add_option("--threshold", rule.threshold, "Minimum improvement");
  lib->add_flag("--absolute", absolute, "Threshold is an absolute score difference");
  lib->callback([&] {
    if (list_flag->count() == 0 && ingest_opt->count() == 0) throw CLI::RequiredError("--list or --ingest");
  });

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    return app.exit(e);
  } catch (const CLI::CallForAllHelp& e) {
    return app.exit(e);
  } catch (const CLI::ParseError& e) {
    return fail(kUsage, e.what());
  }

  try {
    if (*build) return build_room_cmd(layout, out, common);
    if (*scene_run) return run_scene_cmd(sr, common);
    if (*asset_run) return run_asset_cmd(ar, common);
    if (*render) return render_cmd(scene_path, view_kind, out, view_size, common);
    if (*surfaces) return surfaces_cmd(mesh_path, surf);
    if (*score) return score_cmd(scene_path, prompt, scorer_sel, common);
    if (*exp) return export_cmd(runs, top_k, out);
    if (*lib) {
      rule.relative = !absolute;
      return library_cmd(lib_file, list, ingest, rule);
    }
  } catch (const BackendError& e) {
    return fail(kBackend, e.what());
  } catch (const Error& e) {
    switch (e.kind()) {
      case ErrorKind::kInvalidInput: return fail(kValidation, e.what());
      case ErrorKind::kBackendUnavailable: return fail(kBackend, e.what());
      case ErrorKind::kInternal: return fail(kInternal, e.what());
    }
  } catch (const fs::filesystem_error& e) {
    return fail(kValidation, e.what());
  } catch (const std::exception& e) {
    return fail(kInternal, e.what());
  }
  return fail(kUsage, "no command");
}
