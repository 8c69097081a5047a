#include <gtest/gtest.h>

#include <cmath>

#include "fixtures.hpp"
#include "scenegen/errors.hpp"
#include "scenegen/interpreter.hpp"
#include "scenegen/io.hpp"
#include "scenegen/room_builder.hpp"
#include "scenegen/scene_json.hpp"
#include "scenegen/verify.hpp"

using namespace scenegen;

namespace {

ExecutionContext demo_ctx() {
  ExecutionContext ctx;
  ctx.assets = &fixtures::demo_assets();
  ctx.materials = &fixtures::demo_materials();
  return ctx;
}

ExecutionResult run(const std::string& text, const Scene& scene, const ExecutionContext& ctx = demo_ctx()) {
  return execute(parse_program(text), scene, ctx);
}

}  // namespace

TEST(Interpreter, AddObjectRestsOnFloor) {
  const Scene room = fixtures::demo_room();
  const auto r = run(R"(t = add_object("wooden dining table", position=(0.5, 0.5, 0.0)))", room);
  ASSERT_EQ(r.outcomes.size(), 1u);
  EXPECT_TRUE(r.outcomes[0].ok) << r.outcomes[0].reason;
  ASSERT_EQ(r.scene.elements.size(), room.elements.size() + 1);
  const auto& e = r.scene.elements.at("table_1");
  EXPECT_EQ(e.asset_ref, "dining_table");
  SceneMeshResolver src(&fixtures::demo_assets());
  const auto posed = posed_instance(r.scene, src, e, 0);
  EXPECT_NEAR(posed.mesh.bounds().min.z, 0.0, 1e-12);
  EXPECT_EQ(std::get<ElementRef>(r.bindings.at("t")).id, "table_1");
}

TEST(Interpreter, MovingUnknownElementIsSkipped) {
  const Scene room = fixtures::demo_room();
  const auto r = run(R"(move_object("ghost", (0, 0, 0)))", room);
  ASSERT_EQ(r.outcomes.size(), 1u);
  EXPECT_FALSE(r.outcomes[0].ok);
  EXPECT_NE(r.outcomes[0].reason.find("unknown element"), std::string::npos);
  EXPECT_EQ(r.scene, room);
}

TEST(Interpreter, CollidingAddIsSkipped) {
  const Scene s = fixtures::table_scene();
  SceneMeshResolver src(&fixtures::demo_assets());
  ASSERT_TRUE(verify_scene(s, src).verified());
  const auto r = run(R"(add_object("wooden dining table", position=(0.3, 0.0, 0.0)))", s);
  EXPECT_FALSE(r.outcomes[0].ok);
  EXPECT_NE(r.outcomes[0].reason.find("collision"), std::string::npos);
  EXPECT_EQ(serialize_scene(r.scene), serialize_scene(s));
  // Same edit with the gate relaxed: kept, and the verifier sees the overlap.
  auto ctx = demo_ctx();
  ctx.collision_gate = false;
  const auto relaxed = run(R"(add_object("wooden dining table", position=(0.3, 0.0, 0.0)))", s, ctx);
  EXPECT_TRUE(relaxed.outcomes[0].ok);
  EXPECT_NE(relaxed.outcomes[0].reason.find("gate relaxed"), std::string::npos);
  EXPECT_FALSE(verify_scene(relaxed.scene, src).collisions.empty());
}

TEST(Interpreter, OutOfBoundsIsSkipped) {
  const Scene room = fixtures::demo_room();
  const auto r = run(R"(add_object("gray fabric sofa", position=(3.5, 0.0, 0.0)))", room);
  EXPECT_FALSE(r.outcomes[0].ok);
  EXPECT_EQ(r.outcomes[0].reason, "out of bounds");
}

TEST(Interpreter, SetFloorMaterial) {
  const Scene room = fixtures::demo_room();
  const auto r = run(R"(set_material("floors", "dark oak planks"))", room);
  ASSERT_TRUE(r.outcomes[0].ok) << r.outcomes[0].reason;
  const auto& m = r.scene.elements.at("floor").material;
  ASSERT_TRUE(m.has_value());
  EXPECT_EQ(m->description, "dark oak planks");
  EXPECT_EQ(m->resolved_id, "oak_planks");
  EXPECT_EQ(r.scene.elements.at("wall_0").material, room.elements.at("wall_0").material);
}

TEST(Interpreter, SetMaterialThroughBinding) {
  const Scene room = fixtures::demo_room();
  const auto r = run("m = retrieve_material(\"red brick\")\nset_material(\"walls\", m)", room);
  ASSERT_EQ(r.applied(), 2u);
  for (const auto& [id, e] : r.scene.elements) {
    if (e.category == Category::kWalls && e.metadata.count("fixture") == 0) {
      EXPECT_EQ(e.material->resolved_id, "brick") << id;
    }
  }
}

TEST(Interpreter, AddPointLight) {
  const Scene room = fixtures::demo_room();
  const auto r = run(R"(add_light("point", intensity=800.0, color=(1.0, 0.9, 0.8), position=(0,0,2.5)))", room);
  ASSERT_TRUE(r.outcomes[0].ok) << r.outcomes[0].reason;
  ASSERT_EQ(r.scene.lights.size(), 1u);
  const auto& l = r.scene.lights.begin()->second;
  EXPECT_EQ(l.kind, LightKind::kPoint);
  EXPECT_DOUBLE_EQ(l.intensity, 800.0);
  EXPECT_EQ(l.color, (Vec3{1.0, 0.9, 0.8}));
}

TEST(Interpreter, LightValidation) {
  const Scene room = fixtures::demo_room();
  const auto r = run("add_light(\"point\", 1.0, (2, 0, 0), position=(0, 0, 1))\n"
                     "add_light(\"directional\", 1.0, (1, 1, 1), direction=(0, 0, -3), id=\"sun\")\n"
                     "set_light(\"sun\", intensity=-1)\n"
                     "set_light(\"sun\", color=(0.5, 0.5, 0.5))\n"
                     "remove_light(\"nope\")",
                     room);
  EXPECT_FALSE(r.outcomes[0].ok);
  EXPECT_TRUE(r.outcomes[1].ok);
  EXPECT_FALSE(r.outcomes[2].ok);
  EXPECT_TRUE(r.outcomes[3].ok);
  EXPECT_FALSE(r.outcomes[4].ok);
  const auto& sun = r.scene.lights.at("sun");
  EXPECT_NEAR(length(*sun.direction), 1.0, 1e-12);
  EXPECT_DOUBLE_EQ(sun.intensity, 1.0);
}

TEST(Interpreter, RotationIsNormalized) {
  Scene s = fixtures::demo_room();
  s.elements["chair_1"] = fixtures::object_at("chair_1", "chair", {0, 0, 0});
  const auto r = run(R"(rotate_object("chair_1", 7.0))", s);
  ASSERT_TRUE(r.outcomes[0].ok) << r.outcomes[0].reason;
  const double expected = std::fmod(7.0, 2.0 * 3.14159265358979323846);
  EXPECT_NEAR(r.scene.elements.at("chair_1").placements[0].rotation_z, expected, 1e-12);
  EXPECT_NEAR(expected, 0.7168, 1e-4);
}

TEST(Interpreter, ScaleKeepsBottomHeight) {
  const Scene s = fixtures::demo_room();
  const auto r = run("add_object(\"gray storage cube\", position=(1, 1, 0.2), id=\"box\")\nscale_object(box, 2.0)", s);
  ASSERT_EQ(r.applied(), 2u) << r.outcomes[1].reason;
  SceneMeshResolver src(&fixtures::demo_assets());
  const auto posed = posed_instance(r.scene, src, r.scene.elements.at("box"), 0);
  EXPECT_NEAR(posed.mesh.bounds().min.z, 0.2, 1e-12);
  EXPECT_NEAR(posed.mesh.bounds().extent().x, 0.6, 1e-12);
}

TEST(Interpreter, RetrievalMissAndBadArgumentsAreSoft) {
  const Scene room = fixtures::demo_room();
  const auto r = run("add_object(\"grand piano\", position=(0, 0, 0))\n"
                     "add_object(\"red wooden chair\")\n"
                     "add_object(\"red wooden chair\", position=\"here\")\n"
                     "remove_object(\"floor\")\n"
                     "unknown_call(1)\n"
                     "add_object(\"red wooden chair\", position=(1, 1, 0))",
                     room);
  ASSERT_EQ(r.outcomes.size(), 6u);
  for (int i = 0; i < 5; ++i) EXPECT_FALSE(r.outcomes[i].ok) << i;
  EXPECT_TRUE(r.outcomes[5].ok) << r.outcomes[5].reason;
  EXPECT_NE(r.outcomes[0].reason.find("retrieval miss"), std::string::npos);
  EXPECT_TRUE(r.scene.elements.contains("floor"));
  EXPECT_TRUE(r.scene.elements.contains("chair_1"));
}

TEST(Interpreter, EmptyProgramIsIdentity) {
  const Scene s = fixtures::table_scene();
  const auto r = execute(ActionProgram{}, s, demo_ctx());
  EXPECT_EQ(r.scene, s);
  EXPECT_TRUE(r.outcomes.empty());
}

TEST(Interpreter, InputSceneIsNotMutated) {
  const Scene s = fixtures::table_scene();
  const std::string before = serialize_scene(s);
  run("remove_object(\"dining_table\")\nset_material(\"floors\", \"red brick\")", s);
  EXPECT_EQ(serialize_scene(s), before);
}

TEST(Interpreter, DeterministicBytes) {
  const Scene s = fixtures::demo_room();
  const std::string text = "add_object(\"gray fabric sofa\", position=(-0.8, 1.6, 0))\n"
                           "add_object(\"green potted plant\", position=(1.5, 2.0, 0.0))\n"
                           "set_material(\"floors\", \"beige carpet\")";
  EXPECT_EQ(serialize_scene(run(text, s).scene), serialize_scene(run(text, s).scene));
}

TEST(Interpreter, FaultIsolation) {
  // Replacing any one statement with a failing one leaves every other effect intact.
  const Scene s = fixtures::demo_room();
  const std::vector<std::string> lines = {
      "add_object(\"gray fabric sofa\", position=(-0.8, 1.6, 0), id=\"sofa\")",
      "add_object(\"green potted plant\", position=(1.5, 2.0, 0.0), id=\"plant\")",
      "set_material(\"floors\", \"beige carpet\")",
      "add_light(\"point\", 500, (1, 1, 1), position=(0, 0, 2), id=\"lamp\")",
      "add_object(\"office desk\", position=(1.0, -1.5, 0), id=\"desk\")",
  };
  auto join = [](const std::vector<std::string>& v) {
    std::string out;
    for (const auto& l : v) out += l + "\n";
    return out;
  };
  const auto full = run(join(lines), s);
  ASSERT_EQ(full.applied(), lines.size());
  for (std::size_t k = 0; k < lines.size(); ++k) {
    auto broken = lines;
    broken[k] = "move_object(\"ghost\", (0, 0, 0))";
    const auto r = run(join(broken), s);
    EXPECT_FALSE(r.outcomes[k].ok);
    // These statements commute, so applying k afterwards must reproduce the full run.
    const auto single = run(lines[k], r.scene);
    EXPECT_TRUE(single.outcomes[0].ok) << single.outcomes[0].reason;
    EXPECT_EQ(serialize_scene(single.scene), serialize_scene(full.scene)) << "statement " << k;
  }
}

TEST(Interpreter, ExplicitIdConflictsAreSkipped) {
  const Scene s = fixtures::table_scene();
  const auto r = run("add_object(\"red wooden chair\", position=(1, 1, 0), id=\"dining_table\")\n"
                     "add_object(\"red wooden chair\", position=(1, 1, 0), id=\"bad id\")",
                     s);
  EXPECT_FALSE(r.outcomes[0].ok);
  EXPECT_FALSE(r.outcomes[1].ok);
}

TEST(Interpreter, MissingIndexesAbort) {
  ExecutionContext ctx;
  EXPECT_THROW(execute(parse_program("f()"), Scene{}, ctx), Error);
}

TEST(Interpreter, IdStemUsesLastWord) {
  EXPECT_EQ(id_stem("Red Wooden Chair"), "chair");
  EXPECT_EQ(id_stem("lamp 2"), "object_2");
  EXPECT_EQ(id_stem("!!"), "object");
}

TEST(Interpreter, WallMaterialSkipsFixtures) {
  const auto spec = layout_from_json(parse_json_strict(read_text_file(fixtures::demo_dir() / "layout_openings.json")));
  const Scene room = build_room(spec, &fixtures::demo_materials());
  const auto r = run(R"(set_material("walls", "red brick"))", room);
  ASSERT_TRUE(r.outcomes[0].ok) << r.outcomes[0].reason;
  int fixtures_seen = 0;
  for (const auto& [id, e] : r.scene.elements) {
    if (e.category != Category::kWalls) continue;
    if (e.metadata.contains("fixture")) {
      ++fixtures_seen;
      EXPECT_EQ(e.material, room.elements.at(id).material) << id;
    } else {
      EXPECT_EQ(e.material->resolved_id, "brick") << id;
    }
  }
  EXPECT_GT(fixtures_seen, 0);
}
