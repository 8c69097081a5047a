#include "scenegen/interpreter.hpp"

#include <cmath>
#include <functional>
#include <initializer_list>

#include "scenegen/collision.hpp"
#include "scenegen/text_index.hpp"
#include "scenegen/verify.hpp"

namespace scenegen {

namespace {

/// Soft failure of one statement.
struct Skip {
  std::string reason;
};

using Args = std::map<std::string, const Value*>;

struct Param {
  const char* name;
  bool required;
};

Args bind_args(const Call& call, std::initializer_list<Param> params,
               std::initializer_list<std::pair<const char*, const char*>> aliases = {}) {
  Args out;
  std::vector<Param> list(params);
  if (call.args.size() > list.size()) throw Skip{"too many arguments to " + call.function};
  for (std::size_t i = 0; i < call.args.size(); ++i) out[list[i].name] = &call.args[i];
  for (const auto& [raw_key, value] : call.kwargs) {
    std::string key = raw_key;
    for (const auto& [alias, target] : aliases) {
      if (key == alias) key = target;
    }
    bool known = false;
    for (const auto& p : list) known = known || key == p.name;
    if (!known) throw Skip{"unknown argument " + raw_key + " to " + call.function};
    if (out.contains(key)) throw Skip{"argument " + key + " given twice to " + call.function};
    out[key] = &value;
  }
  for (const auto& p : list) {
    if (p.required && !out.contains(p.name)) throw Skip{"missing argument " + std::string(p.name)};
  }
  return out;
}

const Value* opt(const Args& args, const char* name) {
  const auto it = args.find(name);
  return it == args.end() ? nullptr : it->second;
}

double as_number(const Value& v, const char* name) {
  if (const auto* d = std::get_if<double>(&v)) return *d;
  throw Skip{std::string("argument ") + name + " must be a number"};
}

Vec3 as_vec3(const Value& v, const char* name) {
  if (const auto* p = std::get_if<Vec3>(&v)) return *p;
  throw Skip{std::string("argument ") + name + " must be a 3-tuple"};
}

Vec3 as_position(const Value& v) {
  if (const auto* p = std::get_if<Vec3>(&v)) return *p;
  if (const auto* p = std::get_if<Vec2>(&v)) return {p->x, p->y, 0.0};
  throw Skip{"argument position must be a 2- or 3-tuple"};
}

Vec3 as_scale(const Value& v) {
  if (const auto* d = std::get_if<double>(&v)) return {*d, *d, *d};
  if (const auto* p = std::get_if<Vec3>(&v)) return *p;
  throw Skip{"argument scale must be a number or 3-tuple"};
}

std::string as_text(const Value& v, const char* name) {
  if (const auto* s = std::get_if<std::string>(&v)) return *s;
  if (const auto* id = std::get_if<Identifier>(&v)) return id->name;
  throw Skip{std::string("argument ") + name + " must be a string"};
}

class Interpreter {
 public:
  Interpreter(const ExecutionContext& ctx, Scene scene) : ctx_(ctx), resolver_(ctx.assets), scene_(std::move(scene)) {
    meshes_ = ctx.meshes ? ctx.meshes : &resolver_;
  }

  StatementOutcome run(const Statement& st) {
    const Scene backup = scene_;
    note_.clear();
    try {
      auto bound = dispatch(st.call);
      if (st.binding && bound) bindings_[*st.binding] = std::move(*bound);
      return {true, note_};
    } catch (const Skip& s) {
      scene_ = backup;
      return {false, s.reason};
    } catch (const Error& e) {
      scene_ = backup;
      return {false, e.what()};
    }
  }

  Scene& scene() { return scene_; }
  std::map<std::string, BindingValue>& bindings() { return bindings_; }

 private:
  std::optional<BindingValue> dispatch(const Call& c) {
    using Handler = std::optional<BindingValue> (Interpreter::*)(const Call&);
    static const std::map<std::string, Handler> table = {
        {"retrieve_material", &Interpreter::retrieve_material},
        {"add_object", &Interpreter::add_object},
        {"move_object", &Interpreter::move_object},
        {"rotate_object", &Interpreter::rotate_object},
        {"scale_object", &Interpreter::scale_object},
        {"remove_object", &Interpreter::remove_object},
        {"set_material", &Interpreter::set_material},
        {"add_light", &Interpreter::add_light},
        {"set_light", &Interpreter::set_light},
        {"remove_light", &Interpreter::remove_light},
    };
    const auto it = table.find(c.function);
    if (it == table.end()) throw Skip{"unknown function " + c.function};
    return (this->*(it->second))(c);
  }

  std::string element_id(const Value& v) {
    if (const auto* id = std::get_if<Identifier>(&v)) {
      const auto b = bindings_.find(id->name);
      if (b != bindings_.end()) {
        if (const auto* e = std::get_if<ElementRef>(&b->second)) return e->id;
        throw Skip{"binding " + id->name + " is not an element"};
      }
      return id->name;
    }
    return as_text(v, "id");
  }

  SceneElement& object(const Value& v) {
    const std::string id = element_id(v);
    const auto it = scene_.elements.find(id);
    if (it == scene_.elements.end()) throw Skip{"unknown element " + id};
    if (!is_object(it->second)) throw Skip{"element " + id + " is not an object"};
    return it->second;
  }

  std::string light_id(const Value& v) {
    if (const auto* id = std::get_if<Identifier>(&v)) {
      const auto b = bindings_.find(id->name);
      if (b != bindings_.end()) {
        if (const auto* l = std::get_if<LightRef>(&b->second)) return l->id;
        throw Skip{"binding " + id->name + " is not a light"};
      }
      return id->name;
    }
    return as_text(v, "id");
  }

  MaterialAssignment material(const Value& v) {
    if (const auto* id = std::get_if<Identifier>(&v)) {
      const auto b = bindings_.find(id->name);
      if (b == bindings_.end()) throw Skip{"unknown reference " + id->name};
      if (const auto* m = std::get_if<MaterialAssignment>(&b->second)) return *m;
      throw Skip{"binding " + id->name + " is not a material"};
    }
    const std::string description = as_text(v, "material");
    if (description.empty()) throw Skip{"empty material description"};
    const auto hits = ctx_.materials->retrieve(description, 1);
    if (hits.empty()) throw Skip{"retrieval miss for material \"" + description + "\""};
    return {description, hits.front().id};
  }

  double mesh_min_z(const SceneElement& e) {
    const auto mesh = meshes_->local_mesh(scene_, e);
    if (!mesh) throw UnresolvedMeshError(e.id);
    return mesh->empty() ? 0.0 : mesh->bounds().min.z;
  }

  /// Bounds and collision gates for one placement of an element already in scene_.
  void gate(const SceneElement& e, std::size_t placement) {
    const auto posed = posed_instance(scene_, *meshes_, e, placement);
    if (!scene_.bounds.empty() && !posed.mesh.empty() &&
        bounds_excess(scene_.bounds, posed.mesh.bounds(), ctx_.bounds_tol) > 0.0) {
      throw Skip{"out of bounds"};
    }
    if (!is_object(e) || posed.mesh.empty()) return;
    const auto others = posed_meshes(scene_, *meshes_, is_object);
    const auto report = check_collision(posed, others, ctx_.collision_tol);
    if (!report.colliding()) return;
    const std::string msg = "collision with " + report.contacts.front().element_id;
    if (ctx_.collision_gate) throw Skip{msg};
    note_ = msg + " (gate relaxed)";
  }

  void gate_all(const SceneElement& e) {
    for (std::size_t i = 0; i < e.placements.size(); ++i) gate(e, i);
  }

  std::optional<BindingValue> retrieve_material(const Call& c) {
    const auto args = bind_args(c, {{"description", true}});
    const Value& v = *args.at("description");
    if (std::holds_alternative<Identifier>(v)) throw Skip{"description must be a string"};
    return material(v);
  }

  std::optional<BindingValue> add_object(const Call& c) {
    const auto args = bind_args(c,
                                {{"description", true}, {"position", true}, {"rotation", false},
                                 {"scale", false}, {"id", false}},
                                {{"rotation_z", "rotation"}});
    const std::string description = as_text(*args.at("description"), "description");
    if (tokenize(description).empty()) throw Skip{"empty description"};
    const Vec3 pos = as_position(*args.at("position"));
    Placement p;
    p.rotation_z = normalize_angle(opt(args, "rotation") ? as_number(*opt(args, "rotation"), "rotation") : 0.0);
    if (const auto* s = opt(args, "scale")) p.scale = as_scale(*s);
    if (!is_finite(pos) || !is_finite(p.scale)) throw Skip{"non-finite argument"};

    const auto hits = ctx_.assets->retrieve(description, 1);
    if (hits.empty()) throw Skip{"retrieval miss for \"" + description + "\""};

    SceneElement e;
    if (const auto* idv = opt(args, "id")) {
      e.id = as_text(*idv, "id");
      if (!is_identifier(e.id)) throw Skip{"invalid id " + e.id};
      if (scene_.elements.contains(e.id) || scene_.lights.contains(e.id)) throw Skip{"id " + e.id + " in use"};
    } else {
      e.id = next_free_id(scene_, id_stem(description));
    }
    e.category = Category::kObjects;
    e.asset_ref = hits.front().id;
    e.metadata["description"] = description;
    p.position = {pos.x, pos.y, 0.0};
    e.placements.push_back(p);
    validate_element(e, "elements/" + e.id);
    e.placements[0].position.z = pos.z - p.scale.z * mesh_min_z(e);
    const std::string id = e.id;
    scene_.elements[id] = std::move(e);
    gate_all(scene_.elements.at(id));
    return ElementRef{id};
  }

  std::size_t placement_index(const Args& args, const SceneElement& e) {
    const auto* v = opt(args, "placement");
    if (!v) return 0;
    const double d = as_number(*v, "placement");
    if (d < 0 || d != std::floor(d) || d >= static_cast<double>(e.placements.size())) {
      throw Skip{"placement index out of range"};
    }
    return static_cast<std::size_t>(d);
  }

  std::optional<BindingValue> move_object(const Call& c) {
    const auto args = bind_args(c, {{"id", true}, {"position", true}, {"placement", false}});
    SceneElement& e = object(*args.at("id"));
    const std::size_t i = placement_index(args, e);
    const Vec3 pos = as_position(*args.at("position"));
    if (!is_finite(pos)) throw Skip{"non-finite argument"};
    Placement& p = e.placements[i];
    p.position = {pos.x, pos.y, pos.z - p.scale.z * mesh_min_z(e)};
    gate(e, i);
    return ElementRef{e.id};
  }

  std::optional<BindingValue> rotate_object(const Call& c) {
    const auto args = bind_args(c, {{"id", true}, {"rotation", true}, {"placement", false}},
                                {{"rotation_z", "rotation"}});
    SceneElement& e = object(*args.at("id"));
    const std::size_t i = placement_index(args, e);
    const double r = as_number(*args.at("rotation"), "rotation");
    e.placements[i].rotation_z = normalize_angle(r);
    gate(e, i);
    return ElementRef{e.id};
  }

  std::optional<BindingValue> scale_object(const Call& c) {
    const auto args = bind_args(c, {{"id", true}, {"scale", true}, {"placement", false}});
    SceneElement& e = object(*args.at("id"));
    const std::size_t i = placement_index(args, e);
    const Vec3 s = as_scale(*args.at("scale"));
    if (!is_finite(s) || !(s.x > 0.0 && s.y > 0.0 && s.z > 0.0)) throw Skip{"non-positive scale"};
    Placement& p = e.placements[i];
    const double min_z = mesh_min_z(e);
    const double bottom = p.position.z + p.scale.z * min_z;
    p.scale = s;
    p.position.z = bottom - s.z * min_z;
    gate(e, i);
    return ElementRef{e.id};
  }

  std::optional<BindingValue> remove_object(const Call& c) {
    const auto args = bind_args(c, {{"id", true}});
    const std::string id = object(*args.at("id")).id;
    scene_.elements.erase(id);
    return std::nullopt;
  }

  std::optional<BindingValue> set_material(const Call& c) {
    const auto args = bind_args(c, {{"target", true}, {"material", true}});
    const Value& target = *args.at("target");
    const MaterialAssignment m = material(*args.at("material"));
    std::string name;
    if (const auto* id = std::get_if<Identifier>(&target)) {
      const auto b = bindings_.find(id->name);
      if (b != bindings_.end()) {
        const auto* e = std::get_if<ElementRef>(&b->second);
        if (!e) throw Skip{"binding " + id->name + " is not an element"};
        name = e->id;
      } else {
        name = id->name;
      }
    } else {
      name = as_text(target, "target");
    }
    const auto category = parse_category(name);
    if (category && *category != Category::kObjects && !scene_.elements.contains(name)) {
      int count = 0;
      // Door and window fixtures keep their own materials.
      for (auto& [id, e] : scene_.elements) {
        if (e.category == *category && !e.metadata.contains("fixture")) {
          e.material = m;
          ++count;
        }
      }
      if (count == 0) throw Skip{"no " + name + " in scene"};
      return m;
    }
    const auto it = scene_.elements.find(name);
    if (it == scene_.elements.end()) throw Skip{"unknown element " + name};
    it->second.material = m;
    return m;
  }

  std::optional<BindingValue> add_light(const Call& c) {
    const auto args = bind_args(c, {{"kind", true}, {"intensity", true}, {"color", true}, {"position", false},
                                    {"direction", false}, {"extent", false}, {"id", false}});
    Light l;
    const std::string kind = as_text(*args.at("kind"), "kind");
    const auto k = parse_light_kind(kind);
    if (!k) throw Skip{"unknown light kind " + kind};
    l.kind = *k;
    l.intensity = as_number(*args.at("intensity"), "intensity");
    l.color = as_vec3(*args.at("color"), "color");
    if (const auto* v = opt(args, "position")) l.position = as_vec3(*v, "position");
    if (const auto* v = opt(args, "direction")) {
      const Vec3 d = as_vec3(*v, "direction");
      if (!(length(d) > 0.0)) throw Skip{"zero light direction"};
      l.direction = normalized(d);
    }
    if (const auto* v = opt(args, "extent")) {
      const auto* e = std::get_if<Vec2>(v);
      if (!e) throw Skip{"argument extent must be a 2-tuple"};
      l.extent = *e;
    }
    if (const auto* v = opt(args, "id")) {
      l.id = as_text(*v, "id");
      if (!is_identifier(l.id)) throw Skip{"invalid id " + l.id};
      if (scene_.elements.contains(l.id) || scene_.lights.contains(l.id)) throw Skip{"id " + l.id + " in use"};
    } else {
      l.id = next_free_id(scene_, "light");
    }
    validate_light(l, "lights/" + l.id);
    scene_.lights[l.id] = l;
    return LightRef{l.id};
  }

  std::optional<BindingValue> set_light(const Call& c) {
    const auto args = bind_args(c, {{"id", true}, {"intensity", false}, {"color", false}});
    const std::string id = light_id(*args.at("id"));
    const auto it = scene_.lights.find(id);
    if (it == scene_.lights.end()) throw Skip{"unknown light " + id};
    Light l = it->second;
    if (const auto* v = opt(args, "intensity")) l.intensity = as_number(*v, "intensity");
    if (const auto* v = opt(args, "color")) l.color = as_vec3(*v, "color");
    validate_light(l, "lights/" + id);
    it->second = l;
    return LightRef{id};
  }

  std::optional<BindingValue> remove_light(const Call& c) {
    const auto args = bind_args(c, {{"id", true}});
    const std::string id = light_id(*args.at("id"));
    if (scene_.lights.erase(id) == 0) throw Skip{"unknown light " + id};
    return std::nullopt;
  }

  const ExecutionContext& ctx_;
  SceneMeshResolver resolver_;
  const MeshSource* meshes_ = nullptr;
  Scene scene_;
  std::map<std::string, BindingValue> bindings_;
  std::string note_;
};

}  // namespace

std::size_t ExecutionResult::applied() const {
  std::size_t n = 0;
  for (const auto& o : outcomes) n += o.ok ? 1 : 0;
  return n;
}

std::string id_stem(std::string_view description) {
  const auto tokens = tokenize(description);
  if (tokens.empty()) return "object";
  std::string stem = tokens.back();
  if (!is_identifier(stem)) stem = "object_" + stem;
  return stem;
}

ExecutionResult execute(const ActionProgram& program, const Scene& scene, const ExecutionContext& ctx) {
  if (ctx.assets == nullptr || ctx.materials == nullptr) {
    throw Error(ErrorKind::kInternal, "execution context needs asset and material indexes");
  }
  Interpreter interp(ctx, scene);
  ExecutionResult result;
  result.outcomes.reserve(program.statements.size());
  for (const auto& st : program.statements) result.outcomes.push_back(interp.run(st));
  result.scene = std::move(interp.scene());
  result.bindings = std::move(interp.bindings());
  return result;
}

}  // namespace scenegen
