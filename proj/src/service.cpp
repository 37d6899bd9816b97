#include "sketchact/service.hpp"

#include "sketchact/batch.hpp"
#include "sketchact/homography.hpp"
#include "sketchact/policy.hpp"

#include <cstdlib>
#include <fstream>
#include <sstream>

namespace sketchact {

std::filesystem::path default_data_dir() {
  if (const char* env = std::getenv("SKETCHACT_DATA_DIR"); env && *env) return env;
  return std::filesystem::current_path();
}

namespace {

bool safe_id(const std::string& id) {
  if (id.empty() || id.size() > 128 || id.front() == '.') return false;
  for (char c : id)
    if (!(std::isalnum(static_cast<unsigned char>(c)) || c == '-' || c == '_' || c == '.')) return false;
  return true;
}

}  // namespace

SceneRegistry::SceneRegistry(const std::filesystem::path& data_dir) {
  namespace fs = std::filesystem;
  if (!fs::is_directory(data_dir)) return;
  for (const auto& entry : fs::directory_iterator(data_dir)) {
    if (!entry.is_regular_file() || entry.path().extension() != ".json") continue;
    try {
      const Json doc = read_json(entry.path());
      const std::string schema = doc.is_object() ? doc.value("schema", "") : "";
      if (schema == kSceneSchema || schema == kScenarioSchema) scenes_[entry.path().stem().string()] = entry.path();
    } catch (const Error&) {
      // not a scene document; ignore
    }
  }
  const fs::path assets = data_dir / "assets";
  if (fs::is_directory(assets))
    for (const auto& entry : fs::directory_iterator(assets))
      if (entry.is_regular_file()) assets_[entry.path().filename().string()] = entry.path();
}

const std::filesystem::path& SceneRegistry::scene_path(const std::string& id) const {
  const auto it = safe_id(id) ? scenes_.find(id) : scenes_.end();
  if (it == scenes_.end()) throw Error(ErrorCode::NotFound, "unknown scene '" + id + "'", "/scene_ref");
  return it->second;
}

const std::filesystem::path& SceneRegistry::asset_path(const std::string& id) const {
  const auto it = safe_id(id) ? assets_.find(id) : assets_.end();
  if (it == assets_.end()) throw Error(ErrorCode::NotFound, "unknown asset '" + id + "'");
  return it->second;
}

Json SceneRegistry::listing() const {
  Json arr = Json::array();
  for (const auto& [id, path] : scenes_) {
    const Json doc = read_json(path);
    Json item = {{"id", id}, {"schema", doc["schema"]}};
    const Json& scene = doc["schema"] == kScenarioSchema ? doc["scene"] : doc;
    if (scene.contains("image_ref")) item["image_ref"] = scene["image_ref"];
    if (doc.contains("spec")) item["spec"] = doc["spec"];
    arr.push_back(item);
  }
  return {{"scenes", arr}};
}

namespace {

template <typename F>
auto within(const std::string& prefix, F&& f) {
  try {
    return f();
  } catch (const Error& e) {
    const std::string loc = e.location() == "/" ? "" : e.location();
    throw Error(e.code(), e.what(), loc.rfind(prefix, 0) == 0 ? loc : prefix + loc);
  }
}

void allow_request_keys(const Json& req, std::initializer_list<const char*> keys) {
  if (!req.is_object()) throw Error(ErrorCode::ValidationFailed, "request must be an object", "/");
  for (auto it = req.begin(); it != req.end(); ++it) {
    bool ok = false;
    for (const char* k : keys) ok = ok || it.key() == k;
    if (!ok) throw Error(ErrorCode::ValidationFailed, "unknown request field '" + it.key() + "'", "/" + it.key());
  }
}

struct Context {
  ControlParams params;
  std::string policy = "rules";
  std::optional<SceneGrid> scene;
  std::optional<Sketch> sketch;
  Polyline reference;
  std::optional<Polyline> area;
  std::optional<ScenarioSpec> spec;
};

Context resolve(const Json& req, const SceneRegistry* registry) {
  allow_request_keys(req, {"sketch", "scene", "scene_ref", "params", "policy", "seed", "noise", "tolerance_profile"});
  Context ctx;
  if (req.contains("params")) ctx.params = within("/params", [&] { return params_from_json(req["params"]); });
  if (req.contains("policy")) {
    if (!req["policy"].is_string()) throw Error(ErrorCode::ValidationFailed, "policy must be a name", "/policy");
    ctx.policy = req["policy"].get<std::string>();
    within("/policy", [&] { return PolicyRegistry::global().get(ctx.policy); });
  }
  if (req.contains("scene") && req.contains("scene_ref"))
    throw Error(ErrorCode::ValidationFailed, "give either scene or scene_ref", "/scene_ref");

  std::optional<Json> scene_doc;
  std::string where = "/scene";
  if (req.contains("scene")) scene_doc = req["scene"];
  if (req.contains("scene_ref")) {
    if (!req["scene_ref"].is_string())
      throw Error(ErrorCode::ValidationFailed, "scene_ref must be a string", "/scene_ref");
    if (!registry) throw Error(ErrorCode::NotFound, "no scene registry configured", "/scene_ref");
    scene_doc = read_json(registry->scene_path(req["scene_ref"].get<std::string>()));
    where = "/scene_ref";
  }
  if (scene_doc) {
    const Json& doc = *scene_doc;
    if (doc.is_object() && doc.value("schema", "") == kScenarioSchema) {
      within(where, [&] {
        for (const char* key : {"scene", "sketch", "reference", "spec"})
          if (!doc.contains(key)) throw Error(ErrorCode::ValidationFailed, "scenario lacks " + std::string(key), "/" + std::string(key));
        ctx.scene = within("/scene", [&] { return scene_from_json(doc["scene"]); });
        ctx.sketch = within("/sketch", [&] { return sketch_from_json(doc["sketch"]); });
        ctx.reference = polyline_from_json(doc["reference"], "/reference");
        if (doc.contains("area")) ctx.area = polyline_from_json(doc["area"], "/area");
        ctx.spec = within("/spec", [&] { return scenario_spec_from_json(doc["spec"]); });
        return 0;
      });
    } else {
      ctx.scene = within(where, [&] { return scene_from_json(doc); });
    }
  }
  if (req.contains("sketch")) ctx.sketch = within("/sketch", [&] { return sketch_from_json(req["sketch"]); });
  if (!ctx.sketch) throw Error(ErrorCode::ValidationFailed, "request carries no sketch", "/sketch");
  return ctx;
}

MetricScale plan_scale(const Context& ctx) {
  if (ctx.scene) {
    if (std::holds_alternative<std::monostate>(ctx.scene->scale))
      throw Error(ErrorCode::SceneSketchScaleMismatch, "scene carries no metric scale", "/scene/scale");
    if (ctx.scene->image_width > 0 && (ctx.scene->image_width != ctx.sketch->image_width ||
                                       ctx.scene->image_height != ctx.sketch->image_height))
      throw Error(ErrorCode::SceneSketchScaleMismatch, "sketch image dimensions differ from the scene image",
                  "/sketch/image");
    return ctx.scene->scale;
  }
  if (ctx.sketch->correspondences.size() >= 4)
    return within("/sketch/correspondences",
                  [&] { return MetricScale(estimate_homography(ctx.sketch->correspondences).h); });
  return PixelProxy{ctx.params.kappa};
}

Json params_echo(const ControlParams& p) {
  Json j = to_json(p);
  j.erase("schema");
  return j;
}

}  // namespace

Json plan_payload(const Json& request, const SceneRegistry* registry) {
  const Context ctx = resolve(request, registry);
  const MetricScale scale = plan_scale(ctx);
  const Policy& policy = PolicyRegistry::global().get(ctx.policy);
  const auto segments = segment_sketch(*ctx.sketch, ctx.params, scale);

  Json segs = Json::array(), actions = Json::array(), warnings = Json::array();
  for (const auto& seg : segments) {
    const PolicyDecision d = policy(plan_input(seg, segments.size(), ctx.params));
    Json entry = to_json(seg);
    entry["decision"] = to_json(d);
    Json kps = Json::array();
    for (const auto& k : detect_keypoints(seg, ctx.params))
      kps.push_back({{"kind", to_string(k.kind)}, {"loc", {k.loc.x(), k.loc.y()}}});
    entry["keypoints"] = kps;
    if (d.action == MacroAction::CoverArea) {
      const SerpentinePlan plan = generate_serpentine_plan(seg, ctx.params);
      Json macros = Json::array();
      for (const auto m : plan.macros) macros.push_back(to_string(m));
      entry["coverage_plan"] = {{"lanes", plan.lane_count}, {"length_m", plan.length_m}, {"macros", macros}};
    }
    segs.push_back(entry);
    actions.push_back(to_string(d.action));
  }
  if (const auto* proxy = std::get_if<PixelProxy>(&scale); proxy && !kappa_in_recommended_band(proxy->kappa))
    warnings.push_back("kappa outside the recommended band [0.06, 0.10]");

  return {{"schema", kPlanSchema},
          {"params", params_echo(ctx.params)},
          {"policy", ctx.policy},
          {"scale", to_json(scale)},
          {"segments", segs},
          {"actions", actions},
          {"warnings", warnings}};
}

Json execute_payload(const Json& request, const SceneRegistry* registry) {
  const Context ctx = resolve(request, registry);
  if (!ctx.scene) throw Error(ErrorCode::ValidationFailed, "execution needs a scene", "/scene");
  NoiseModel noise;
  if (request.contains("noise")) noise = noise_from_json(request["noise"], "/noise");
  if (request.contains("seed")) {
    if (!request["seed"].is_number_unsigned())
      throw Error(ErrorCode::ValidationFailed, "seed must be an unsigned integer", "/seed");
    noise.seed = request["seed"].get<std::uint64_t>();
  }
  std::string tol_name = "floor";
  if (request.contains("tolerance_profile")) {
    if (!request["tolerance_profile"].is_string())
      throw Error(ErrorCode::ValidationFailed, "tolerance profile must be a name", "/tolerance_profile");
    tol_name = request["tolerance_profile"].get<std::string>();
  }
  const ToleranceProfile tol = tolerance_by_name(tol_name);

  TrialResult trial = run_trial(*ctx.scene, *ctx.sketch, ctx.params, noise, ctx.policy);
  TrialRow row = summarize(trial, ctx.reference, ctx.area, tol);
  row.corners = path_corner_count(trial.segments);
  row.category = std::string(to_string(ctx.spec ? ctx.spec->category : category_for_corners(row.corners)));
  row.scene_type = std::string(to_string(ctx.spec ? ctx.spec->scene_type : SceneType::Other));
  row.seed = ctx.spec ? ctx.spec->seed : noise.seed;
  row.turn_set = turn_set_label(ctx.params.turn_set);

  Json out = to_json(trial);
  out["params"] = params_echo(ctx.params);
  out["tolerance_profile"] = tol_name;
  out["summary"] = to_json(row);
  return out;
}

Json scenario_payload(const Json& request) {
  Json spec_doc = request;
  ControlParams params;
  if (request.is_object() && request.contains("params")) {
    params = within("/params", [&] { return params_from_json(request["params"]); });
    spec_doc.erase("params");
  }
  const ScenarioSpec spec = scenario_spec_from_json(spec_doc, "");
  return to_json(generate_scenario(spec, params));
}

Json scene_payload(const std::string& id, const SceneRegistry& registry) {
  const Json doc = read_json(registry.scene_path(id));
  if (doc["schema"] == kScenarioSchema) {
    within("/scene", [&] { return scene_from_json(doc["scene"]); });
    return doc;
  }
  return to_json(scene_from_json(doc));
}

int http_status(ErrorCode code) {
  if (code == ErrorCode::NotFound) return 404;
  return is_validation_error(code) ? 400 : 500;
}

namespace {

std::string hex_id(const std::string& seed_text) {
  std::uint64_t h = 0xcbf29ce484222325ULL;
  for (unsigned char c : seed_text) h = (h ^ c) * 0x100000001b3ULL;
  std::ostringstream ss;
  ss << std::hex << mix64(h);
  return ss.str();
}

std::string content_type_for(const std::filesystem::path& p) {
  const std::string ext = p.extension().string();
  if (ext == ".png") return "image/png";
  if (ext == ".jpg" || ext == ".jpeg") return "image/jpeg";
  if (ext == ".svg") return "image/svg+xml";
  if (ext == ".json") return "application/json";
  return "application/octet-stream";
}

Json error_json(const std::string& code, const std::string& message, const std::string& location) {
  return {{"code", code}, {"message", message}, {"location", location}};
}

}  // namespace

HttpReply Gateway::handle(const std::string& method, const std::string& path, const std::string& body,
                          const std::string& header_request_id) const {
  HttpReply reply;
  reply.request_id = header_request_id.empty() ? "req-" + hex_id(method + " " + path + "\n" + body) : header_request_id;
  try {
    Json payload;
    if (method == "POST") {
      Json env = parse(body);
      if (env.is_object() && env.contains("payload")) {
        for (auto it = env.begin(); it != env.end(); ++it)
          if (it.key() != "payload" && it.key() != "request_id")
            throw Error(ErrorCode::ValidationFailed, "unknown envelope field '" + it.key() + "'", "/" + it.key());
        if (env.contains("request_id")) {
          if (!env["request_id"].is_string())
            throw Error(ErrorCode::ValidationFailed, "request_id must be a string", "/request_id");
          reply.request_id = env["request_id"].get<std::string>();
        }
        env = Json(env["payload"]);
      }
      if (path == "/plan") payload = within("/payload", [&] { return plan_payload(env, &registry_); });
      else if (path == "/execute") payload = within("/payload", [&] { return execute_payload(env, &registry_); });
      else if (path == "/scenario") payload = within("/payload", [&] { return scenario_payload(env); });
      else throw Error(ErrorCode::NotFound, "no route for POST " + path);
    } else if (method == "GET") {
      if (path == "/scenes") {
        payload = registry_.listing();
      } else if (path.rfind("/scene/", 0) == 0) {
        payload = scene_payload(path.substr(7), registry_);
      } else if (path.rfind("/asset/", 0) == 0) {
        const auto& file = registry_.asset_path(path.substr(7));
        std::ifstream in(file, std::ios::binary);
        std::ostringstream ss;
        ss << in.rdbuf();
        reply.body = ss.str();
        reply.content_type = content_type_for(file);
        return reply;
      } else {
        throw Error(ErrorCode::NotFound, "no route for GET " + path);
      }
    } else {
      throw Error(ErrorCode::NotFound, "no route for " + method + " " + path);
    }
    reply.body = dump({{"request_id", reply.request_id}, {"payload", payload}});
  } catch (const Error& e) {
    reply.status = http_status(e.code());
    reply.body = dump({{"request_id", reply.request_id},
                       {"error", error_json(std::string(to_string(e.code())), e.what(), e.location())}});
  } catch (const std::exception& e) {
    reply.status = 500;
    const std::string incident = hex_id(reply.request_id + e.what());
    reply.body = dump({{"request_id", reply.request_id},
                       {"error", error_json("Internal", "internal error, incident " + incident, "")}});
  }
  return reply;
}

}  // namespace sketchact
