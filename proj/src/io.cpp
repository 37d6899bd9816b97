#include "sketchact/io.hpp"

#include <cmath>
#include <fstream>
#include <initializer_list>
#include <limits>
#include <sstream>

namespace sketchact {

namespace {

std::string at(const std::string& where, const std::string& key) { return where + "/" + key; }
std::string at(const std::string& where, std::size_t i) { return where + "/" + std::to_string(i); }

[[noreturn]] void invalid(const std::string& msg, const std::string& loc) {
  throw Error(ErrorCode::ValidationFailed, msg, loc.empty() ? "/" : loc);
}

void need_object(const Json& j, const std::string& where) {
  if (!j.is_object()) invalid("expected an object", where);
}

void need_array(const Json& j, const std::string& where) {
  if (!j.is_array()) invalid("expected an array", where);
}

void allow_keys(const Json& obj, std::initializer_list<const char*> keys, const std::string& where) {
  for (auto it = obj.begin(); it != obj.end(); ++it) {
    bool known = false;
    for (const char* k : keys) known = known || it.key() == k;
    if (!known) invalid("unknown field '" + it.key() + "'", at(where, it.key()));
  }
}

const Json& field(const Json& obj, const char* key, const std::string& where) {
  const auto it = obj.find(key);
  if (it == obj.end()) invalid(std::string("missing field '") + key + "'", at(where, key));
  return *it;
}

double number(const Json& j, const std::string& where) {
  if (!j.is_number()) invalid("expected a number", where);
  const double v = j.get<double>();
  if (!std::isfinite(v)) invalid("expected a finite number", where);
  return v;
}

double number(const Json& obj, const char* key, const std::string& where) {
  return number(field(obj, key, where), at(where, key));
}

std::int64_t integer(const Json& j, const std::string& where) {
  if (!j.is_number_integer()) invalid("expected an integer", where);
  return j.get<std::int64_t>();
}

std::int64_t integer(const Json& obj, const char* key, const std::string& where) {
  return integer(field(obj, key, where), at(where, key));
}

std::size_t count(const Json& obj, const char* key, const std::string& where) {
  const std::int64_t v = integer(obj, key, where);
  if (v < 0) invalid("expected a non-negative integer", at(where, key));
  return std::size_t(v);
}

std::uint64_t seed_value(const Json& j, const std::string& where) {
  if (!j.is_number_unsigned()) invalid("expected an unsigned integer", where);
  return j.get<std::uint64_t>();
}

bool boolean(const Json& obj, const char* key, const std::string& where) {
  const Json& j = field(obj, key, where);
  if (!j.is_boolean()) invalid("expected true or false", at(where, key));
  return j.get<bool>();
}

std::string text(const Json& obj, const char* key, const std::string& where) {
  const Json& j = field(obj, key, where);
  if (!j.is_string()) invalid("expected a string", at(where, key));
  return j.get<std::string>();
}

Vec2 pair(const Json& j, const std::string& where) {
  if (!j.is_array() || j.size() != 2) invalid("expected a [x, y] pair", where);
  return {number(j[0], at(where, 0)), number(j[1], at(where, 1))};
}

template <typename T>
void put(Json& obj, const char* key, const std::optional<T>& v) {
  if (v) obj[key] = *v;
}

}  // namespace

std::string dump(const Json& doc) { return doc.dump(2) + "\n"; }

Json parse(const std::string& text) {
  try {
    return Json::parse(text);
  } catch (const Json::parse_error& e) {
    throw Error(ErrorCode::ParseError, e.what(), "@" + std::to_string(e.byte));
  }
}

Json read_json(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw Error(ErrorCode::NotFound, "cannot open " + path.string());
  std::ostringstream ss;
  ss << in.rdbuf();
  return parse(ss.str());
}

void write_text(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw Error(ErrorCode::ValidationFailed, "cannot write " + path.string());
  out << text;
}

void expect_schema(const Json& doc, const std::string& expected) {
  if (!doc.is_object()) invalid("expected a " + expected + " document", "/");
  const auto it = doc.find("schema");
  if (it == doc.end() || !it->is_string())
    throw Error(ErrorCode::SchemaVersionUnknown, "document has no schema tag", "/schema");
  if (*it != expected)
    throw Error(ErrorCode::SchemaVersionUnknown,
                "schema '" + it->get<std::string>() + "' is not '" + expected + "'", "/schema");
}

Json polyline_json(const Polyline& line) {
  Json arr = Json::array();
  for (const auto& p : line) arr.push_back({p.x(), p.y()});
  return arr;
}

Polyline polyline_from_json(const Json& arr, const std::string& where) {
  need_array(arr, where);
  Polyline out;
  for (std::size_t i = 0; i < arr.size(); ++i) out.push_back(pair(arr[i], at(where, i)));
  return out;
}

// ---- sketch ----

Json to_json(const Sketch& sketch) {
  Json doc = {{"schema", kSketchSchema},
              {"image", {{"width", sketch.image_width}, {"height", sketch.image_height}}}};
  Json strokes = Json::array();
  for (const auto& s : sketch.strokes) {
    Json pts = Json::array();
    for (const auto& p : s.points) pts.push_back({p.u, p.v});
    strokes.push_back({{"kind", to_string(s.kind)}, {"closed", s.closed}, {"points", pts}});
  }
  doc["strokes"] = strokes;
  put(doc, "language_note", sketch.language_note);
  if (!sketch.correspondences.empty()) {
    Json corr = Json::array();
    for (const auto& c : sketch.correspondences)
      corr.push_back({{"pixel", {c.pixel.u, c.pixel.v}}, {"world", {c.world.x(), c.world.y()}}});
    doc["correspondences"] = corr;
  }
  return doc;
}

Sketch sketch_from_json(const Json& doc) {
  expect_schema(doc, kSketchSchema);
  allow_keys(doc, {"schema", "image", "strokes", "language_note", "correspondences"}, "");
  Sketch sk;
  const Json& image = field(doc, "image", "");
  need_object(image, "/image");
  allow_keys(image, {"width", "height"}, "/image");
  sk.image_width = int(integer(image, "width", "/image"));
  sk.image_height = int(integer(image, "height", "/image"));
  if (sk.image_width <= 0 || sk.image_height <= 0) invalid("image dimensions must be positive", "/image");

  const Json& strokes = field(doc, "strokes", "");
  need_array(strokes, "/strokes");
  for (std::size_t s = 0; s < strokes.size(); ++s) {
    const std::string w = at("/strokes", s);
    const Json& js = strokes[s];
    need_object(js, w);
    allow_keys(js, {"kind", "closed", "points", "is_path", "is_area"}, w);
    Stroke st;
    const std::string kind = text(js, "kind", w);
    if (kind == "path") st.kind = StrokeKind::Path;
    else if (kind == "area") st.kind = StrokeKind::Area;
    else invalid("stroke kind must be 'path' or 'area'", at(w, "kind"));
    st.closed = js.contains("closed") ? boolean(js, "closed", w) : false;
    if (js.contains("is_path") || js.contains("is_area")) {
      const bool p = js.contains("is_path") && boolean(js, "is_path", w);
      const bool a = js.contains("is_area") && boolean(js, "is_area", w);
      if (!p && !a) invalid("stroke is neither a path nor an area", w);
      if (a != (st.kind == StrokeKind::Area)) invalid("is_area contradicts kind", at(w, "is_area"));
    }
    const Json& pts = field(js, "points", w);
    need_array(pts, at(w, "points"));
    if (pts.empty()) invalid("stroke has no points", at(w, "points"));
    for (std::size_t i = 0; i < pts.size(); ++i) {
      const Vec2 p = pair(pts[i], at(at(w, "points"), i));
      st.points.push_back({p.x(), p.y()});
    }
    sk.strokes.push_back(std::move(st));
  }
  if (doc.contains("language_note")) sk.language_note = text(doc, "language_note", "");
  if (doc.contains("correspondences")) {
    const Json& corr = doc["correspondences"];
    need_array(corr, "/correspondences");
    for (std::size_t i = 0; i < corr.size(); ++i) {
      const std::string w = at("/correspondences", i);
      need_object(corr[i], w);
      allow_keys(corr[i], {"pixel", "world"}, w);
      const Vec2 px = pair(field(corr[i], "pixel", w), at(w, "pixel"));
      sk.correspondences.push_back({{px.x(), px.y()}, pair(field(corr[i], "world", w), at(w, "world"))});
    }
  }
  validate(sk);
  return sk;
}

// ---- scale / scene ----

Json to_json(const MetricScale& scale) {
  if (const auto* h = std::get_if<Homography>(&scale)) {
    Json m = Json::array();
    for (int r = 0; r < 3; ++r) m.push_back({h->matrix()(r, 0), h->matrix()(r, 1), h->matrix()(r, 2)});
    return {{"kind", "homography"}, {"matrix", m}};
  }
  if (const auto* p = std::get_if<PixelProxy>(&scale)) return {{"kind", "pixel_proxy"}, {"kappa", p->kappa}};
  return {{"kind", "none"}};
}

MetricScale scale_from_json(const Json& doc, const std::string& where) {
  need_object(doc, where);
  const std::string kind = text(doc, "kind", where);
  if (kind == "none") {
    allow_keys(doc, {"kind"}, where);
    return std::monostate{};
  }
  if (kind == "pixel_proxy") {
    allow_keys(doc, {"kind", "kappa"}, where);
    const double k = number(doc, "kappa", where);
    if (!(k > 0.0)) invalid("kappa must be positive", at(where, "kappa"));
    return PixelProxy{k};
  }
  if (kind == "homography") {
    allow_keys(doc, {"kind", "matrix"}, where);
    const Json& m = field(doc, "matrix", where);
    const std::string mw = at(where, "matrix");
    if (!m.is_array() || m.size() != 3) invalid("matrix must have 3 rows", mw);
    Eigen::Matrix3d h;
    for (int r = 0; r < 3; ++r) {
      if (!m[r].is_array() || m[r].size() != 3) invalid("matrix rows must have 3 entries", at(mw, r));
      for (int c = 0; c < 3; ++c) h(r, c) = number(m[r][c], at(at(mw, r), c));
    }
    try {
      return Homography(h);
    } catch (const Error& e) {
      throw Error(ErrorCode::ValidationFailed, e.what(), mw);
    }
  }
  invalid("scale kind must be none, pixel_proxy or homography", at(where, "kind"));
}

Json to_json(const SceneGrid& g) {
  Json rows = Json::array();
  Json clr = Json::array();
  for (int j = 0; j < g.height; ++j) {
    Json runs = Json::array();
    std::uint8_t state = 0;
    int run = 0;
    for (int i = 0; i < g.width; ++i) {
      const std::uint8_t v = g.occupancy[g.flat(i, j)] ? 1 : 0;
      if (v != state) {
        runs.push_back(run);
        state = v;
        run = 0;
      }
      ++run;
    }
    runs.push_back(run);
    rows.push_back(runs);

    for (int i = 0; i < g.width;) {
      const double c = g.clearance[g.flat(i, j)];
      if (std::isnan(c)) {
        ++i;
        continue;
      }
      int k = i + 1;
      while (k < g.width && g.clearance[g.flat(k, j)] == c) ++k;
      clr.push_back({i, j, k - i, c});
      i = k;
    }
  }
  Json doc = {{"schema", kSceneSchema},
              {"resolution_m", g.resolution_m},
              {"width", g.width},
              {"height", g.height},
              {"occupancy", rows},
              {"clearance", clr},
              {"scale", to_json(g.scale)},
              {"image", {{"width", g.image_width}, {"height", g.image_height}}},
              {"start_pose", {{"x", g.start_pose.x}, {"y", g.start_pose.y}, {"theta_deg", g.start_pose.theta_deg}}},
              {"platform",
               {{"footprint_radius_m", g.platform.footprint_radius_m}, {"tool_width_m", g.platform.tool_width_m}}}};
  put(doc, "image_ref", g.scene_image_ref);
  return doc;
}

SceneGrid scene_from_json(const Json& doc) {
  expect_schema(doc, kSceneSchema);
  allow_keys(doc,
             {"schema", "resolution_m", "width", "height", "occupancy", "clearance", "scale", "image", "start_pose",
              "platform", "image_ref"},
             "");
  SceneGrid g;
  g.resolution_m = number(doc, "resolution_m", "");
  const std::int64_t w = integer(doc, "width", ""), h = integer(doc, "height", "");
  if (w <= 0 || h <= 0 || w * h > 50'000'000) invalid("grid dimensions out of range", "/width");
  g.width = int(w);
  g.height = int(h);
  const std::size_t n = std::size_t(w * h);
  g.occupancy.assign(n, 0);
  g.clearance.assign(n, std::numeric_limits<double>::quiet_NaN());

  const Json& rows = field(doc, "occupancy", "");
  need_array(rows, "/occupancy");
  if (rows.size() != std::size_t(h)) invalid("occupancy needs one row per grid row", "/occupancy");
  for (int j = 0; j < g.height; ++j) {
    const std::string rw = at("/occupancy", std::size_t(j));
    need_array(rows[j], rw);
    int i = 0;
    for (std::size_t r = 0; r < rows[j].size(); ++r) {
      const std::int64_t len = integer(rows[j][r], at(rw, r));
      if (len < 0 || i + len > g.width) invalid("run overflows the row", at(rw, r));
      for (std::int64_t k = 0; k < len; ++k, ++i) g.occupancy[g.flat(i, j)] = std::uint8_t(r % 2);
    }
    if (i != g.width) invalid("runs do not add up to the grid width", rw);
  }

  const Json& clr = field(doc, "clearance", "");
  need_array(clr, "/clearance");
  for (std::size_t k = 0; k < clr.size(); ++k) {
    const std::string cw = at("/clearance", k);
    if (!clr[k].is_array() || clr[k].size() != 4) invalid("clearance runs are [i, j, count, height]", cw);
    const std::int64_t i0 = integer(clr[k][0], at(cw, 0)), j = integer(clr[k][1], at(cw, 1));
    const std::int64_t len = integer(clr[k][2], at(cw, 2));
    const double c = number(clr[k][3], at(cw, 3));
    if (j < 0 || j >= h || i0 < 0 || len <= 0 || i0 + len > w) invalid("clearance run outside the grid", cw);
    for (std::int64_t i = i0; i < i0 + len; ++i) g.clearance[g.flat(int(i), int(j))] = c;
  }

  g.scale = scale_from_json(field(doc, "scale", ""), "/scale");
  const Json& image = field(doc, "image", "");
  need_object(image, "/image");
  allow_keys(image, {"width", "height"}, "/image");
  g.image_width = int(integer(image, "width", "/image"));
  g.image_height = int(integer(image, "height", "/image"));

  const Json& sp = field(doc, "start_pose", "");
  need_object(sp, "/start_pose");
  allow_keys(sp, {"x", "y", "theta_deg"}, "/start_pose");
  g.start_pose = {number(sp, "x", "/start_pose"), number(sp, "y", "/start_pose"),
                  number(sp, "theta_deg", "/start_pose")};

  const Json& pf = field(doc, "platform", "");
  need_object(pf, "/platform");
  allow_keys(pf, {"footprint_radius_m", "tool_width_m"}, "/platform");
  g.platform.footprint_radius_m = number(pf, "footprint_radius_m", "/platform");
  g.platform.tool_width_m = number(pf, "tool_width_m", "/platform");
  if (!(g.platform.footprint_radius_m > 0.0)) invalid("footprint radius must be positive", "/platform/footprint_radius_m");
  if (!(g.platform.tool_width_m > 0.0)) invalid("tool width must be positive", "/platform/tool_width_m");

  if (doc.contains("image_ref")) g.scene_image_ref = text(doc, "image_ref", "");
  g.validate();
  return g;
}

// ---- params / noise ----

Json to_json(const ControlParams& p) {
  return {{"schema", kParamsSchema},
          {"l_max_m", p.l_max_m},
          {"theta_turn_deg", p.theta_turn_deg},
          {"hysteresis_deg", p.hysteresis_deg},
          {"d_step_m", p.d_step_m},
          {"d_safety_m", p.d_safety_m},
          {"h_clearance_m", p.h_clearance_m},
          {"kappa", p.kappa},
          {"merge_travel_m", p.merge_travel_m},
          {"v_mps", p.v_mps},
          {"a_brake_mps2", p.a_brake_mps2},
          {"t_latency_s", p.t_latency_s},
          {"delta_sensor_m", p.delta_sensor_m},
          {"lane_spacing_m", p.lane_spacing_m},
          {"turn_window_cap_m", p.turn_window_cap_m},
          {"turn_set", p.turn_set}};
}

ControlParams params_from_json(const Json& doc) {
  expect_schema(doc, kParamsSchema);
  ControlParams p;
  const std::pair<const char*, double*> scalars[] = {
      {"l_max_m", &p.l_max_m},         {"theta_turn_deg", &p.theta_turn_deg},
      {"hysteresis_deg", &p.hysteresis_deg}, {"d_step_m", &p.d_step_m},
      {"d_safety_m", &p.d_safety_m},   {"h_clearance_m", &p.h_clearance_m},
      {"kappa", &p.kappa},             {"merge_travel_m", &p.merge_travel_m},
      {"v_mps", &p.v_mps},             {"a_brake_mps2", &p.a_brake_mps2},
      {"t_latency_s", &p.t_latency_s}, {"delta_sensor_m", &p.delta_sensor_m},
      {"lane_spacing_m", &p.lane_spacing_m}, {"turn_window_cap_m", &p.turn_window_cap_m},
  };
  for (auto it = doc.begin(); it != doc.end(); ++it) {
    const std::string& key = it.key();
    if (key == "schema") continue;
    if (key == "turn_set") {
      need_array(*it, "/turn_set");
      p.turn_set.clear();
      for (std::size_t i = 0; i < it->size(); ++i) p.turn_set.push_back(number((*it)[i], at("/turn_set", i)));
      continue;
    }
    bool known = false;
    for (const auto& [name, dst] : scalars)
      if (key == name) {
        *dst = number(*it, "/" + key);
        known = true;
      }
    if (!known) invalid("unknown field '" + key + "'", "/" + key);
  }
  validate(p);
  return p;
}

Json to_json(const NoiseModel& n) {
  return {{"sigma_long_m", n.sigma_long_m},
          {"sigma_lat_m", n.sigma_lat_m},
          {"sigma_turn_deg", n.sigma_turn_deg},
          {"seed", n.seed}};
}

NoiseModel noise_from_json(const Json& doc, const std::string& where) {
  need_object(doc, where);
  allow_keys(doc, {"sigma_long_m", "sigma_lat_m", "sigma_turn_deg", "seed"}, where);
  NoiseModel n;
  if (doc.contains("sigma_long_m")) n.sigma_long_m = number(doc, "sigma_long_m", where);
  if (doc.contains("sigma_lat_m")) n.sigma_lat_m = number(doc, "sigma_lat_m", where);
  if (doc.contains("sigma_turn_deg")) n.sigma_turn_deg = number(doc, "sigma_turn_deg", where);
  if (doc.contains("seed")) n.seed = seed_value(doc["seed"], at(where, "seed"));
  if (n.sigma_long_m < 0.0 || n.sigma_lat_m < 0.0 || n.sigma_turn_deg < 0.0)
    invalid("noise standard deviations must be >= 0", where);
  return n;
}

// ---- trial ----

Json to_json(const Segment& s) {
  Json px = Json::array();
  for (const auto& p : s.pixel_points) px.push_back({p.u, p.v});
  return {{"index", s.index},
          {"stroke", s.stroke_index},
          {"length_m", s.length_m},
          {"delta_yaw_deg", s.delta_yaw_deg},
          {"mean_curvature", s.mean_curvature},
          {"corners", s.corner_count},
          {"corner_indices", s.corner_indices},
          {"end_cause", to_string(s.end_cause)},
          {"is_path", s.is_path},
          {"is_area", s.is_area},
          {"is_closed", s.is_closed},
          {"entry_heading_deg", s.entry_heading_deg},
          {"exit_heading_deg", s.exit_heading_deg},
          {"pixel_points", px},
          {"world", polyline_json(s.world_polyline)}};
}

Json to_json(const PolicyDecision& d) {
  return {{"action", to_string(d.action)}, {"confidence", d.confidence}, {"rule", to_string(d.rule_fired)}};
}

namespace {

Json to_json(const SegmentOutcome& o) {
  Json j = {{"segment", o.segment_index},
            {"decision", to_json(o.decision)},
            {"termination", to_string(o.termination)},
            {"trace_begin", o.trace_begin},
            {"trace_end", o.trace_end},
            {"commanded_turn_deg", o.commanded_turn_deg},
            {"steps", o.steps},
            {"runtime_delta_yaw_deg", o.runtime_delta_yaw_deg},
            {"success", o.success},
            {"adherent", o.adherent}};
  put(j, "advance_begin", o.advance_begin);
  put(j, "coverage", o.coverage);
  put(j, "lanes", o.lanes);
  return j;
}

Json to_json(const Event& e) {
  Json j = {{"kind", to_string(e.kind)}, {"segment", e.segment}, {"pose", e.pose}, {"eta", e.eta}};
  put(j, "distance_m", e.distance_m);
  put(j, "delta_deg", e.delta_deg);
  put(j, "h_est_m", e.h_est_m);
  put(j, "detail", e.detail);
  put(j, "confidence", e.confidence);
  put(j, "rule", e.rule);
  return j;
}

}  // namespace

Json to_json(const TrialResult& t) {
  Json segs = Json::array(), outs = Json::array(), events = Json::array(), enc = Json::array(),
       trace = Json::array();
  for (const auto& s : t.segments) segs.push_back(to_json(s));
  for (const auto& o : t.outcomes) outs.push_back(to_json(o));
  for (const auto& e : t.events) events.push_back(to_json(e));
  for (const auto& e : t.encounters) {
    Json j = {{"segment", e.segment}, {"result", to_string(e.result)}, {"handled", e.handled}};
    put(j, "h_est_m", e.h_est_m);
    enc.push_back(j);
  }
  for (const auto& p : t.trace) trace.push_back({p.x, p.y, p.theta_deg});
  return {{"schema", kTrialSchema},
          {"policy", t.policy},
          {"noise", to_json(t.noise)},
          {"steps_used", t.steps_used},
          {"step_budget", t.step_budget},
          {"safety_violation", t.safety_violation},
          {"timed_out", t.timed_out},
          {"segments", segs},
          {"outcomes", outs},
          {"events", events},
          {"encounters", enc},
          {"trace", trace}};
}

// ---- results ----

Json to_json(const TrialRow& r) {
  Json j = {{"scene_type", r.scene_type},
            {"category", r.category},
            {"seed", r.seed},
            {"trial", r.trial},
            {"corners", r.corners},
            {"segments", r.segments},
            {"executed", r.executed},
            {"successes", r.successes},
            {"adherent", r.adherent},
            {"ftcr", r.ftcr},
            {"ftspar", r.ftspar},
            {"dtw", r.dtw},
            {"dtw_per_m", r.dtw_per_m},
            {"encounters", r.encounters},
            {"encounters_handled", r.encounters_handled},
            {"turn_set", r.turn_set}};
  put(j, "failure_third", r.failure_third);
  return j;
}

TrialRow row_from_json(const Json& j, const std::string& w) {
  need_object(j, w);
  allow_keys(j,
             {"scene_type", "category", "seed", "trial", "corners", "segments", "executed", "successes", "adherent",
              "ftcr", "ftspar", "dtw", "dtw_per_m", "encounters", "encounters_handled", "turn_set", "failure_third"},
             w);
  TrialRow r;
  r.scene_type = text(j, "scene_type", w);
  r.category = text(j, "category", w);
  r.seed = seed_value(field(j, "seed", w), at(w, "seed"));
  r.trial = count(j, "trial", w);
  r.corners = count(j, "corners", w);
  r.segments = count(j, "segments", w);
  r.executed = count(j, "executed", w);
  r.successes = count(j, "successes", w);
  r.adherent = count(j, "adherent", w);
  r.ftcr = boolean(j, "ftcr", w);
  r.ftspar = boolean(j, "ftspar", w);
  r.dtw = number(j, "dtw", w);
  r.dtw_per_m = number(j, "dtw_per_m", w);
  r.encounters = count(j, "encounters", w);
  r.encounters_handled = count(j, "encounters_handled", w);
  r.turn_set = text(j, "turn_set", w);
  if (j.contains("failure_third")) {
    const std::int64_t t = integer(j, "failure_third", w);
    if (t < 0 || t > 2) invalid("failure third must be 0, 1 or 2", at(w, "failure_third"));
    r.failure_third = int(t);
  }
  if (r.executed > r.segments || r.successes > r.executed || r.adherent > r.successes ||
      r.encounters_handled > r.encounters)
    invalid("row counts are inconsistent", w);
  return r;
}

Json to_json(const Rates& r) {
  Json j = {{"trials", r.trials},
            {"segments", r.segments},
            {"successes", r.successes},
            {"adherent", r.adherent},
            {"tasks_completed", r.tasks_completed},
            {"tasks_adherent", r.tasks_adherent},
            {"encounters", r.encounters},
            {"encounters_handled", r.encounters_handled},
            {"mean_dtw_per_m", r.mean_dtw_per_m}};
  put(j, "sssr", r.sssr);
  put(j, "ssspar", r.ssspar);
  put(j, "ssspar_over_executed", r.ssspar_over_executed);
  put(j, "ftcr", r.ftcr);
  put(j, "ftspar", r.ftspar);
  put(j, "uoms", r.uoms);
  return j;
}

Json to_json(const MetricsReport& m) {
  Json cells = Json::array(), cats = Json::array();
  for (const auto& c : m.cells)
    cells.push_back({{"scene_type", c.scene_type}, {"category", c.category}, {"rates", to_json(c.rates)}});
  for (const auto& c : m.by_category)
    cats.push_back({{"scene_type", c.scene_type}, {"category", c.category}, {"rates", to_json(c.rates)}});
  return {{"overall", to_json(m.overall)},
          {"cells", cells},
          {"by_category", cats},
          {"failure_thirds", m.failure_thirds}};
}

Json to_json(const ResultsFile& r) {
  Json rows = Json::array();
  for (const auto& row : r.rows) rows.push_back(to_json(row));
  Json params = to_json(r.params);
  params.erase("schema");
  return {{"schema", kResultsSchema},
          {"params", params},
          {"noise", to_json(r.noise)},
          {"tolerance_profile", r.tolerance_profile},
          {"rows", rows},
          {"aggregate", to_json(r.report)}};
}

ResultsFile results_from_json(const Json& doc) {
  expect_schema(doc, kResultsSchema);
  allow_keys(doc, {"schema", "params", "noise", "tolerance_profile", "rows", "aggregate"}, "");
  ResultsFile r;
  Json params = field(doc, "params", "");
  need_object(params, "/params");
  params["schema"] = kParamsSchema;
  try {
    r.params = params_from_json(params);
  } catch (const Error& e) {
    throw Error(e.code(), e.what(), "/params" + e.location());
  }
  r.noise = noise_from_json(field(doc, "noise", ""), "/noise");
  r.tolerance_profile = text(doc, "tolerance_profile", "");
  if (r.tolerance_profile != "floor" && r.tolerance_profile != "tabletop")
    invalid("tolerance profile must be floor or tabletop", "/tolerance_profile");
  const Json& rows = field(doc, "rows", "");
  need_array(rows, "/rows");
  if (rows.empty()) invalid("results carry no rows", "/rows");
  for (std::size_t i = 0; i < rows.size(); ++i) r.rows.push_back(row_from_json(rows[i], at("/rows", i)));
  r.report = aggregate(r.rows);
  if (to_json(r.report) != field(doc, "aggregate", ""))
    invalid("aggregate does not match the rows", "/aggregate");
  return r;
}

// ---- scenario ----

Json to_json(const ScenarioSpec& s) {
  return {{"category", to_string(s.category)},
          {"scene_type", to_string(s.scene_type)},
          {"seed", s.seed},
          {"angles", to_string(s.angles)},
          {"clutter", s.clutter}};
}

ScenarioSpec scenario_spec_from_json(const Json& doc, const std::string& w) {
  need_object(doc, w);
  allow_keys(doc, {"category", "scene_type", "seed", "angles", "clutter"}, w);
  ScenarioSpec s;
  const auto cat = category_from_string(text(doc, "category", w));
  if (!cat) invalid("category must be short, medium or long", at(w, "category"));
  s.category = *cat;
  if (doc.contains("scene_type")) {
    const auto t = scene_type_from_string(text(doc, "scene_type", w));
    if (!t) invalid("unknown scene type", at(w, "scene_type"));
    s.scene_type = *t;
  }
  if (doc.contains("seed")) s.seed = seed_value(doc["seed"], at(w, "seed"));
  if (doc.contains("angles")) {
    const auto a = angle_profile_from_string(text(doc, "angles", w));
    if (!a) invalid("angles must be lattice or free", at(w, "angles"));
    s.angles = *a;
  }
  if (doc.contains("clutter")) s.clutter = boolean(doc, "clutter", w);
  return s;
}

Json to_json(const Scenario& s) {
  Json j = {{"schema", kScenarioSchema},
            {"spec", to_json(s.spec)},
            {"scene", to_json(s.scene)},
            {"sketch", to_json(s.sketch)},
            {"reference", polyline_json(s.reference)},
            {"corners", s.corners}};
  if (s.area) j["area"] = polyline_json(*s.area);
  return j;
}

// ---- files ----

namespace {

template <typename F>
auto nested(const Json& doc, const char* key, F load) {
  try {
    return load(field(doc, key, ""));
  } catch (const Error& e) {
    throw Error(e.code(), e.what(), "/" + std::string(key) + (e.location() == "/" ? "" : e.location()));
  }
}

}  // namespace

Sketch load_sketch(const std::filesystem::path& path) {
  const Json doc = read_json(path);
  if (doc.is_object() && doc.value("schema", "") == kScenarioSchema) return nested(doc, "sketch", sketch_from_json);
  return sketch_from_json(doc);
}

void save_sketch(const std::filesystem::path& path, const Sketch& sketch) { write_text(path, dump(to_json(sketch))); }

SceneGrid load_scene(const std::filesystem::path& path) {
  const Json doc = read_json(path);
  if (doc.is_object() && doc.value("schema", "") == kScenarioSchema) return nested(doc, "scene", scene_from_json);
  return scene_from_json(doc);
}

void save_scene(const std::filesystem::path& path, const SceneGrid& scene) { write_text(path, dump(to_json(scene))); }

ControlParams load_params(const std::filesystem::path& path) { return params_from_json(read_json(path)); }

void save_params(const std::filesystem::path& path, const ControlParams& params) {
  write_text(path, dump(to_json(params)));
}

ResultsFile read_results(const std::filesystem::path& path) { return results_from_json(read_json(path)); }

void write_results(const std::filesystem::path& path, const ResultsFile& results) {
  write_text(path, dump(to_json(results)));
}

}  // namespace sketchact
