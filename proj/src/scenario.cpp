#include "sketchact/scenario.hpp"

#include "sketchact/executor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

namespace sketchact {

std::string_view to_string(LengthCategory c) {
  switch (c) {
    case LengthCategory::Short: return "short";
    case LengthCategory::Medium: return "medium";
    case LengthCategory::Long: return "long";
  }
  return "?";
}

std::string_view to_string(SceneType t) {
  switch (t) {
    case SceneType::Bedroom: return "bedroom";
    case SceneType::Kitchen: return "kitchen";
    case SceneType::LivingRoom: return "living_room";
    case SceneType::Bathroom: return "bathroom";
    case SceneType::Corridor: return "corridor";
    case SceneType::Staircase: return "staircase";
    case SceneType::Region: return "region";
    case SceneType::Other: return "other";
  }
  return "?";
}

std::string_view to_string(AngleProfile p) { return p == AngleProfile::Lattice ? "lattice" : "free"; }

std::optional<LengthCategory> category_from_string(std::string_view s) {
  for (auto c : kAllCategories)
    if (to_string(c) == s) return c;
  return std::nullopt;
}

std::optional<SceneType> scene_type_from_string(std::string_view s) {
  for (auto t : kAllSceneTypes)
    if (to_string(t) == s) return t;
  return std::nullopt;
}

std::optional<AngleProfile> angle_profile_from_string(std::string_view s) {
  if (s == "lattice") return AngleProfile::Lattice;
  if (s == "free") return AngleProfile::Free;
  return std::nullopt;
}

std::pair<int, int> corner_band(LengthCategory c) {
  switch (c) {
    case LengthCategory::Short: return {0, 2};
    case LengthCategory::Medium: return {3, 5};
    case LengthCategory::Long: return {6, 9};
  }
  return {0, 0};
}

LengthCategory category_for_corners(std::size_t corners) {
  if (corners <= 2) return LengthCategory::Short;
  if (corners <= 5) return LengthCategory::Medium;
  return LengthCategory::Long;
}

std::size_t path_corner_count(const std::vector<Segment>& segments) {
  std::size_t n = 0;
  for (const auto& s : segments)
    if (s.is_path) n += s.corner_count;
  return n;
}

namespace {

constexpr int kImageW = 640;
constexpr int kImageH = 480;
constexpr double kWallMargin = 0.12;   // extra room between the footprint and walls
constexpr double kFurnitureGap = 0.15;  // extra room between the footprint and furniture
constexpr double kClutterProb = 0.55;
constexpr double kClutterGapLo = 0.02;
constexpr double kClutterGapHi = 0.10;
constexpr double kSeparation = 0.10;  // keeps obstacle regions from touching

struct Box {
  Vec2 lo;
  Vec2 hi;
  std::optional<double> clearance;
};

struct Template {
  double w;
  double h;
  std::optional<double> clearance;
};

struct Room {
  double w;
  double h;
  std::vector<Template> furniture;
  double table_prob;
};

Room room_for(SceneType t) {
  switch (t) {
    case SceneType::Bedroom: return {5.0, 4.5, {{2.0, 1.6, 0.25}, {0.45, 0.45, {}}, {1.2, 0.6, {}}, {1.0, 0.6, 0.7}}, 0.2};
    case SceneType::Kitchen: return {5.0, 4.0, {{2.4, 0.6, {}}, {0.6, 1.8, {}}, {0.7, 0.7, {}}}, 0.35};
    case SceneType::LivingRoom:
      return {6.0, 5.0, {{2.0, 0.9, {}}, {1.0, 0.6, 0.4}, {1.6, 0.45, {}}, {0.8, 0.8, {}}}, 0.3};
    case SceneType::Bathroom: return {3.6, 3.2, {{1.7, 0.75, {}}, {0.6, 0.5, {}}, {0.45, 0.7, {}}}, 0.1};
    case SceneType::Corridor: return {8.0, 2.6, {{1.0, 0.4, {}}, {0.8, 0.35, {}}}, 0.15};
    case SceneType::Staircase: return {7.0, 3.0, {}, 0.0};
    case SceneType::Region: return {5.0, 5.0, {{1.2, 0.4, {}}, {0.5, 0.5, {}}}, 0.15};
    case SceneType::Other: return {5.0, 5.0, {{0.6, 0.6, {}}, {1.0, 0.4, {}}, {0.4, 0.9, 0.6}}, 0.25};
  }
  return {5.0, 5.0, {}, 0.0};
}

double box_point_distance(const Box& b, const Vec2& p) {
  const double dx = std::max({b.lo.x() - p.x(), 0.0, p.x() - b.hi.x()});
  const double dy = std::max({b.lo.y() - p.y(), 0.0, p.y() - b.hi.y()});
  return std::hypot(dx, dy);
}

bool segment_hits_box(const Vec2& a, const Vec2& b, const Box& box) {
  double t0 = 0.0, t1 = 1.0;
  const Vec2 d = b - a;
  for (int k = 0; k < 2; ++k) {
    if (std::abs(d[k]) < 1e-15) {
      if (a[k] < box.lo[k] || a[k] > box.hi[k]) return false;
      continue;
    }
    double u0 = (box.lo[k] - a[k]) / d[k], u1 = (box.hi[k] - a[k]) / d[k];
    if (u0 > u1) std::swap(u0, u1);
    t0 = std::max(t0, u0);
    t1 = std::min(t1, u1);
    if (t0 > t1) return false;
  }
  return true;
}

// Exact distance between a segment and an axis-aligned box.
double segment_box_distance(const Vec2& a, const Vec2& b, const Box& box) {
  if (segment_hits_box(a, b, box)) return 0.0;
  double d = std::min(box_point_distance(box, a), box_point_distance(box, b));
  for (const Vec2& c : {box.lo, Vec2(box.hi.x(), box.lo.y()), box.hi, Vec2(box.lo.x(), box.hi.y())})
    d = std::min(d, point_segment_distance(c, a, b));
  return d;
}

// Grows a box outward to cell boundaries so the rasterized cells and the
// geometric box coincide.
Box snapped(const Box& b, double res) {
  Box out = b;
  out.lo = {res * std::floor(b.lo.x() / res + 1e-9), res * std::floor(b.lo.y() / res + 1e-9)};
  out.hi = {res * std::ceil(b.hi.x() / res - 1e-9), res * std::ceil(b.hi.y() / res - 1e-9)};
  return out;
}

struct Leg {
  Vec2 a;
  Vec2 b;
  double len() const { return (b - a).norm(); }
  Vec2 dir() const { return (b - a) / len(); }
};

class Builder {
 public:
  Builder(const ScenarioSpec& spec, const ControlParams& params, std::uint64_t seed)
      : spec_(spec), params_(params), rng_(seed), room_(room_for(spec.scene_type)) {}

  Scenario build();

 private:
  double radius() const { return scene_.platform.footprint_radius_m; }
  double quantized(double lo, double hi) { return 0.05 * rng_.uniform_int(int(lo / 0.05 + 0.5), int(hi / 0.05 + 0.5)); }

  bool inside_room(const Vec2& p, double margin) const {
    return p.x() >= margin && p.y() >= margin && p.x() <= room_.w - margin && p.y() <= room_.h - margin;
  }

  bool leg_clear_of(const Leg& leg, const Box& box, double gap) const {
    const Vec2 ext = leg.b + (params_.d_safety_m + params_.d_step_m) * leg.dir();
    return segment_box_distance(leg.a, ext, box) >= radius() + gap;
  }

  bool leg_fits(const Leg& leg) const {
    const double m = radius() + kWallMargin;
    if (!inside_room(leg.a, m) || !inside_room(leg.b, m)) return false;
    const Vec2 ext = leg.b + (params_.d_safety_m + params_.d_step_m) * leg.dir();
    if (!inside_room(ext, radius() + 0.01)) return false;
    for (const auto& box : boxes_)
      if (!leg_clear_of(leg, box, kFurnitureGap)) return false;
    return true;
  }

  bool box_fits(const Box& box, double path_gap, double separation) const {
    if (box.lo.x() < 0.0 || box.lo.y() < 0.0 || box.hi.x() > room_.w || box.hi.y() > room_.h) return false;
    for (const auto& other : boxes_) {
      const Box grown{other.lo - Vec2::Constant(separation), other.hi + Vec2::Constant(separation), {}};
      if (!(box.hi.x() < grown.lo.x() || box.lo.x() > grown.hi.x() || box.hi.y() < grown.lo.y() ||
            box.lo.y() > grown.hi.y()))
        return false;
    }
    for (const auto& leg : legs_)
      if (!leg_clear_of(leg, box, path_gap)) return false;
    if (area_) {
      const Box grown{area_lo_ - Vec2::Constant(0.5), area_hi_ + Vec2::Constant(0.5), {}};
      if (!(box.hi.x() < grown.lo.x() || box.lo.x() > grown.hi.x() || box.hi.y() < grown.lo.y() ||
            box.lo.y() > grown.hi.y()))
        return false;
    }
    return true;
  }

  void place(const Box& box) {
    boxes_.push_back(box);
    scene_.fill_rect(box.lo.x(), box.lo.y(), box.hi.x(), box.hi.y(), box.clearance);
  }

  bool make_area();
  bool walk_path();
  void place_furniture();
  void place_table();
  void place_clutter();
  Sketch render() const;

  const ScenarioSpec& spec_;
  const ControlParams& params_;
  RandomStream rng_;
  Room room_;
  SceneGrid scene_;
  std::vector<Box> boxes_;  // static obstacles known while walking
  std::vector<Leg> legs_;
  int corners_ = 0;
  std::optional<Polyline> area_;
  Vec2 area_lo_, area_hi_;
  Vec2 path_start_;
  double path_heading_ = 0.0;
  bool reverse_ = false;
};

bool Builder::make_area() {
  const double aw = quantized(0.8, 1.6), ah = quantized(0.6, 1.2);
  const double m = 0.6;
  if (room_.w - 2 * m < aw || room_.h - 2 * m < ah) return false;
  const double x0 = 0.05 * std::floor(rng_.uniform(m, room_.w - m - aw) / 0.05);
  const double y0 = 0.05 * std::floor(rng_.uniform(m, room_.h - m - ah) / 0.05);
  area_lo_ = {x0, y0};
  area_hi_ = {x0 + aw, y0 + ah};
  area_ = Polyline{{x0, y0}, {x0 + aw, y0}, {x0 + aw, y0 + ah}, {x0, y0 + ah}, {x0, y0}};

  Segment seg;
  seg.is_area = true;
  seg.is_path = false;
  seg.is_closed = true;
  seg.world_polyline = *area_;
  const SerpentinePlan plan = generate_serpentine_plan(seg, params_, 0);
  const LaneRun& first = plan.runs.front();
  path_start_ = first.start;
  path_heading_ = heading_deg(first.start - first.end);  // walk away from the lane, then reverse
  reverse_ = true;
  return true;
}

bool Builder::walk_path() {
  const auto [lo, hi] = corner_band(spec_.category);
  corners_ = rng_.uniform_int(lo, hi);
  const bool lattice = spec_.angles == AngleProfile::Lattice;

  Vec2 p = path_start_;
  double heading = path_heading_;
  if (!reverse_) {
    const double m = radius() + kWallMargin;
    p = {rng_.uniform(m, room_.w - m), rng_.uniform(m, room_.h - m)};
    heading = lattice ? 45.0 * rng_.uniform_int(-3, 4) : rng_.uniform(-180.0, 180.0);
  }

  auto add_leg = [&](double len, double turn) {
    for (int attempt = 0; attempt < 40; ++attempt) {
      const double t = attempt == 0 ? turn : -turn;  // try the mirrored turn once
      if (attempt > 1) {
        if (lattice) {
          const double mags[] = {45.0, 90.0};
          turn = mags[rng_.uniform_int(0, 1)] * (rng_.uniform() < 0.5 ? -1.0 : 1.0);
          len = quantized(0.35, 1.0);
        } else {
          turn = rng_.uniform(35.0, 100.0) * (rng_.uniform() < 0.5 ? -1.0 : 1.0);
          len = rng_.uniform(0.35, 1.0);
        }
      }
      const double h = wrap_deg(heading + (attempt <= 1 ? t : turn));
      const Leg leg{p, p + len * unit_from_deg(h)};
      if (!leg_fits(leg)) continue;
      legs_.push_back(leg);
      heading = h;
      p = leg.b;
      return true;
    }
    return false;
  };

  for (int k = 0; k <= corners_; ++k) {
    double turn = 0.0;
    if (k > 0) {
      if (lattice) {
        const double mags[] = {45.0, 90.0};
        turn = mags[rng_.uniform_int(0, 1)];
      } else {
        turn = rng_.uniform(35.0, 100.0);
      }
      if (rng_.uniform() < 0.5) turn = -turn;
    }
    const double len = lattice ? quantized(0.35, 1.0) : rng_.uniform(0.35, 1.0);
    if (k == 0) {
      const Leg leg{p, p + len * unit_from_deg(heading)};
      if (!leg_fits(leg)) return false;
      legs_.push_back(leg);
      p = leg.b;
    } else if (!add_leg(len, turn)) {
      return false;
    }
    // Gentle bends below the corner threshold split some free-profile legs.
    if (!lattice && rng_.uniform() < 0.5) {
      const double bend = rng_.uniform(8.0, 28.0) * (rng_.uniform() < 0.5 ? -1.0 : 1.0);
      const Leg leg{p, p + rng_.uniform(0.35, 0.8) * unit_from_deg(wrap_deg(heading + bend))};
      if (leg_fits(leg)) {
        legs_.push_back(leg);
        heading = wrap_deg(heading + bend);
        p = leg.b;
      }
    }
  }

  if (reverse_) {
    std::reverse(legs_.begin(), legs_.end());
    for (auto& leg : legs_) std::swap(leg.a, leg.b);
    for (const auto& leg : legs_)
      if (!leg_fits(leg)) return false;
  }
  return true;
}

void Builder::place_furniture() {
  for (const auto& t : room_.furniture) {
    for (int attempt = 0; attempt < 30; ++attempt) {
      const bool rotated = rng_.uniform() < 0.5;
      const double w = rotated ? t.h : t.w, h = rotated ? t.w : t.h;
      if (w > room_.w || h > room_.h) continue;
      Vec2 lo;
      if (rng_.uniform() < 0.6) {
        // against a wall
        switch (rng_.uniform_int(0, 3)) {
          case 0: lo = {rng_.uniform(0.0, room_.w - w), 0.0}; break;
          case 1: lo = {rng_.uniform(0.0, room_.w - w), room_.h - h}; break;
          case 2: lo = {0.0, rng_.uniform(0.0, room_.h - h)}; break;
          default: lo = {room_.w - w, rng_.uniform(0.0, room_.h - h)}; break;
        }
      } else {
        lo = {rng_.uniform(0.0, room_.w - w), rng_.uniform(0.0, room_.h - h)};
      }
      const Box box = snapped({lo, lo + Vec2(w, h), t.clearance}, scene_.resolution_m);
      if (!box_fits(box, kFurnitureGap + 0.1, kSeparation)) continue;
      place(box);
      break;
    }
  }
}

void Builder::place_table() {
  if (rng_.uniform() >= room_.table_prob) return;
  std::vector<std::size_t> candidates;
  for (std::size_t k = 0; k < legs_.size(); ++k)
    if (legs_[k].len() >= 0.7) candidates.push_back(k);
  if (candidates.empty()) return;
  const Leg& leg = legs_[candidates[std::size_t(rng_.uniform_int(0, int(candidates.size()) - 1))]];
  const Vec2 mid = 0.5 * (leg.a + leg.b);
  const double w = rng_.uniform(0.5, 0.8), h = rng_.uniform(0.5, 0.8);
  const Box box = snapped({mid - Vec2(0.5 * w, 0.5 * h), mid + Vec2(0.5 * w, 0.5 * h), 1.2}, scene_.resolution_m);
  if (box.lo.x() < 0.0 || box.lo.y() < 0.0 || box.hi.x() > room_.w || box.hi.y() > room_.h) return;
  if (box_point_distance(box, legs_.front().a) < radius() + 0.05) return;
  for (const auto& other : boxes_) {
    const Box grown{other.lo - Vec2::Constant(kSeparation), other.hi + Vec2::Constant(kSeparation), {}};
    if (!(box.hi.x() < grown.lo.x() || box.lo.x() > grown.hi.x() || box.hi.y() < grown.lo.y() ||
          box.lo.y() > grown.hi.y()))
      return;
  }
  place(box);
}

void Builder::place_clutter() {
  for (std::size_t k = 0; k < legs_.size(); ++k) {
    const Leg& leg = legs_[k];
    if (leg.len() < 0.5 || rng_.uniform() >= kClutterProb) continue;
    const Vec2 u = leg.dir();
    const Vec2 n(-u.y(), u.x());
    const double side = rng_.uniform() < 0.5 ? -1.0 : 1.0;
    const double gap = rng_.uniform(kClutterGapLo, kClutterGapHi);
    const double size = rng_.uniform(0.1, 0.25);
    const Vec2 anchor = leg.a + rng_.uniform(0.25, 0.75) * leg.len() * u;
    // Center offset so the nearest box point sits at radius + gap from the leg line.
    const double support = 0.5 * size * (std::abs(n.x()) + std::abs(n.y()));
    const Vec2 c = anchor + side * (radius() + gap + support) * n;
    const Vec2 lo = c - Vec2::Constant(0.5 * size);
    const Box box = snapped({lo, lo + Vec2(size, size), {}}, scene_.resolution_m);
    if (!box_fits(box, 0.01, kSeparation)) continue;
    place(box);
  }
}

Sketch Builder::render() const {
  const auto& h = std::get<Homography>(scene_.scale);
  Sketch sketch;
  sketch.image_width = kImageW;
  sketch.image_height = kImageH;

  Stroke path;
  auto push = [&](Stroke& s, const Vec2& w) { s.points.push_back(world_to_pixel(h, w)); };
  push(path, legs_.front().a);
  for (const auto& leg : legs_) {
    const int pieces = std::max(1, int(std::ceil(leg.len() / 0.05 - 1e-9)));
    for (int i = 1; i <= pieces; ++i) push(path, leg.a + (leg.b - leg.a) * (double(i) / pieces));
  }
  sketch.strokes.push_back(std::move(path));

  if (area_) {
    Stroke ring;
    ring.kind = StrokeKind::Area;
    ring.closed = true;
    const auto& pts = *area_;
    push(ring, pts.front());
    for (std::size_t k = 0; k + 1 < pts.size(); ++k) {
      const double len = (pts[k + 1] - pts[k]).norm();
      const int pieces = std::max(1, int(std::ceil(len / 0.05 - 1e-9)));
      for (int i = 1; i <= pieces; ++i) push(ring, pts[k] + (pts[k + 1] - pts[k]) * (double(i) / pieces));
    }
    sketch.strokes.push_back(std::move(ring));
  }
  return sketch;
}

Homography room_homography(double w, double h) {
  const std::vector<Correspondence> corr{
      {{40.0, 470.0}, {0.0, 0.0}},
      {{600.0, 470.0}, {w, 0.0}},
      {{480.0, 60.0}, {w, h}},
      {{160.0, 60.0}, {0.0, h}},
  };
  return estimate_homography(corr).h;
}

Scenario Builder::build() {
  scene_ = SceneGrid::empty(room_.w, room_.h);
  scene_.image_width = kImageW;
  scene_.image_height = kImageH;
  scene_.scale = room_homography(room_.w, room_.h);
  scene_.scene_image_ref = std::string(to_string(spec_.scene_type));

  if (spec_.scene_type == SceneType::Staircase) {
    // Stairs cannot be expressed in 2D: non-traversable flanks along the run.
    place({{0.0, 0.0}, {room_.w, 0.3}, {}});
    place({{0.0, room_.h - 0.3}, {room_.w, room_.h}, {}});
  }
  if (spec_.scene_type == SceneType::Region && !make_area())
    throw Error(ErrorCode::GenerationFailed, "room too small for the coverage area");
  if (!walk_path()) throw Error(ErrorCode::GenerationFailed, "no collision-free path");

  place_table();
  place_furniture();
  if (spec_.clutter) place_clutter();

  const Leg& first = legs_.front();
  scene_.start_pose = {first.a.x(), first.a.y(), heading_deg(first.b - first.a)};

  Scenario out;
  out.spec = spec_;
  out.sketch = render();
  out.reference.push_back(first.a);
  for (const auto& leg : legs_) out.reference.push_back(leg.b);
  out.area = area_;
  const auto segments = segment_sketch(out.sketch, params_, scene_.scale);
  out.corners = path_corner_count(segments);
  if (int(out.corners) != corners_) throw Error(ErrorCode::GenerationFailed, "corner count drifted");
  scene_.validate();
  out.scene = std::move(scene_);
  return out;
}

}  // namespace

Scenario generate_scenario(const ScenarioSpec& spec, const ControlParams& params) {
  const std::uint64_t base = derive_seed(spec.seed, std::uint64_t(spec.category) * 64 +
                                                        std::uint64_t(spec.scene_type) * 4 +
                                                        std::uint64_t(spec.angles));
  for (std::uint64_t attempt = 0; attempt < 200; ++attempt) {
    try {
      Builder builder(spec, params, derive_seed(base, attempt));
      return builder.build();
    } catch (const Error& e) {
      if (e.code() != ErrorCode::GenerationFailed) throw;
    }
  }
  throw Error(ErrorCode::GenerationFailed, "no valid scenario after 200 attempts for seed " + std::to_string(spec.seed));
}

}  // namespace sketchact
