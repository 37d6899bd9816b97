#include "sketchact/world.hpp"

#include <cmath>
#include <limits>

namespace sketchact {

namespace {
constexpr std::uint64_t kGolden = 0x9E3779B97F4A7C15ULL;
}

std::uint64_t mix64(std::uint64_t z) {
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

std::uint64_t derive_seed(std::uint64_t seed, std::uint64_t index) {
  return mix64(mix64(seed + kGolden) ^ (index * kGolden + 0x632BE59BD9B4E019ULL));
}

std::uint64_t RandomStream::next_u64() {
  ++counter_;
  return mix64(seed_ + counter_ * kGolden);
}

double RandomStream::uniform() { return double(next_u64() >> 11) * 0x1.0p-53; }

int RandomStream::uniform_int(int lo, int hi) {
  const auto span = std::uint64_t(std::int64_t(hi) - std::int64_t(lo) + 1);
  return lo + int(next_u64() % span);
}

double RandomStream::normal() {
  const double u1 = 1.0 - uniform();  // (0, 1]
  const double u2 = uniform();
  return std::sqrt(-2.0 * std::log(u1)) * std::cos(2.0 * kPi * u2);
}

std::string_view to_string(LowLevelCommand::Kind k) {
  switch (k) {
    case LowLevelCommand::Kind::Step: return "step";
    case LowLevelCommand::Kind::Rotate: return "rotate";
    case LowLevelCommand::Kind::Halt: return "halt";
    case LowLevelCommand::Kind::UnderManeuver: return "under_maneuver";
  }
  return "?";
}

Pose2 apply_command(const Pose2& pose, const LowLevelCommand& cmd, const NoiseModel& noise, RandomStream& rng) {
  const double e_long = noise.sigma_long_m * rng.normal();
  const double e_lat = noise.sigma_lat_m * rng.normal();
  const double e_turn = noise.sigma_turn_deg * rng.normal();

  Pose2 out = pose;
  switch (cmd.kind) {
    case LowLevelCommand::Kind::Step:
    case LowLevelCommand::Kind::UnderManeuver: {
      const double r = deg2rad(pose.theta_deg);
      const double c = std::cos(r), s = std::sin(r);
      const double d = cmd.distance_m + e_long;
      out.x = pose.x + d * c - e_lat * s;
      out.y = pose.y + d * s + e_lat * c;
      break;
    }
    case LowLevelCommand::Kind::Rotate:
      out.theta_deg = wrap_deg(pose.theta_deg + cmd.delta_deg + e_turn);
      break;
    case LowLevelCommand::Kind::Halt:
      break;
  }
  return out;
}

SceneGrid SceneGrid::empty(double width_m, double height_m, double resolution_m) {
  SceneGrid g;
  g.resolution_m = resolution_m;
  g.width = int(std::lround(width_m / resolution_m));
  g.height = int(std::lround(height_m / resolution_m));
  g.occupancy.assign(std::size_t(g.width) * std::size_t(g.height), 0);
  g.clearance.assign(g.occupancy.size(), std::numeric_limits<double>::quiet_NaN());
  return g;
}

std::optional<double> SceneGrid::clearance_at(int i, int j) const {
  if (!in_bounds(i, j)) return std::nullopt;
  const double c = clearance[flat(i, j)];
  if (std::isnan(c)) return std::nullopt;
  return c;
}

bool SceneGrid::passable(int i, int j, double h_clearance) const {
  if (!occupied(i, j)) return false;
  const auto c = clearance_at(i, j);
  return c && *c >= h_clearance;
}

CellIndex SceneGrid::cell_of(const Vec2& p) const {
  return {int(std::floor(p.x() / resolution_m)), int(std::floor(p.y() / resolution_m))};
}

Vec2 SceneGrid::cell_center(int i, int j) const { return {(i + 0.5) * resolution_m, (j + 0.5) * resolution_m}; }

void SceneGrid::fill_rect(double x0, double y0, double x1, double y1, std::optional<double> clearance_m) {
  for (int j = 0; j < height; ++j)
    for (int i = 0; i < width; ++i) {
      const Vec2 c = cell_center(i, j);
      if (c.x() < x0 || c.x() > x1 || c.y() < y0 || c.y() > y1) continue;
      occupancy[flat(i, j)] = 1;
      clearance[flat(i, j)] = clearance_m ? *clearance_m : std::numeric_limits<double>::quiet_NaN();
    }
}

void SceneGrid::validate() const {
  if (!(resolution_m >= 0.01 && resolution_m <= 0.25))
    throw Error(ErrorCode::ValidationFailed, "resolution must lie in [0.01, 0.25] m", "/resolution_m");
  if (width <= 0 || height <= 0) throw Error(ErrorCode::ValidationFailed, "grid must be non-empty", "/width");
  const std::size_t n = std::size_t(width) * std::size_t(height);
  if (occupancy.size() != n)
    throw Error(ErrorCode::ValidationFailed, "occupancy size does not match width x height", "/occupancy");
  if (clearance.size() != n)
    throw Error(ErrorCode::ValidationFailed, "clearance size does not match width x height", "/clearance");
  for (std::size_t k = 0; k < n; ++k) {
    if (std::isnan(clearance[k])) continue;
    if (!occupancy[k])
      throw Error(ErrorCode::ValidationFailed, "clearance annotated on a free cell",
                  "/clearance/" + std::to_string(k));
    if (!(clearance[k] >= 0.0) || !std::isfinite(clearance[k]))
      throw Error(ErrorCode::ValidationFailed, "clearance must be a finite non-negative height",
                  "/clearance/" + std::to_string(k));
  }
  if (!std::isfinite(start_pose.x) || !std::isfinite(start_pose.y) || !std::isfinite(start_pose.theta_deg))
    throw Error(ErrorCode::StartPoseInvalid, "start pose is not finite", "/start_pose");
  if (footprint_touches_occupied(*this, start_pose.position(), platform.footprint_radius_m))
    throw Error(ErrorCode::StartPoseInvalid, "start pose footprint overlaps an occupied cell", "/start_pose");
}

double distance_to_cell(const SceneGrid& scene, const Vec2& p, int i, int j) {
  const double r = scene.resolution_m;
  const double dx = std::max({i * r - p.x(), 0.0, p.x() - (i + 1) * r});
  const double dy = std::max({j * r - p.y(), 0.0, p.y() - (j + 1) * r});
  return std::hypot(dx, dy);
}

namespace {

template <typename Pred>
bool any_cell_under_disc(const SceneGrid& scene, const Vec2& c, double radius, Pred pred) {
  const double r = scene.resolution_m;
  const int i0 = int(std::floor((c.x() - radius) / r)), i1 = int(std::floor((c.x() + radius) / r));
  const int j0 = int(std::floor((c.y() - radius) / r)), j1 = int(std::floor((c.y() + radius) / r));
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i)
      if (scene.occupied(i, j) && distance_to_cell(scene, c, i, j) < radius && pred(i, j)) return true;
  return false;
}

// Entry parameter of the ray o + t d into an axis-aligned box, if any.
std::optional<double> ray_box(const Vec2& o, const Vec2& d, const Vec2& lo, const Vec2& hi) {
  double tmin = 0.0, tmax = std::numeric_limits<double>::infinity();
  for (int a = 0; a < 2; ++a) {
    if (d[a] == 0.0) {
      if (o[a] < lo[a] || o[a] > hi[a]) return std::nullopt;
      continue;
    }
    double t0 = (lo[a] - o[a]) / d[a], t1 = (hi[a] - o[a]) / d[a];
    if (t0 > t1) std::swap(t0, t1);
    tmin = std::max(tmin, t0);
    tmax = std::min(tmax, t1);
    if (tmin > tmax) return std::nullopt;
  }
  return tmin;
}

std::optional<double> ray_circle(const Vec2& o, const Vec2& d, const Vec2& c, double radius) {
  const Vec2 oc = o - c;
  const double b = d.dot(oc);
  const double cc = oc.squaredNorm() - radius * radius;
  if (cc <= 0.0) return 0.0;
  const double disc = b * b - cc;
  if (disc < 0.0) return std::nullopt;
  const double t = -b - std::sqrt(disc);
  if (t < 0.0) return std::nullopt;
  return t;
}

// First contact of a disc of radius `radius` moving along unit d with the
// cell square: the ray against the square dilated by the radius.
std::optional<double> disc_cell_contact(const SceneGrid& scene, const Vec2& o, const Vec2& d, double radius, int i,
                                        int j) {
  const double r = scene.resolution_m;
  const Vec2 lo(i * r, j * r), hi((i + 1) * r, (j + 1) * r);
  std::optional<double> best;
  auto keep = [&](std::optional<double> t) {
    if (t && (!best || *t < *best)) best = t;
  };
  keep(ray_box(o, d, {lo.x() - radius, lo.y()}, {hi.x() + radius, hi.y()}));
  keep(ray_box(o, d, {lo.x(), lo.y() - radius}, {hi.x(), hi.y() + radius}));
  keep(ray_circle(o, d, lo, radius));
  keep(ray_circle(o, d, {hi.x(), lo.y()}, radius));
  keep(ray_circle(o, d, {lo.x(), hi.y()}, radius));
  keep(ray_circle(o, d, hi, radius));
  return best;
}

}  // namespace

bool footprint_blocked(const SceneGrid& scene, const Vec2& center, double radius, double h_clearance) {
  return any_cell_under_disc(scene, center, radius,
                             [&](int i, int j) { return !scene.passable(i, j, h_clearance); });
}

bool footprint_touches_occupied(const SceneGrid& scene, const Vec2& center, double radius) {
  return any_cell_under_disc(scene, center, radius, [](int, int) { return true; });
}

std::optional<CastHit> cast_footprint(const SceneGrid& scene, const Pose2& pose, double radius, double max_distance) {
  const Vec2 o = pose.position();
  const Vec2 d = pose.heading();
  const Vec2 e = o + max_distance * d;
  const double r = scene.resolution_m;
  const int i0 = int(std::floor((std::min(o.x(), e.x()) - radius) / r));
  const int i1 = int(std::floor((std::max(o.x(), e.x()) + radius) / r));
  const int j0 = int(std::floor((std::min(o.y(), e.y()) - radius) / r));
  const int j1 = int(std::floor((std::max(o.y(), e.y()) + radius) / r));

  std::optional<CastHit> best;
  for (int j = j0; j <= j1; ++j)
    for (int i = i0; i <= i1; ++i) {
      if (!scene.occupied(i, j)) continue;
      const auto t = disc_cell_contact(scene, o, d, radius, i, j);
      if (!t || *t > max_distance) continue;
      if (!best || *t < best->distance_m) {
        const Vec2 rel = scene.cell_center(i, j) - o;
        best = CastHit{*t, {i, j}, cross2(d, rel)};
      }
    }
  return best;
}

std::vector<CellIndex> occupied_region(const SceneGrid& scene, CellIndex seed, std::size_t limit) {
  if (!scene.in_bounds(seed.i, seed.j)) return {seed};
  if (!scene.occupied(seed.i, seed.j)) return {};
  std::vector<std::uint8_t> seen(scene.occupancy.size(), 0);
  std::vector<CellIndex> out{seed};
  seen[scene.flat(seed.i, seed.j)] = 1;
  for (std::size_t head = 0; head < out.size() && out.size() < limit; ++head) {
    const CellIndex c = out[head];
    for (int dj = -1; dj <= 1; ++dj)
      for (int di = -1; di <= 1; ++di) {
        const int i = c.i + di, j = c.j + dj;
        if (!scene.in_bounds(i, j) || !scene.occupied(i, j) || seen[scene.flat(i, j)]) continue;
        seen[scene.flat(i, j)] = 1;
        out.push_back({i, j});
      }
  }
  return out;
}

}  // namespace sketchact
