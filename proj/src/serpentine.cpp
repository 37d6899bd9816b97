#include "sketchact/executor.hpp"

#include <cmath>
#include <limits>

namespace sketchact {

namespace {

Polyline open_ring(const Polyline& line) {
  Polyline ring = line;
  while (ring.size() > 1 && (ring.front() - ring.back()).norm() < 1e-12) ring.pop_back();
  return ring;
}

struct Interval {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  bool empty() const { return lo > hi; }
  void add(double x) {
    lo = std::min(lo, x);
    hi = std::max(hi, x);
  }
};

// Extent along `along` of the part of the ring whose `across` coordinate
// lies in [c0, c1]. The extreme points of a clipped polygon are either ring
// vertices inside the strip or crossings of the strip's border lines.
Interval strip_extent(const Polyline& ring, const Vec2& along, const Vec2& across, double c0, double c1) {
  Interval out;
  const std::size_t n = ring.size();
  for (std::size_t k = 0; k < n; ++k) {
    const Vec2& p = ring[k];
    const Vec2& q = ring[(k + 1) % n];
    const double pa = p.dot(along), pc = p.dot(across);
    const double qa = q.dot(along), qc = q.dot(across);
    if (pc >= c0 && pc <= c1) out.add(pa);
    for (double b : {c0, c1}) {
      if ((pc - b) * (qc - b) < 0.0) out.add(pa + (qa - pa) * (b - pc) / (qc - pc));
    }
  }
  return out;
}

// Largest turn magnitude in the set that composes 90 degrees exactly.
double lane_turn_unit(const std::vector<double>& turn_set) {
  for (auto it = turn_set.rbegin(); it != turn_set.rend(); ++it) {
    const double k = 90.0 / *it;
    if (std::abs(k - std::round(k)) < 1e-12) return *it;
  }
  throw Error(ErrorCode::UnsupportedTurn, "turn set cannot compose the 90 degree lane change");
}

}  // namespace

SerpentinePlan generate_serpentine_plan(const Segment& area_segment, const ControlParams& params, int variant) {
  const Polyline ring = open_ring(area_segment.world_polyline);
  if (ring.size() < 3 || std::abs(signed_area(ring)) < 1e-9)
    throw Error(ErrorCode::DegenerateArea, "area polygon has zero area");
  const double unit = lane_turn_unit(params.turn_set);

  Vec2 lo = ring.front(), hi = ring.front();
  for (const auto& p : ring) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const Vec2 ext = hi - lo;
  Vec2 along = ext.x() >= ext.y() ? Vec2(1.0, 0.0) : Vec2(0.0, 1.0);
  Vec2 across = ext.x() >= ext.y() ? Vec2(0.0, 1.0) : Vec2(1.0, 0.0);
  if (variant & 1) along = -along;
  if (variant & 2) across = -across;

  Interval span;
  for (const auto& p : ring) span.add(p.dot(across));
  const double width = span.hi - span.lo;
  const double s = params.lane_spacing_m;
  const std::size_t n = std::max<std::size_t>(1, std::size_t(std::ceil(width / s - 1e-9)));

  std::vector<double> centers;
  std::vector<Interval> lanes;
  for (std::size_t k = 0; k < n; ++k) {
    double c = width <= s ? span.lo + 0.5 * width : std::min(span.lo + 0.5 * s + double(k) * s, span.hi - 0.5 * s);
    const Interval iv = strip_extent(ring, along, across, c - 0.5 * s, c + 0.5 * s);
    if (iv.empty()) continue;
    centers.push_back(c);
    lanes.push_back(iv);
  }

  // Shared end coordinate on each turning side keeps every shift
  // perpendicular to the lanes.
  for (std::size_t k = 0; k + 1 < lanes.size(); ++k) {
    if (k % 2 == 0) {
      const double e = std::max(lanes[k].hi, lanes[k + 1].hi);
      lanes[k].hi = lanes[k + 1].hi = e;
    } else {
      const double e = std::min(lanes[k].lo, lanes[k + 1].lo);
      lanes[k].lo = lanes[k + 1].lo = e;
    }
  }

  SerpentinePlan plan;
  plan.lane_count = lanes.size();
  plan.axis = along;
  auto point = [&](double a, double c) -> Vec2 { return a * along + c * across; };
  const MacroAction fwd = MacroAction::Forward;
  for (std::size_t k = 0; k < lanes.size(); ++k) {
    const bool forward_dir = k % 2 == 0;
    const Vec2 a = point(forward_dir ? lanes[k].lo : lanes[k].hi, centers[k]);
    const Vec2 b = point(forward_dir ? lanes[k].hi : lanes[k].lo, centers[k]);
    if (k > 0) {
      const Vec2 heading = forward_dir ? Vec2(-along) : along;  // direction of the previous lane
      const double sign = cross2(heading, across) > 0.0 ? 1.0 : -1.0;
      const MacroAction turn = turn_token(sign * unit);
      const int reps = int(std::lround(90.0 / unit));
      const Vec2 prev_end = plan.runs.back().end;
      for (int r = 0; r < reps; ++r) plan.macros.push_back(turn);
      plan.macros.push_back(fwd);
      plan.runs.push_back({prev_end, a, false});
      for (int r = 0; r < reps; ++r) plan.macros.push_back(turn);
    }
    plan.macros.push_back(fwd);
    plan.runs.push_back({a, b, true});
  }
  for (const auto& r : plan.runs) plan.length_m += (r.end - r.start).norm();
  return plan;
}

double swept_coverage(const SceneGrid& scene, const Polyline& polygon, const std::vector<Pose2>& poses,
                      double tool_width) {
  const Polyline ring = open_ring(polygon);
  std::vector<CellIndex> target;
  Vec2 lo = ring.front(), hi = ring.front();
  for (const auto& p : ring) {
    lo = lo.cwiseMin(p);
    hi = hi.cwiseMax(p);
  }
  const CellIndex c0 = scene.cell_of(lo), c1 = scene.cell_of(hi);
  for (int j = std::max(0, c0.j); j <= std::min(scene.height - 1, c1.j); ++j)
    for (int i = std::max(0, c0.i); i <= std::min(scene.width - 1, c1.i); ++i)
      if (!scene.occupied(i, j) && point_in_polygon(scene.cell_center(i, j), ring)) target.push_back({i, j});
  if (target.empty()) return 1.0;

  const double half = 0.5 * tool_width + 1e-9;
  std::vector<std::uint8_t> hit(target.size(), 0);
  for (std::size_t k = 0; k + 1 < poses.size(); ++k) {
    const Vec2 p = poses[k].position();
    const Vec2 q = poses[k + 1].position();
    const double len = (q - p).norm();
    if (len < 1e-12) continue;
    const Vec2 u = (q - p) / len;
    for (std::size_t t = 0; t < target.size(); ++t) {
      if (hit[t]) continue;
      const Vec2 rel = scene.cell_center(target[t].i, target[t].j) - p;
      const double a = rel.dot(u);
      if (a >= -half && a <= len + half && std::abs(cross2(u, rel)) <= half) hit[t] = 1;
    }
  }
  std::size_t covered = 0;
  for (auto h : hit) covered += h;
  return double(covered) / double(target.size());
}

}  // namespace sketchact
