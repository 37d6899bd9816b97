#pragma once

#include "sketchact/executor.hpp"
#include "sketchact/sketch.hpp"
#include "sketchact/world.hpp"

#include <vector>

namespace fixtures {

using namespace sketchact;

// 100 px per meter, no flip: pixel = 100 * world.
inline MetricScale scale100() {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  m(0, 0) = m(1, 1) = 100.0;
  return Homography(m);
}

inline Polyline densify(const Polyline& line, double spacing = 0.01) {
  Polyline out{line.front()};
  for (std::size_t i = 1; i < line.size(); ++i) {
    const Vec2 a = line[i - 1], b = line[i];
    const int n = std::max(1, int(std::ceil((b - a).norm() / spacing - 1e-9)));
    for (int k = 1; k <= n; ++k) out.push_back(a + (b - a) * (double(k) / n));
  }
  return out;
}

inline Stroke stroke_from_world(const Polyline& world, StrokeKind kind = StrokeKind::Path, bool closed = false) {
  Stroke s;
  s.kind = kind;
  s.closed = closed;
  for (const auto& p : world) s.points.push_back({100.0 * p.x(), 100.0 * p.y()});
  return s;
}

inline Sketch sketch_of(const std::vector<Stroke>& strokes) {
  Sketch sk;
  sk.image_width = 640;
  sk.image_height = 480;
  sk.strokes = strokes;
  return sk;
}

inline Sketch path_sketch(const Polyline& world) { return sketch_of({stroke_from_world(densify(world))}); }

// 6.4 m x 4.8 m free room matching the 640 x 480 test image.
inline SceneGrid open_scene(const Pose2& start) {
  SceneGrid g = SceneGrid::empty(6.4, 4.8);
  g.scale = scale100();
  g.image_width = 640;
  g.image_height = 480;
  g.start_pose = start;
  return g;
}

inline std::size_t count_events(const TrialResult& t, EventKind kind) {
  std::size_t n = 0;
  for (const auto& e : t.events) n += e.kind == kind;
  return n;
}

}  // namespace fixtures
