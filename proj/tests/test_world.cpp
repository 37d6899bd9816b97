#include "doctest.h"
#include "fixtures.hpp"

#include "sketchact/scenario.hpp"

#include <set>

using namespace sketchact;
using namespace fixtures;

TEST_CASE("kinematic identities") {
  RandomStream rng(1);
  const NoiseModel none;
  Pose2 p = apply_command({0, 0, 0}, LowLevelCommand::step(0.05), none, rng);
  CHECK(p == Pose2{0.05, 0.0, 0.0});

  Pose2 q{1.0, 2.0, 30.0};
  for (int k = 0; k < 4; ++k) q = apply_command(q, LowLevelCommand::rotate(90.0), none, rng);
  CHECK(q.theta_deg == doctest::Approx(30.0).epsilon(1e-12));

  const Pose2 start{0.3, -0.2, 10.0};
  Pose2 r = start;
  for (int k = 0; k < 4; ++k) {
    r = apply_command(r, LowLevelCommand::step(0.5), none, rng);
    r = apply_command(r, LowLevelCommand::rotate(90.0), none, rng);
  }
  CHECK(std::abs(r.x - start.x) < 1e-9);
  CHECK(std::abs(r.y - start.y) < 1e-9);
  CHECK(std::abs(wrap_deg(r.theta_deg - start.theta_deg)) < 1e-9);
}

TEST_CASE("every command draws three normals") {
  RandomStream a(9), b(9);
  const NoiseModel none, noisy{0.01, 0.01, 1.0, 9};
  Pose2 pa, pb;
  for (const auto& cmd : {LowLevelCommand::step(0.05), LowLevelCommand::rotate(45.0), LowLevelCommand::halt()}) {
    pa = apply_command(pa, cmd, none, a);
    pb = apply_command(pb, cmd, noisy, b);
    CHECK(a.counter() == b.counter());
  }
  RandomStream ref(9);
  for (int k = 0; k < 9; ++k) ref.normal();
  CHECK(a.counter() == ref.counter());
}

TEST_CASE("random stream is reproducible and well spread") {
  RandomStream a(42), b(42);
  double sum = 0.0, sq = 0.0;
  const int n = 20000;
  for (int i = 0; i < n; ++i) {
    const double x = a.normal();
    CHECK(x == b.normal());
    sum += x;
    sq += x * x;
  }
  CHECK(std::abs(sum / n) < 0.03);
  CHECK(std::abs(sq / n - 1.0) < 0.05);
  CHECK(derive_seed(1, 2) != derive_seed(2, 1));
}

TEST_CASE("scene grid basics") {
  SceneGrid g = SceneGrid::empty(2.0, 1.0);
  CHECK(g.width == 40);
  CHECK(g.height == 20);
  CHECK(g.occupied(-1, 0));
  CHECK(g.occupied(40, 0));
  CHECK_FALSE(g.occupied(0, 0));
  g.fill_rect(1.0, 0.0, 1.2, 0.5, 1.2);
  CHECK(g.occupied(20, 0));
  CHECK(g.clearance_at(20, 0) == 1.2);
  CHECK(g.passable(20, 0, 1.0));
  CHECK_FALSE(g.passable(20, 0, 1.3));
  CHECK_FALSE(g.occupied(19, 0));
  CHECK_FALSE(g.occupied(24, 0));
}

TEST_CASE("obstacle perception") {
  const ControlParams p;
  SceneGrid g = open_scene({1.0, 2.0, 0.0});
  auto snap = check_obstacle_ahead(g, g.start_pose, p);
  CHECK_FALSE(snap.obs_ahead);
  CHECK(snap.eta);

  // A wall whose near face is 0.25 m beyond the footprint edge.
  const double face = 1.0 + g.platform.footprint_radius_m + 0.25;
  SceneGrid wall = g;
  wall.fill_rect(face, 1.5, face + 0.1, 2.5);
  snap = check_obstacle_ahead(wall, wall.start_pose, p);
  REQUIRE(snap.obs_ahead);
  CHECK(snap.obstacle_distance_m.value() == doctest::Approx(0.25).epsilon(1e-9));
  CHECK_FALSE(snap.h_est_m);

  SceneGrid table = g;
  table.fill_rect(face, 1.5, face + 0.5, 2.5, 1.2);
  snap = check_obstacle_ahead(table, table.start_pose, p);
  REQUIRE(snap.obs_ahead);
  CHECK(snap.h_est_m == 1.2);
}

TEST_CASE("clearance routine takes the minimum over annotated cells") {
  SceneGrid g = SceneGrid::empty(2.0, 2.0);
  g.fill_rect(0.5, 0.5, 0.7, 0.7, 1.1);
  g.fill_rect(0.7, 0.5, 0.9, 0.7, 1.3);
  auto region = occupied_region(g, g.cell_of({0.6, 0.6}));
  CHECK(region.size() == 32);
  CHECK(check_under_clearance(g, region) == doctest::Approx(1.1));

  SceneGrid bare = SceneGrid::empty(2.0, 2.0);
  bare.fill_rect(0.5, 0.5, 0.9, 0.7);
  CHECK_FALSE(check_under_clearance(bare, occupied_region(bare, bare.cell_of({0.6, 0.6}))));

  SceneGrid mixed = bare;
  mixed.fill_rect(0.8, 0.5, 0.9, 0.7, 1.4);
  mixed.fill_rect(0.5, 0.5, 0.6, 0.6, 1.25);
  // Enumerate annotated cells of the region directly.
  const auto mreg = occupied_region(mixed, mixed.cell_of({0.6, 0.6}));
  double lo = 1e9;
  for (const auto& c : mreg)
    if (auto h = mixed.clearance_at(c.i, c.j)) lo = std::min(lo, *h);
  CHECK(check_under_clearance(mixed, mreg) == lo);
  CHECK(lo == 1.25);
  CHECK_THROWS_AS(check_under_clearance(mixed, {}), Error);
}

TEST_CASE("footprint cast distance agrees with stepping") {
  SceneGrid g = SceneGrid::empty(3.0, 2.0);
  g.fill_rect(1.62, 0.0, 1.8, 2.0);
  const Pose2 pose{0.5, 1.0, 0.0};
  const auto hit = cast_footprint(g, pose, 0.15, 2.0);
  REQUIRE(hit);
  // March the disc forward in 1 mm steps until it touches.
  double d = 0.0;
  while (!footprint_touches_occupied(g, {pose.x + d, pose.y}, 0.15)) d += 0.001;
  CHECK(std::abs(hit->distance_m - d) <= 0.001);
}

TEST_CASE("scenario generation is deterministic and respects corner bands") {
  for (auto cat : kAllCategories)
    for (auto type : kAllSceneTypes) {
      const ScenarioSpec spec{cat, type, 5, AngleProfile::Lattice};
      const Scenario a = generate_scenario(spec);
      const Scenario b = generate_scenario(spec);
      CHECK(a.scene.occupancy == b.scene.occupancy);
      CHECK(a.sketch.strokes.size() == b.sketch.strokes.size());
      const auto [lo, hi] = corner_band(cat);
      const auto segs = segment_sketch(a.sketch, ControlParams{}, a.scene.scale);
      const std::size_t corners = path_corner_count(segs);
      CHECK(corners == a.corners);
      CHECK(int(corners) >= lo);
      CHECK(int(corners) <= hi);
      CHECK_NOTHROW(a.scene.validate());
      CHECK(a.area.has_value() == (type == SceneType::Region));
    }
}
