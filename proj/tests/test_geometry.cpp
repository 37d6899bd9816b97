#include "doctest.h"
#include "fixtures.hpp"

#include "sketchact/homography.hpp"
#include "sketchact/params.hpp"
#include "sketchact/sketch.hpp"

#include <random>

using namespace sketchact;
using namespace fixtures;

TEST_CASE("stopping distance and clearance formulas") {
  CHECK(stopping_distance(0.30, 0.60, 0.10, 0.10) == doctest::Approx(0.205).epsilon(1e-12));
  CHECK(stopping_distance(0.0, 0.60, 0.10, 0.10) == doctest::Approx(0.10));
  CHECK(stopping_distance(0.50, 0.60, 0.10, 0.10) == doctest::Approx(0.3583).epsilon(1e-4));
  CHECK_THROWS_AS(stopping_distance(0.3, 0.0, 0.1, 0.1), Error);
  CHECK(required_clearance(0.85, 0.15) == doctest::Approx(1.00));
  CHECK(required_clearance(0.0, 0.0) == 0.0);
  CHECK(required_clearance(0.70, 0.10) == doctest::Approx(0.80));
}

TEST_CASE("pixel proxy") {
  CHECK(pixel_proxy_lmax(224, 224, 0.08) == doctest::Approx(25.34).epsilon(0.01 / 25.34));
  CHECK(pixel_proxy_lmax(640, 480, 0.08) == doctest::Approx(64.0));
  CHECK(pixel_proxy_lmax(640, 480, 0.0) == 0.0);
  CHECK_THROWS_AS(pixel_proxy_lmax(0, 480, 0.08), Error);
  CHECK(kappa_in_recommended_band(0.08));
  CHECK_FALSE(kappa_in_recommended_band(0.12));
}

TEST_CASE("default parameters validate; unsafe look-ahead does not") {
  ControlParams p;
  CHECK_NOTHROW(validate(p));
  CHECK(p.d_step_m == 0.05);
  CHECK(p.d_safety_m == 0.30);
  CHECK(p.l_max_m == 0.5);
  CHECK(p.h_clearance_m == 1.00);
  p.d_safety_m = 0.15;
  try {
    validate(p);
    FAIL("expected ValidationFailed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ValidationFailed);
    CHECK(e.location() == "/d_safety_m");
  }
}

TEST_CASE("homography mapping basics") {
  const Homography id;
  CHECK((pixel_to_world(id, {3.0, 4.0}) - Vec2(3.0, 4.0)).norm() < 1e-12);
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  m(0, 0) = m(1, 1) = 2.0;
  const Homography twice(m);
  CHECK((pixel_to_world(twice, {2.0, 4.0}) - Vec2(1.0, 2.0)).norm() < 1e-12);
  CHECK(world_length(id, {10.0, 10.0}, Vec2(0.05, 0.0)) == doctest::Approx(0.05));

  Eigen::Matrix3d bad = Eigen::Matrix3d::Identity();
  bad(2, 2) = 0.0;
  CHECK_THROWS_AS(Homography{bad}, Error);
  Eigen::Matrix3d singular = Eigen::Matrix3d::Zero();
  singular(2, 2) = 1.0;
  CHECK_THROWS_AS(Homography{singular}, Error);
}

TEST_CASE("homography estimation recovers synthetic maps") {
  const std::vector<Vec2> world{{0, 0}, {2, 0}, {2, 3}, {0, 3}};
  {
    std::vector<Correspondence> corr;
    for (const auto& w : world) corr.push_back({{w.x(), w.y()}, w});
    const auto est = estimate_homography(corr);
    CHECK((est.h.matrix() - Eigen::Matrix3d::Identity()).cwiseAbs().maxCoeff() < 1e-9);
  }
  Eigen::Matrix3d truth;
  truth << 80, -12, 320, 3, -35, 470, 0.002, 0.09, 1.0;
  auto project = [&](const Vec2& w) { return Vec2((truth * w.homogeneous()).hnormalized()); };
  {
    std::vector<Correspondence> corr;
    for (const auto& w : world) corr.push_back({PixelPoint::from(project(w)), w});
    const auto est = estimate_homography(corr);
    CHECK((est.h.matrix() - truth).cwiseAbs().maxCoeff() < 1e-6);
  }
  // Monte-Carlo: eight noisy correspondences, sigma 0.1 px.
  std::mt19937_64 rng(7);
  std::normal_distribution<double> noise(0.0, 0.1);
  std::uniform_real_distribution<double> wx(0.0, 3.0), wy(0.0, 4.0);
  for (int trial = 0; trial < 50; ++trial) {
    std::vector<Correspondence> corr;
    for (int k = 0; k < 8; ++k) {
      const Vec2 w(wx(rng), wy(rng));
      const Vec2 p = project(w) + Vec2(noise(rng), noise(rng));
      corr.push_back({PixelPoint::from(p), w});
    }
    CHECK(estimate_homography(corr).rms_px < 0.5);
  }
}

TEST_CASE("homography estimation rejects degenerate input") {
  std::vector<Correspondence> corr{{{0, 0}, {0, 0}}, {{1, 0}, {1, 0}}, {{2, 0}, {2, 0}}, {{0, 1}, {0, 1}}};
  CHECK_THROWS_AS(estimate_homography(corr), Error);
  corr.pop_back();
  CHECK_THROWS_AS(estimate_homography(corr), Error);
}

namespace {

// Independent arc-length walk: cut points every l_max along the polyline.
std::vector<double> walk_lengths(double total, double lmax) {
  std::vector<double> out;
  double left = total;
  while (left > lmax + 1e-9) {
    out.push_back(lmax);
    left -= lmax;
  }
  out.push_back(left);
  return out;
}

}  // namespace

TEST_CASE("straight strokes split at the maximum length") {
  const ControlParams p;
  for (double len : {0.3, 1.2, 1.7, 2.0}) {
    const auto segs = segment_sketch(path_sketch({{1.0, 1.0}, {1.0 + len, 1.0}}), p, scale100());
    const auto expect = walk_lengths(len, p.l_max_m);
    REQUIRE(segs.size() == expect.size());
    for (std::size_t k = 0; k < segs.size(); ++k) {
      CHECK(segs[k].length_m == doctest::Approx(expect[k]).epsilon(1e-9));
      CHECK(segs[k].corner_count == 0);
      CHECK(segs[k].end_cause == (k + 1 == segs.size() ? BoundaryCause::StrokeEnd : BoundaryCause::Length));
    }
  }
}

TEST_CASE("an L-shaped stroke splits at its corner") {
  const ControlParams p;
  const auto segs = segment_sketch(path_sketch({{1.0, 1.0}, {1.4, 1.0}, {1.4, 1.4}}), p, scale100());
  REQUIRE(segs.size() == 2);
  CHECK(segs[0].end_cause == BoundaryCause::Corner);
  CHECK(segs[0].length_m == doctest::Approx(0.4));
  CHECK(segs[1].corner_count == 1);
  CHECK(segs[1].delta_yaw_deg == doctest::Approx(90.0).epsilon(1e-6));
  CHECK((segs[1].start() - Vec2(1.4, 1.0)).norm() < 1e-9);

  const auto mirrored = segment_sketch(path_sketch({{1.0, 2.0}, {1.4, 2.0}, {1.4, 1.6}}), p, scale100());
  REQUIRE(mirrored.size() == 2);
  CHECK(mirrored[1].delta_yaw_deg == doctest::Approx(-90.0).epsilon(1e-6));
}

TEST_CASE("keypoints") {
  const ControlParams p;
  const GroundMapping map(scale100(), 640, 480, p);
  auto seg_of = [&](const Polyline& w) {
    std::vector<PixelPoint> px;
    for (const auto& q : densify(w)) px.push_back({100 * q.x(), 100 * q.y()});
    return make_segment(px, map, p);
  };
  auto kinds = [&](const Segment& s) {
    std::vector<KeypointKind> out;
    for (const auto& k : detect_keypoints(s, p)) out.push_back(k.kind);
    return out;
  };
  CHECK(kinds(seg_of({{1, 1}, {2, 1}})) == std::vector{KeypointKind::Start, KeypointKind::End});

  const Vec2 apex(1.5, 1.0);
  const Vec2 v_end = apex + 0.5 * unit_from_deg(60.0);
  CHECK(kinds(seg_of({{1, 1}, apex, v_end})) ==
        std::vector{KeypointKind::Start, KeypointKind::Corner, KeypointKind::End});

  Polyline zig{{1, 1}};
  double heading = 0.0;
  for (int k = 0; k < 4; ++k) {
    zig.push_back(zig.back() + 0.3 * unit_from_deg(heading));
    heading += (k % 2 ? -45.0 : 45.0);
  }
  const auto zs = seg_of(zig);
  CHECK(zs.corner_count == 3);
  const auto kps = detect_keypoints(zs, p);
  CHECK(kps.size() == 5);
  for (const auto& k : kps) CHECK(k.loc.cwiseAbs().maxCoeff() <= 1.0 + 1e-12);
}

TEST_CASE("turning angles match a brute-force arc-length oracle") {
  const ControlParams p;
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> leg(0.15, 0.6), turn(-150.0, 150.0);
  for (int trial = 0; trial < 50; ++trial) {
    Polyline v{{1.0, 1.0}};
    double h = 0.0;
    for (int k = 0; k < 5; ++k) {
      v.push_back(v.back() + leg(rng) * unit_from_deg(h));
      h += turn(rng);
    }
    const Polyline line = densify(v, 0.013);
    const auto det = find_corners(line, p);
    // Oracle: walk the polyline by accumulated length, no shared helpers.
    std::vector<double> cum{0.0};
    for (std::size_t i = 1; i < line.size(); ++i) cum.push_back(cum.back() + (line[i] - line[i - 1]).norm());
    auto at = [&](double t) -> Vec2 {
      t = std::clamp(t, 0.0, cum.back());
      for (std::size_t i = 1; i < line.size(); ++i)
        if (t <= cum[i]) return line[i - 1] + (line[i] - line[i - 1]) * ((t - cum[i - 1]) / (cum[i] - cum[i - 1]));
      return line.back();
    };
    for (std::size_t i = 1; i + 1 < line.size(); ++i) {
      const Vec2 a = line[i] - at(cum[i] - det.window_m), b = at(cum[i] + det.window_m) - line[i];
      const double ang = rad2deg(std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b)));
      CHECK(det.angles_deg[i] == doctest::Approx(ang).epsilon(1e-9));
    }
  }
}

TEST_CASE("closed strokes and area strokes become single area segments") {
  const ControlParams p;
  const Polyline ring{{1, 1}, {2, 1}, {2, 2}, {1, 2}, {1, 1}};
  const auto segs = segment_sketch(sketch_of({stroke_from_world(ring, StrokeKind::Area, true)}), p, scale100());
  REQUIRE(segs.size() == 1);
  CHECK(segs[0].is_area);
  CHECK(segs[0].is_closed);
  CHECK_FALSE(segs[0].is_path);
}

TEST_CASE("sketch validation") {
  Sketch sk = path_sketch({{1, 1}, {2, 1}});
  CHECK_NOTHROW(validate(sk));
  sk.strokes[0].points[3].u = 700.0;
  try {
    validate(sk);
    FAIL("expected ValidationFailed");
  } catch (const Error& e) {
    CHECK(e.code() == ErrorCode::ValidationFailed);
    CHECK(e.location() == "/strokes/0/points/3");
  }
  CHECK_THROWS_AS(validate(Sketch{}), Error);
  Sketch degenerate = sketch_of({stroke_from_world({{1, 1}, {1, 1}})});
  CHECK_THROWS_AS(segment_sketch(degenerate, ControlParams{}, scale100()), Error);
}

TEST_CASE("pixel proxy grounding flips v and scales to l_max") {
  const ControlParams p;
  const GroundMapping map(PixelProxy{0.08}, 640, 480, p);
  CHECK(map.meters_per_pixel() == doctest::Approx(0.5 / 64.0));
  const Vec2 w = map.to_world({64.0, 479.0});
  CHECK(w.x() == doctest::Approx(0.5));
  CHECK(w.y() == doctest::Approx(0.0));
  CHECK_THROWS_AS(GroundMapping(std::monostate{}, 640, 480, p), Error);
}
