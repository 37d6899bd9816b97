// Acceptance suite: one PASS/FAIL line per criterion, exit status 1 if any fail.

#include "sketchact/batch.hpp"
#include "sketchact/io.hpp"
#include "sketchact/scenario.hpp"
#include "sketchact/service.hpp"

#include <chrono>
#include <cstdio>
#include <filesystem>
#include <functional>
#include <limits>
#include <random>
#include <sstream>
#include <sys/wait.h>

using namespace sketchact;
namespace fs = std::filesystem;

namespace {

struct Verdict {
  bool pass = false;
  std::string detail;
};

int failures = 0;

void criterion(const char* name, const std::function<Verdict()>& body) {
  const auto t0 = std::chrono::steady_clock::now();
  Verdict v;
  try {
    v = body();
  } catch (const std::exception& e) {
    v = {false, std::string("exception: ") + e.what()};
  }
  const double secs = std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
  if (!v.pass) ++failures;
  std::printf("%s  %-22s %s  (%.2f s)\n", v.pass ? "PASS" : "FAIL", name, v.detail.c_str(), secs);
  std::fflush(stdout);
}

double elapsed_since(std::chrono::steady_clock::time_point t0) {
  return std::chrono::duration<double>(std::chrono::steady_clock::now() - t0).count();
}

template <typename... Args>
std::string format(const char* fmt, Args... args) {
  char buf[512];
  std::snprintf(buf, sizeof buf, fmt, args...);
  return buf;
}

MetricScale scale100() {
  Eigen::Matrix3d m = Eigen::Matrix3d::Identity();
  m(0, 0) = m(1, 1) = 100.0;
  return Homography(m);
}

Sketch sketch_from_world(const Polyline& world, StrokeKind kind = StrokeKind::Path, bool closed = false) {
  Sketch sk;
  sk.image_width = sk.image_height = 4000;
  Stroke s;
  s.kind = kind;
  s.closed = closed;
  for (const auto& p : world) s.points.push_back({100.0 * p.x(), 100.0 * p.y()});
  sk.strokes.push_back(s);
  return sk;
}

Polyline densify(const Polyline& line, double spacing) {
  Polyline out{line.front()};
  for (std::size_t i = 1; i < line.size(); ++i) {
    const Vec2 a = line[i - 1], b = line[i];
    const int n = std::max(1, int(std::ceil((b - a).norm() / spacing - 1e-9)));
    for (int k = 1; k <= n; ++k) out.push_back(a + (b - a) * (double(k) / n));
  }
  return out;
}

// ---- golden rules ----

Verdict golden_rules() {
  const auto t0 = std::chrono::steady_clock::now();
  auto path = [](double dpsi) {
    PolicyInput in;
    in.delta_yaw_deg = dpsi;
    return in;
  };
  bool ok = true;
  auto expect = [&](const PolicyInput& in, MacroAction a, std::optional<double> conf = std::nullopt) {
    const auto d = classify_segment(in);
    ok = ok && d.action == a && (!conf || d.confidence == *conf);
  };
  expect(path(3.0), MacroAction::Forward, 0.92);
  expect(path(-88.0), MacroAction::TurnN90, 0.95);
  PolicyInput c = path(2.0);
  c.perception = {true, true, std::nullopt, std::nullopt, 0.0};
  expect(c, MacroAction::CheckUnder, 0.88);
  PolicyInput d;
  d.is_path = false;
  d.is_area = d.is_closed = true;
  expect(d, MacroAction::CoverArea, 0.97);
  expect(path(22.5), MacroAction::TurnP45);
  expect(path(67.5), MacroAction::TurnP90);
  expect(path(-67.5), MacroAction::TurnN90);
  expect(path(std::nextafter(67.5, 0.0)), MacroAction::TurnP45);
  const double secs = elapsed_since(t0);
  return {ok && secs < 1.0, format("4 examples + 3 boundaries exact, runtime %.4f s < 1 s", secs)};
}

// ---- segmentation ----

struct WalkCase {
  Polyline vertices;
  std::size_t sharp = 0;
};

WalkCase random_walk(std::mt19937_64& rng) {
  std::uniform_int_distribution<int> legs(1, 8);
  std::uniform_real_distribution<double> leg(0.15, 0.9), gentle(0.0, 20.0), sharp(40.0, 150.0), u(0.0, 1.0),
      h0(-180.0, 180.0);
  WalkCase w;
  w.vertices.push_back({20.0, 20.0});
  double h = h0(rng);
  const int n = legs(rng);
  for (int k = 0; k < n; ++k) {
    if (k > 0) {
      const bool is_sharp = u(rng) < 0.6;
      w.sharp += is_sharp;
      h += (u(rng) < 0.5 ? -1.0 : 1.0) * (is_sharp ? sharp(rng) : gentle(rng));
    }
    w.vertices.push_back(w.vertices.back() + leg(rng) * unit_from_deg(h));
  }
  return w;
}

// Per-vertex corner oracle: brute-force arc-length walk and a plain
// two-threshold trigger, written without the library helpers.
std::vector<std::size_t> corner_oracle(const Polyline& line, const ControlParams& p) {
  const std::size_t n = line.size();
  std::vector<std::size_t> out;
  if (n < 3) return out;
  std::vector<double> gaps, cum{0.0};
  for (std::size_t i = 1; i < n; ++i) {
    gaps.push_back((line[i] - line[i - 1]).norm());
    cum.push_back(cum.back() + gaps.back());
  }
  std::vector<double> sorted = gaps;
  std::sort(sorted.begin(), sorted.end());
  const double w = std::min(3.0 * sorted[sorted.size() / 2], p.turn_window_cap_m);
  auto at = [&](double t) -> Vec2 {
    t = std::clamp(t, 0.0, cum.back());
    for (std::size_t i = 1; i < n; ++i)
      if (t <= cum[i]) return line[i - 1] + (line[i] - line[i - 1]) * ((t - cum[i - 1]) / (cum[i] - cum[i - 1]));
    return line.back();
  };
  std::vector<double> ang(n, 0.0);
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const Vec2 a = line[i] - at(cum[i] - w), b = at(cum[i] + w) - line[i];
    ang[i] = std::abs(std::atan2(a.x() * b.y() - a.y() * b.x(), a.dot(b))) * 180.0 / kPi;
  }
  bool active = false;
  std::size_t best = 0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    if (!active) {
      if (ang[i] > p.theta_turn_deg) active = true, best = i;
      continue;
    }
    if (ang[i] > ang[best]) best = i;
    if (ang[i] < p.theta_turn_deg - p.hysteresis_deg) {
      out.push_back(best);
      active = false;
    }
  }
  if (active) out.push_back(best);
  return out;
}

Verdict segmentation() {
  const auto t0 = std::chrono::steady_clock::now();
  const ControlParams p;
  std::mt19937_64 rng(2024);
  std::uniform_real_distribution<double> spacing(0.005, 0.02);
  std::size_t bad_len = 0, bad_cause = 0, bad_oracle = 0, bad_truth = 0, segments = 0;
  double max_len = 0.0;
  for (int trial = 0; trial < 1000; ++trial) {
    const WalkCase wc = random_walk(rng);
    const Sketch sk = sketch_from_world(densify(wc.vertices, spacing(rng)));
    const GroundMapping mapping(scale100(), sk.image_width, sk.image_height, p);
    Polyline world;
    for (const auto& px : canonical_points(sk.strokes[0].points)) world.push_back(mapping.to_world(px));

    const auto segs = segment_sketch(sk, p, scale100());
    const auto oracle = corner_oracle(world, p);
    segments += segs.size();
    std::size_t corners = 0;
    for (std::size_t k = 0; k < segs.size(); ++k) {
      const Segment& s = segs[k];
      corners += s.corner_count;
      max_len = std::max(max_len, s.length_m);
      if (s.length_m > p.l_max_m + 1e-9) ++bad_len;
      bool ok = true;
      if (k + 1 < segs.size()) ok = ok && s.end() == segs[k + 1].start();
      switch (s.end_cause) {
        case BoundaryCause::Length: ok = ok && std::abs(s.length_m - p.l_max_m) <= 1e-9; break;
        case BoundaryCause::Corner:
          ok = ok && std::any_of(oracle.begin(), oracle.end(), [&](std::size_t c) { return world[c] == s.end(); });
          break;
        case BoundaryCause::StrokeEnd: ok = ok && k + 1 == segs.size() && s.end() == world.back(); break;
      }
      bad_cause += !ok;
    }
    bad_oracle += corners != oracle.size() || find_corners(world, p).indices != oracle;
    bad_truth += corners != wc.sharp;
  }
  const double secs = elapsed_since(t0);
  const bool pass = bad_len == 0 && bad_cause == 0 && bad_oracle == 0 && bad_truth == 0 && secs < 30.0;
  return {pass, format("1000 polylines, %zu segments: max length %.6f m (limit L_max %.2f m, tol 1e-9), "
                       "unattributed boundaries %zu, oracle corner mismatches %zu, generator mismatches %zu",
                       segments, max_len, p.l_max_m, bad_cause, bad_oracle, bad_truth)};
}

// ---- DTW ----

double dtw_paths(const Polyline& a, const Polyline& b, std::size_t i, std::size_t j, double acc) {
  acc += (a[i] - b[j]).norm();
  if (i + 1 == a.size() && j + 1 == b.size()) return acc;
  double best = std::numeric_limits<double>::infinity();
  if (i + 1 < a.size()) best = std::min(best, dtw_paths(a, b, i + 1, j, acc));
  if (j + 1 < b.size()) best = std::min(best, dtw_paths(a, b, i, j + 1, acc));
  if (i + 1 < a.size() && j + 1 < b.size()) best = std::min(best, dtw_paths(a, b, i + 1, j + 1, acc));
  return best;
}

Verdict dtw_oracle() {
  const auto t0 = std::chrono::steady_clock::now();
  // Every sequence of 1..5 points over the 3x3 grid, grouped by length.
  std::vector<std::vector<Polyline>> seqs(6);
  seqs[1].reserve(9);
  for (int g = 0; g < 9; ++g) seqs[1].push_back({Vec2(g % 3, g / 3)});
  for (int len = 2; len <= 5; ++len)
    for (const auto& s : seqs[len - 1])
      for (int g = 0; g < 9; ++g) {
        Polyline t = s;
        t.push_back(Vec2(g % 3, g / 3));
        seqs[len].push_back(std::move(t));
      }
  std::size_t pairs = 0, mismatches = 0;
  for (int la = 1; la <= 5; ++la)
    for (int lb = 1; la + lb <= 6; ++lb)
      for (const auto& a : seqs[la])
        for (const auto& b : seqs[lb]) {
          ++pairs;
          mismatches += dtw(a, b) != dtw_paths(a, b, 0, 0, 0.0);
        }

  std::mt19937_64 rng(77);
  std::uniform_int_distribution<int> len(1, 40);
  std::uniform_real_distribution<double> c(-5.0, 5.0);
  std::size_t prop_fail = 0;
  for (int k = 0; k < 10000; ++k) {
    Polyline a(std::size_t(len(rng))), b(std::size_t(len(rng)));
    for (auto& p : a) p = {c(rng), c(rng)};
    for (auto& p : b) p = {c(rng), c(rng)};
    const double d = dtw(a, b);
    prop_fail += !(d >= 0.0) || dtw(a, a) != 0.0 || d != dtw(b, a);
  }
  const double secs = elapsed_since(t0);
  return {mismatches == 0 && prop_fail == 0 && secs < 60.0,
          format("%zu grid pairs with |a|+|b| <= 6 exact (mismatches %zu); 10000 random pairs, property "
                 "violations %zu",
                 pairs, mismatches, prop_fail)};
}

// ---- kinematics ----

SceneGrid open_scene(const Pose2& start) {
  SceneGrid g = SceneGrid::empty(6.4, 4.8);
  g.scale = scale100();
  g.start_pose = start;
  return g;
}

Verdict kinematics() {
  RandomStream rng(0);
  const NoiseModel none;
  Pose2 q{0.7, -0.3, 33.0};
  for (int k = 0; k < 4; ++k) q = apply_command(q, LowLevelCommand::rotate(90.0), none, rng);
  const double heading_err = std::abs(wrap_deg(q.theta_deg - 33.0));

  const Pose2 start{1.0, 1.0, 0.0};
  Pose2 r = start;
  for (int k = 0; k < 4; ++k) {
    for (int s = 0; s < 10; ++s) r = apply_command(r, LowLevelCommand::step(0.05), none, rng);
    r = apply_command(r, LowLevelCommand::rotate(90.0), none, rng);
  }
  const double loop_err = (r.position() - start.position()).norm();

  const auto t = run_trial(open_scene({1.0, 2.0, 0.0}), sketch_from_world(densify({{1.0, 2.0}, {1.4, 2.0}}, 0.01)),
                           ControlParams{}, none);
  std::size_t steps = 0, bad_steps = 0;
  for (const auto& e : t.events)
    if (e.kind == EventKind::Step) {
      ++steps;
      bad_steps += std::abs(*e.distance_m - 0.05) > 1e-12;
    }
  const bool pass = heading_err < 1e-9 && loop_err < 1e-9 && steps == 8 && bad_steps == 0 &&
                    t.outcomes.size() == 1 && t.outcomes[0].termination == Termination::Completed;
  return {pass, format("heading error %.2e deg, square loop error %.2e m (tol 1e-9), 0.4 m segment: %zu steps of "
                       "0.05 m",
                       heading_err, loop_err, steps)};
}

// ---- safety ----

Verdict safety() {
  const ControlParams p;
  std::size_t trials = 0, blocked = 0, violations = 0, maneuvers = 0, skips = 0, aborted = 0, wrong = 0;
  std::size_t tall = 0, low = 0, mutated = 0;
  for (std::uint64_t seed = 0; seed < 10000; ++seed) {
    const ScenarioSpec spec{kAllCategories[seed % 3], kAllSceneTypes[(seed / 3) % 8], seed, AngleProfile::Lattice};
    Scenario sc = generate_scenario(spec);
    if (seed % 2 == 1) {
      bool changed = false;
      for (auto& h : sc.scene.clearance)
        if (h == 1.2) h = 0.8, changed = true;
      mutated += changed;
    }
    const auto t = run_trial(sc.scene, sc.sketch, p, NoiseModel{});
    ++trials;
    violations += t.safety_violation;
    const double r = sc.scene.platform.footprint_radius_m;
    for (std::size_t k = 0; k < t.trace.size(); ++k) {
      blocked += footprint_blocked(sc.scene, t.trace[k].position(), r, p.h_clearance_m);
      if (k > 0) {
        const Vec2 mid = 0.5 * (t.trace[k - 1].position() + t.trace[k].position());
        blocked += footprint_blocked(sc.scene, mid, r, p.h_clearance_m);
      }
    }
    for (const auto& e : t.encounters) {
      if (e.result == EncounterResult::CheckOnly) continue;
      const bool high = e.h_est_m && *e.h_est_m >= p.h_clearance_m;
      if (e.h_est_m == 1.2) ++tall;
      if (e.h_est_m == 0.8) ++low;
      if (high) {
        if (e.result == EncounterResult::ManeuverDone) ++maneuvers;
        else if (!e.handled) ++aborted;
        else ++wrong;
      } else {
        if (e.result == EncounterResult::Skipped) ++skips;
        else ++wrong;
      }
    }
  }
  const bool pass = blocked == 0 && violations == 0 && wrong == 0 && tall > 0 && low > 0;
  return {pass, format("%zu zero-noise trials (%zu with tables lowered to 0.80 m): blocked footprints %zu, "
                       "safety halts %zu; obstacle events: 1.20 m seen %zu, 0.80 m seen %zu, maneuvers %zu "
                       "(%zu aborted by a blocking cell), skips %zu, dichotomy violations %zu",
                       trials, mutated, blocked, violations, tall, low, maneuvers, aborted, skips, wrong)};
}

// ---- coverage ----

Polyline convex_hull(std::vector<Vec2> pts) {
  std::sort(pts.begin(), pts.end(), [](const Vec2& a, const Vec2& b) {
    return a.x() < b.x() || (a.x() == b.x() && a.y() < b.y());
  });
  Polyline hull;
  for (int pass = 0; pass < 2; ++pass) {
    const std::size_t base = hull.size();
    for (const auto& p : pts) {
      while (hull.size() >= base + 2 && cross2(hull[hull.size() - 1] - hull[hull.size() - 2], p - hull.back()) <= 0)
        hull.pop_back();
      hull.push_back(p);
    }
    hull.pop_back();
    std::reverse(pts.begin(), pts.end());
  }
  return hull;
}

Verdict coverage() {
  const auto t0 = std::chrono::steady_clock::now();
  const ControlParams p;
  const PlatformProfile platform;
  std::mt19937_64 rng(31);
  std::uniform_int_distribution<int> count(3, 10);
  std::uniform_real_distribution<double> size(0.6, 3.0), u(0.0, 1.0);
  const double res = 0.05, half = 0.5 * platform.tool_width_m + 1e-9;
  double worst = 1.0;
  int polygons = 0;
  while (polygons < 200) {
    const double w = size(rng), h = size(rng);
    std::vector<Vec2> pts;
    for (int k = count(rng); k > 0; --k) pts.push_back({2.0 + w * u(rng), 2.0 + h * u(rng)});
    Polyline ring = convex_hull(pts);
    if (ring.size() < 3 || std::abs(signed_area(ring)) < 0.25) continue;
    ++polygons;
    ring.push_back(ring.front());
    const auto segs = segment_sketch(sketch_from_world(ring, StrokeKind::Area, true), p, scale100());
    const SerpentinePlan plan = generate_serpentine_plan(segs.at(0), p);

    Vec2 lo = ring.front(), hi = ring.front();
    for (const auto& q : ring) lo = lo.cwiseMin(q), hi = hi.cwiseMax(q);
    std::size_t target = 0, covered = 0;
    for (int j = int(lo.y() / res); j <= int(hi.y() / res); ++j)
      for (int i = int(lo.x() / res); i <= int(hi.x() / res); ++i) {
        const Vec2 c((i + 0.5) * res, (j + 0.5) * res);
        if (!point_in_polygon(c, ring)) continue;
        ++target;
        for (const auto& run : plan.runs) {
          const double len = (run.end - run.start).norm();
          const Vec2 dir = len > 0.0 ? Vec2((run.end - run.start) / len) : Vec2(1.0, 0.0);
          const Vec2 rel = c - run.start;
          const double a = rel.dot(dir);
          if (a >= -half && a <= len + half && std::abs(cross2(dir, rel)) <= half) {
            ++covered;
            break;
          }
        }
      }
    worst = std::min(worst, double(covered) / double(target));
  }
  const double secs = elapsed_since(t0);
  const bool spacing_ok = p.lane_spacing_m == platform.tool_width_m;
  return {worst >= 0.99 && spacing_ok && secs < 60.0,
          format("200 convex polygons, lane spacing %.2f m = tool width: worst coverage %.4f (need >= 0.99)",
                 p.lane_spacing_m, worst)};
}

// ---- parameter formulas ----

Verdict formulas() {
  const double sd = stopping_distance(0.30, 0.60, 0.10, 0.10);
  const double px = pixel_proxy_lmax(224, 224, 0.08);
  const double hc = required_clearance(0.85, 0.15);
  const bool pass = std::abs(sd - 0.205) <= 1e-12 && std::abs(px - 25.34) <= 0.01 && std::abs(hc - 1.0) <= 1e-12;
  return {pass, format("stopping distance %.12f m (0.205, tol 1e-12), pixel proxy %.4f px (25.34 +- 0.01), "
                       "required clearance %.12f m (1.00, tol 1e-12)",
                       sd, px, hc)};
}

// ---- experiments ----

Verdict length_trend() {
  const auto t0 = std::chrono::steady_clock::now();
  BatchSpec spec;
  spec.trials = 600;
  spec.noise = NoiseModel::calibrated();
  const ResultsFile r = run_batch(spec);
  double ftcr[3] = {0, 0, 0};
  for (const auto& c : r.report.by_category) {
    const auto cat = category_from_string(c.category);
    if (cat) ftcr[int(*cat)] = c.rates.ftcr.value_or(0.0);
  }
  const auto& h = r.report.failure_thirds;
  const std::size_t fails = h[0] + h[1] + h[2];
  const bool ordered = ftcr[0] - ftcr[1] >= 5.0 && ftcr[1] - ftcr[2] >= 5.0;
  const bool monotone = h[0] < h[1] && h[1] < h[2];
  const double secs = elapsed_since(t0);
  return {ordered && monotone && secs < 600.0,
          format("600 trials/category, noise 0.005 m/0.005 m/1.0 deg: task completion short %.1f%% > medium %.1f%% > "
                 "long %.1f%% (gaps >= 5 pp); failure thirds %zu < %zu < %zu (final third %.1f%%)",
                 ftcr[0], ftcr[1], ftcr[2], h[0], h[1], h[2], fails ? 100.0 * double(h[2]) / double(fails) : 0.0)};
}

Verdict turn_set_resolution() {
  double ssspar[3] = {0, 0, 0};
  const std::vector<double> sets[3] = {coarse_turn_set(), baseline_turn_set(), fine_turn_set()};
  for (int k = 0; k < 3; ++k) {
    BatchSpec spec;
    spec.categories = {LengthCategory::Long};
    spec.trials = 400;
    spec.angles = AngleProfile::Free;
    spec.noise = NoiseModel::calibrated();
    spec.params.turn_set = sets[k];
    ssspar[k] = run_batch(spec).report.overall.ssspar.value_or(0.0);
  }
  return {ssspar[0] < ssspar[1] && ssspar[1] < ssspar[2],
          format("long scenarios, free corner angles, 400 trials each: segment adherence {90} %.1f%% < {45,90} "
                 "%.1f%% < {22.5,45,90} %.1f%%",
                 ssspar[0], ssspar[1], ssspar[2])};
}

// ---- reproducibility ----

struct Shell {
  int status = -1;
  std::string out;
};

Shell cli(const std::string& args) {
  const std::string cmd = std::string(SKETCHACT_CLI) + " " + args + " 2>/dev/null";
  Shell r;
  FILE* pipe = popen(cmd.c_str(), "r");
  if (!pipe) return r;
  char buf[8192];
  std::size_t n;
  while ((n = std::fread(buf, 1, sizeof buf, pipe)) > 0) r.out.append(buf, n);
  const int st = pclose(pipe);
  r.status = WIFEXITED(st) ? WEXITSTATUS(st) : -1;
  return r;
}

Verdict reproducibility() {
  BatchSpec spec;
  spec.trials = 40;
  spec.noise = NoiseModel::calibrated();
  spec.jobs = 1;
  const std::string a = dump(to_json(run_batch(spec)));
  spec.jobs = 4;
  const std::string b = dump(to_json(run_batch(spec)));
  const std::string c = dump(to_json(run_batch(spec)));
  const bool lib_same = a == b && b == c;

  const std::string args = "batch --categories short,long --trials 20 --seed 5 ";
  const Shell c1 = cli(args + "--jobs 1"), c2 = cli(args + "--jobs 3");
  const bool cli_same = c1.status == 0 && c1.out == c2.out && !c1.out.empty();

  const fs::path dir = fs::temp_directory_path() / "sketchact-acceptance";
  fs::create_directories(dir);
  const Gateway gw{SceneRegistry{dir}};
  std::size_t compared = 0, differ = 0;
  for (std::uint64_t seed = 0; seed < 4; ++seed) {
    const Json spec_doc{{"category", "medium"}, {"scene_type", "living_room"}, {"seed", seed}};
    const Shell gen = cli("gen --category medium --scene-type living_room --seed " + std::to_string(seed) +
                          " --format structured");
    const auto scen = gw.handle("POST", "/scenario", dump(spec_doc));
    const Json scenario = parse(scen.body)["payload"];
    ++compared;
    differ += gen.status != 0 || gen.out != dump(scenario);

    const fs::path file = dir / ("scenario-" + std::to_string(seed) + ".json");
    write_text(file, dump(scenario));
    const Shell plan = cli("plan --scene " + file.string() + " --format structured");
    ++compared;
    differ += plan.status != 0 || plan.out != dump(parse(gw.handle("POST", "/plan", dump({{"scene", scenario}})).body)["payload"]);

    const Shell run = cli("run --scene " + file.string() + " --seed 11 --noise 0.005,0.005,1 --format structured");
    const Json req{{"scene", scenario},
                   {"seed", 11},
                   {"noise", to_json(NoiseModel{0.005, 0.005, 1.0, 0})},
                   {"tolerance_profile", "floor"}};
    ++compared;
    differ += run.status != 0 || run.out != dump(parse(gw.handle("POST", "/execute", dump(req)).body)["payload"]);
  }
  return {lib_same && cli_same && differ == 0,
          format("batch reruns identical across job counts: library %s, CLI %s; CLI vs gateway payloads: %zu of %zu "
                 "byte-equal",
                 lib_same ? "yes" : "no", cli_same ? "yes" : "no", compared - differ, compared)};
}

}  // namespace

int main() {
  criterion("golden-rules", golden_rules);
  criterion("segmentation", segmentation);
  criterion("dtw-oracle", dtw_oracle);
  criterion("kinematics", kinematics);
  criterion("safety", safety);
  criterion("coverage", coverage);
  criterion("parameter-formulas", formulas);
  criterion("length-trend", length_trend);
  criterion("turn-set-resolution", turn_set_resolution);
  criterion("reproducibility", reproducibility);
  std::printf("%d criteria failed\n", failures);
  return failures == 0 ? 0 : 1;
}
