#include "doctest.h"
#include "fixtures.hpp"

#include "sketchact/metrics.hpp"

#include <functional>
#include <limits>
#include <random>

using namespace sketchact;
using namespace fixtures;

namespace {

// Minimum over every monotone warping path, enumerated without memoization.
double dtw_enumerate(const Polyline& a, const Polyline& b) {
  std::function<double(std::size_t, std::size_t)> best = [&](std::size_t i, std::size_t j) -> double {
    const double c = (a[i] - b[j]).norm();
    if (i + 1 == a.size() && j + 1 == b.size()) return c;
    double r = std::numeric_limits<double>::infinity();
    if (i + 1 < a.size()) r = std::min(r, best(i + 1, j));
    if (j + 1 < b.size()) r = std::min(r, best(i, j + 1));
    if (i + 1 < a.size() && j + 1 < b.size()) r = std::min(r, best(i + 1, j + 1));
    return c + r;
  };
  return best(0, 0);
}

TrialRow row(std::size_t executed, std::size_t successes, std::size_t adherent, bool ftcr, bool ftspar) {
  TrialRow r;
  r.segments = r.executed = executed;
  r.successes = successes;
  r.adherent = adherent;
  r.ftcr = ftcr;
  r.ftspar = ftspar;
  return r;
}

}  // namespace

TEST_CASE("dtw examples") {
  CHECK(dtw({{0, 0}, {1, 0}}, {{0, 0}, {1, 0}}) == 0.0);
  CHECK(dtw({{0, 0}}, {{0, 0}, {3, 4}}) == 5.0);
  CHECK(dtw({{0, 0}, {1, 0}, {2, 0}}, {{0, 1}, {2, 1}}) == doctest::Approx(2.0 + std::sqrt(2.0)));
  CHECK_THROWS_AS(dtw({}, {{0, 0}}), Error);
}

TEST_CASE("dtw agrees with path enumeration and is symmetric") {
  std::mt19937_64 rng(11);
  std::uniform_real_distribution<double> c(-2.0, 2.0);
  std::uniform_int_distribution<int> len(1, 6);
  for (int k = 0; k < 300; ++k) {
    Polyline a(std::size_t(len(rng))), b(std::size_t(len(rng)));
    for (auto& p : a) p = {c(rng), c(rng)};
    for (auto& p : b) p = {c(rng), c(rng)};
    const double d = dtw(a, b);
    CHECK(d == doctest::Approx(dtw_enumerate(a, b)).epsilon(1e-12));
    CHECK(d == doctest::Approx(dtw(b, a)).epsilon(1e-12));
    CHECK(d >= 0.0);
    CHECK(dtw(a, a) == 0.0);
  }
}

TEST_CASE("segment judgment") {
  Segment seg;
  seg.world_polyline = {{0, 0}, {0.5, 0}};
  seg.length_m = 0.5;
  std::vector<Pose2> trace{{0, 0, 0}, {0, 0, 88}, {0.25, 0.02, 88}, {0.5, 0.03, 88}};
  SegmentOutcome o;
  o.termination = Termination::Completed;
  o.decision = {MacroAction::TurnP90, 0.95, Rule::Rule2};
  o.commanded_turn_deg = 90.0;
  o.trace_begin = 0;
  o.trace_end = 3;
  o.advance_begin = 1;
  const ToleranceProfile tol;
  auto j = judge_segment(o, trace, seg, tol);
  CHECK(j.success);
  CHECK(j.adherent == true);

  trace[3].y = 0.06;
  CHECK(judge_segment(o, trace, seg, tol).adherent == false);
  trace[3].y = 0.03;
  trace[1].theta_deg = trace[2].theta_deg = trace[3].theta_deg = 84.0;
  CHECK(judge_segment(o, trace, seg, tol).adherent == false);

  o.termination = Termination::ObstructedSkipped;
  j = judge_segment(o, trace, seg, tol);
  CHECK_FALSE(j.success);
  CHECK_FALSE(j.adherent);

  o.trace_end = 9;
  CHECK_THROWS_AS(judge_segment(o, trace, seg, tol), Error);
}

TEST_CASE("task judgment") {
  const SceneGrid g = open_scene({1.0, 1.0, 0.0});
  auto t = run_trial(g, path_sketch({{1.0, 1.0}, {2.0, 1.0}, {2.0, 2.0}}), ControlParams{}, NoiseModel{});
  const ToleranceProfile tol;
  auto ok = judge_task(t, {}, std::nullopt, tol);
  CHECK(ok.ftcr);
  CHECK(ok.ftspar);

  // A reference far from the executed trace breaks adherence only.
  const Polyline far{{1.0, 3.0}, {3.0, 3.0}};
  auto off = judge_task(t, far, std::nullopt, tol);
  CHECK(off.ftcr);
  CHECK_FALSE(off.ftspar);

  t.outcomes.back().termination = Termination::ObstructedSkipped;
  CHECK_FALSE(judge_task(t, {}, std::nullopt, tol).ftcr);
  t.safety_violation = true;
  CHECK_FALSE(judge_task(t, {}, std::nullopt, tol).ftspar);
}

TEST_CASE("aggregate rates") {
  const std::vector<TrialRow> rows{row(3, 3, 2, true, false), row(2, 1, 1, false, false)};
  const auto rep = aggregate(rows);
  CHECK(rep.overall.sssr == doctest::Approx(80.0));
  CHECK(rep.overall.ssspar == doctest::Approx(75.0));
  CHECK(rep.overall.ssspar_over_executed == doctest::Approx(60.0));
  CHECK(rep.overall.ftcr == doctest::Approx(50.0));
  CHECK(rep.overall.ftspar == doctest::Approx(0.0));
  CHECK_FALSE(rep.overall.uoms);
  CHECK(rep.overall.trials == 2);
  CHECK_THROWS_AS(aggregate({}), Error);
}

TEST_CASE("failure position thirds") {
  std::vector<TrialRow> rows;
  for (int third : {0, 1, 1, 2, 2, 2}) {
    TrialRow r = row(3, 2, 2, false, false);
    r.failure_third = third;
    rows.push_back(r);
  }
  const auto rep = aggregate(rows);
  CHECK(rep.failure_thirds == std::array<std::size_t, 3>{1, 2, 3});
}

TEST_CASE("summarize fills a row") {
  const SceneGrid g = open_scene({1.0, 1.0, 0.0});
  auto t = run_trial(g, path_sketch({{1.0, 1.0}, {2.0, 1.0}}), ControlParams{}, NoiseModel{});
  const auto r = summarize(t, {}, std::nullopt, ToleranceProfile{});
  CHECK(r.segments == 2);
  CHECK(r.executed == 2);
  CHECK(r.successes == 2);
  CHECK(r.adherent == 2);
  CHECK(r.ftcr);
  CHECK(r.dtw_per_m < 0.05);
  CHECK_FALSE(r.failure_third);
}
