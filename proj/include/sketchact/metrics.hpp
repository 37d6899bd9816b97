#pragma once

#include "sketchact/executor.hpp"

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <vector>

namespace sketchact {

struct ToleranceProfile {
  double lateral_band_m = 0.25;  // task corridor half-width
  double local_lateral_m = 0.05;
  double local_angular_deg = 5.0;

  static ToleranceProfile floor() { return {}; }
  static ToleranceProfile tabletop() { return {0.05, 0.05, 5.0}; }
  friend bool operator==(const ToleranceProfile&, const ToleranceProfile&) = default;
};

/// Coverage fraction a cover_area segment must reach to count for the task.
inline constexpr double kCoverageThreshold = 0.95;

/// Full-window DTW with Euclidean point cost. Throws EmptySequence.
double dtw(const Polyline& a, const Polyline& b);

/// Trace positions with consecutive repeats (in-place rotations) dropped.
Polyline trace_positions(const std::vector<Pose2>& trace);

struct SegmentJudgment {
  bool success = false;
  std::optional<bool> adherent;  // only judged for successful segments
};

/// Throws TraceMismatch when the outcome's pose range does not fit the trace.
SegmentJudgment judge_segment(const SegmentOutcome& outcome, const std::vector<Pose2>& trace, const Segment& segment,
                              const ToleranceProfile& tol);

struct TaskJudgment {
  bool ftcr = false;
  bool ftspar = false;
};

/// Reference defaults to the concatenated segment polylines when empty.
/// Poses inside an area polygon count as inside the corridor.
TaskJudgment judge_task(const TrialResult& trial, const Polyline& reference, const std::optional<Polyline>& area,
                        const ToleranceProfile& tol);

/// Fills success/adherent on every outcome.
void judge_outcomes(TrialResult& trial, const ToleranceProfile& tol);

/// One judged trial, the unit the aggregate is built from.
struct TrialRow {
  std::string scene_type = "other";
  std::string category = "short";
  std::uint64_t seed = 0;
  std::size_t trial = 0;
  std::size_t corners = 0;
  std::size_t segments = 0;
  std::size_t executed = 0;  // segments not cut off by an earlier halt
  std::size_t successes = 0;
  std::size_t adherent = 0;
  bool ftcr = false;
  bool ftspar = false;
  double dtw = 0.0;
  double dtw_per_m = 0.0;
  std::size_t encounters = 0;
  std::size_t encounters_handled = 0;
  std::optional<int> failure_third;  // 0, 1, 2 for failed tasks
  std::string turn_set = "45,90";

  friend bool operator==(const TrialRow&, const TrialRow&) = default;
};

/// Judges the trial (filling outcomes) and condenses it into a row.
TrialRow summarize(TrialResult& trial, const Polyline& reference, const std::optional<Polyline>& area,
                   const ToleranceProfile& tol);

struct Rates {
  std::optional<double> sssr;
  std::optional<double> ssspar;
  std::optional<double> ssspar_over_executed;  // alternative denominator, for comparison
  std::optional<double> ftcr;
  std::optional<double> ftspar;
  std::optional<double> uoms;
  std::size_t trials = 0;
  std::size_t segments = 0;
  std::size_t successes = 0;
  std::size_t adherent = 0;
  std::size_t tasks_completed = 0;
  std::size_t tasks_adherent = 0;
  std::size_t encounters = 0;
  std::size_t encounters_handled = 0;
  double mean_dtw_per_m = 0.0;

  friend bool operator==(const Rates&, const Rates&) = default;
};

struct CellReport {
  std::string scene_type;
  std::string category;
  Rates rates;
  friend bool operator==(const CellReport&, const CellReport&) = default;
};

struct MetricsReport {
  Rates overall;
  std::vector<CellReport> cells;              // sorted by (scene_type, category)
  std::vector<CellReport> by_category;        // scene_type = "all"
  std::array<std::size_t, 3> failure_thirds{};  // first failed segment position
  friend bool operator==(const MetricsReport&, const MetricsReport&) = default;
};

/// Ordered fold over rows. Throws NoTrials.
MetricsReport aggregate(const std::vector<TrialRow>& rows);

Rates rates_of(const std::vector<const TrialRow*>& rows);

}  // namespace sketchact
