#include "sketchact/metrics.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <map>

namespace sketchact {

double dtw(const Polyline& a, const Polyline& b) {
  if (a.empty() || b.empty()) throw Error(ErrorCode::EmptySequence, "DTW needs two non-empty sequences");
  const std::size_t m = b.size();
  constexpr double inf = std::numeric_limits<double>::infinity();
  std::vector<double> prev(m + 1, inf), cur(m + 1, inf);
  prev[0] = 0.0;
  for (std::size_t i = 1; i <= a.size(); ++i) {
    cur[0] = inf;
    for (std::size_t j = 1; j <= m; ++j) {
      const double cost = (a[i - 1] - b[j - 1]).norm();
      cur[j] = cost + std::min({prev[j - 1], prev[j], cur[j - 1]});
    }
    std::swap(prev, cur);
  }
  return prev[m];
}

Polyline trace_positions(const std::vector<Pose2>& trace) {
  Polyline out;
  for (const auto& p : trace)
    if (out.empty() || out.back() != p.position()) out.push_back(p.position());
  return out;
}

SegmentJudgment judge_segment(const SegmentOutcome& outcome, const std::vector<Pose2>& trace, const Segment& segment,
                              const ToleranceProfile& tol) {
  if (outcome.trace_begin > outcome.trace_end || outcome.trace_end >= trace.size() ||
      (outcome.advance_begin &&
       (*outcome.advance_begin < outcome.trace_begin || *outcome.advance_begin > outcome.trace_end)))
    throw Error(ErrorCode::TraceMismatch, "segment " + std::to_string(outcome.segment_index) +
                                              " pose range does not fit the trace");
  SegmentJudgment out;
  out.success = outcome.termination == Termination::Completed ||
                outcome.termination == Termination::UnderManeuverDone;
  if (!out.success) return out;

  const MacroAction a = outcome.decision.action;
  if (a == MacroAction::CoverArea) {
    out.adherent = outcome.coverage.value_or(0.0) >= kCoverageThreshold;
    return out;
  }
  if (a == MacroAction::CheckUnder) {
    out.adherent = true;
    return out;
  }

  bool ok = true;
  const std::size_t adv = outcome.advance_begin.value_or(outcome.trace_begin);
  if (is_turn(a)) {
    const double achieved = wrap_deg(trace[adv].theta_deg - trace[outcome.trace_begin].theta_deg);
    ok = std::abs(wrap_deg(achieved - outcome.commanded_turn_deg)) <= tol.local_angular_deg;
  }
  const Vec2 s = segment.start(), e = segment.end();
  for (std::size_t k = adv; k <= outcome.trace_end && ok; ++k)
    ok = point_segment_distance(trace[k].position(), s, e) <= tol.local_lateral_m;
  out.adherent = ok;
  return out;
}

namespace {

bool area_task_ok(const SegmentOutcome& o) {
  const bool done = o.termination == Termination::Completed || o.termination == Termination::UnderManeuverDone;
  if (o.decision.action == MacroAction::CoverArea) return done && o.coverage.value_or(0.0) >= kCoverageThreshold;
  return done;
}

}  // namespace

TaskJudgment judge_task(const TrialResult& trial, const Polyline& reference, const std::optional<Polyline>& area,
                        const ToleranceProfile& tol) {
  TaskJudgment out;
  if (trial.safety_violation || trial.timed_out) return out;
  out.ftcr = std::all_of(trial.outcomes.begin(), trial.outcomes.end(), area_task_ok);
  if (!out.ftcr) return out;

  Polyline ref = reference;
  if (ref.empty())
    for (const auto& seg : trial.segments)
      if (seg.is_path) ref.insert(ref.end(), seg.world_polyline.begin(), seg.world_polyline.end());
  std::vector<Polyline> areas;
  if (area) areas.push_back(*area);
  for (const auto& seg : trial.segments)
    if (seg.is_area || seg.is_closed) areas.push_back(seg.world_polyline);

  out.ftspar = true;
  for (const auto& pose : trial.trace) {
    const Vec2 p = pose.position();
    const auto in_area = [&](const Polyline& a) {
      return point_in_polygon(p, a) || polyline_distance(p, a) <= tol.lateral_band_m;
    };
    if (std::any_of(areas.begin(), areas.end(), in_area)) continue;
    if (ref.empty() || polyline_distance(p, ref) > tol.lateral_band_m) {
      out.ftspar = false;
      break;
    }
  }
  return out;
}

void judge_outcomes(TrialResult& trial, const ToleranceProfile& tol) {
  for (auto& o : trial.outcomes) {
    if (o.termination == Termination::NotExecuted) {
      o.success = o.adherent = false;
      continue;
    }
    const auto j = judge_segment(o, trial.trace, trial.segments[o.segment_index], tol);
    o.success = j.success;
    o.adherent = j.adherent.value_or(false);
  }
}

TrialRow summarize(TrialResult& trial, const Polyline& reference, const std::optional<Polyline>& area,
                   const ToleranceProfile& tol) {
  judge_outcomes(trial, tol);
  TrialRow row;
  row.segments = trial.outcomes.size();
  for (const auto& o : trial.outcomes) {
    if (o.termination == Termination::NotExecuted) continue;
    ++row.executed;
    row.successes += o.success;
    row.adherent += o.success && o.adherent;
  }
  const auto task = judge_task(trial, reference, area, tol);
  row.ftcr = task.ftcr;
  row.ftspar = task.ftspar;

  Polyline ref = reference;
  if (ref.empty())
    for (const auto& seg : trial.segments) ref.insert(ref.end(), seg.world_polyline.begin(), seg.world_polyline.end());
  const double len = polyline_length(ref);
  Polyline dense = len > 0.0 ? resample(ref, 0.05) : ref;
  if (dense.empty()) dense.push_back(trial.trace.front().position());
  row.dtw = dtw(trace_positions(trial.trace), dense);
  row.dtw_per_m = len > 0.0 ? row.dtw / len : 0.0;

  row.encounters = trial.encounters.size();
  for (const auto& e : trial.encounters) row.encounters_handled += e.handled;

  if (!row.ftcr) {
    for (std::size_t k = 0; k < trial.outcomes.size(); ++k) {
      if (area_task_ok(trial.outcomes[k])) continue;
      row.failure_third = std::min(2, int(3 * k / std::max<std::size_t>(1, trial.outcomes.size())));
      break;
    }
  }
  return row;
}

namespace {

std::optional<double> pct(std::size_t num, std::size_t den) {
  if (den == 0) return std::nullopt;
  return 100.0 * double(num) / double(den);
}

}  // namespace

Rates rates_of(const std::vector<const TrialRow*>& rows) {
  Rates r;
  std::size_t executed = 0;
  double dtw_sum = 0.0;
  for (const TrialRow* row : rows) {
    ++r.trials;
    r.segments += row->segments;
    executed += row->executed;
    r.successes += row->successes;
    r.adherent += row->adherent;
    r.tasks_completed += row->ftcr;
    r.tasks_adherent += row->ftspar;
    r.encounters += row->encounters;
    r.encounters_handled += row->encounters_handled;
    dtw_sum += row->dtw_per_m;
  }
  r.sssr = pct(r.successes, executed);
  r.ssspar = pct(r.adherent, r.successes);
  r.ssspar_over_executed = pct(r.adherent, executed);
  r.ftcr = pct(r.tasks_completed, r.trials);
  r.ftspar = pct(r.tasks_adherent, r.trials);
  r.uoms = pct(r.encounters_handled, r.encounters);
  r.mean_dtw_per_m = r.trials ? dtw_sum / double(r.trials) : 0.0;
  return r;
}

MetricsReport aggregate(const std::vector<TrialRow>& rows) {
  if (rows.empty()) throw Error(ErrorCode::NoTrials, "cannot aggregate an empty batch");
  MetricsReport report;
  std::vector<const TrialRow*> all;
  std::map<std::pair<std::string, std::string>, std::vector<const TrialRow*>> cells;
  std::map<std::string, std::vector<const TrialRow*>> by_cat;
  for (const auto& row : rows) {
    all.push_back(&row);
    cells[{row.scene_type, row.category}].push_back(&row);
    by_cat[row.category].push_back(&row);
    if (row.failure_third) ++report.failure_thirds[std::size_t(*row.failure_third)];
  }
  report.overall = rates_of(all);
  for (const auto& [key, members] : cells) report.cells.push_back({key.first, key.second, rates_of(members)});
  for (const auto& [cat, members] : by_cat) report.by_category.push_back({"all", cat, rates_of(members)});
  return report;
}

}  // namespace sketchact
