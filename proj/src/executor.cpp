#include "sketchact/executor.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <set>

namespace sketchact {

std::optional<LowLevelCommand> CommandGenerator::next() {
  if (mode_ == Mode::Stream) return commands_.front();
  if (cursor_ >= commands_.size()) return std::nullopt;
  return commands_[cursor_++];
}

CommandGenerator translate(MacroAction macro, const ControlParams& params, const PlatformProfile&) {
  using Mode = CommandGenerator::Mode;
  switch (macro) {
    case MacroAction::Forward:
      return {Mode::Stream, {LowLevelCommand::step(params.d_step_m)}};
    case MacroAction::CheckUnder:
      return {Mode::Sense, {}};
    case MacroAction::CoverArea:
      return {Mode::Coverage, {}};
    default: break;
  }
  const double deg = turn_degrees(macro);
  const auto& set = params.turn_set;
  if (std::find(set.begin(), set.end(), std::abs(deg)) == set.end())
    throw Error(ErrorCode::UnsupportedTurn,
                std::string(to_string(macro)) + " is not in the configured turn set");
  return {Mode::Finite, {LowLevelCommand::rotate(deg)}};
}

CommandGenerator translate_halt() { return {CommandGenerator::Mode::Finite, {LowLevelCommand::halt()}}; }

PerceptionSnapshot check_obstacle_ahead(const SceneGrid& scene, const Pose2& pose, const ControlParams& params) {
  PerceptionSnapshot snap;
  snap.eta = true;
  const auto hit = cast_footprint(scene, pose, scene.platform.footprint_radius_m, params.d_safety_m);
  if (!hit) return snap;
  snap.obs_ahead = true;
  snap.obstacle_distance_m = hit->distance_m;
  snap.h_est_m = scene.clearance_at(hit->cell.i, hit->cell.j);
  snap.lateral_offset_m = hit->lateral_offset_m;
  return snap;
}

std::optional<double> check_under_clearance(const SceneGrid& scene, const std::vector<CellIndex>& region) {
  if (region.empty()) throw Error(ErrorCode::EmptyRegion, "clearance routine needs a non-empty region");
  std::optional<double> out;
  for (const auto& c : region)
    if (const auto h = scene.clearance_at(c.i, c.j)) out = out ? std::min(*out, *h) : *h;
  return out;
}

std::string_view to_string(Termination t) {
  switch (t) {
    case Termination::Completed: return "completed";
    case Termination::ObstructedSkipped: return "obstructed_skipped";
    case Termination::UnderManeuverDone: return "under_maneuver_done";
    case Termination::SafetyHalt: return "safety_halt";
    case Termination::Timeout: return "timeout";
    case Termination::NotExecuted: return "not_executed";
  }
  return "?";
}

std::optional<Termination> termination_from_string(std::string_view s) {
  for (auto t : {Termination::Completed, Termination::ObstructedSkipped, Termination::UnderManeuverDone,
                 Termination::SafetyHalt, Termination::Timeout, Termination::NotExecuted})
    if (to_string(t) == s) return t;
  return std::nullopt;
}

std::string_view to_string(EventKind k) {
  switch (k) {
    case EventKind::SegmentStart: return "segment_start";
    case EventKind::Decision: return "decision";
    case EventKind::Step: return "step";
    case EventKind::Rotate: return "rotate";
    case EventKind::Halt: return "halt";
    case EventKind::ObstacleDetected: return "obstacle_detected";
    case EventKind::ClearanceChecked: return "clearance_checked";
    case EventKind::Maneuver: return "maneuver";
    case EventKind::SegmentEnd: return "segment_end";
  }
  return "?";
}

std::optional<EventKind> event_kind_from_string(std::string_view s) {
  for (auto k : {EventKind::SegmentStart, EventKind::Decision, EventKind::Step, EventKind::Rotate, EventKind::Halt,
                 EventKind::ObstacleDetected, EventKind::ClearanceChecked, EventKind::Maneuver, EventKind::SegmentEnd})
    if (to_string(k) == s) return k;
  return std::nullopt;
}

std::string_view to_string(EncounterResult r) {
  switch (r) {
    case EncounterResult::ManeuverDone: return "maneuver_done";
    case EncounterResult::Skipped: return "skipped";
    case EncounterResult::CheckOnly: return "check_only";
  }
  return "?";
}

std::optional<EncounterResult> encounter_result_from_string(std::string_view s) {
  for (auto r : {EncounterResult::ManeuverDone, EncounterResult::Skipped, EncounterResult::CheckOnly})
    if (to_string(r) == s) return r;
  return std::nullopt;
}

PolicyInput plan_input(const Segment& segment, std::size_t n_seg, const ControlParams& params) {
  PolicyInput in;
  in.segment_index = segment.index;
  in.n_seg = n_seg;
  in.is_path = segment.is_path;
  in.is_area = segment.is_area;
  in.is_closed = segment.is_closed;
  in.length_m = segment.length_m;
  in.delta_yaw_deg = segment.delta_yaw_deg;
  in.mean_curvature = segment.mean_curvature;
  in.corner_count = segment.corner_count;
  in.params = params;
  return in;
}

namespace {

enum class RunEnd { Reached, Skipped, ManeuverDone, SafetyHalt, Timeout };

bool trial_over(RunEnd r) { return r == RunEnd::SafetyHalt || r == RunEnd::Timeout; }

// Noise-free odometry update, mirroring apply_command with zero noise.
Pose2 ideal(const Pose2& pose, const LowLevelCommand& cmd) {
  Pose2 out = pose;
  switch (cmd.kind) {
    case LowLevelCommand::Kind::Step:
    case LowLevelCommand::Kind::UnderManeuver: {
      const double r = deg2rad(pose.theta_deg);
      out.x = pose.x + cmd.distance_m * std::cos(r);
      out.y = pose.y + cmd.distance_m * std::sin(r);
      break;
    }
    case LowLevelCommand::Kind::Rotate:
      out.theta_deg = wrap_deg(pose.theta_deg + cmd.delta_deg);
      break;
    case LowLevelCommand::Kind::Halt:
      break;
  }
  return out;
}

class Execution {
 public:
  Execution(const SceneGrid& scene, const ControlParams& params, const NoiseModel& noise, const Policy& policy,
            TrialResult& out)
      : scene_(scene),
        params_(params),
        noise_(noise),
        policy_(policy),
        rng_(noise.seed),
        out_(out),
        radius_(scene.platform.footprint_radius_m),
        truth_(scene.start_pose),
        belief_(scene.start_pose) {
    out_.trace.push_back(truth_);
  }

  void run();

 private:
  std::size_t pose_index() const { return out_.trace.size() - 1; }

  Event& emit(EventKind kind) {
    Event e;
    e.kind = kind;
    e.segment = seg_;
    e.pose = pose_index();
    out_.events.push_back(e);
    return out_.events.back();
  }

  void command(const LowLevelCommand& cmd) {
    truth_ = apply_command(truth_, cmd, noise_, rng_);
    belief_ = ideal(belief_, cmd);
    if (cmd.kind != LowLevelCommand::Kind::Halt) out_.trace.push_back(truth_);
  }

  void decision_event(const PolicyDecision& d, bool eta) {
    auto& e = emit(EventKind::Decision);
    e.detail = std::string(to_string(d.action));
    e.confidence = d.confidence;
    e.rule = std::string(to_string(d.rule_fired));
    e.eta = eta;
  }

  void rotate(double deg) {
    command(LowLevelCommand::rotate(deg));
    emit(EventKind::Rotate).delta_deg = deg;
  }

  // Turn-set rotations until the believed heading is within the forward
  // band of `direction`.
  void align(const Vec2& direction) {
    for (int k = 0; k < 4; ++k) {
      const double q = quantize_turn(wrap_deg(heading_deg(direction) - belief_.theta_deg), params_.turn_set);
      if (q == 0.0) break;
      rotate(q);
    }
  }

  bool budget_left() const { return out_.steps_used < out_.step_budget; }

  RunEnd step(double d, bool maneuver) {
    if (!budget_left()) return RunEnd::Timeout;
    command(maneuver ? LowLevelCommand::under_maneuver(d, false) : LowLevelCommand::step(d));
    ++out_.steps_used;
    ++steps_in_segment_;
    emit(maneuver ? EventKind::Maneuver : EventKind::Step).distance_m = d;
    if (maneuver) out_.events.back().detail = "advance";
    if (footprint_blocked(scene_, truth_.position(), radius_, params_.h_clearance_m)) {
      out_.safety_violation = true;
      emit(EventKind::Halt).detail = "safety";
      return RunEnd::SafetyHalt;
    }
    return RunEnd::Reached;
  }

  struct Chord {
    Vec2 a;
    Vec2 u;
    double len = 0.0;
    Vec2 end;
    std::size_t cap = 0;
  };

  Chord chord_to(const Vec2& end) const {
    Chord c;
    c.a = belief_.position();
    c.end = end;
    const Vec2 d = end - c.a;
    c.len = d.norm();
    c.u = c.len > 0.0 ? Vec2(d / c.len) : Vec2(belief_.heading());
    c.cap = std::size_t(std::ceil(c.len / params_.d_step_m - 1e-9)) + 2;
    return c;
  }

  double progress(const Chord& c) const { return (belief_.position() - c.a).dot(c.u); }

  bool reached(const Chord& c, std::size_t steps) const {
    if (progress(c) >= c.len - 1e-9) return true;
    if ((c.end - belief_.position()).norm() < params_.d_step_m - 1e-9) return true;
    return steps >= c.cap;
  }

  // Obstacle branch of the forward loop: halt, re-query the policy with the
  // perception gate open, run the clearance routine, and either pass under
  // the obstacle or give up on the run.
  enum class Handling { Resume, Skip, Stop };

  Handling handle_obstacle(const CastHit& hit, const Chord& chord, std::size_t& steps, RunEnd& stop) {
    auto& det = emit(EventKind::ObstacleDetected);
    det.distance_m = hit.distance_m;
    det.eta = true;
    command(LowLevelCommand::halt());
    emit(EventKind::Halt).detail = "obstacle";

    PolicyInput in = current_input_;
    in.perception = check_obstacle_ahead(scene_, truth_, params_);
    decision_event(policy_(in), true);

    const auto region = occupied_region(scene_, hit.cell);
    const auto h = check_under_clearance(scene_, region);
    auto& chk = emit(EventKind::ClearanceChecked);
    chk.h_est_m = h;
    chk.eta = true;

    ObstacleEncounter enc;
    enc.segment = seg_;
    enc.h_est_m = h;
    if (!h || *h < params_.h_clearance_m) {
      enc.result = EncounterResult::Skipped;
      out_.encounters.push_back(enc);
      return Handling::Skip;
    }

    std::set<CellIndex> cells(region.begin(), region.end());
    auto touches_region = [&](const Vec2& c) {
      for (const auto& cell : cells)
        if (distance_to_cell(scene_, c, cell.i, cell.j) < radius_) return true;
      return false;
    };
    const std::size_t approach_cap =
        std::size_t(std::ceil((hit.distance_m + 2.0 * radius_) / params_.d_step_m)) + 1;
    bool entered = false;
    std::size_t taken = 0;
    enc.result = EncounterResult::ManeuverDone;
    while (!reached(chord, steps)) {
      const Vec2 next = truth_.position() + params_.d_step_m * truth_.heading();
      if (footprint_blocked(scene_, next, radius_, params_.h_clearance_m)) {
        enc.handled = false;
        enc.result = EncounterResult::Skipped;
        out_.encounters.push_back(enc);
        return Handling::Skip;
      }
      const RunEnd r = step(params_.d_step_m, true);
      ++steps;
      ++taken;
      if (r != RunEnd::Reached) {
        enc.handled = false;
        out_.encounters.push_back(enc);
        stop = r;
        return Handling::Stop;
      }
      const bool touching = touches_region(truth_.position());
      if (touching) entered = true;
      if (!touching && (entered || taken >= approach_cap)) break;
    }
    emit(EventKind::Maneuver).detail = "retract";
    out_.encounters.push_back(enc);
    return Handling::Resume;
  }

  // Forward loop toward `end`: perceive, test arrival, step, check safety.
  RunEnd forward_run(const Vec2& end) {
    const Chord chord = chord_to(end);
    std::size_t steps = 0;
    bool maneuvered = false;
    while (true) {
      if (reached(chord, steps)) return maneuvered ? RunEnd::ManeuverDone : RunEnd::Reached;
      if (const auto hit = cast_footprint(scene_, truth_, radius_, params_.d_safety_m)) {
        RunEnd stop = RunEnd::Reached;
        switch (handle_obstacle(*hit, chord, steps, stop)) {
          case Handling::Skip: return RunEnd::Skipped;
          case Handling::Stop: return stop;
          case Handling::Resume: maneuvered = true; continue;
        }
      }
      const double remaining = chord.len - progress(chord);
      const double d = std::clamp(remaining, 1e-9, params_.d_step_m);
      const RunEnd r = step(d, false);
      ++steps;
      if (r != RunEnd::Reached) return r;
    }
  }

  Termination run_path(const Segment& seg, SegmentOutcome& outcome);
  Termination run_area(const Segment& seg, SegmentOutcome& outcome);
  Termination check_only();

  const SceneGrid& scene_;
  const ControlParams& params_;
  const NoiseModel& noise_;
  const Policy& policy_;
  RandomStream rng_;
  TrialResult& out_;
  double radius_;
  Pose2 truth_;
  Pose2 belief_;
  std::size_t seg_ = 0;
  std::size_t steps_in_segment_ = 0;
  PolicyInput current_input_;
};

Termination to_termination(RunEnd r) {
  switch (r) {
    case RunEnd::Reached: return Termination::Completed;
    case RunEnd::Skipped: return Termination::ObstructedSkipped;
    case RunEnd::ManeuverDone: return Termination::UnderManeuverDone;
    case RunEnd::SafetyHalt: return Termination::SafetyHalt;
    case RunEnd::Timeout: return Termination::Timeout;
  }
  return Termination::Completed;
}

Termination Execution::check_only() {
  const auto hit = cast_footprint(scene_, truth_, radius_, params_.d_safety_m);
  if (!hit) {
    emit(EventKind::ClearanceChecked).eta = true;
    return Termination::Completed;
  }
  const auto h = check_under_clearance(scene_, occupied_region(scene_, hit->cell));
  auto& e = emit(EventKind::ClearanceChecked);
  e.h_est_m = h;
  e.eta = true;
  out_.encounters.push_back({seg_, h, EncounterResult::CheckOnly, true});
  return Termination::Completed;
}

Termination Execution::run_path(const Segment& seg, SegmentOutcome& outcome) {
  const Vec2 target = seg.end();
  const Vec2 to_end = target - belief_.position();
  const double dpsi = to_end.norm() > 1e-9 ? wrap_deg(heading_deg(to_end) - belief_.theta_deg) : 0.0;
  outcome.runtime_delta_yaw_deg = dpsi;
  current_input_.delta_yaw_deg = dpsi;

  const PolicyDecision decision = policy_(current_input_);
  outcome.decision = decision;
  decision_event(decision, false);

  if (decision.action == MacroAction::CheckUnder) return check_only();
  if (decision.action == MacroAction::CoverArea) return run_area(seg, outcome);

  auto gen = translate(decision.action, params_, scene_.platform);
  if (gen.mode() == CommandGenerator::Mode::Finite) {
    while (const auto cmd = gen.next()) {
      command(*cmd);
      emit(EventKind::Rotate).delta_deg = cmd->delta_deg;
      outcome.commanded_turn_deg += cmd->delta_deg;
    }
  }
  outcome.advance_begin = pose_index();
  return to_termination(forward_run(target));
}

Termination Execution::run_area(const Segment& seg, SegmentOutcome& outcome) {
  SerpentinePlan plan;
  double best = std::numeric_limits<double>::infinity();
  for (int v = 0; v < 4; ++v) {
    SerpentinePlan p = generate_serpentine_plan(seg, params_, v);
    const double d = (p.runs.front().start - belief_.position()).norm();
    if (d < best - 1e-12) {
      best = d;
      plan = std::move(p);
    }
  }
  outcome.lanes = plan.lane_count;
  const std::size_t begin = pose_index();

  bool skipped = false, maneuvered = false;
  auto account = [&](RunEnd r) {
    if (r == RunEnd::Skipped) skipped = true;
    if (r == RunEnd::ManeuverDone) maneuvered = true;
    return trial_over(r);
  };

  if (best > 0.5 * params_.d_step_m) {
    align(plan.runs.front().start - belief_.position());
    const RunEnd r = forward_run(plan.runs.front().start);
    if (account(r)) return to_termination(r);
  }
  align(plan.runs.front().end - plan.runs.front().start);

  std::size_t run = 0;
  for (const MacroAction m : plan.macros) {
    if (is_turn(m)) {
      rotate(turn_degrees(m));
      continue;
    }
    const RunEnd r = forward_run(plan.runs[run++].end);
    if (account(r)) return to_termination(r);
  }

  const std::vector<Pose2> slice(out_.trace.begin() + std::ptrdiff_t(begin), out_.trace.end());
  outcome.coverage = swept_coverage(scene_, seg.world_polyline, slice, scene_.platform.tool_width_m);
  if (skipped && *outcome.coverage < 0.95) return Termination::ObstructedSkipped;
  return maneuvered ? Termination::UnderManeuverDone : Termination::Completed;
}

void Execution::run() {
  const auto& segments = out_.segments;
  out_.outcomes.resize(segments.size());
  for (std::size_t k = 0; k < segments.size(); ++k) {
    out_.outcomes[k].segment_index = k;
    out_.outcomes[k].trace_begin = out_.outcomes[k].trace_end = pose_index();
  }
  for (std::size_t k = 0; k < segments.size(); ++k) {
    const Segment& seg = segments[k];
    SegmentOutcome& outcome = out_.outcomes[k];
    seg_ = k;
    steps_in_segment_ = 0;
    outcome.trace_begin = pose_index();
    emit(EventKind::SegmentStart);
    current_input_ = plan_input(seg, segments.size(), params_);

    Termination t;
    if (seg.is_area || seg.is_closed) {
      outcome.decision = policy_(current_input_);
      decision_event(outcome.decision, false);
      t = outcome.decision.action == MacroAction::CoverArea ? run_area(seg, outcome) : run_path(seg, outcome);
    } else {
      t = run_path(seg, outcome);
    }
    outcome.termination = t;
    outcome.steps = steps_in_segment_;
    outcome.trace_end = pose_index();
    emit(EventKind::SegmentEnd).detail = std::string(to_string(t));
    if (t == Termination::SafetyHalt || t == Termination::Timeout) {
      out_.timed_out = t == Termination::Timeout;
      for (std::size_t r = k + 1; r < segments.size(); ++r)
        out_.outcomes[r].trace_begin = out_.outcomes[r].trace_end = pose_index();
      break;
    }
  }
}

std::size_t step_budget(const std::vector<Segment>& segments, const ControlParams& params) {
  double sum = 0.0;
  for (const auto& seg : segments) {
    double len = seg.length_m;
    if (seg.is_area || seg.is_closed) len = generate_serpentine_plan(seg, params).length_m + seg.length_m;
    sum += std::ceil(len / params.d_step_m - 1e-9);
  }
  return std::size_t(10.0 * sum);
}

}  // namespace

TrialResult run_segments(const SceneGrid& scene, std::vector<Segment> segments, const ControlParams& params,
                         const NoiseModel& noise, const std::string& policy) {
  if (footprint_touches_occupied(scene, scene.start_pose.position(), scene.platform.footprint_radius_m))
    throw Error(ErrorCode::StartPoseInvalid, "robot footprint at the start pose overlaps an occupied cell",
                "/start_pose");
  const Policy& pi = PolicyRegistry::global().get(policy);
  TrialResult out;
  out.policy = policy;
  out.noise = noise;
  out.segments = std::move(segments);
  out.step_budget = step_budget(out.segments, params);
  Execution exec(scene, params, noise, pi, out);
  exec.run();
  return out;
}

TrialResult run_trial(const SceneGrid& scene, const Sketch& sketch, const ControlParams& params,
                      const NoiseModel& noise, const std::string& policy) {
  if (std::holds_alternative<std::monostate>(scene.scale))
    throw Error(ErrorCode::SceneSketchScaleMismatch, "scene carries no metric scale", "/scale");
  if (scene.image_width > 0 &&
      (scene.image_width != sketch.image_width || scene.image_height != sketch.image_height))
    throw Error(ErrorCode::SceneSketchScaleMismatch, "sketch image dimensions differ from the scene image",
                "/image");
  validate(sketch);
  return run_segments(scene, segment_sketch(sketch, params, scene.scale), params, noise, policy);
}

}  // namespace sketchact
