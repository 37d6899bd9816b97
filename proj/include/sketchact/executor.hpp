#pragma once

#include "sketchact/params.hpp"
#include "sketchact/policy.hpp"
#include "sketchact/sketch.hpp"
#include "sketchact/world.hpp"

#include <optional>
#include <string>
#include <vector>

namespace sketchact {

/// Lazily produced low-level commands for one macro-action. Forward is an
/// unbounded stream of steps; the consumer decides when to stop.
class CommandGenerator {
 public:
  enum class Mode { Stream, Finite, Sense, Coverage };

  CommandGenerator(Mode mode, std::vector<LowLevelCommand> commands)
      : mode_(mode), commands_(std::move(commands)) {}

  std::optional<LowLevelCommand> next();
  Mode mode() const { return mode_; }
  bool unbounded() const { return mode_ == Mode::Stream; }

 private:
  Mode mode_;
  std::vector<LowLevelCommand> commands_;
  std::size_t cursor_ = 0;
};

/// The embodiment-specific translator. Throws UnsupportedTurn when a turn's
/// magnitude is not in params.turn_set.
CommandGenerator translate(MacroAction macro, const ControlParams& params, const PlatformProfile& platform);
CommandGenerator translate_halt();

/// Forward footprint cast up to d_safety. Out-of-grid space is an obstacle.
PerceptionSnapshot check_obstacle_ahead(const SceneGrid& scene, const Pose2& pose, const ControlParams& params);

/// Minimum clearance over the annotated cells of a region; empty when no
/// cell carries an annotation. Throws EmptyRegion.
std::optional<double> check_under_clearance(const SceneGrid& scene, const std::vector<CellIndex>& region);

/// One straight run of a coverage plan, in world coordinates.
struct LaneRun {
  Vec2 start;
  Vec2 end;
  bool is_lane = true;  // false for the short shift between lanes
};

struct SerpentinePlan {
  std::vector<MacroAction> macros;  // forward runs interleaved with paired turns
  std::vector<LaneRun> runs;        // one per forward macro, in order
  std::size_t lane_count = 0;
  Vec2 axis{1.0, 0.0};  // lane direction of the first lane
  double length_m = 0.0;
};

/// Boustrophedon plan over the area polygon. Lanes run along the longest
/// bounding-box axis, lane_spacing_m apart, each clipped to the polygon.
/// variant in [0, 4) flips the lane direction (bit 0) and the side the
/// sweep starts from (bit 1), so execution can begin at the nearest corner.
/// Throws DegenerateArea or UnsupportedTurn.
SerpentinePlan generate_serpentine_plan(const Segment& area_segment, const ControlParams& params, int variant = 0);

enum class Termination {
  Completed,
  ObstructedSkipped,
  UnderManeuverDone,
  SafetyHalt,
  Timeout,
  NotExecuted,  // never reached because an earlier segment ended the trial
};

std::string_view to_string(Termination t);
std::optional<Termination> termination_from_string(std::string_view s);

struct SegmentOutcome {
  std::size_t segment_index = 0;
  PolicyDecision decision;
  Termination termination = Termination::NotExecuted;
  std::size_t trace_begin = 0;  // pose indices, inclusive
  std::size_t trace_end = 0;
  double commanded_turn_deg = 0.0;
  std::optional<std::size_t> advance_begin;  // first pose after the rotation(s)
  std::size_t steps = 0;
  std::optional<double> coverage;  // cover_area only
  std::optional<std::size_t> lanes;
  double runtime_delta_yaw_deg = 0.0;
  bool success = false;   // filled by metrics
  bool adherent = false;  // filled by metrics
};

enum class EventKind {
  SegmentStart,
  Decision,
  Step,
  Rotate,
  Halt,
  ObstacleDetected,
  ClearanceChecked,
  Maneuver,
  SegmentEnd,
};

std::string_view to_string(EventKind k);
std::optional<EventKind> event_kind_from_string(std::string_view s);

struct Event {
  EventKind kind = EventKind::Step;
  std::size_t segment = 0;
  std::size_t pose = 0;  // trace index after the event
  std::optional<double> distance_m;
  std::optional<double> delta_deg;
  std::optional<double> h_est_m;
  std::optional<std::string> detail;  // action token, termination, maneuver phase
  std::optional<double> confidence;
  std::optional<std::string> rule;
  bool eta = false;
};

enum class EncounterResult { ManeuverDone, Skipped, CheckOnly };
std::string_view to_string(EncounterResult r);
std::optional<EncounterResult> encounter_result_from_string(std::string_view s);

struct ObstacleEncounter {
  std::size_t segment = 0;
  std::optional<double> h_est_m;
  EncounterResult result = EncounterResult::Skipped;
  bool handled = true;  // no intervention needed: routine outcome matched clearance, no collision
};

struct TrialResult {
  std::vector<Segment> segments;
  std::vector<Pose2> trace;  // true poses, index 0 = start
  std::vector<SegmentOutcome> outcomes;
  std::vector<Event> events;
  std::vector<ObstacleEncounter> encounters;
  std::size_t steps_used = 0;
  std::size_t step_budget = 0;
  bool safety_violation = false;
  bool timed_out = false;
  std::string policy = "rules";
  NoiseModel noise;
};

/// Runs the closed-loop execution of a sketch in a scene. The scene's scale
/// grounds the sketch. Throws StartPoseInvalid, SceneSketchScaleMismatch or
/// any geometry error from segmentation.
TrialResult run_trial(const SceneGrid& scene, const Sketch& sketch, const ControlParams& params,
                      const NoiseModel& noise, const std::string& policy = "rules");

/// Same, with a precomputed segment list.
TrialResult run_segments(const SceneGrid& scene, std::vector<Segment> segments, const ControlParams& params,
                         const NoiseModel& noise, const std::string& policy = "rules");

/// Policy input for a segment as seen before execution (eta = 0).
PolicyInput plan_input(const Segment& segment, std::size_t n_seg, const ControlParams& params);

/// Fraction of target cells (free cells with centers inside the polygon)
/// swept by a square tool pad of side tool_width moving along the poses.
double swept_coverage(const SceneGrid& scene, const Polyline& polygon, const std::vector<Pose2>& poses,
                      double tool_width);

}  // namespace sketchact
