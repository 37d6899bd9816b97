#pragma once

#include "sketchact/common.hpp"
#include "sketchact/homography.hpp"
#include "sketchact/params.hpp"

#include <optional>
#include <string>
#include <variant>
#include <vector>

namespace sketchact {

enum class StrokeKind { Path, Area };

struct Stroke {
  std::vector<PixelPoint> points;
  StrokeKind kind = StrokeKind::Path;
  bool closed = false;

  bool is_area() const { return kind == StrokeKind::Area || closed; }
};

/// User instruction drawn over a scene photograph. The free-text note is
/// carried through untouched.
struct Sketch {
  std::vector<Stroke> strokes;
  int image_width = 0;
  int image_height = 0;
  std::optional<std::string> language_note;
  std::vector<Correspondence> correspondences;  // optional ground-plane calibration
};

/// Endpoints within this fraction of the image diagonal count as closed.
inline constexpr double kClosureFraction = 0.02;

/// Drops consecutive duplicate points. Throws DegenerateStroke if fewer than
/// two distinct points remain.
std::vector<PixelPoint> canonical_points(const std::vector<PixelPoint>& pts);

/// Structural checks: non-empty, in-bounds, closure tolerance. Throws
/// EmptySketch, DegenerateStroke or ValidationFailed (with location).
void validate(const Sketch& sketch);

/// Resolution-relative stand-in for a calibrated ground plane.
struct PixelProxy {
  double kappa = 0.08;
  friend bool operator==(const PixelProxy&, const PixelProxy&) = default;
};

using MetricScale = std::variant<std::monostate, Homography, PixelProxy>;

/// Pixel <-> world mapping for one image. With a pixel proxy, L_max^px
/// pixels correspond to L_max meters and v is flipped so y points up.
class GroundMapping {
 public:
  GroundMapping(const MetricScale& scale, int image_width, int image_height, const ControlParams& params);

  Vec2 to_world(const PixelPoint& p) const;
  PixelPoint to_pixel(const Vec2& w) const;
  bool is_metric() const { return homography_.has_value(); }
  double meters_per_pixel() const { return meters_per_pixel_; }

 private:
  std::optional<Homography> homography_;
  double meters_per_pixel_ = 1.0;
  int height_ = 0;
};

enum class BoundaryCause { Corner, Length, StrokeEnd };

/// One atomic primitive of the ordered segment sequence.
struct Segment {
  std::size_t index = 0;
  std::size_t stroke_index = 0;
  std::vector<PixelPoint> pixel_points;
  Polyline norm_points;     // [-1,1]^2, dominant axis spans exactly [-1,1]
  Polyline world_polyline;  // meters
  double length_m = 0.0;
  double delta_yaw_deg = 0.0;   // entry heading -> exit heading, CCW positive
  double mean_curvature = 0.0;  // total |turning| (rad) / length
  std::size_t corner_count = 0;
  std::vector<std::size_t> corner_indices;  // vertices of this segment that are corners
  BoundaryCause end_cause = BoundaryCause::StrokeEnd;
  bool is_path = true;
  bool is_area = false;
  bool is_closed = false;

  Vec2 start() const { return world_polyline.front(); }
  Vec2 end() const { return world_polyline.back(); }
  double exit_heading_deg = 0.0;
  double entry_heading_deg = 0.0;
};

enum class KeypointKind { Start, End, Corner };

struct Keypoint {
  Vec2 loc;  // normalized coordinates
  KeypointKind kind = KeypointKind::Start;
};

struct CornerDetection {
  std::vector<std::size_t> indices;  // interior vertices selected as corners
  std::vector<double> angles_deg;    // signed windowed turning angle per vertex (0 at ends)
  double window_m = 0.0;
};

/// Arc-length window used for turning angles: three median point spacings,
/// capped by params.turn_window_cap_m.
double turning_window(const Polyline& line, const ControlParams& params);

/// Windowed turning angle at every vertex plus Schmitt-trigger corner
/// selection: a corner event starts above theta_turn, ends below
/// theta_turn - hysteresis, and reports its vertex of largest |angle|.
CornerDetection find_corners(const Polyline& world, const ControlParams& params);

/// Splits the sketch into the ordered segment sequence.
std::vector<Segment> segment_sketch(const Sketch& sketch, const ControlParams& params, const MetricScale& scale);

/// Builds a single segment from raw points without splitting (used for area
/// strokes and standalone analysis).
Segment make_segment(const std::vector<PixelPoint>& pixels, const GroundMapping& mapping,
                     const ControlParams& params, bool is_area = false, bool is_closed = false);

/// Start, corners (in order) and end of a segment in normalized coordinates.
std::vector<Keypoint> detect_keypoints(const Segment& segment, const ControlParams& params);

std::string_view to_string(BoundaryCause cause);
std::string_view to_string(KeypointKind kind);
std::string_view to_string(StrokeKind kind);

}  // namespace sketchact
