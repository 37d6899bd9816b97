#pragma once

#include <Eigen/Dense>

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

namespace sketchact {

template <typename Scalar>
using Point2 = Eigen::Matrix<Scalar, 2, 1>;

/// World-frame point in meters (x right, y up).
using Vec2 = Point2<double>;
using Polyline = std::vector<Vec2, Eigen::aligned_allocator<Vec2>>;

/// Image-space point in pixels (u right, v down).
struct PixelPoint {
  double u = 0.0;
  double v = 0.0;

  Vec2 vec() const { return {u, v}; }
  static PixelPoint from(const Vec2& p) { return {p.x(), p.y()}; }
  friend bool operator==(const PixelPoint&, const PixelPoint&) = default;
};

enum class ErrorCode {
  EmptySketch,
  DegenerateStroke,
  ScaleUnavailable,
  DegenerateConfiguration,
  RankDeficient,
  PointAtInfinity,
  NonPositiveDims,
  InconsistentInput,
  UnsupportedTurn,
  StartPoseInvalid,
  SceneSketchScaleMismatch,
  StepBudgetExceeded,
  EmptyRegion,
  DegenerateArea,
  NonPositiveBrake,
  GenerationFailed,
  EmptySequence,
  TraceMismatch,
  NoTrials,
  ParseError,
  SchemaVersionUnknown,
  ValidationFailed,
  NotFound,
  Internal,
};

std::string_view to_string(ErrorCode code);

/// True for codes caused by bad input documents or arguments (CLI exit 1,
/// HTTP 400); false for failures raised while computing (exit 2).
bool is_validation_error(ErrorCode code);

/// Every failure in the library is an Error carrying a machine-readable code
/// and, where it applies, a location path such as "/strokes/0/points/3".
class Error : public std::runtime_error {
 public:
  Error(ErrorCode code, const std::string& message, std::string location = {})
      : std::runtime_error(message), code_(code), location_(std::move(location)) {}

  ErrorCode code() const noexcept { return code_; }
  const std::string& location() const noexcept { return location_; }

 private:
  ErrorCode code_;
  std::string location_;
};

inline constexpr double kPi = std::numbers::pi;

inline double deg2rad(double deg) { return deg * kPi / 180.0; }
inline double rad2deg(double rad) { return rad * 180.0 / kPi; }

/// Wraps an angle in degrees to (-180, 180].
inline double wrap_deg(double deg) {
  double w = std::fmod(deg, 360.0);
  if (w <= -180.0) w += 360.0;
  if (w > 180.0) w -= 360.0;
  return w;
}

/// Heading of a direction vector in degrees, wrapped to (-180, 180].
inline double heading_deg(const Vec2& d) { return wrap_deg(rad2deg(std::atan2(d.y(), d.x()))); }

inline Vec2 unit_from_deg(double deg) {
  const double r = deg2rad(deg);
  return {std::cos(r), std::sin(r)};
}

inline double cross2(const Vec2& a, const Vec2& b) { return a.x() * b.y() - a.y() * b.x(); }

/// Euclidean distance from p to the closed segment [a, b].
template <typename Scalar>
Scalar point_segment_distance(const Point2<Scalar>& p, const Point2<Scalar>& a,
                              const Point2<Scalar>& b) {
  const Point2<Scalar> ab = b - a;
  const Scalar len2 = ab.squaredNorm();
  if (len2 <= Scalar(0)) return (p - a).norm();
  Scalar t = (p - a).dot(ab) / len2;
  t = std::clamp(t, Scalar(0), Scalar(1));
  return (p - (a + t * ab)).norm();
}

/// Distance from p to a polyline (min over its pieces).
double polyline_distance(const Vec2& p, const Polyline& line);

double polyline_length(const Polyline& line);

/// Signed shoelace area (positive for counter-clockwise rings).
double signed_area(const Polyline& ring);

/// Even-odd point-in-polygon test; the ring is implicitly closed.
bool point_in_polygon(const Vec2& p, const Polyline& ring);

/// Resamples a polyline at a fixed arc-length spacing, always keeping the
/// final point.
Polyline resample(const Polyline& line, double spacing);

}  // namespace sketchact
