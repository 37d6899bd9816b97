#include "sketchact/common.hpp"

#include <algorithm>
#include <limits>

namespace sketchact {

std::string_view to_string(ErrorCode code) {
  switch (code) {
    case ErrorCode::EmptySketch: return "EmptySketch";
    case ErrorCode::DegenerateStroke: return "DegenerateStroke";
    case ErrorCode::ScaleUnavailable: return "ScaleUnavailable";
    case ErrorCode::DegenerateConfiguration: return "DegenerateConfiguration";
    case ErrorCode::RankDeficient: return "RankDeficient";
    case ErrorCode::PointAtInfinity: return "PointAtInfinity";
    case ErrorCode::NonPositiveDims: return "NonPositiveDims";
    case ErrorCode::InconsistentInput: return "InconsistentInput";
    case ErrorCode::UnsupportedTurn: return "UnsupportedTurn";
    case ErrorCode::StartPoseInvalid: return "StartPoseInvalid";
    case ErrorCode::SceneSketchScaleMismatch: return "SceneSketchScaleMismatch";
    case ErrorCode::StepBudgetExceeded: return "StepBudgetExceeded";
    case ErrorCode::EmptyRegion: return "EmptyRegion";
    case ErrorCode::DegenerateArea: return "DegenerateArea";
    case ErrorCode::NonPositiveBrake: return "NonPositiveBrake";
    case ErrorCode::GenerationFailed: return "GenerationFailed";
    case ErrorCode::EmptySequence: return "EmptySequence";
    case ErrorCode::TraceMismatch: return "TraceMismatch";
    case ErrorCode::NoTrials: return "NoTrials";
    case ErrorCode::ParseError: return "ParseError";
    case ErrorCode::SchemaVersionUnknown: return "SchemaVersionUnknown";
    case ErrorCode::ValidationFailed: return "ValidationFailed";
    case ErrorCode::NotFound: return "NotFound";
    case ErrorCode::Internal: return "Internal";
  }
  return "Unknown";
}

bool is_validation_error(ErrorCode code) {
  switch (code) {
    case ErrorCode::GenerationFailed:
    case ErrorCode::StepBudgetExceeded:
    case ErrorCode::TraceMismatch:
    case ErrorCode::Internal:
    case ErrorCode::PointAtInfinity:
    case ErrorCode::NotFound:
      return false;
    default:
      return true;
  }
}

double polyline_distance(const Vec2& p, const Polyline& line) {
  if (line.empty()) return std::numeric_limits<double>::infinity();
  if (line.size() == 1) return (p - line.front()).norm();
  double best = std::numeric_limits<double>::infinity();
  for (std::size_t i = 1; i < line.size(); ++i)
    best = std::min(best, point_segment_distance<double>(p, line[i - 1], line[i]));
  return best;
}

double polyline_length(const Polyline& line) {
  double len = 0.0;
  for (std::size_t i = 1; i < line.size(); ++i) len += (line[i] - line[i - 1]).norm();
  return len;
}

double signed_area(const Polyline& ring) {
  double a = 0.0;
  const std::size_t n = ring.size();
  for (std::size_t i = 0; i < n; ++i) a += cross2(ring[i], ring[(i + 1) % n]);
  return 0.5 * a;
}

bool point_in_polygon(const Vec2& p, const Polyline& ring) {
  bool inside = false;
  const std::size_t n = ring.size();
  for (std::size_t i = 0, j = n - 1; i < n; j = i++) {
    const Vec2& a = ring[i];
    const Vec2& b = ring[j];
    if ((a.y() > p.y()) != (b.y() > p.y())) {
      const double x = a.x() + (p.y() - a.y()) * (b.x() - a.x()) / (b.y() - a.y());
      if (p.x() < x) inside = !inside;
    }
  }
  return inside;
}

Polyline resample(const Polyline& line, double spacing) {
  Polyline out;
  if (line.empty()) return out;
  out.push_back(line.front());
  double carry = 0.0;  // arc length since the last emitted sample
  for (std::size_t i = 1; i < line.size(); ++i) {
    const Vec2 a = line[i - 1];
    const Vec2 b = line[i];
    const double len = (b - a).norm();
    double t = spacing - carry;
    while (t < len - 1e-12) {
      out.push_back(a + (b - a) * (t / len));
      t += spacing;
    }
    carry = len - (t - spacing);
  }
  if ((out.back() - line.back()).norm() > 1e-12) out.push_back(line.back());
  return out;
}

}  // namespace sketchact
