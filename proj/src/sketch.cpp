#include "sketchact/sketch.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

namespace sketchact {

std::string_view to_string(BoundaryCause cause) {
  switch (cause) {
    case BoundaryCause::Corner: return "corner";
    case BoundaryCause::Length: return "length";
    case BoundaryCause::StrokeEnd: return "stroke_end";
  }
  return "?";
}

std::string_view to_string(KeypointKind kind) {
  switch (kind) {
    case KeypointKind::Start: return "Start";
    case KeypointKind::End: return "End";
    case KeypointKind::Corner: return "Corner";
  }
  return "?";
}

std::string_view to_string(StrokeKind kind) { return kind == StrokeKind::Area ? "area" : "path"; }

std::vector<PixelPoint> canonical_points(const std::vector<PixelPoint>& pts) {
  std::vector<PixelPoint> out;
  out.reserve(pts.size());
  for (const auto& p : pts)
    if (out.empty() || !(out.back() == p)) out.push_back(p);
  if (out.size() < 2) throw Error(ErrorCode::DegenerateStroke, "stroke needs at least two distinct points");
  return out;
}

void validate(const Sketch& sketch) {
  if (sketch.image_width <= 0 || sketch.image_height <= 0)
    throw Error(ErrorCode::NonPositiveDims, "image dimensions must be positive", "/image");
  if (sketch.strokes.empty()) throw Error(ErrorCode::EmptySketch, "sketch has no strokes", "/strokes");
  const double w = sketch.image_width - 1.0;
  const double h = sketch.image_height - 1.0;
  const double diag = std::hypot(double(sketch.image_width), double(sketch.image_height));
  for (std::size_t s = 0; s < sketch.strokes.size(); ++s) {
    const auto& stroke = sketch.strokes[s];
    const std::string loc = "/strokes/" + std::to_string(s);
    for (std::size_t i = 0; i < stroke.points.size(); ++i) {
      const auto& p = stroke.points[i];
      if (!std::isfinite(p.u) || !std::isfinite(p.v) || p.u < 0.0 || p.v < 0.0 || p.u > w || p.v > h)
        throw Error(ErrorCode::ValidationFailed,
                    "point (" + std::to_string(p.u) + ", " + std::to_string(p.v) + ") outside image bounds",
                    loc + "/points/" + std::to_string(i));
    }
    try {
      canonical_points(stroke.points);
    } catch (const Error& e) {
      throw Error(e.code(), e.what(), loc + "/points");
    }
    if (stroke.closed) {
      const double gap = (stroke.points.front().vec() - stroke.points.back().vec()).norm();
      if (gap > kClosureFraction * diag)
        throw Error(ErrorCode::ValidationFailed, "closed stroke endpoints are too far apart", loc + "/closed");
    }
  }
}

GroundMapping::GroundMapping(const MetricScale& scale, int image_width, int image_height,
                             const ControlParams& params)
    : height_(image_height) {
  if (std::holds_alternative<std::monostate>(scale))
    throw Error(ErrorCode::ScaleUnavailable, "neither a homography nor a pixel proxy was supplied");
  if (const auto* h = std::get_if<Homography>(&scale)) {
    homography_ = *h;
    return;
  }
  const auto& proxy = std::get<PixelProxy>(scale);
  const double lmax_px = pixel_proxy_lmax(image_width, image_height, proxy.kappa);
  if (!(lmax_px > 0.0)) throw Error(ErrorCode::ScaleUnavailable, "pixel proxy kappa must be positive");
  meters_per_pixel_ = params.l_max_m / lmax_px;
}

Vec2 GroundMapping::to_world(const PixelPoint& p) const {
  if (homography_) return homography_->pixel_to_world(p.vec());
  return {p.u * meters_per_pixel_, (height_ - 1.0 - p.v) * meters_per_pixel_};
}

PixelPoint GroundMapping::to_pixel(const Vec2& w) const {
  if (homography_) return PixelPoint::from(homography_->world_to_pixel(w));
  return {w.x() / meters_per_pixel_, height_ - 1.0 - w.y() / meters_per_pixel_};
}

namespace {

/// Arc-length parametrized view of a polyline.
class ArcLength {
 public:
  explicit ArcLength(const Polyline& line) : line_(line), cum_(line.size(), 0.0) {
    for (std::size_t i = 1; i < line.size(); ++i) cum_[i] = cum_[i - 1] + (line[i] - line[i - 1]).norm();
  }

  double total() const { return cum_.back(); }
  double at_vertex(std::size_t i) const { return cum_[i]; }

  Vec2 point(double t) const {
    if (t <= 0.0) return line_.front();
    if (t >= total()) return line_.back();
    const auto it = std::upper_bound(cum_.begin(), cum_.end(), t);
    const std::size_t i = std::size_t(it - cum_.begin());  // cum_[i-1] <= t < cum_[i]
    const double len = cum_[i] - cum_[i - 1];
    return line_[i - 1] + (line_[i] - line_[i - 1]) * ((t - cum_[i - 1]) / len);
  }

 private:
  const Polyline& line_;
  std::vector<double> cum_;
};

double signed_turn_deg(const Vec2& in, const Vec2& out) {
  if (in.squaredNorm() == 0.0 || out.squaredNorm() == 0.0) return 0.0;
  return rad2deg(std::atan2(cross2(in, out), in.dot(out)));
}

}  // namespace

double turning_window(const Polyline& line, const ControlParams& params) {
  std::vector<double> gaps;
  for (std::size_t i = 1; i < line.size(); ++i) gaps.push_back((line[i] - line[i - 1]).norm());
  if (gaps.empty()) return params.turn_window_cap_m;
  std::nth_element(gaps.begin(), gaps.begin() + gaps.size() / 2, gaps.end());
  return std::min(3.0 * gaps[gaps.size() / 2], params.turn_window_cap_m);
}

CornerDetection find_corners(const Polyline& world, const ControlParams& params) {
  CornerDetection out;
  const std::size_t n = world.size();
  out.angles_deg.assign(n, 0.0);
  if (n < 3) return out;
  out.window_m = turning_window(world, params);
  const ArcLength arc(world);
  const double s = out.window_m;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double t = arc.at_vertex(i);
    const Vec2 back = arc.point(t - s);
    const Vec2 fwd = arc.point(t + s);
    out.angles_deg[i] = signed_turn_deg(world[i] - back, fwd - world[i]);
  }

  const double rise = params.theta_turn_deg;
  const double fall = params.theta_turn_deg - params.hysteresis_deg;
  bool active = false;
  std::size_t best = 0;
  for (std::size_t i = 1; i + 1 < n; ++i) {
    const double a = std::abs(out.angles_deg[i]);
    if (!active) {
      if (a > rise) {
        active = true;
        best = i;
      }
      continue;
    }
    if (a > std::abs(out.angles_deg[best])) best = i;
    if (a < fall) {
      out.indices.push_back(best);
      active = false;
    }
  }
  if (active) out.indices.push_back(best);
  return out;
}

namespace {

struct Piece {
  Polyline world;
  std::vector<PixelPoint> pixels;
  std::vector<std::size_t> corners;
  BoundaryCause end = BoundaryCause::StrokeEnd;
  double length = 0.0;

  void add(const Vec2& w, const PixelPoint& p) {
    if (!world.empty()) length += (w - world.back()).norm();
    world.push_back(w);
    pixels.push_back(p);
  }
};

Polyline normalize(const std::vector<PixelPoint>& pts) {
  double minx = std::numeric_limits<double>::infinity(), maxx = -minx;
  double miny = minx, maxy = -minx;
  for (const auto& p : pts) {
    minx = std::min(minx, p.u);
    maxx = std::max(maxx, p.u);
    miny = std::min(miny, p.v);
    maxy = std::max(maxy, p.v);
  }
  const double ex = maxx - minx, ey = maxy - miny;
  Polyline out;
  out.reserve(pts.size());
  const bool x_dominant = ex >= ey;
  const double extent = x_dominant ? ex : ey;
  const double cx = 0.5 * (minx + maxx), cy = 0.5 * (miny + maxy);
  for (const auto& p : pts) {
    if (extent <= 0.0) {
      out.emplace_back(0.0, 0.0);
    } else if (x_dominant) {
      out.emplace_back(2.0 * (p.u - minx) / ex - 1.0, 2.0 * (p.v - cy) / extent);
    } else {
      out.emplace_back(2.0 * (p.u - cx) / extent, 2.0 * (p.v - miny) / ey - 1.0);
    }
  }
  return out;
}

double direction_heading(const Polyline& line, double window, bool at_end) {
  const ArcLength arc(line);
  const double w = std::min(window, arc.total());
  const Vec2 d = at_end ? Vec2(line.back() - arc.point(arc.total() - w)) : Vec2(arc.point(w) - line.front());
  return heading_deg(d);
}

double total_abs_turn_rad(const Polyline& line) {
  double sum = 0.0;
  for (std::size_t i = 1; i + 1 < line.size(); ++i)
    sum += std::abs(deg2rad(signed_turn_deg(line[i] - line[i - 1], line[i + 1] - line[i])));
  return sum;
}

Segment finish(Piece&& piece, double window, bool is_area, bool is_closed) {
  Segment seg;
  seg.world_polyline = std::move(piece.world);
  seg.pixel_points = std::move(piece.pixels);
  seg.norm_points = normalize(seg.pixel_points);
  seg.length_m = polyline_length(seg.world_polyline);
  seg.corner_indices = std::move(piece.corners);
  seg.corner_count = seg.corner_indices.size();
  seg.end_cause = piece.end;
  seg.is_area = is_area;
  seg.is_path = !is_area;
  seg.is_closed = is_closed;
  seg.mean_curvature = seg.length_m > 0.0 ? total_abs_turn_rad(seg.world_polyline) / seg.length_m : 0.0;
  seg.entry_heading_deg = direction_heading(seg.world_polyline, window, false);
  seg.exit_heading_deg = direction_heading(seg.world_polyline, window, true);
  seg.delta_yaw_deg = is_area ? 0.0 : wrap_deg(seg.exit_heading_deg - seg.entry_heading_deg);
  return seg;
}

/// Greedy left-to-right merge of consecutive short path pieces.
void merge_short(std::vector<Piece>& pieces, double merge_travel) {
  std::size_t i = 0;
  while (i + 1 < pieces.size()) {
    Piece& a = pieces[i];
    Piece& b = pieces[i + 1];
    if (a.length + b.length >= merge_travel) {
      ++i;
      continue;
    }
    const std::size_t offset = a.world.size() - 1;
    for (std::size_t c : b.corners) {
      const std::size_t idx = c + offset;
      if (std::find(a.corners.begin(), a.corners.end(), idx) == a.corners.end()) a.corners.push_back(idx);
    }
    for (std::size_t k = 1; k < b.world.size(); ++k) a.add(b.world[k], b.pixels[k]);
    a.end = b.end;
    pieces.erase(pieces.begin() + std::ptrdiff_t(i) + 1);
  }
}

}  // namespace

Segment make_segment(const std::vector<PixelPoint>& pixels, const GroundMapping& mapping,
                     const ControlParams& params, bool is_area, bool is_closed) {
  const auto pts = canonical_points(pixels);
  Piece piece;
  for (const auto& p : pts) piece.add(mapping.to_world(p), p);
  const auto corners = find_corners(piece.world, params);
  piece.corners = corners.indices;
  return finish(std::move(piece), turning_window(piece.world, params), is_area, is_closed);
}

std::vector<Segment> segment_sketch(const Sketch& sketch, const ControlParams& params, const MetricScale& scale) {
  if (sketch.strokes.empty()) throw Error(ErrorCode::EmptySketch, "sketch has no strokes", "/strokes");
  const GroundMapping mapping(scale, sketch.image_width, sketch.image_height, params);
  constexpr double eps = 1e-9;
  const double lmax = params.l_max_m;

  std::vector<Segment> out;
  std::optional<double> prev_exit;
  for (std::size_t s = 0; s < sketch.strokes.size(); ++s) {
    const Stroke& stroke = sketch.strokes[s];
    std::vector<PixelPoint> pix;
    try {
      pix = canonical_points(stroke.points);
    } catch (const Error& e) {
      throw Error(e.code(), e.what(), "/strokes/" + std::to_string(s) + "/points");
    }

    if (stroke.is_area()) {
      Segment seg = make_segment(pix, mapping, params, true, stroke.closed);
      seg.stroke_index = s;
      seg.index = out.size();
      out.push_back(std::move(seg));
      continue;
    }

    Polyline world;
    world.reserve(pix.size());
    for (const auto& p : pix) world.push_back(mapping.to_world(p));
    const auto corners = find_corners(world, params);
    const double window = corners.window_m > 0.0 ? corners.window_m : turning_window(world, params);
    std::vector<bool> is_corner(world.size(), false);
    for (std::size_t c : corners.indices) is_corner[c] = true;

    std::vector<Piece> pieces;
    Piece cur;
    cur.add(world[0], pix[0]);
    double acc = 0.0;
    for (std::size_t i = 0; i + 1 < world.size(); ++i) {
      const Vec2 a = world[i];
      const Vec2 b = world[i + 1];
      const double e = (b - a).norm();
      double pos = 0.0;
      while (acc + (e - pos) > lmax + eps) {
        pos += lmax - acc;
        const Vec2 p = a + (b - a) * (pos / e);
        const PixelPoint pp = mapping.to_pixel(p);
        cur.add(p, pp);
        cur.end = BoundaryCause::Length;
        pieces.push_back(std::move(cur));
        cur = Piece{};
        cur.add(p, pp);
        acc = 0.0;
      }
      acc += e - pos;
      cur.add(b, pix[i + 1]);
      if (i + 2 == world.size()) break;
      if (is_corner[i + 1]) {
        cur.end = BoundaryCause::Corner;
        pieces.push_back(std::move(cur));
        cur = Piece{};
        cur.add(b, pix[i + 1]);
        cur.corners.push_back(0);
        acc = 0.0;
      } else if (acc >= lmax - eps) {
        cur.end = BoundaryCause::Length;
        pieces.push_back(std::move(cur));
        cur = Piece{};
        cur.add(b, pix[i + 1]);
        acc = 0.0;
      }
    }
    cur.end = BoundaryCause::StrokeEnd;
    pieces.push_back(std::move(cur));
    merge_short(pieces, params.merge_travel_m);

    for (auto& piece : pieces) {
      Segment seg = finish(std::move(piece), window, false, false);
      if (prev_exit) {
        seg.entry_heading_deg = *prev_exit;
        seg.delta_yaw_deg = wrap_deg(seg.exit_heading_deg - *prev_exit);
      }
      prev_exit = seg.exit_heading_deg;
      seg.stroke_index = s;
      seg.index = out.size();
      out.push_back(std::move(seg));
    }
  }
  return out;
}

std::vector<Keypoint> detect_keypoints(const Segment& segment, [[maybe_unused]] const ControlParams& params) {
  std::vector<Keypoint> out;
  if (segment.norm_points.empty()) return out;
  out.push_back({segment.norm_points.front(), KeypointKind::Start});
  auto corners = segment.corner_indices;
  std::sort(corners.begin(), corners.end());
  for (std::size_t c : corners) out.push_back({segment.norm_points[c], KeypointKind::Corner});
  out.push_back({segment.norm_points.back(), KeypointKind::End});
  return out;
}

}  // namespace sketchact
