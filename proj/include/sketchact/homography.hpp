#pragma once

#include "sketchact/common.hpp"

#include <Eigen/SVD>

#include <cmath>
#include <vector>

namespace sketchact {

/// Planar projective map from the ground (or table) plane to the image,
/// normalized so that m(2,2) == 1. The inverse is kept alongside.
template <typename Scalar>
class BasicHomography {
 public:
  using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
  using Point = Point2<Scalar>;

  BasicHomography() : m_(Matrix3::Identity()), inv_(Matrix3::Identity()) {}

  /// Normalizes and validates. Throws DegenerateConfiguration when m(2,2)
  /// vanishes and RankDeficient when |det| <= 1e-9 after normalization.
  explicit BasicHomography(const Matrix3& m) {
    using std::abs;
    if (abs(m(2, 2)) < Scalar(1e-12))
      throw Error(ErrorCode::DegenerateConfiguration, "homography has m(2,2) = 0; cannot normalize");
    m_ = m / m(2, 2);
    if (!(abs(m_.determinant()) > Scalar(1e-9)))
      throw Error(ErrorCode::RankDeficient, "homography is not invertible");
    inv_ = m_.inverse();
  }

  const Matrix3& matrix() const { return m_; }
  const Matrix3& inverse() const { return inv_; }

  Point world_to_pixel(const Point& w) const { return apply(m_, w); }
  Point pixel_to_world(const Point& p) const { return apply(inv_, p); }

  /// Jacobian of the image -> world map evaluated at pixel p.
  Eigen::Matrix<Scalar, 2, 2> inverse_jacobian(const Point& p) const {
    const Eigen::Matrix<Scalar, 3, 1> h = inv_ * p.homogeneous();
    check_finite(h(2));
    const Scalar w = h(2);
    Eigen::Matrix<Scalar, 2, 2> j;
    for (int r = 0; r < 2; ++r)
      for (int c = 0; c < 2; ++c) j(r, c) = (inv_(r, c) * w - h(r) * inv_(2, c)) / (w * w);
    return j;
  }

 private:
  static void check_finite(Scalar w) {
    using std::abs;
    if (abs(w) < Scalar(1e-12))
      throw Error(ErrorCode::PointAtInfinity, "point maps to infinity under the homography");
  }

  static Point apply(const Matrix3& m, const Point& p) {
    const Eigen::Matrix<Scalar, 3, 1> h = m * p.homogeneous();
    check_finite(h(2));
    return h.hnormalized();
  }

  Matrix3 m_;
  Matrix3 inv_;
};

using Homography = BasicHomography<double>;

inline Vec2 pixel_to_world(const Homography& h, const PixelPoint& p) { return h.pixel_to_world(p.vec()); }
inline PixelPoint world_to_pixel(const Homography& h, const Vec2& w) {
  return PixelPoint::from(h.world_to_pixel(w));
}

/// Local metric length of a small image displacement du at pixel p.
inline double world_length(const Homography& h, const PixelPoint& p, const Vec2& du) {
  return (h.inverse_jacobian(p.vec()) * du).norm();
}

struct Correspondence {
  PixelPoint pixel;
  Vec2 world;
};

struct HomographyEstimate {
  Homography h;
  double rms_px = 0.0;  // reprojection RMS in the image
};

namespace detail {

/// Hartley conditioning: translate to the centroid and scale to mean
/// distance sqrt(2).
template <typename Scalar>
Eigen::Matrix<Scalar, 3, 3> conditioning(const std::vector<Point2<Scalar>>& pts) {
  Point2<Scalar> c = Point2<Scalar>::Zero();
  for (const auto& p : pts) c += p;
  c /= Scalar(pts.size());
  Scalar mean = 0;
  for (const auto& p : pts) mean += (p - c).norm();
  mean /= Scalar(pts.size());
  const Scalar s = std::sqrt(Scalar(2)) / mean;
  Eigen::Matrix<Scalar, 3, 3> t;
  t << s, 0, -s * c.x(), 0, s, -s * c.y(), 0, 0, 1;
  return t;
}

template <typename Scalar>
void check_configuration(const std::vector<Point2<Scalar>>& pts, const char* which) {
  const std::size_t n = pts.size();
  Scalar extent = 0;
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j) extent = std::max(extent, (pts[i] - pts[j]).norm());
  const Scalar tol = Scalar(1e-9) * std::max(extent, Scalar(1));
  for (std::size_t i = 0; i < n; ++i)
    for (std::size_t j = i + 1; j < n; ++j)
      if ((pts[i] - pts[j]).norm() <= tol)
        throw Error(ErrorCode::DegenerateConfiguration, std::string("duplicate ") + which + " points");

  auto collinear = [&](std::size_t a, std::size_t b, std::size_t c) {
    const Point2<Scalar> u = pts[b] - pts[a];
    const Point2<Scalar> v = pts[c] - pts[a];
    return std::abs(u.x() * v.y() - u.y() * v.x()) <= tol * extent;
  };
  if (n == 4) {
    for (std::size_t a = 0; a < n; ++a)
      for (std::size_t b = a + 1; b < n; ++b)
        for (std::size_t c = b + 1; c < n; ++c)
          if (collinear(a, b, c))
            throw Error(ErrorCode::DegenerateConfiguration, std::string("three collinear ") + which + " points");
    return;
  }
  // With more than four points only a fully collinear set is degenerate.
  for (std::size_t c = 2; c < n; ++c)
    if (!collinear(0, 1, c)) return;
  throw Error(ErrorCode::DegenerateConfiguration, std::string("all ") + which + " points are collinear");
}

}  // namespace detail

/// Least-squares direct linear transform from ground-plane points to pixels
/// with Hartley conditioning. Needs at least four correspondences.
template <typename Scalar = double>
HomographyEstimate estimate_homography(const std::vector<Correspondence>& corr) {
  using Matrix3 = Eigen::Matrix<Scalar, 3, 3>;
  const std::size_t n = corr.size();
  if (n < 4) throw Error(ErrorCode::DegenerateConfiguration, "need at least 4 correspondences");

  std::vector<Point2<Scalar>> src, dst;
  for (const auto& c : corr) {
    src.push_back(c.world.template cast<Scalar>());
    dst.push_back(c.pixel.vec().template cast<Scalar>());
  }
  detail::check_configuration(dst, "image");
  detail::check_configuration(src, "world");

  const Matrix3 ts = detail::conditioning(src);
  const Matrix3 td = detail::conditioning(dst);

  Eigen::Matrix<Scalar, Eigen::Dynamic, 9> a(2 * n, 9);
  for (std::size_t i = 0; i < n; ++i) {
    const Eigen::Matrix<Scalar, 3, 1> x = ts * src[i].homogeneous();
    const Eigen::Matrix<Scalar, 3, 1> y = td * dst[i].homogeneous();
    const Scalar u = y(0) / y(2), v = y(1) / y(2);
    a.row(2 * i) << x(0), x(1), x(2), 0, 0, 0, -u * x(0), -u * x(1), -u * x(2);
    a.row(2 * i + 1) << 0, 0, 0, x(0), x(1), x(2), -v * x(0), -v * x(1), -v * x(2);
  }
  // Pad to a square system so the full V is always available.
  Eigen::Matrix<Scalar, Eigen::Dynamic, 9> sq = a;
  if (sq.rows() < 9) {
    sq.conservativeResize(9, 9);
    sq.bottomRows(9 - a.rows()).setZero();
  }
  Eigen::JacobiSVD<Eigen::Matrix<Scalar, Eigen::Dynamic, 9>> svd(sq, Eigen::ComputeFullV);
  const auto& sv = svd.singularValues();
  if (!(sv(7) > Scalar(1e-10) * sv(0)))
    throw Error(ErrorCode::RankDeficient, "correspondences do not determine a unique homography");

  const Eigen::Matrix<Scalar, 9, 1> h = svd.matrixV().col(8);
  Matrix3 hn;
  hn << h(0), h(1), h(2), h(3), h(4), h(5), h(6), h(7), h(8);
  const Matrix3 m = td.inverse() * hn * ts;

  HomographyEstimate out{Homography(m.template cast<double>()), 0.0};
  double sse = 0.0;
  for (const auto& c : corr) sse += (out.h.world_to_pixel(c.world) - c.pixel.vec()).squaredNorm();
  out.rms_px = std::sqrt(sse / double(n));
  return out;
}

}  // namespace sketchact
