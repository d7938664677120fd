#pragma once

#include <Eigen/Core>

#include <cmath>
#include <numbers>
#include <stdexcept>

namespace occnav {

template <typename Scalar>
using Vec2 = Eigen::Matrix<Scalar, 2, 1>;

/// World coordinates in meters.
using WorldPoint = Vec2<double>;

struct Pose2D {
  WorldPoint position = WorldPoint::Zero();
  double heading = 0.0;  // (-pi, pi]
};

/// Wraps an angle into (-pi, pi].
template <typename Scalar>
Scalar normalize_angle(Scalar angle) {
  constexpr Scalar two_pi = Scalar(2) * std::numbers::pi_v<Scalar>;
  Scalar wrapped = std::remainder(angle, two_pi);
  if (wrapped <= -std::numbers::pi_v<Scalar>) wrapped += two_pi;
  return wrapped;
}

/// z-component of the planar cross product a x b.
template <typename DerivedA, typename DerivedB>
auto cross2(const Eigen::MatrixBase<DerivedA>& a, const Eigen::MatrixBase<DerivedB>& b) {
  return a.x() * b.y() - a.y() * b.x();
}

inline WorldPoint direction_of(double angle) { return {std::cos(angle), std::sin(angle)}; }

namespace detail {

template <typename Scalar>
Vec2<Scalar> perpendicular_offset(const Vec2<Scalar>& v1, const Vec2<Scalar>& v2,
                                  const Vec2<Scalar>& p, Scalar d, Scalar side) {
  const Scalar dx = v2.x() - v1.x();
  const Scalar dy = v2.y() - v1.y();
  const Scalar length = std::sqrt(dx * dx + dy * dy);
  if (!(length > Scalar(0))) throw std::invalid_argument("offset: degenerate segment (v1 == v2)");
  if (d < Scalar(0)) throw std::invalid_argument("offset: negative distance");
  return {p.x() + side * d * dy / length, p.y() - side * d * dx / length};
}

}  // namespace detail

/// Point H at distance d from p, perpendicular to v1->v2 and strictly on its right
/// (cross(v1v2, pH) < 0).
template <typename Scalar>
Vec2<Scalar> offset_right(const Vec2<Scalar>& v1, const Vec2<Scalar>& v2, const Vec2<Scalar>& p,
                          Scalar d) {
  return detail::perpendicular_offset(v1, v2, p, d, Scalar(1));
}

/// Mirror of offset_right: left of v1->v2.
template <typename Scalar>
Vec2<Scalar> offset_left(const Vec2<Scalar>& v1, const Vec2<Scalar>& v2, const Vec2<Scalar>& p,
                         Scalar d) {
  return detail::perpendicular_offset(v1, v2, p, d, Scalar(-1));
}

/// Unsigned distance from q to the infinite line through a and b.
template <typename Scalar>
Scalar distance_to_line(const Vec2<Scalar>& a, const Vec2<Scalar>& b, const Vec2<Scalar>& q) {
  const Vec2<Scalar> ab = b - a;
  return std::abs(cross2(ab, q - a)) / ab.norm();
}

}  // namespace occnav
