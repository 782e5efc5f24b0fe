#include "surface.hpp"

#include <cmath>
#include <numbers>
#include <sstream>

namespace lapbel {

namespace {
constexpr double kPi = std::numbers::pi;
}

Surface Surface::unit_sphere() { return Surface(SurfaceKind::UnitSphere, 1.0, 0.0, 0.5); }

Surface Surface::torus(double R, double r) {
  require(R > 0.0 && r > 0.0 && r < R, errc::invalid_argument,
          "torus requires 0 < r < R");
  return Surface(SurfaceKind::Torus, R, r, 0.5 * r);
}

double Surface::signed_distance(const Vec3& q) const {
  if (kind_ == SurfaceKind::UnitSphere) return q.norm() - 1.0;
  // Distance to the torus via the center circle: d((rho,z), circle of radius R).
  const double rho = std::hypot(q.x(), q.y());
  return std::hypot(rho - R_, q.z()) - r_;
}

Vec3 Surface::closest_point(const Vec3& q) const {
  const double sd = signed_distance(q);
  require(std::abs(sd) < tube_, errc::point_outside_tube,
          "closest_point: point outside tubular neighborhood");
  if (kind_ == SurfaceKind::UnitSphere) return q / q.norm();
  // Two-circle projection: snap to the nearest point of the center circle's
  // tube section.  rho > 0 holds inside the tube since tube_ < r < R.
  const double rho = std::hypot(q.x(), q.y());
  const double cx = q.x() / rho * R_;
  const double cy = q.y() / rho * R_;
  Vec3 center(cx, cy, 0.0);
  Vec3 d = q - center;
  return center + d * (r_ / d.norm());
}

Vec3 Surface::normal(const Vec3& x) const {
  if (kind_ == SurfaceKind::UnitSphere) return x / x.norm();
  const double rho = std::hypot(x.x(), x.y());
  Vec3 center(x.x() / rho * R_, x.y() / rho * R_, 0.0);
  Vec3 d = x - center;
  return d / d.norm();
}

Vec3 Surface::tangent_project(const Vec3& x, const Vec3& v) const {
  Vec3 n = normal(x);
  return v - n.dot(v) * n;
}

double Surface::area() const {
  if (kind_ == SurfaceKind::UnitSphere) return 4.0 * kPi;
  return 4.0 * kPi * kPi * R_ * r_;
}

std::string Surface::describe() const {
  std::ostringstream os;
  if (kind_ == SurfaceKind::UnitSphere) {
    os << "sphere";
  } else {
    os << "torus(R=" << R_ << ",r=" << r_ << ")";
  }
  return os.str();
}

} // namespace lapbel
