#pragma once

#include <Eigen/Dense>
#include <string>

#include "error.hpp"

namespace lapbel {

using Vec3 = Eigen::Vector3d;

enum class SurfaceKind { UnitSphere, Torus };

// Closed embedded surface S in R^3 with a tubular neighborhood.
// Supplies the signed distance (the normal coordinate of the neighborhood)
// and the closest-point projection that lifts mesh quantities onto S.
// Both shipped surfaces admit closed forms; nothing here iterates.
class Surface {
public:
  static Surface unit_sphere();
  // Torus around the z axis: center circle radius R in the xy plane, tube radius r.
  static Surface torus(double R, double r);

  SurfaceKind kind() const { return kind_; }
  double major_radius() const { return R_; }
  double minor_radius() const { return r_; }

  // Largest |signed_distance| for which closest_point is accepted.
  // Kept well inside the reach: 0.5 for the sphere, r/2 for the torus.
  double tubular_radius() const { return tube_; }

  double signed_distance(const Vec3& q) const;

  // pre: |signed_distance(q)| < tubular_radius (throws point_outside_tube).
  Vec3 closest_point(const Vec3& q) const;

  // Outward unit normal at x in S.
  Vec3 normal(const Vec3& x) const;

  // Projects an ambient vector onto the tangent plane at x in S.
  Vec3 tangent_project(const Vec3& x, const Vec3& v) const;

  // Exact surface measure: 4*pi or 4*pi^2*R*r.
  double area() const;

  std::string describe() const;

private:
  Surface(SurfaceKind kind, double R, double r, double tube)
      : kind_(kind), R_(R), r_(r), tube_(tube) {}

  SurfaceKind kind_;
  double R_ = 0.0;
  double r_ = 0.0;
  double tube_ = 0.0;
};

} // namespace lapbel
