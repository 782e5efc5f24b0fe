#pragma once

#include <array>
#include <functional>
#include <vector>

#include "surface.hpp"

namespace lapbel {

// Symmetric quadrature rule on a triangle in barycentric coordinates.
// Weights sum to 1, so  int_tau f  ~=  area(tau) * sum_q w_q f(x_q).
struct QuadRule {
  std::vector<std::array<double, 3>> points;
  std::vector<double> weights;
  int degree = 0;

  int size() const { return static_cast<int>(weights.size()); }
};

// Standard 6-point degree-4 rule; the workhorse for all lifted-data integrals.
const QuadRule& quad_degree4();

// 7-point degree-5 rule with closed-form nodes.
const QuadRule& quad_degree5();

// Conical-product Gauss rule (Gauss-Jacobi x Gauss-Legendre), degree 2n-1.
// Used for quadrature-stability checks; nodes computed by Golub-Welsch.
QuadRule quad_conical(int n);

// 1d Gauss-Legendre rule on [-1,1], degree 2n-1.  Axisymmetric integrals over
// the sphere reduce to this in t = cos(theta).
struct GaussRule1d {
  std::vector<double> nodes;
  std::vector<double> weights;
};
GaussRule1d gauss_legendre(int n);

inline Vec3 bary_point(const Vec3& a, const Vec3& b, const Vec3& c,
                       const std::array<double, 3>& w) {
  return w[0] * a + w[1] * b + w[2] * c;
}

// Error-controlled recursive subdivision for integrands with kinks or
// integrable singularities.  The error indicator compares the parent-rule
// value against the four-children composite.
double adaptive_triangle_integrate(const std::function<double(const Vec3&)>& f,
                                   const Vec3& a, const Vec3& b, const Vec3& c,
                                   double rel_tol, double abs_tol, int max_depth);

// Same recursion for a 3-vector integrand (used for loads weighted by the
// three P1 basis functions of the triangle).
Eigen::Vector3d adaptive_triangle_integrate3(
    const std::function<Eigen::Vector3d(const Vec3&, const std::array<double, 3>&)>& f,
    const Vec3& a, const Vec3& b, const Vec3& c, double rel_tol, double abs_tol,
    int max_depth);

} // namespace lapbel
