#pragma once

#include <array>
#include <memory>
#include <string>
#include <vector>

#include "surface.hpp"

namespace lapbel {

// Flat-triangle approximation S_h of a closed surface.  All vertices lie on S,
// triangles carry a consistent outward orientation, and the complex is a
// closed 2-manifold (checked at build time).
struct SurfaceMesh {
  Surface surface = Surface::unit_sphere();
  int level = 0;
  std::vector<Vec3> vertices;
  std::vector<std::array<int, 3>> triangles;

  // Mesh parameters: h = max circumdiameter, gamma = min indiameter / h.
  double h = 0.0;
  double gamma = 0.0;

  int vertex_count() const { return static_cast<int>(vertices.size()); }
  int triangle_count() const { return static_cast<int>(triangles.size()); }

  Vec3 corner(int tri, int k) const { return vertices[triangles[tri][k]]; }
};

using MeshPtr = std::shared_ptr<const SurfaceMesh>;

struct MeshQuality {
  double h = 0.0;
  double gamma = 0.0;
  double min_angle = 0.0;
};

// Icosahedron with vertices at the poles, refined `level` times by edge
// midpoint subdivision with projection to the sphere.  10*4^level+2 vertices.
MeshPtr build_icosphere(int level);

// Structured (8*2^level) x (24*2^level) angle grid on the torus, each quad
// split into two triangles.  Vertices satisfy the torus equation exactly.
MeshPtr build_torus_mesh(int level, double R, double r);

MeshPtr build_mesh(const Surface& surface, int level);

// Extrema over all triangles; throws degenerate_triangle below 1e-14 area.
MeshQuality mesh_quality(const SurfaceMesh& mesh);

// Closed-manifold, orientation and on-surface checks; throws on violation.
void validate_mesh(const SurfaceMesh& mesh);

double mesh_area(const SurfaceMesh& mesh);

void write_off(const SurfaceMesh& mesh, const std::string& path);

// Flat-triangle primitives shared by assembly and error evaluation.
double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c);
Vec3 triangle_unit_normal(const Vec3& a, const Vec3& b, const Vec3& c);
double triangle_circumdiameter(const Vec3& a, const Vec3& b, const Vec3& c);
double triangle_indiameter(const Vec3& a, const Vec3& b, const Vec3& c);

} // namespace lapbel
