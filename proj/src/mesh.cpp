#include "mesh.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <map>
#include <numbers>
#include <utility>

namespace lapbel {

namespace {

constexpr double kPi = std::numbers::pi;
constexpr int kMaxLevel = 8;

double tri_min_angle(const Vec3& a, const Vec3& b, const Vec3& c) {
  auto angle = [](const Vec3& p, const Vec3& q, const Vec3& r) {
    Vec3 u = q - p, v = r - p;
    return std::acos(std::clamp(u.dot(v) / (u.norm() * v.norm()), -1.0, 1.0));
  };
  return std::min({angle(a, b, c), angle(b, c, a), angle(c, a, b)});
}

// Flips triangles whose flat normal points against the surface normal at the
// centroid.  For embedded closed surfaces outward-everywhere is a consistent
// orientation.
void orient_outward(SurfaceMesh& mesh) {
  for (auto& t : mesh.triangles) {
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    Vec3 centroid = (a + b + c) / 3.0;
    Vec3 n = mesh.surface.normal(mesh.surface.closest_point(centroid));
    if ((b - a).cross(c - a).dot(n) < 0.0) std::swap(t[1], t[2]);
  }
}

void finalize(SurfaceMesh& mesh) {
  orient_outward(mesh);
  MeshQuality q = mesh_quality(mesh);
  mesh.h = q.h;
  mesh.gamma = q.gamma;
  validate_mesh(mesh);
}

// Splits every triangle into four by edge midpoints projected to S.
// Parent vertices keep their indices, so node sets nest across levels.
void subdivide(SurfaceMesh& mesh) {
  std::map<std::pair<int, int>, int> midpoint;
  auto mid = [&](int i, int j) {
    auto key = std::minmax(i, j);
    auto it = midpoint.find(key);
    if (it != midpoint.end()) return it->second;
    Vec3 m = mesh.surface.closest_point(0.5 * (mesh.vertices[i] + mesh.vertices[j]));
    int idx = mesh.vertex_count();
    mesh.vertices.push_back(m);
    midpoint.emplace(key, idx);
    return idx;
  };
  std::vector<std::array<int, 3>> next;
  next.reserve(mesh.triangles.size() * 4);
  for (const auto& t : mesh.triangles) {
    int ab = mid(t[0], t[1]), bc = mid(t[1], t[2]), ca = mid(t[2], t[0]);
    next.push_back({t[0], ab, ca});
    next.push_back({ab, t[1], bc});
    next.push_back({ca, bc, t[2]});
    next.push_back({ab, bc, ca});
  }
  mesh.triangles = std::move(next);
}

} // namespace

double triangle_area(const Vec3& a, const Vec3& b, const Vec3& c) {
  return 0.5 * (b - a).cross(c - a).norm();
}

Vec3 triangle_unit_normal(const Vec3& a, const Vec3& b, const Vec3& c) {
  Vec3 n = (b - a).cross(c - a);
  return n / n.norm();
}

double triangle_circumdiameter(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double la = (b - c).norm(), lb = (c - a).norm(), lc = (a - b).norm();
  return la * lb * lc / (2.0 * triangle_area(a, b, c));
}

double triangle_indiameter(const Vec3& a, const Vec3& b, const Vec3& c) {
  const double la = (b - c).norm(), lb = (c - a).norm(), lc = (a - b).norm();
  return 4.0 * triangle_area(a, b, c) / (la + lb + lc);
}

MeshPtr build_icosphere(int level) {
  require(level >= 0 && level <= kMaxLevel, errc::level_too_large,
          "icosphere level must be in [0, 8]");
  auto mesh = std::make_shared<SurfaceMesh>();
  mesh->surface = Surface::unit_sphere();
  mesh->level = level;

  // Pole-first icosahedron: node 0 is the north pole, rings at z = +-1/sqrt(5).
  const double s = 1.0 / std::sqrt(5.0);
  const double c = 2.0 / std::sqrt(5.0);
  mesh->vertices.push_back(Vec3(0, 0, 1));
  for (int k = 0; k < 5; ++k) {
    double phi = 2.0 * kPi * k / 5.0;
    mesh->vertices.push_back(Vec3(c * std::cos(phi), c * std::sin(phi), s));
  }
  for (int k = 0; k < 5; ++k) {
    double phi = 2.0 * kPi * k / 5.0 + kPi / 5.0;
    mesh->vertices.push_back(Vec3(c * std::cos(phi), c * std::sin(phi), -s));
  }
  mesh->vertices.push_back(Vec3(0, 0, -1));

  for (int k = 0; k < 5; ++k) {
    int k1 = (k + 1) % 5;
    mesh->triangles.push_back({0, 1 + k, 1 + k1});
    mesh->triangles.push_back({1 + k, 6 + k, 1 + k1});
    mesh->triangles.push_back({6 + k, 6 + k1, 1 + k1});
    mesh->triangles.push_back({11, 6 + k, 6 + k1});
  }

  for (int l = 0; l < level; ++l) subdivide(*mesh);
  finalize(*mesh);
  return mesh;
}

MeshPtr build_torus_mesh(int level, double R, double r) {
  require(level >= 0 && level <= kMaxLevel, errc::level_too_large,
          "torus level must be in [0, 8]");
  auto mesh = std::make_shared<SurfaceMesh>();
  mesh->surface = Surface::torus(R, r);
  mesh->level = level;

  const int nmin = 8 << level;   // around the tube
  const int nmaj = 24 << level;  // around the axis
  mesh->vertices.reserve(static_cast<size_t>(nmin) * nmaj);
  for (int j = 0; j < nmaj; ++j) {
    double phi = 2.0 * kPi * j / nmaj;
    for (int i = 0; i < nmin; ++i) {
      double theta = 2.0 * kPi * i / nmin;
      double rho = R + r * std::cos(theta);
      mesh->vertices.push_back(Vec3(rho * std::cos(phi), rho * std::sin(phi), r * std::sin(theta)));
    }
  }
  auto vid = [&](int i, int j) { return (j % nmaj) * nmin + (i % nmin); };
  for (int j = 0; j < nmaj; ++j) {
    for (int i = 0; i < nmin; ++i) {
      int a = vid(i, j), b = vid(i + 1, j), c = vid(i + 1, j + 1), d = vid(i, j + 1);
      mesh->triangles.push_back({a, b, c});
      mesh->triangles.push_back({a, c, d});
    }
  }
  finalize(*mesh);
  return mesh;
}

MeshPtr build_mesh(const Surface& surface, int level) {
  if (surface.kind() == SurfaceKind::UnitSphere) return build_icosphere(level);
  return build_torus_mesh(level, surface.major_radius(), surface.minor_radius());
}

MeshQuality mesh_quality(const SurfaceMesh& mesh) {
  MeshQuality q;
  q.min_angle = kPi;
  double max_rho = 0.0, min_sigma = 1e300;
  for (const auto& t : mesh.triangles) {
    const Vec3& a = mesh.vertices[t[0]];
    const Vec3& b = mesh.vertices[t[1]];
    const Vec3& c = mesh.vertices[t[2]];
    require(triangle_area(a, b, c) >= 1e-14, errc::degenerate_triangle,
            "mesh_quality: triangle area below 1e-14");
    max_rho = std::max(max_rho, triangle_circumdiameter(a, b, c));
    min_sigma = std::min(min_sigma, triangle_indiameter(a, b, c));
    q.min_angle = std::min(q.min_angle, tri_min_angle(a, b, c));
  }
  q.h = max_rho;
  q.gamma = min_sigma / max_rho;
  return q;
}

void validate_mesh(const SurfaceMesh& mesh) {
  for (const Vec3& v : mesh.vertices) {
    require(std::abs(mesh.surface.signed_distance(v)) <= 1e-12, errc::invalid_argument,
            "mesh vertex off the surface");
  }
  // Every undirected edge must be used exactly once per direction: this gives
  // both the closed-manifold property and orientation consistency.
  std::map<std::pair<int, int>, int> directed;
  for (const auto& t : mesh.triangles) {
    for (int k = 0; k < 3; ++k) {
      int i = t[k], j = t[(k + 1) % 3];
      require(i != j, errc::invalid_argument, "triangle with repeated vertex");
      ++directed[{i, j}];
    }
  }
  size_t undirected = 0;
  for (const auto& [edge, count] : directed) {
    require(count == 1, errc::invalid_argument, "directed edge reused: inconsistent orientation");
    require(directed.count({edge.second, edge.first}) == 1, errc::invalid_argument,
            "boundary edge found: mesh not closed");
    ++undirected;
  }
  undirected /= 2;
  const long chi = static_cast<long>(mesh.vertices.size()) - static_cast<long>(undirected) +
                   static_cast<long>(mesh.triangles.size());
  const long expected = mesh.surface.kind() == SurfaceKind::UnitSphere ? 2 : 0;
  require(chi == expected, errc::invalid_argument, "unexpected Euler characteristic");
}

double mesh_area(const SurfaceMesh& mesh) {
  double area = 0.0;
  for (const auto& t : mesh.triangles) {
    area += triangle_area(mesh.vertices[t[0]], mesh.vertices[t[1]], mesh.vertices[t[2]]);
  }
  return area;
}

void write_off(const SurfaceMesh& mesh, const std::string& path) {
  std::ofstream out(path);
  require(out.good(), errc::io_error, "cannot open " + path);
  out << "OFF\n" << mesh.vertex_count() << ' ' << mesh.triangle_count() << " 0\n";
  char buf[96];
  for (const Vec3& v : mesh.vertices) {
    std::snprintf(buf, sizeof buf, "%.17g %.17g %.17g\n", v.x(), v.y(), v.z());
    out << buf;
  }
  for (const auto& t : mesh.triangles) out << "3 " << t[0] << ' ' << t[1] << ' ' << t[2] << '\n';
  require(out.good(), errc::io_error, "write failed: " + path);
}

} // namespace lapbel
