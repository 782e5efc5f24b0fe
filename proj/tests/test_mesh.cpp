#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <cstdio>
#include <fstream>
#include <numbers>

#include "mesh.hpp"

using namespace lapbel;

namespace {
constexpr double kPi = std::numbers::pi;
}

TEST_CASE("icosphere counts follow 10*4^l+2 / 20*4^l") {
  auto m0 = build_icosphere(0);
  CHECK(m0->vertex_count() == 12);
  CHECK(m0->triangle_count() == 20);
  auto m3 = build_icosphere(3);
  CHECK(m3->vertex_count() == 642);
  CHECK(m3->triangle_count() == 1280);
}

TEST_CASE("icosphere vertices lie on the sphere, poles exact") {
  auto m = build_icosphere(2);
  for (const Vec3& v : m->vertices) CHECK(std::abs(v.norm() - 1.0) <= 1e-12);
  CHECK((m->vertices[0] - Vec3(0, 0, 1)).norm() == 0.0);
}

TEST_CASE("level guard") {
  CHECK_THROWS_AS(build_icosphere(9), Error);
  CHECK_THROWS_AS(build_icosphere(-1), Error);
  CHECK_THROWS_AS(build_torus_mesh(9, 2.0, 0.5), Error);
}

TEST_CASE("equilateral triangle quality closed forms") {
  Vec3 a(0, 0, 0), b(1, 0, 0), c(0.5, std::sqrt(3.0) / 2.0, 0);
  CHECK(triangle_circumdiameter(a, b, c) == doctest::Approx(2.0 / std::sqrt(3.0)).epsilon(1e-14));
  CHECK(triangle_indiameter(a, b, c) == doctest::Approx(1.0 / std::sqrt(3.0)).epsilon(1e-14));
}

TEST_CASE("icosphere level 0 gamma is the congruent-face value") {
  auto m = build_icosphere(0);
  const auto& t = m->triangles[0];
  double rho = triangle_circumdiameter(m->vertices[t[0]], m->vertices[t[1]], m->vertices[t[2]]);
  double sigma = triangle_indiameter(m->vertices[t[0]], m->vertices[t[1]], m->vertices[t[2]]);
  CHECK(m->gamma == doctest::Approx(sigma / rho).epsilon(1e-12));
  CHECK(m->gamma == doctest::Approx(0.5).epsilon(1e-12)); // equilateral faces
}

TEST_CASE("quasi-uniformity: gamma band, h halving, h*sqrt(n) bounded") {
  std::vector<MeshPtr> meshes;
  for (int l = 1; l <= 6; ++l) meshes.push_back(build_icosphere(l));
  const double gamma1 = meshes[0]->gamma;
  double scale_min = 1e300, scale_max = 0.0;
  for (const auto& m : meshes) {
    CHECK(m->gamma >= 0.5 * gamma1);
    CHECK(m->gamma <= gamma1 * (1.0 + 1e-12));
    double s = m->h * std::sqrt(static_cast<double>(m->vertex_count()));
    scale_min = std::min(scale_min, s);
    scale_max = std::max(scale_max, s);
  }
  CHECK(scale_max / scale_min <= 1.3);
  for (size_t i = 2; i + 1 < meshes.size(); ++i) {
    double ratio = meshes[i + 1]->h / meshes[i]->h;
    CHECK(ratio == doctest::Approx(0.5).epsilon(0.05));
  }
}

TEST_CASE("node nesting across levels") {
  auto coarse = build_icosphere(2);
  auto fine = build_icosphere(3);
  REQUIRE(fine->vertex_count() > coarse->vertex_count());
  for (int v = 0; v < coarse->vertex_count(); ++v) {
    CHECK((coarse->vertices[v] - fine->vertices[v]).norm() <= 1e-12);
  }
}

TEST_CASE("area defect shrinks at second order") {
  double prev = 0.0;
  for (int l = 2; l <= 5; ++l) {
    double defect = std::abs(mesh_area(*build_icosphere(l)) - 4.0 * kPi);
    if (l > 2) {
      double eoc = std::log2(prev / defect);
      CHECK(eoc == doctest::Approx(2.0).epsilon(0.03));
    }
    prev = defect;
  }
}

TEST_CASE("torus mesh: counts, on-surface vertices, Euler characteristic") {
  auto m = build_torus_mesh(0, 2.0, 0.5);
  CHECK(m->vertex_count() == 192);
  CHECK(m->triangle_count() == 384);
  for (const Vec3& v : m->vertices) {
    double rho = std::hypot(v.x(), v.y());
    CHECK(std::abs((rho - 2.0) * (rho - 2.0) + v.z() * v.z() - 0.25) <= 1e-12);
  }
  // validate_mesh already ran at build; run again to exercise the checks here.
  CHECK_NOTHROW(validate_mesh(*m));
  auto m1 = build_torus_mesh(1, 2.0, 0.5);
  CHECK(m1->vertex_count() == 192 * 4);
  CHECK(std::abs(mesh_area(*m1) - 4.0 * kPi * kPi) / (4.0 * kPi * kPi) < 0.01);
}

TEST_CASE("degenerate triangle rejected by mesh_quality") {
  SurfaceMesh m;
  m.surface = Surface::unit_sphere();
  m.vertices = {Vec3(1, 0, 0), Vec3(1, 1e-9, 0), Vec3(1, 0, 1e-9)};
  m.triangles = {{0, 1, 2}};
  CHECK_THROWS_AS(mesh_quality(m), Error);
}

TEST_CASE("OFF export round trip of counts") {
  auto m = build_icosphere(1);
  const char* path = "icosphere1.off";
  write_off(*m, path);
  std::ifstream in(path);
  std::string magic;
  int nv = 0, nt = 0, ne = 0;
  in >> magic >> nv >> nt >> ne;
  CHECK(magic == "OFF");
  CHECK(nv == m->vertex_count());
  CHECK(nt == m->triangle_count());
  double x, y, z;
  in >> x >> y >> z;
  CHECK(x == doctest::Approx(m->vertices[0].x()).epsilon(1e-15));
  std::remove(path);
}
