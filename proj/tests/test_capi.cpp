// C API boundary: status codes, last-error reporting, handle lifecycle,
// and the experiment entry point.  This suite links the shared library
// only; everything observable must flow through lapbel.h.

#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include "doctest.h"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <string>

#include "lapbel/lapbel.h"

namespace fs = std::filesystem;

namespace {

fs::path temp_dir() {
  fs::path dir = fs::temp_directory_path() / "lapbel_capi_test";
  fs::create_directories(dir);
  return dir;
}

void write_text(const fs::path& path, const std::string& text) {
  std::ofstream out(path);
  out << text;
}

} // namespace

TEST_CASE("version and experiment table") {
  CHECK(std::string(lapbel_version()) == "1.0.0");

  std::string table = lapbel_list_experiments();
  CHECK(table.find("experiment") != std::string::npos);
  CHECK(table.find("AreaDefect") != std::string::npos);
  CHECK(table.find("GreenDirac") != std::string::npos);
  CHECK(table.find("ControlActive") != std::string::npos);
}

TEST_CASE("sphere handle: area, distance, projection, normal") {
  lapbel_surface* s = nullptr;
  REQUIRE(lapbel_surface_create_sphere(&s) == LAPBEL_OK);
  REQUIRE(s != nullptr);
  CHECK(std::string(lapbel_surface_describe(s)) == "sphere");

  double area = 0;
  CHECK(lapbel_surface_area(s, &area) == LAPBEL_OK);
  CHECK(area == doctest::Approx(4 * M_PI).epsilon(1e-14));

  const double q[3] = {0.0, 0.0, 1.25};
  double d = 0;
  CHECK(lapbel_surface_signed_distance(s, q, &d) == LAPBEL_OK);
  CHECK(d == doctest::Approx(0.25).epsilon(1e-14));

  double x[3] = {0, 0, 0};
  CHECK(lapbel_surface_closest_point(s, q, x) == LAPBEL_OK);
  CHECK(x[0] == doctest::Approx(0.0));
  CHECK(x[2] == doctest::Approx(1.0).epsilon(1e-14));

  double n[3] = {0, 0, 0};
  const double on_surface[3] = {1.0, 0.0, 0.0};
  CHECK(lapbel_surface_normal(s, on_surface, n) == LAPBEL_OK);
  CHECK(n[0] == doctest::Approx(1.0).epsilon(1e-14));

  // Center of the sphere is outside the projection tube: runtime failure,
  // not a config error.
  const double center[3] = {0.0, 0.0, 0.0};
  CHECK(lapbel_surface_closest_point(s, center, x) == LAPBEL_ERR_SOLVER);
  CHECK(std::string(lapbel_last_error()).size() > 0);

  lapbel_surface_destroy(s);
}

TEST_CASE("torus handle and invalid radii") {
  lapbel_surface* s = nullptr;
  REQUIRE(lapbel_surface_create_torus(2.0, 0.5, &s) == LAPBEL_OK);
  CHECK(std::string(lapbel_surface_describe(s)) == "torus(R=2,r=0.5)");

  double area = 0;
  CHECK(lapbel_surface_area(s, &area) == LAPBEL_OK);
  CHECK(area == doctest::Approx(4 * M_PI * M_PI * 2.0 * 0.5).epsilon(1e-14));
  lapbel_surface_destroy(s);

  lapbel_surface* bad = nullptr;
  CHECK(lapbel_surface_create_torus(0.5, 2.0, &bad) == LAPBEL_ERR_CONFIG);
  CHECK(bad == nullptr);
  CHECK(std::string(lapbel_last_error()).size() > 0);
}

TEST_CASE("NULL arguments are config errors") {
  CHECK(lapbel_surface_create_sphere(nullptr) == LAPBEL_ERR_CONFIG);
  CHECK(lapbel_surface_area(nullptr, nullptr) == LAPBEL_ERR_CONFIG);
  CHECK(lapbel_mesh_build(nullptr, 2, nullptr) == LAPBEL_ERR_CONFIG);
  CHECK(lapbel_run_experiment(nullptr, nullptr) == LAPBEL_ERR_CONFIG);
  CHECK(std::string(lapbel_last_error()).size() > 0);
}

TEST_CASE("mesh handle: counts, quality, area, OFF export") {
  lapbel_surface* s = nullptr;
  REQUIRE(lapbel_surface_create_sphere(&s) == LAPBEL_OK);

  lapbel_mesh* m = nullptr;
  REQUIRE(lapbel_mesh_build(s, 2, &m) == LAPBEL_OK);

  long nv = 0, nt = 0;
  CHECK(lapbel_mesh_counts(m, &nv, &nt) == LAPBEL_OK);
  CHECK(nv == 162);  // 10*4^2 + 2
  CHECK(nt == 320);

  double h = 0, gamma = 0, min_angle = 0;
  CHECK(lapbel_mesh_quality(m, &h, &gamma, &min_angle) == LAPBEL_OK);
  CHECK(h > 0.0);
  CHECK(gamma > 0.3);
  CHECK(gamma <= 1.0);
  CHECK(min_angle > 45.0);  // degrees; icosphere stays near-equilateral
  CHECK(min_angle < 61.0);

  double mesh_area = 0, exact = 0;
  CHECK(lapbel_mesh_area(m, &mesh_area) == LAPBEL_OK);
  CHECK(lapbel_surface_area(s, &exact) == LAPBEL_OK);
  CHECK(mesh_area < exact);  // inscribed flat triangles
  CHECK(mesh_area > 0.95 * exact);

  fs::path off = temp_dir() / "sphere2.off";
  CHECK(lapbel_mesh_write_off(m, off.string().c_str()) == LAPBEL_OK);
  std::ifstream in(off);
  std::string header;
  std::getline(in, header);
  CHECK(header == "OFF");

  // Out-of-range level: config class.
  lapbel_mesh* too_big = nullptr;
  CHECK(lapbel_mesh_build(s, 99, &too_big) == LAPBEL_ERR_CONFIG);
  CHECK(too_big == nullptr);

  lapbel_mesh_destroy(m);
  lapbel_surface_destroy(s);
}

TEST_CASE("run_experiment: verdicts, exit classes, artifacts") {
  fs::path dir = temp_dir();
  fs::path out = dir / "out_area";
  fs::remove_all(out);

  fs::path cfg = dir / "area.cfg";
  write_text(cfg, "[experiment]\nkind = AreaDefect\nlevels = 1:4\noutput = " +
                      out.string() + "\n");

  int exit_class = -1;
  REQUIRE(lapbel_run_experiment(cfg.string().c_str(), &exit_class) ==
          LAPBEL_OK);
  CHECK(exit_class == 0);

  std::string report = lapbel_run_report();
  CHECK(report.find("AreaDefect") != std::string::npos);
  CHECK(report.find("PASS") != std::string::npos);

  CHECK(fs::exists(out / "area_defect.csv"));
  CHECK(fs::exists(out / "area_defect.svg"));
  CHECK(fs::exists(out / "area_defect.json"));

  // Malformed config: class 1 both in the status and the exit class.
  fs::path bad = dir / "bad.cfg";
  write_text(bad, "[experiment]\nkind = NoSuchThing\n");
  exit_class = -1;
  CHECK(lapbel_run_experiment(bad.string().c_str(), &exit_class) ==
        LAPBEL_ERR_CONFIG);
  CHECK(exit_class == 1);
  CHECK(std::string(lapbel_last_error()).find("NoSuchThing") !=
        std::string::npos);

  // Missing file: also config class.
  exit_class = -1;
  CHECK(lapbel_run_experiment((dir / "absent.cfg").string().c_str(),
                              &exit_class) == LAPBEL_ERR_CONFIG);
  CHECK(exit_class == 1);
}
