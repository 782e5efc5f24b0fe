// Command line front end.  Talks to the library exclusively through the C
// API; all numerics and artifact writing happen behind lapbel_run_experiment.
//
// Exit codes: 0 pass, 1 bad usage/config, 2 solver or runtime failure,
// 3 completed run that missed an acceptance threshold.

#include <cstdio>
#include <string>

#include "CLI11.hpp"
#include "lapbel/lapbel.h"

namespace {

int report_failure(lapbel_status st) {
  std::fprintf(stderr, "error: %s\n", lapbel_last_error());
  return st == LAPBEL_ERR_CONFIG ? 1 : 2;
}

int run_mesh_info(const std::string& surface, int level, double torus_R,
                  double torus_r, const std::string& off_path) {
  lapbel_surface* s = nullptr;
  lapbel_status st;
  if (surface == "sphere") {
    st = lapbel_surface_create_sphere(&s);
  } else if (surface == "torus") {
    st = lapbel_surface_create_torus(torus_R, torus_r, &s);
  } else {
    std::fprintf(stderr, "error: unknown surface '%s' (expected sphere or torus)\n",
                 surface.c_str());
    return 1;
  }
  if (st != LAPBEL_OK) return report_failure(st);

  lapbel_mesh* m = nullptr;
  st = lapbel_mesh_build(s, level, &m);
  if (st != LAPBEL_OK) {
    lapbel_surface_destroy(s);
    return report_failure(st);
  }

  long vertices = 0, triangles = 0;
  lapbel_mesh_counts(m, &vertices, &triangles);
  double h = 0, gamma = 0, min_angle = 0, mesh_area = 0, exact_area = 0;
  st = lapbel_mesh_quality(m, &h, &gamma, &min_angle);
  if (st == LAPBEL_OK) st = lapbel_mesh_area(m, &mesh_area);
  if (st == LAPBEL_OK) st = lapbel_surface_area(s, &exact_area);
  if (st != LAPBEL_OK) {
    lapbel_mesh_destroy(m);
    lapbel_surface_destroy(s);
    return report_failure(st);
  }

  std::printf("surface      %s\n", lapbel_surface_describe(s));
  std::printf("level        %d\n", level);
  std::printf("vertices     %ld\n", vertices);
  std::printf("triangles    %ld\n", triangles);
  std::printf("h            %.6g\n", h);
  std::printf("gamma        %.6g\n", gamma);
  std::printf("min angle    %.2f deg\n", min_angle);
  std::printf("area(S_h)    %.12g\n", mesh_area);
  std::printf("area defect  %.6g\n", exact_area - mesh_area);

  int rc = 0;
  if (!off_path.empty()) {
    st = lapbel_mesh_write_off(m, off_path.c_str());
    if (st != LAPBEL_OK) {
      rc = report_failure(st);
    } else {
      std::printf("off          %s\n", off_path.c_str());
    }
  }

  lapbel_mesh_destroy(m);
  lapbel_surface_destroy(s);
  return rc;
}

int run_experiment(const std::string& config_path) {
  int exit_class = 2;
  lapbel_status st = lapbel_run_experiment(config_path.c_str(), &exit_class);
  if (st != LAPBEL_OK) {
    std::fprintf(stderr, "error: %s\n", lapbel_last_error());
    return exit_class;
  }
  std::fputs(lapbel_run_report(), stdout);
  return exit_class;
}

} // namespace

int main(int argc, char** argv) {
  CLI::App app{"Laplace-Beltrami finite elements and convergence experiments"};
  app.set_version_flag("--version", std::string(lapbel_version()));
  app.require_subcommand(1);

  auto* mesh = app.add_subcommand("mesh", "Mesh inspection");
  mesh->require_subcommand(1);
  auto* info = mesh->add_subcommand(
      "info", "Print statistics for a surface triangulation");
  std::string surface = "sphere";
  int level = 0;
  double torus_R = 2.0, torus_r = 0.5;
  std::string off_path;
  info->add_option("--surface", surface, "Surface: sphere | torus")
      ->capture_default_str();
  info->add_option("--level", level, "Refinement level")->required();
  info->add_option("--torus-R", torus_R, "Torus center-circle radius")
      ->capture_default_str();
  info->add_option("--torus-r", torus_r, "Torus tube radius")
      ->capture_default_str();
  info->add_option("--off", off_path, "Export the mesh in OFF format to PATH");

  auto* run = app.add_subcommand("run", "Run an experiment from a config file");
  std::string config_path;
  run->add_option("config", config_path, "Experiment config file")->required();

  auto* list = app.add_subcommand("list", "List the known experiments");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    // CLI11's own exit codes don't match ours; usage problems are class 1.
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  if (list->parsed()) {
    std::fputs(lapbel_list_experiments(), stdout);
    return 0;
  }
  if (info->parsed())
    return run_mesh_info(surface, level, torus_R, torus_r, off_path);
  if (run->parsed()) return run_experiment(config_path);
  return 1;
}
