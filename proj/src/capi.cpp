// C interface of the shared library.  Thin translation layer: validates
// pointers, converts types, and turns exceptions into status codes.  No
// numerics live here.

#include "lapbel/lapbel.h"

#include <cstdio>
#include <exception>
#include <new>
#include <string>

#include "error.hpp"
#include "experiment.hpp"
#include "mesh.hpp"
#include "surface.hpp"

struct lapbel_surface {
  lapbel::Surface value;
  std::string description;
};

struct lapbel_mesh {
  lapbel::MeshPtr value;
};

namespace {

thread_local std::string t_last_error;
thread_local std::string t_run_report;

lapbel_status classify(const lapbel::Error& e) {
  return lapbel::exit_class_for(e) == 1 ? LAPBEL_ERR_CONFIG : LAPBEL_ERR_SOLVER;
}

// Runs fn, which returns a lapbel_status, converting any escape into a
// status + thread-local message.  The C boundary stays noexcept.
template <class Fn>
lapbel_status guarded(Fn&& fn) {
  try {
    return fn();
  } catch (const lapbel::Error& e) {
    t_last_error = e.what();
    return classify(e);
  } catch (const std::bad_alloc&) {
    t_last_error = "out of memory";
    return LAPBEL_ERR_SOLVER;
  } catch (const std::exception& e) {
    t_last_error = e.what();
    return LAPBEL_ERR_SOLVER;
  }
}

lapbel_status invalid(const char* message) {
  t_last_error = message;
  return LAPBEL_ERR_CONFIG;
}

std::string format_run_report(const lapbel::ExperimentResult& r) {
  char line[256];
  std::snprintf(line, sizeof line,
                "%s: %s  (min EOC %.4f, threshold %.2f, norm %s)\n",
                r.name.c_str(), r.pass ? "PASS" : "FAIL", r.measured_min_eoc,
                r.threshold, r.norm.c_str());
  std::string report = line;
  if (!r.pass) report += "  reason: " + r.fail_reason + "\n";
  if (r.reference_cache_hit) report += "  reference: cache hit\n";
  report += "  csv:  " + r.csv_path.string() + "\n";
  report += "  svg:  " + r.svg_path.string() + "\n";
  report += "  json: " + r.json_path.string() + "\n";
  return report;
}

} // namespace

extern "C" {

const char* lapbel_last_error(void) { return t_last_error.c_str(); }

const char* lapbel_version(void) { return "1.0.0"; }

lapbel_status lapbel_surface_create_sphere(lapbel_surface** out) {
  if (!out) return invalid("surface_create_sphere: out is NULL");
  return guarded([&] {
    *out = new lapbel_surface{lapbel::Surface::unit_sphere(), "sphere"};
    return LAPBEL_OK;
  });
}

lapbel_status lapbel_surface_create_torus(double R, double r,
                                          lapbel_surface** out) {
  if (!out) return invalid("surface_create_torus: out is NULL");
  return guarded([&] {
    auto surface = lapbel::Surface::torus(R, r);
    *out = new lapbel_surface{surface, surface.describe()};
    return LAPBEL_OK;
  });
}

void lapbel_surface_destroy(lapbel_surface* s) { delete s; }

const char* lapbel_surface_describe(const lapbel_surface* s) {
  return s ? s->description.c_str() : "";
}

lapbel_status lapbel_surface_area(const lapbel_surface* s, double* out) {
  if (!s || !out) return invalid("surface_area: NULL argument");
  *out = s->value.area();
  return LAPBEL_OK;
}

lapbel_status lapbel_surface_signed_distance(const lapbel_surface* s,
                                             const double point[3],
                                             double* out) {
  if (!s || !point || !out) return invalid("signed_distance: NULL argument");
  return guarded([&] {
    *out = s->value.signed_distance(lapbel::Vec3(point[0], point[1], point[2]));
    return LAPBEL_OK;
  });
}

lapbel_status lapbel_surface_closest_point(const lapbel_surface* s,
                                           const double point[3],
                                           double out[3]) {
  if (!s || !point || !out) return invalid("closest_point: NULL argument");
  return guarded([&] {
    lapbel::Vec3 x =
        s->value.closest_point(lapbel::Vec3(point[0], point[1], point[2]));
    out[0] = x[0];
    out[1] = x[1];
    out[2] = x[2];
    return LAPBEL_OK;
  });
}

lapbel_status lapbel_surface_normal(const lapbel_surface* s,
                                    const double point[3], double out[3]) {
  if (!s || !point || !out) return invalid("surface_normal: NULL argument");
  return guarded([&] {
    lapbel::Vec3 n = s->value.normal(lapbel::Vec3(point[0], point[1], point[2]));
    out[0] = n[0];
    out[1] = n[1];
    out[2] = n[2];
    return LAPBEL_OK;
  });
}

lapbel_status lapbel_mesh_build(const lapbel_surface* s, int level,
                                lapbel_mesh** out) {
  if (!s || !out) return invalid("mesh_build: NULL argument");
  return guarded([&] {
    *out = new lapbel_mesh{lapbel::build_mesh(s->value, level)};
    return LAPBEL_OK;
  });
}

void lapbel_mesh_destroy(lapbel_mesh* m) { delete m; }

lapbel_status lapbel_mesh_counts(const lapbel_mesh* m, long* vertices,
                                 long* triangles) {
  if (!m) return invalid("mesh_counts: mesh is NULL");
  if (vertices) *vertices = m->value->vertex_count();
  if (triangles) *triangles = m->value->triangle_count();
  return LAPBEL_OK;
}

lapbel_status lapbel_mesh_quality(const lapbel_mesh* m, double* h,
                                  double* gamma, double* min_angle) {
  if (!m) return invalid("mesh_quality: mesh is NULL");
  return guarded([&] {
    lapbel::MeshQuality q = lapbel::mesh_quality(*m->value);
    if (h) *h = q.h;
    if (gamma) *gamma = q.gamma;
    // Core keeps radians; the C API reports degrees.
    if (min_angle) *min_angle = q.min_angle * (180.0 / 3.14159265358979323846);
    return LAPBEL_OK;
  });
}

lapbel_status lapbel_mesh_area(const lapbel_mesh* m, double* out) {
  if (!m || !out) return invalid("mesh_area: NULL argument");
  return guarded([&] {
    *out = lapbel::mesh_area(*m->value);
    return LAPBEL_OK;
  });
}

lapbel_status lapbel_mesh_write_off(const lapbel_mesh* m, const char* path) {
  if (!m || !path) return invalid("mesh_write_off: NULL argument");
  return guarded([&] {
    lapbel::write_off(*m->value, path);
    return LAPBEL_OK;
  });
}

lapbel_status lapbel_run_experiment(const char* config_path, int* exit_class) {
  if (!config_path || !exit_class)
    return invalid("run_experiment: NULL argument");
  t_run_report.clear();
  lapbel_status st = guarded([&] {
    lapbel::ExperimentConfig cfg = lapbel::parse_config(config_path);
    lapbel::ExperimentResult result = lapbel::run_experiment(cfg);
    *exit_class = lapbel::exit_class_for(result);
    t_run_report = format_run_report(result);
    if (!result.pass) t_last_error = result.fail_reason;
    return LAPBEL_OK;
  });
  if (st != LAPBEL_OK) *exit_class = (st == LAPBEL_ERR_CONFIG) ? 1 : 2;
  return st;
}

const char* lapbel_run_report(void) { return t_run_report.c_str(); }

const char* lapbel_list_experiments(void) {
  // Built once; the registry is static and the C string must outlive calls.
  static const std::string table = lapbel::list_experiments();
  return table.c_str();
}

} // extern "C"
