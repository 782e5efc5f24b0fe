/* lapbel: surface finite elements on closed surfaces, C interface.
 *
 * Every fallible call returns a lapbel_status; on failure the thread-local
 * message from lapbel_last_error() describes what went wrong.  Handles are
 * opaque and must be released with the matching _destroy call.  Functions
 * never throw across this boundary.
 */
#ifndef LAPBEL_H
#define LAPBEL_H

#ifdef __cplusplus
extern "C" {
#endif

#if defined(_WIN32)
#define LAPBEL_API __declspec(dllexport)
#else
#define LAPBEL_API __attribute__((visibility("default")))
#endif

typedef enum lapbel_status {
  LAPBEL_OK = 0,
  /* Bad arguments, unknown names, malformed config files. */
  LAPBEL_ERR_CONFIG = 1,
  /* Numerical or runtime failure: solver breakdown, I/O, internal errors. */
  LAPBEL_ERR_SOLVER = 2
} lapbel_status;

typedef struct lapbel_surface lapbel_surface;
typedef struct lapbel_mesh lapbel_mesh;

/* Message for the most recent failure on the calling thread.  Valid until
 * the next failing lapbel_* call on the same thread; never NULL. */
LAPBEL_API const char* lapbel_last_error(void);

/* Semantic version of the library, e.g. "1.0.0". */
LAPBEL_API const char* lapbel_version(void);

/* ---- surfaces ---- */

LAPBEL_API lapbel_status lapbel_surface_create_sphere(lapbel_surface** out);

/* Torus of revolution around the x3 axis; requires R > r > 0. */
LAPBEL_API lapbel_status lapbel_surface_create_torus(double R, double r,
                                                     lapbel_surface** out);

LAPBEL_API void lapbel_surface_destroy(lapbel_surface* s);

/* Short human-readable description, e.g. "sphere" or "torus(R=2,r=0.5)".
 * Owned by the handle; valid while the handle lives. */
LAPBEL_API const char* lapbel_surface_describe(const lapbel_surface* s);

LAPBEL_API lapbel_status lapbel_surface_area(const lapbel_surface* s,
                                             double* out);

/* Signed distance to the surface; negative inside.  The query point must
 * lie inside the tube where the closest-point projection is single valued. */
LAPBEL_API lapbel_status lapbel_surface_signed_distance(
    const lapbel_surface* s, const double point[3], double* out);

LAPBEL_API lapbel_status lapbel_surface_closest_point(const lapbel_surface* s,
                                                      const double point[3],
                                                      double out[3]);

LAPBEL_API lapbel_status lapbel_surface_normal(const lapbel_surface* s,
                                               const double point[3],
                                               double out[3]);

/* ---- meshes ---- */

/* Builds the level-`level` triangulation of the surface.  Vertices lie on
 * the surface; refinement halves the mesh size per level. */
LAPBEL_API lapbel_status lapbel_mesh_build(const lapbel_surface* s, int level,
                                           lapbel_mesh** out);

LAPBEL_API void lapbel_mesh_destroy(lapbel_mesh* m);

LAPBEL_API lapbel_status lapbel_mesh_counts(const lapbel_mesh* m,
                                            long* vertices, long* triangles);

/* h: largest triangle circumdiameter.  gamma: smallest ratio of triangle
 * indiameter to h (shape regularity).  min_angle: smallest triangle angle
 * in degrees.  Any output pointer may be NULL. */
LAPBEL_API lapbel_status lapbel_mesh_quality(const lapbel_mesh* m, double* h,
                                             double* gamma, double* min_angle);

/* Total area of the flat-triangle mesh (compare lapbel_surface_area). */
LAPBEL_API lapbel_status lapbel_mesh_area(const lapbel_mesh* m, double* out);

/* Writes the mesh in OFF format. */
LAPBEL_API lapbel_status lapbel_mesh_write_off(const lapbel_mesh* m,
                                               const char* path);

/* ---- experiments ---- */

/* Runs the experiment described by the config file and writes its CSV,
 * SVG and JSON artifacts.  On LAPBEL_OK, *exit_class is
 *   0  all acceptance checks passed
 *   3  the run completed but an acceptance check failed.
 * On error the return value classifies the failure (config vs. solver)
 * and *exit_class is set to the same value. */
LAPBEL_API lapbel_status lapbel_run_experiment(const char* config_path,
                                               int* exit_class);

/* Human-readable summary of the most recent completed lapbel_run_experiment
 * on this thread: verdict, measured rate vs. threshold, artifact paths.
 * Empty until a run completes.  Valid until the next run on the thread. */
LAPBEL_API const char* lapbel_run_report(void);

/* Static table of known experiments, one per line.  Caller must not free. */
LAPBEL_API const char* lapbel_list_experiments(void);

#ifdef __cplusplus
}
#endif

#endif /* LAPBEL_H */
