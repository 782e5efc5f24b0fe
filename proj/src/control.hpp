#pragma once

#include <vector>

#include "fields.hpp"
#include "solve.hpp"

namespace lapbel {

enum class ControlSpace { FreeL2, Box };
enum class PdasInit { Empty, Violated, Custom };

// min  1/2 ||y - y0||^2 + alpha/2 ||u - u0||^2   over u in U_ad,
// s.t. a_h(y, v) = (u, v) for all v,  y(x_j) <= b(x_j) at every mesh node.
// The control is never meshed independently: u = u0h - p/alpha through the
// adjoint (variational discretization), projected onto the box when active.
struct ControlProblem {
  Surface surface = Surface::unit_sphere();
  double alpha = 1.0;
  Field y0 = make_field("constant:0");
  Field u0 = make_field("constant:0");
  Field bound = make_field("constant:1");
  // Control u~ whose unconstrained state must sit strictly below the bound;
  // checked once on the coarsest level of a sweep.
  Field slater = make_field("constant:0");
  ControlSpace space = ControlSpace::FreeL2;
  double box_lower = 0.0;
  double box_upper = 0.0;

  // Canonical description; the reference cache hashes this.
  std::string describe() const;
};

struct PdasConfig {
  int max_iterations = 50;
  double tol_feas = 1e-9;
  double tol_dual = 1e-9;
  double tol_comp = 1e-9;
  double tol_stat = 1e-9;
  PdasInit init = PdasInit::Empty;
  // Seed active set for Custom init.  Level sweeps chain each solve from the
  // previous level's contact set: cold starts pin the whole violated cap and
  // then shed it ring by ring, which blows the iteration cap on fine meshes.
  std::vector<int> initial_set;
  // Used for the unconstrained solves (Violated init, Slater check).
  SolverConfig linear;
};

struct KktResiduals {
  double state = 0.0;           // ||A y - M u||_2
  double adjoint = 0.0;         // ||A p - M y + f_y0 - E mu||_2
  double stationarity = 0.0;    // M-norm of p + alpha (u - u0h), projected for Box
  double complementarity = 0.0; // |sum_j mu_j (b_j - y_j)|
  double feasibility = 0.0;     // max_j (y_j - b_j), clamped at 0
  double dual = 0.0;            // max_j (-mu_j), clamped at 0

  bool pass(const PdasConfig& cfg) const;
};

struct KktSolution {
  FeFunction y;
  FeFunction p;
  FeFunction u;
  Eigen::VectorXd mu; // one entry per node, zero off the active set
  std::vector<int> active_set;
  int iterations = 0;
  KktResiduals residuals;
};

// Primal-dual active set iteration on the symmetric saddle system in
// (y, -p, mu_A); update rule  A+ = { j : mu_j + (y_j - b_j)/alpha > 0 }.
// Exact contact with mu_j = 0 classifies inactive.
KktSolution solve_pdas(const ControlProblem& prob, MeshPtr mesh, const PdasConfig& cfg = {});

// Recomputes every residual from freshly assembled matrices; shares no state
// with the PDAS internals.
KktResiduals kkt_residuals(const ControlProblem& prob, const KktSolution& sol);

// Warm-start seed for the next level: fine nodes within 0.55 h_coarse of a
// coarse active node (covers the contact cap plus one boundary ring).
std::vector<int> prolong_active_set(const KktSolution& coarse, const SurfaceMesh& fine);

// Solves the state equation for the designated Slater control and requires
// strict feasibility at every node.  Throws slater_violation otherwise.
void slater_check(const ControlProblem& prob, MeshPtr mesh, const SolverConfig& cfg = {});

// Boundedness report across a level sweep of the same problem (coarse to
// fine): L2(S_h) norms of y and u plus the multiplier mass sum_j mu_j.
struct BoundsProbe {
  std::vector<double> state_norms;
  std::vector<double> control_norms;
  std::vector<double> multiplier_masses;
  bool bounded = false; // max <= 1.2 * median per family
};
BoundsProbe uniform_bounds_probe(const std::vector<KktSolution>& family);

// Reduced-Hessian probe: J''[v, w] = (Gv, Gw)_M + alpha (v, w)_M evaluated
// both ways on seeded random direction pairs.  Asymmetry is bounded by the
// inner solver tolerance; curvature must stay positive.
struct HessianProbe {
  double max_asymmetry = 0.0;
  double min_curvature = 0.0;
};
HessianProbe hessian_probe(const SurfaceMesh& mesh, double alpha, int pairs, unsigned seed,
                           const SolverConfig& cfg = {});

} // namespace lapbel
