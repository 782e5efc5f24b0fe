#include "control.hpp"

#include <Eigen/SparseLU>
#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>
#include <random>

namespace lapbel {

namespace {

std::string fmt_num(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

struct Workspace {
  SparseSpdMatrix A;
  SparseSpdMatrix M;
  Eigen::VectorXd f_y0;  // load of the desired state
  Eigen::VectorXd u0h;   // nodal interpolant of u0
  Eigen::VectorXd bvec;  // nodal bound values
};

Workspace make_workspace(const ControlProblem& prob, const SurfaceMesh& mesh) {
  Workspace w;
  w.A = assemble_operator(mesh);
  w.M = assemble_mass(mesh);
  w.f_y0 = assemble_load_l2(mesh, prob.y0.value);
  const int n = mesh.vertex_count();
  w.u0h.resize(n);
  w.bvec.resize(n);
  for (int j = 0; j < n; ++j) {
    w.u0h[j] = prob.u0.value(mesh.vertices[j]);
    w.bvec[j] = prob.bound.value(mesh.vertices[j]);
  }
  return w;
}

// Box regime per node: -1 clamped at box_lower, +1 at box_upper, 0 free.
using BoxMask = std::vector<signed char>;

// Saddle system in (y, q, mu_A) with q = -p:
//   [ M    A    E ] [y ]   [f_y0]        state:    A y = M u,  u = u0h + q/a
//   [ A  -M/a   0 ] [q ] = [M w ]        adjoint:  A p = M y - f_y0 + E mu
//   [ E^T  0    0 ] [mu]   [b_A ]        pinning:  y(x_j) = b_j on the set
// For Box controls the q-column of the state row is masked to the free nodes
// and w carries the clamped values, which breaks symmetry; SparseLU covers
// both cases.
void solve_saddle(const Workspace& w, const ControlProblem& prob,
                  const std::vector<int>& active, const BoxMask& box, Eigen::VectorXd& y,
                  Eigen::VectorXd& q, Eigen::VectorXd& mu) {
  const int n = w.A.dimension;
  const int k = static_cast<int>(active.size());
  const double inv_alpha = 1.0 / prob.alpha;
  std::vector<int> slot(n, -1);
  for (int i = 0; i < k; ++i) slot[active[i]] = i;

  std::vector<Eigen::Triplet<double>> trip;
  trip.reserve(2 * w.A.entries.nonZeros() + 2 * w.M.entries.nonZeros() + 2 * k);
  for (int o = 0; o < w.A.entries.outerSize(); ++o) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(w.A.entries, o); it; ++it) {
      trip.emplace_back(it.row(), n + it.col(), it.value());
      trip.emplace_back(n + it.row(), it.col(), it.value());
    }
  }
  for (int o = 0; o < w.M.entries.outerSize(); ++o) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(w.M.entries, o); it; ++it) {
      trip.emplace_back(it.row(), it.col(), it.value());
      if (box.empty() || box[it.col()] == 0) {
        trip.emplace_back(n + it.row(), n + it.col(), -inv_alpha * it.value());
      }
    }
  }
  for (int i = 0; i < k; ++i) {
    trip.emplace_back(active[i], 2 * n + i, 1.0);
    trip.emplace_back(2 * n + i, active[i], 1.0);
  }
  Eigen::SparseMatrix<double> K(2 * n + k, 2 * n + k);
  K.setFromTriplets(trip.begin(), trip.end());
  K.makeCompressed();

  Eigen::VectorXd ueff = w.u0h;
  if (!box.empty()) {
    for (int j = 0; j < n; ++j) {
      if (box[j] < 0) ueff[j] = prob.box_lower;
      if (box[j] > 0) ueff[j] = prob.box_upper;
    }
  }
  Eigen::VectorXd rhs(2 * n + k);
  rhs.head(n) = w.f_y0;
  rhs.segment(n, n) = w.M.entries * ueff;
  for (int i = 0; i < k; ++i) rhs[2 * n + i] = w.bvec[active[i]];

  Eigen::SparseLU<Eigen::SparseMatrix<double>> lu;
  lu.compute(K);
  require(lu.info() == Eigen::Success, errc::saddle_solve_failure,
          "KKT factorization failed");
  Eigen::VectorXd x = lu.solve(rhs);
  require(lu.info() == Eigen::Success, errc::saddle_solve_failure, "KKT solve failed");

  y = x.head(n);
  q = x.segment(n, n);
  mu = Eigen::VectorXd::Zero(n);
  for (int i = 0; i < k; ++i) mu[active[i]] = x[2 * n + i];
}

double median(std::vector<double> v) {
  std::sort(v.begin(), v.end());
  const size_t n = v.size();
  return n % 2 == 1 ? v[n / 2] : 0.5 * (v[n / 2 - 1] + v[n / 2]);
}

bool band_ok(const std::vector<double>& v) {
  return *std::max_element(v.begin(), v.end()) <= 1.2 * median(v) + 1e-12;
}

} // namespace

std::string ControlProblem::describe() const {
  std::string s = "surface=" + surface.describe() + ";alpha=" + fmt_num(alpha) +
                  ";y0=" + y0.spec + ";u0=" + u0.spec + ";bound=" + bound.spec;
  if (space == ControlSpace::Box) {
    s += ";space=box[" + fmt_num(box_lower) + "," + fmt_num(box_upper) + "]";
  } else {
    s += ";space=free";
  }
  return s;
}

bool KktResiduals::pass(const PdasConfig& cfg) const {
  return state <= cfg.tol_stat && adjoint <= cfg.tol_stat && stationarity <= cfg.tol_stat &&
         complementarity <= cfg.tol_comp && feasibility <= cfg.tol_feas &&
         dual <= cfg.tol_dual;
}

KktSolution solve_pdas(const ControlProblem& prob, MeshPtr mesh, const PdasConfig& cfg) {
  require(prob.alpha > 0.0, errc::invalid_argument, "alpha must be positive");
  require(prob.space == ControlSpace::FreeL2 || prob.box_lower < prob.box_upper,
          errc::invalid_argument, "empty box");
  const Workspace w = make_workspace(prob, *mesh);
  const int n = mesh->vertex_count();
  const double inv_alpha = 1.0 / prob.alpha;
  const bool boxed = prob.space == ControlSpace::Box;

  std::vector<char> active(n, 0);
  BoxMask box(boxed ? n : 0, 0);
  Eigen::VectorXd y, q, mu;
  int iterations = 0;

  if (cfg.init == PdasInit::Violated) {
    // Seed from the unconstrained solve: everything violated joins at once.
    solve_saddle(w, prob, {}, box, y, q, mu);
    ++iterations;
    for (int j = 0; j < n; ++j) active[j] = y[j] > w.bvec[j];
  } else if (cfg.init == PdasInit::Custom) {
    for (int j : cfg.initial_set) {
      require(j >= 0 && j < n, errc::invalid_argument, "warm-start node out of range");
      active[j] = 1;
    }
  }

  while (iterations < cfg.max_iterations) {
    std::vector<int> set;
    for (int j = 0; j < n; ++j) {
      if (active[j]) set.push_back(j);
    }
    solve_saddle(w, prob, set, box, y, q, mu);
    ++iterations;

    std::vector<char> next(n);
    for (int j = 0; j < n; ++j) {
      next[j] = mu[j] + inv_alpha * (y[j] - w.bvec[j]) > 0.0;
    }
    bool stable = next == active;
    if (boxed) {
      BoxMask nbox(n, 0);
      for (int j = 0; j < n; ++j) {
        const double trial = w.u0h[j] + inv_alpha * q[j];
        if (trial < prob.box_lower) nbox[j] = -1;
        if (trial > prob.box_upper) nbox[j] = 1;
      }
      stable = stable && nbox == box;
      box = std::move(nbox);
    }
    active = std::move(next);
    if (!stable) continue;

    KktSolution sol;
    sol.y = FeFunction{mesh, y};
    sol.p = FeFunction{mesh, -q};
    Eigen::VectorXd u = w.u0h + inv_alpha * q;
    if (boxed) u = u.cwiseMax(prob.box_lower).cwiseMin(prob.box_upper);
    sol.u = FeFunction{mesh, u};
    sol.mu = mu;
    for (int j = 0; j < n; ++j) {
      if (active[j]) sol.active_set.push_back(j);
    }
    sol.iterations = iterations;
    sol.residuals = kkt_residuals(prob, sol);
    require(sol.residuals.pass(cfg), errc::pdas_no_convergence,
            "active set stabilized with failing KKT residuals");
    return sol;
  }
  fail(errc::pdas_no_convergence, "PDAS iteration cap reached");
}

KktResiduals kkt_residuals(const ControlProblem& prob, const KktSolution& sol) {
  const SurfaceMesh& mesh = *sol.y.mesh;
  const Workspace w = make_workspace(prob, mesh);
  const int n = mesh.vertex_count();
  const Eigen::VectorXd& y = sol.y.coeffs;
  const Eigen::VectorXd& p = sol.p.coeffs;
  const Eigen::VectorXd& u = sol.u.coeffs;
  require(y.size() == n && p.size() == n && u.size() == n && sol.mu.size() == n,
          errc::invalid_argument, "kkt_residuals: dimension mismatch");

  KktResiduals r;
  r.state = (w.A.entries * y - w.M.entries * u).norm();
  r.adjoint = (w.A.entries * p - w.M.entries * y + w.f_y0 - sol.mu).norm();
  Eigen::VectorXd g = p + prob.alpha * (u - w.u0h);
  if (prob.space == ControlSpace::Box) {
    // Projected stationarity: distance from u to the projected gradient step.
    Eigen::VectorXd step =
        (u - g).cwiseMax(prob.box_lower).cwiseMin(prob.box_upper);
    g = u - step;
  }
  r.stationarity = std::sqrt(mass_inner(w.M, g, g));
  double comp = 0.0;
  for (int j = 0; j < n; ++j) comp += sol.mu[j] * (w.bvec[j] - y[j]);
  r.complementarity = std::abs(comp);
  r.feasibility = std::max(0.0, (y - w.bvec).maxCoeff());
  r.dual = std::max(0.0, -sol.mu.minCoeff());
  return r;
}

std::vector<int> prolong_active_set(const KktSolution& coarse, const SurfaceMesh& fine) {
  const SurfaceMesh& cm = *coarse.y.mesh;
  const double radius = 0.55 * cm.h;
  std::vector<int> out;
  for (int j = 0; j < fine.vertex_count(); ++j) {
    for (int a : coarse.active_set) {
      if ((fine.vertices[j] - cm.vertices[a]).norm() <= radius) {
        out.push_back(j);
        break;
      }
    }
  }
  return out;
}

void slater_check(const ControlProblem& prob, MeshPtr mesh, const SolverConfig& cfg) {
  const SurfaceMesh& m = *mesh;
  SparseSpdMatrix A = assemble_operator(m);
  Eigen::VectorXd load = assemble_load_l2(m, prob.slater.value);
  Eigen::VectorXd y = green_solve(A, load, cfg);
  for (int j = 0; j < m.vertex_count(); ++j) {
    require(y[j] < prob.bound.value(m.vertices[j]), errc::slater_violation,
            "Slater point state reaches the bound at a node");
  }
}

BoundsProbe uniform_bounds_probe(const std::vector<KktSolution>& family) {
  require(family.size() >= 3, errc::insufficient_data,
          "uniform_bounds_probe: need at least 3 levels");
  BoundsProbe probe;
  for (const KktSolution& sol : family) {
    SparseSpdMatrix M = assemble_mass(*sol.y.mesh);
    probe.state_norms.push_back(std::sqrt(mass_inner(M, sol.y.coeffs, sol.y.coeffs)));
    probe.control_norms.push_back(std::sqrt(mass_inner(M, sol.u.coeffs, sol.u.coeffs)));
    probe.multiplier_masses.push_back(sol.mu.sum());
  }
  probe.bounded = band_ok(probe.state_norms) && band_ok(probe.control_norms) &&
                  band_ok(probe.multiplier_masses);
  return probe;
}

HessianProbe hessian_probe(const SurfaceMesh& mesh, double alpha, int pairs, unsigned seed,
                           const SolverConfig& cfg) {
  require(pairs >= 1 && pairs <= 10, errc::invalid_argument, "probe wants 1..10 pairs");
  SparseSpdMatrix A = assemble_operator(mesh);
  SparseSpdMatrix M = assemble_mass(mesh);
  const int n = mesh.vertex_count();
  std::mt19937 rng(seed);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  auto direction = [&] {
    Eigen::VectorXd v(n);
    for (int i = 0; i < n; ++i) v[i] = unif(rng);
    return Eigen::VectorXd(v / std::sqrt(mass_inner(M, v, v)));
  };
  // H v = M G G v + alpha M v with G = A^{-1} M; each application spends two
  // inner solves, so the asymmetry seen here is the solver's, not roundoff.
  auto apply = [&](const Eigen::VectorXd& v) {
    Eigen::VectorXd z1 = green_solve(A, M.entries * v, cfg);
    Eigen::VectorXd z2 = green_solve(A, M.entries * z1, cfg);
    return Eigen::VectorXd(M.entries * z2 + alpha * (M.entries * v));
  };
  HessianProbe out;
  out.min_curvature = std::numeric_limits<double>::infinity();
  for (int i = 0; i < pairs; ++i) {
    Eigen::VectorXd v = direction();
    Eigen::VectorXd w = direction();
    Eigen::VectorXd Hv = apply(v);
    Eigen::VectorXd Hw = apply(w);
    out.max_asymmetry = std::max(out.max_asymmetry, std::abs(w.dot(Hv) - v.dot(Hw)));
    out.min_curvature = std::min(out.min_curvature, v.dot(Hv));
  }
  return out;
}

} // namespace lapbel
