#include "solve.hpp"

#include <Eigen/SparseCholesky>
#include <cmath>

namespace lapbel {

void validate(const SolverConfig& cfg, int dimension) {
  require(cfg.rel_tolerance > 0.0 && cfg.rel_tolerance <= 1e-4, errc::invalid_argument,
          "rel_tolerance must lie in (0, 1e-4]");
  if (cfg.method == SolveMethod::ConjugateGradient && cfg.max_iterations != 0) {
    require(cfg.max_iterations >= dimension, errc::invalid_argument,
            "CG max_iterations must be at least the dimension");
  }
}

namespace {

// Jacobi-preconditioned CG.  A is SPD, so every search direction sees
// positive curvature; convergence is tested on ||r|| / ||b||.
Eigen::VectorXd pcg(const Eigen::SparseMatrix<double>& A, const Eigen::VectorXd& b,
                    double rel_tol, int max_it) {
  const double bnorm = b.norm();
  Eigen::VectorXd x = Eigen::VectorXd::Zero(b.size());
  if (bnorm == 0.0) return x;

  Eigen::VectorXd inv_diag = A.diagonal().cwiseInverse();
  Eigen::VectorXd r = b;            // r = b - A x, x = 0
  Eigen::VectorXd z = inv_diag.cwiseProduct(r);
  Eigen::VectorXd p = z;
  double rho = r.dot(z);

  for (int it = 0; it < max_it; ++it) {
    if (r.norm() <= rel_tol * bnorm) return x;
    Eigen::VectorXd Ap = A * p;
    const double curvature = p.dot(Ap);
    require(curvature > 0.0, errc::singular_matrix, "CG: nonpositive curvature");
    const double alpha = rho / curvature;
    x += alpha * p;
    r -= alpha * Ap;
    z = inv_diag.cwiseProduct(r);
    const double rho_next = r.dot(z);
    p = z + (rho_next / rho) * p;
    rho = rho_next;
  }
  require(r.norm() <= rel_tol * bnorm, errc::no_convergence,
          "CG did not reach tolerance within max_iterations");
  return x;
}

} // namespace

Eigen::VectorXd green_solve(const SparseSpdMatrix& A, const Eigen::VectorXd& load,
                            const SolverConfig& cfg) {
  require(load.size() == A.dimension, errc::invalid_argument,
          "green_solve: dimension mismatch");
  validate(cfg, A.dimension);
  if (cfg.method == SolveMethod::Direct) {
    Eigen::SimplicialLLT<Eigen::SparseMatrix<double>> llt(A.entries);
    require(llt.info() == Eigen::Success, errc::singular_matrix,
            "sparse Cholesky factorization failed");
    return llt.solve(load);
  }
  const int max_it = cfg.max_iterations > 0 ? cfg.max_iterations : A.dimension + 100;
  return pcg(A.entries, load, cfg.rel_tolerance, max_it);
}

double green_adjoint_check(const SparseSpdMatrix& A, const SparseSpdMatrix& mass,
                           const Eigen::VectorXd& f, const Eigen::VectorXd& g,
                           const SolverConfig& cfg) {
  Eigen::VectorXd zf = green_solve(A, mass.entries * f, cfg);
  Eigen::VectorXd zg = green_solve(A, mass.entries * g, cfg);
  return std::abs(mass_inner(mass, zf, g) - mass_inner(mass, f, zg));
}

} // namespace lapbel
