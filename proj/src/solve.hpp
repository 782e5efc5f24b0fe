#pragma once

#include "fem.hpp"

namespace lapbel {

enum class SolveMethod { ConjugateGradient, Direct };

struct SolverConfig {
  SolveMethod method = SolveMethod::ConjugateGradient;
  double rel_tolerance = 1e-10;
  // 0 means "choose from the dimension"; explicit values below the dimension
  // are rejected for CG.
  int max_iterations = 0;
};

// Solves A z = load for the SPD operator matrix; realizes the discrete Green
// operator when the load comes from assemble_load_l2 / assemble_load_measure.
Eigen::VectorXd green_solve(const SparseSpdMatrix& A, const Eigen::VectorXd& load,
                            const SolverConfig& cfg = {});

// |<G f, g>_M - <f, G g>_M|: self-adjointness probe of the Green operator in
// the S_h mass inner product.  f, g are data coefficient vectors.
double green_adjoint_check(const SparseSpdMatrix& A, const SparseSpdMatrix& mass,
                           const Eigen::VectorXd& f, const Eigen::VectorXd& g,
                           const SolverConfig& cfg = {});

void validate(const SolverConfig& cfg, int dimension);

} // namespace lapbel
