#pragma once

#include <Eigen/Sparse>
#include <functional>
#include <optional>

#include "mesh.hpp"
#include "quadrature.hpp"

namespace lapbel {

using ScalarField = std::function<double(const Vec3&)>;

// Nodal P1 function on S_h: one coefficient per mesh vertex.
struct FeFunction {
  MeshPtr mesh;
  Eigen::VectorXd coeffs;
};

// Symmetric positive definite sparse matrix; values are stored exactly
// symmetric (upper triangle mirrored, no arithmetic on the copy).
struct SparseSpdMatrix {
  int dimension = 0;
  Eigen::SparseMatrix<double> entries;
};

// Data measure: optional L2 density plus point masses anchored at mesh nodes.
struct MeasureAtom {
  int node = 0;
  double weight = 0.0;
};

struct MeasureData {
  std::optional<ScalarField> density;
  std::vector<MeasureAtom> atoms;
};

// Quadrature policy for lifted-data loads.  The fixed degree-4 rule is exact
// enough for smooth data; adaptive subdivision handles kinks and integrable
// singularities whose quadrature error would otherwise pollute the rates.
struct LoadQuadrature {
  const QuadRule* rule = &quad_degree4();
  bool adaptive = false;
  double rel_tol = 1e-12;
  double abs_tol = 1e-14;
  int max_depth = 10;
};

// Stiffness + mass of a_h(u,v) = int_{S_h} <Du,Dv> + uv; both parts exact.
SparseSpdMatrix assemble_operator(const SurfaceMesh& mesh);
SparseSpdMatrix assemble_stiffness(const SurfaceMesh& mesh);
SparseSpdMatrix assemble_mass(const SurfaceMesh& mesh);

// Component i approximates int_{S_h} f-hat phi_i with f evaluated on S via
// the closest-point lift of each quadrature point.
Eigen::VectorXd assemble_load_l2(const SurfaceMesh& mesh, const ScalarField& f,
                                 const LoadQuadrature& quad = {});

// L2 part plus exact atomic loads: an atom (j, w) contributes w * e_j.
Eigen::VectorXd assemble_load_measure(const SurfaceMesh& mesh, const MeasureData& mu,
                                      const LoadQuadrature& quad = {});

FeFunction interpolate_nodal(MeshPtr mesh, const ScalarField& f);

// In-plane gradients of the three P1 basis functions of triangle tri.
std::array<Vec3, 3> basis_gradients(const SurfaceMesh& mesh, int tri);

double fe_value(const FeFunction& f, int tri, const std::array<double, 3>& bary);
Vec3 fe_gradient(const FeFunction& f, int tri);

double mass_inner(const SparseSpdMatrix& mass, const Eigen::VectorXd& u,
                  const Eigen::VectorXd& v);

} // namespace lapbel
