#include "fem.hpp"

#include <vector>

namespace lapbel {

namespace {

using Triplet = Eigen::Triplet<double>;

// Mirrors an upper-triangular triplet set into an exactly symmetric matrix.
SparseSpdMatrix from_upper(int n, const std::vector<Triplet>& upper) {
  Eigen::SparseMatrix<double> u(n, n);
  u.setFromTriplets(upper.begin(), upper.end());
  SparseSpdMatrix out;
  out.dimension = n;
  out.entries = u.selfadjointView<Eigen::Upper>();
  out.entries.makeCompressed();
  return out;
}

enum class Part { Stiffness, Mass, Both };

SparseSpdMatrix assemble(const SurfaceMesh& mesh, Part part) {
  std::vector<Triplet> upper;
  upper.reserve(mesh.triangles.size() * 6);
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Vec3 a = mesh.vertices[tri[0]], b = mesh.vertices[tri[1]], c = mesh.vertices[tri[2]];
    const double area = triangle_area(a, b, c);
    require(area >= 1e-14, errc::degenerate_triangle, "assemble: degenerate triangle");
    std::array<Vec3, 3> grad = basis_gradients(mesh, t);
    for (int i = 0; i < 3; ++i) {
      for (int j = i; j < 3; ++j) {
        double v = 0.0;
        if (part != Part::Mass) v += area * grad[i].dot(grad[j]);
        if (part != Part::Stiffness) v += (i == j ? area / 6.0 : area / 12.0);
        int gi = tri[i], gj = tri[j];
        if (gi > gj) std::swap(gi, gj);
        upper.emplace_back(gi, gj, v);
      }
    }
  }
  return from_upper(mesh.vertex_count(), upper);
}

} // namespace

std::array<Vec3, 3> basis_gradients(const SurfaceMesh& mesh, int tri) {
  const auto& t = mesh.triangles[tri];
  const Vec3 a = mesh.vertices[t[0]], b = mesh.vertices[t[1]], c = mesh.vertices[t[2]];
  const Vec3 n = (b - a).cross(c - a);
  const double twice_area = n.norm();
  const Vec3 un = n / twice_area;
  // grad phi_a = (n x (c - b)) / (2 area); in-plane, 1 on a's opposite height.
  return {Vec3(un.cross(c - b) / twice_area), Vec3(un.cross(a - c) / twice_area),
          Vec3(un.cross(b - a) / twice_area)};
}

SparseSpdMatrix assemble_operator(const SurfaceMesh& mesh) { return assemble(mesh, Part::Both); }
SparseSpdMatrix assemble_stiffness(const SurfaceMesh& mesh) {
  return assemble(mesh, Part::Stiffness);
}
SparseSpdMatrix assemble_mass(const SurfaceMesh& mesh) { return assemble(mesh, Part::Mass); }

Eigen::VectorXd assemble_load_l2(const SurfaceMesh& mesh, const ScalarField& f,
                                 const LoadQuadrature& quad) {
  Eigen::VectorXd load = Eigen::VectorXd::Zero(mesh.vertex_count());
  const Surface& surf = mesh.surface;
  auto lifted = [&](const Vec3& x) { return f(surf.closest_point(x)); };
  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Vec3 a = mesh.vertices[tri[0]], b = mesh.vertices[tri[1]], c = mesh.vertices[tri[2]];
    Eigen::Vector3d local;
    if (quad.adaptive) {
      local = adaptive_triangle_integrate3(
          [&](const Vec3& x, const std::array<double, 3>& bary) {
            const double v = lifted(x);
            return Eigen::Vector3d(v * bary[0], v * bary[1], v * bary[2]);
          },
          a, b, c, quad.rel_tol, quad.abs_tol, quad.max_depth);
    } else {
      const QuadRule& rule = *quad.rule;
      local.setZero();
      const double area = triangle_area(a, b, c);
      for (int q = 0; q < rule.size(); ++q) {
        const auto& w = rule.points[q];
        const double v = rule.weights[q] * lifted(bary_point(a, b, c, w));
        local += area * v * Eigen::Vector3d(w[0], w[1], w[2]);
      }
    }
    for (int k = 0; k < 3; ++k) load[tri[k]] += local[k];
  }
  return load;
}

Eigen::VectorXd assemble_load_measure(const SurfaceMesh& mesh, const MeasureData& mu,
                                      const LoadQuadrature& quad) {
  Eigen::VectorXd load = mu.density ? assemble_load_l2(mesh, *mu.density, quad)
                                    : Eigen::VectorXd::Zero(mesh.vertex_count());
  for (const MeasureAtom& atom : mu.atoms) {
    require(atom.node >= 0 && atom.node < mesh.vertex_count(), errc::invalid_atom_node,
            "measure atom node out of range");
    // phi_i(x_j) = delta_ij: a nodal atom loads exactly one basis function.
    load[atom.node] += atom.weight;
  }
  return load;
}

FeFunction interpolate_nodal(MeshPtr mesh, const ScalarField& f) {
  FeFunction out;
  out.coeffs.resize(mesh->vertex_count());
  for (int v = 0; v < mesh->vertex_count(); ++v) out.coeffs[v] = f(mesh->vertices[v]);
  out.mesh = std::move(mesh);
  return out;
}

double fe_value(const FeFunction& f, int tri, const std::array<double, 3>& bary) {
  const auto& t = f.mesh->triangles[tri];
  return bary[0] * f.coeffs[t[0]] + bary[1] * f.coeffs[t[1]] + bary[2] * f.coeffs[t[2]];
}

Vec3 fe_gradient(const FeFunction& f, int tri) {
  const auto& t = f.mesh->triangles[tri];
  std::array<Vec3, 3> grad = basis_gradients(*f.mesh, tri);
  return f.coeffs[t[0]] * grad[0] + f.coeffs[t[1]] * grad[1] + f.coeffs[t[2]] * grad[2];
}

double mass_inner(const SparseSpdMatrix& mass, const Eigen::VectorXd& u,
                  const Eigen::VectorXd& v) {
  return u.dot(mass.entries * v);
}

} // namespace lapbel
