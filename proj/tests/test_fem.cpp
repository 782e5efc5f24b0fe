#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <numbers>
#include <random>

#include "fem.hpp"
#include "quadrature.hpp"

using namespace lapbel;

namespace {

constexpr double kPi = std::numbers::pi;

// Exact integral of a barycentric monomial over a triangle of area A:
// int l1^p l2^q l3^r = 2A p! q! r! / (p+q+r+2)!
double bary_monomial_integral(int p, int q, int r, double area) {
  auto fact = [](int n) {
    double f = 1.0;
    for (int k = 2; k <= n; ++k) f *= k;
    return f;
  };
  return 2.0 * area * fact(p) * fact(q) * fact(r) / fact(p + q + r + 2);
}

double apply_rule(const QuadRule& rule, int p, int q, int r, double area) {
  double s = 0.0;
  for (int i = 0; i < rule.size(); ++i) {
    const auto& b = rule.points[i];
    s += rule.weights[i] * std::pow(b[0], p) * std::pow(b[1], q) * std::pow(b[2], r);
  }
  return area * s;
}

} // namespace

TEST_CASE("quadrature rules integrate their stated degree exactly") {
  const double area = 0.37;
  for (const QuadRule* rule : {&quad_degree4(), &quad_degree5()}) {
    for (int p = 0; p <= rule->degree; ++p)
      for (int q = 0; p + q <= rule->degree; ++q) {
        int r = rule->degree - p - q;
        double exact = bary_monomial_integral(p, q, r, area);
        CHECK(apply_rule(*rule, p, q, r, area) == doctest::Approx(exact).epsilon(1e-12));
      }
  }
  QuadRule conical = quad_conical(5); // degree 9
  for (int p = 0; p <= 9; ++p) {
    int q = std::min(9 - p, 4);
    int r = 0;
    double exact = bary_monomial_integral(p, q, r, area);
    CHECK(apply_rule(conical, p, q, r, area) == doctest::Approx(exact).epsilon(1e-12));
  }
}

TEST_CASE("local P1 mass matrix on an equilateral triangle") {
  SurfaceMesh m;
  m.surface = Surface::unit_sphere();
  m.vertices = {Vec3(0, 0, 0), Vec3(1, 0, 0), Vec3(0.5, std::sqrt(3.0) / 2.0, 0)};
  m.triangles = {{0, 1, 2}};
  const double area = std::sqrt(3.0) / 4.0;
  SparseSpdMatrix mass = assemble_mass(m);
  for (int i = 0; i < 3; ++i)
    for (int j = 0; j < 3; ++j) {
      double expect = (i == j ? 2.0 : 1.0) * area / 12.0;
      CHECK(mass.entries.coeff(i, j) == doctest::Approx(expect).epsilon(1e-14));
    }
}

TEST_CASE("stiffness annihilates constants; operator applied to 1 gives phi integrals") {
  auto mesh = build_icosphere(3);
  SparseSpdMatrix A = assemble_operator(*mesh);
  SparseSpdMatrix M = assemble_mass(*mesh);
  Eigen::VectorXd ones = Eigen::VectorXd::Ones(mesh->vertex_count());
  Eigen::VectorXd diff = A.entries * ones - M.entries * ones;
  CHECK(diff.cwiseAbs().maxCoeff() <= 1e-13);
  CHECK(ones.dot(A.entries * ones) == doctest::Approx(mesh_area(*mesh)).epsilon(1e-12));
}

TEST_CASE("assembled matrices are exactly symmetric") {
  auto mesh = build_icosphere(2);
  SparseSpdMatrix A = assemble_operator(*mesh);
  Eigen::SparseMatrix<double> T = A.entries.transpose();
  for (int k = 0; k < A.entries.outerSize(); ++k) {
    for (Eigen::SparseMatrix<double>::InnerIterator it(A.entries, k); it; ++it) {
      CHECK(it.value() == T.coeff(it.row(), it.col()));
    }
  }
}

TEST_CASE("coercivity witness: v'Av >= v'Mv") {
  auto mesh = build_icosphere(2);
  SparseSpdMatrix A = assemble_operator(*mesh);
  SparseSpdMatrix M = assemble_mass(*mesh);
  std::mt19937 rng(3);
  std::normal_distribution<double> gauss;
  for (int k = 0; k < 10; ++k) {
    Eigen::VectorXd v(mesh->vertex_count());
    for (int i = 0; i < v.size(); ++i) v[i] = gauss(rng);
    CHECK(v.dot(A.entries * v) >= v.dot(M.entries * v) - 1e-12);
  }
}

TEST_CASE("load vector for f=1 sums to the mesh area") {
  auto mesh = build_icosphere(3);
  Eigen::VectorXd load = assemble_load_l2(*mesh, [](const Vec3&) { return 1.0; });
  CHECK(load.sum() == doctest::Approx(mesh_area(*mesh)).epsilon(1e-13));
}

TEST_CASE("measure loads: nodal atoms hit single basis functions") {
  auto mesh = build_icosphere(1);
  MeasureData mu;
  mu.atoms = {{0, 1.0}};
  Eigen::VectorXd load = assemble_load_measure(*mesh, mu);
  CHECK(load[0] == 1.0);
  CHECK(load.cwiseAbs().sum() == 1.0);

  MeasureData two;
  two.atoms = {{3, 0.7}, {10, -0.2}};
  load = assemble_load_measure(*mesh, two);
  CHECK(load[3] == doctest::Approx(0.7));
  CHECK(load[10] == doctest::Approx(-0.2));
  int nonzeros = 0;
  for (int i = 0; i < load.size(); ++i) nonzeros += load[i] != 0.0;
  CHECK(nonzeros == 2);

  MeasureData bad;
  bad.atoms = {{mesh->vertex_count(), 1.0}};
  CHECK_THROWS_AS(assemble_load_measure(*mesh, bad), Error);
}

TEST_CASE("atomic total variation is preserved under refinement") {
  // Node indices nest, so the same atoms exist on every finer level.
  MeasureData mu;
  mu.atoms = {{0, 0.5}, {5, -1.5}};
  double tv = 0.0;
  for (const auto& a : mu.atoms) tv += std::abs(a.weight);
  for (int l = 1; l <= 3; ++l) {
    Eigen::VectorXd load = assemble_load_measure(*build_icosphere(l), mu);
    CHECK(load.cwiseAbs().sum() == doctest::Approx(tv).epsilon(1e-15));
  }
}

TEST_CASE("nodal interpolation") {
  auto mesh = build_icosphere(0);
  FeFunction c = interpolate_nodal(mesh, [](const Vec3&) { return 4.25; });
  CHECK(c.coeffs.minCoeff() == 4.25);
  CHECK(c.coeffs.maxCoeff() == 4.25);
  FeFunction z = interpolate_nodal(mesh, [](const Vec3& x) { return x.z(); });
  for (int v = 0; v < mesh->vertex_count(); ++v) CHECK(z.coeffs[v] == mesh->vertices[v].z());
}

TEST_CASE("interpolation sup error on lifted smooth data has order 2") {
  auto field = [](const Vec3& x) { return std::exp(x.z()) + x.x() * x.y(); };
  std::vector<double> sup;
  for (int l = 2; l <= 5; ++l) {
    auto mesh = build_icosphere(l);
    FeFunction ih = interpolate_nodal(mesh, field);
    const QuadRule& rule = quad_degree4();
    double worst = 0.0;
    for (int t = 0; t < mesh->triangle_count(); ++t) {
      const auto& tri = mesh->triangles[t];
      for (int q = 0; q < rule.size(); ++q) {
        Vec3 x = bary_point(mesh->vertices[tri[0]], mesh->vertices[tri[1]],
                            mesh->vertices[tri[2]], rule.points[q]);
        double diff = std::abs(fe_value(ih, t, rule.points[q]) -
                               field(mesh->surface.closest_point(x)));
        worst = std::max(worst, diff);
      }
    }
    sup.push_back(worst);
  }
  for (size_t i = 0; i + 1 < sup.size(); ++i) {
    CHECK(std::log2(sup[i] / sup[i + 1]) == doctest::Approx(2.0).epsilon(0.1));
  }
}

TEST_CASE("fe gradient of an interpolated affine function is its tangential projection") {
  auto mesh = build_icosphere(2);
  Vec3 g(0.3, -1.1, 0.4);
  FeFunction f = interpolate_nodal(mesh, [&](const Vec3& x) { return g.dot(x) + 2.0; });
  for (int t : {0, 17, 100}) {
    const auto& tri = mesh->triangles[t];
    Vec3 n = triangle_unit_normal(mesh->vertices[tri[0]], mesh->vertices[tri[1]],
                                  mesh->vertices[tri[2]]);
    Vec3 expect = g - g.dot(n) * n;
    CHECK((fe_gradient(f, t) - expect).norm() <= 1e-12);
  }
}

TEST_CASE("geometric perturbation of the bilinear form for interpolants") {
  // |a(f,f) - a_h(If, If)| across levels: interpolation error dominates, EOC >= 1.
  // For f = x3 on the sphere: a(f,f) = int (1 - x3^2) + x3^2 = |S| = 4 pi.
  auto f = [](const Vec3& x) { return x.z(); };
  std::vector<double> defect;
  for (int l = 2; l <= 4; ++l) {
    auto mesh = build_icosphere(l);
    SparseSpdMatrix A = assemble_operator(*mesh);
    FeFunction fi = interpolate_nodal(mesh, f);
    defect.push_back(std::abs(fi.coeffs.dot(A.entries * fi.coeffs) - 4.0 * kPi));
  }
  for (size_t i = 0; i + 1 < defect.size(); ++i) {
    CHECK(std::log2(defect[i] / defect[i + 1]) >= 1.0);
  }
}

TEST_CASE("quadrature stability of lifted loads") {
  // Doubling the rule degree moves load entries very little.  Degree-4 data
  // composed with the sphere projection is not itself polynomial, so the
  // difference is the degree-4 rule's smooth-integrand error: measured
  // 6.2e-9 at level 3 and falling by ~2^7 per level.  The bound that matters
  // (and is asserted at every level) is that this sits orders of magnitude
  // below the h^2 geometric error of the method.
  auto f = [](const Vec3& x) { return std::pow(x.z(), 4) + x.x() * x.y(); };
  QuadRule high = quad_conical(5); // degree 9 >= double of 4
  LoadQuadrature q4, q9;
  q9.rule = &high;
  double prev = 0.0;
  for (int level : {3, 4, 5}) {
    auto mesh = build_icosphere(level);
    Eigen::VectorXd l4 = assemble_load_l2(*mesh, f, q4);
    Eigen::VectorXd l9 = assemble_load_l2(*mesh, f, q9);
    const double diff = (l4 - l9).cwiseAbs().maxCoeff();
    CHECK(diff <= 1e-8);
    CHECK(diff <= 1e-4 * mesh->h * mesh->h);
    if (level > 3) CHECK(diff <= 0.02 * prev); // at least 2^5 decay per level
    prev = diff;
  }
}
