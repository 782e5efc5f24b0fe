#include "quadrature.hpp"

#include <Eigen/Eigenvalues>
#include <cmath>

#include "mesh.hpp"

namespace lapbel {

namespace {

void push_perm3(QuadRule& r, double a, double w) {
  const double c = 1.0 - 2.0 * a;
  r.points.push_back({a, a, c});
  r.points.push_back({a, c, a});
  r.points.push_back({c, a, a});
  r.weights.insert(r.weights.end(), 3, w);
}

struct Rule1d {
  std::vector<double> nodes;   // on [0,1]
  std::vector<double> weights;
};

// Golub-Welsch: nodes are eigenvalues of the Jacobi tridiagonal, weights are
// mu0 times the squared first eigenvector components.
Rule1d golub_welsch(const std::vector<double>& diag, const std::vector<double>& offdiag,
                    double mu0, double node_scale, double node_shift, double weight_scale) {
  const int n = static_cast<int>(diag.size());
  Eigen::MatrixXd J = Eigen::MatrixXd::Zero(n, n);
  for (int i = 0; i < n; ++i) J(i, i) = diag[i];
  for (int i = 0; i + 1 < n; ++i) J(i, i + 1) = J(i + 1, i) = offdiag[i];
  Eigen::SelfAdjointEigenSolver<Eigen::MatrixXd> es(J);
  Rule1d r;
  for (int i = 0; i < n; ++i) {
    r.nodes.push_back(node_scale * es.eigenvalues()(i) + node_shift);
    double v0 = es.eigenvectors()(0, i);
    r.weights.push_back(weight_scale * mu0 * v0 * v0);
  }
  return r;
}

// Gauss-Legendre mapped to [0,1].
Rule1d gauss_legendre01(int n) {
  std::vector<double> diag(n, 0.0), off;
  for (int k = 1; k < n; ++k) off.push_back(std::sqrt(k * k / (4.0 * k * k - 1.0)));
  return golub_welsch(diag, off, 2.0, 0.5, 0.5, 0.5);
}

// Gauss-Jacobi for weight (1-t) on [0,1]; absorbs the conical Jacobian.
Rule1d gauss_jacobi01(int n) {
  std::vector<double> diag, off;
  for (int k = 0; k < n; ++k) diag.push_back(-1.0 / ((2.0 * k + 1.0) * (2.0 * k + 3.0)));
  for (int k = 1; k < n; ++k) off.push_back(std::sqrt(k * (k + 1.0)) / (2.0 * k + 1.0));
  return golub_welsch(diag, off, 2.0, 0.5, 0.5, 0.25);
}

} // namespace

const QuadRule& quad_degree4() {
  static const QuadRule rule = [] {
    QuadRule r;
    r.degree = 4;
    push_perm3(r, 0.445948490915965, 0.223381589678011);
    push_perm3(r, 0.091576213509771, 0.109951743655322);
    return r;
  }();
  return rule;
}

const QuadRule& quad_degree5() {
  static const QuadRule rule = [] {
    QuadRule r;
    r.degree = 5;
    const double s15 = std::sqrt(15.0);
    r.points.push_back({1.0 / 3.0, 1.0 / 3.0, 1.0 / 3.0});
    r.weights.push_back(9.0 / 40.0);
    push_perm3(r, (6.0 - s15) / 21.0, (155.0 - s15) / 1200.0);
    push_perm3(r, (6.0 + s15) / 21.0, (155.0 + s15) / 1200.0);
    return r;
  }();
  return rule;
}

GaussRule1d gauss_legendre(int n) {
  require(n >= 1 && n <= 64, errc::invalid_argument, "gauss_legendre order out of range");
  Rule1d r01 = gauss_legendre01(n);
  GaussRule1d r;
  for (int i = 0; i < n; ++i) {
    r.nodes.push_back(2.0 * r01.nodes[i] - 1.0);
    r.weights.push_back(2.0 * r01.weights[i]);
  }
  return r;
}

QuadRule quad_conical(int n) {
  require(n >= 1 && n <= 32, errc::invalid_argument, "quad_conical order out of range");
  Rule1d gj = gauss_jacobi01(n);
  Rule1d gl = gauss_legendre01(n);
  QuadRule r;
  r.degree = 2 * n - 1;
  for (int i = 0; i < n; ++i) {
    for (int j = 0; j < n; ++j) {
      const double x = gj.nodes[i];
      const double y = gl.nodes[j] * (1.0 - gj.nodes[i]);
      r.points.push_back({1.0 - x - y, x, y});
      r.weights.push_back(2.0 * gj.weights[i] * gl.weights[j]);
    }
  }
  return r;
}

namespace {

template <typename T, typename Eval, typename Norm>
T adaptive_rec(const Eval& eval, const Norm& norm,
               const std::array<std::array<double, 3>, 3>& bary,
               double rel_tol, double abs_tol, int depth) {
  T whole = eval(bary);
  std::array<double, 3> m01, m12, m20;
  for (int k = 0; k < 3; ++k) {
    m01[k] = 0.5 * (bary[0][k] + bary[1][k]);
    m12[k] = 0.5 * (bary[1][k] + bary[2][k]);
    m20[k] = 0.5 * (bary[2][k] + bary[0][k]);
  }
  const std::array<std::array<std::array<double, 3>, 3>, 4> kids = {{
      {bary[0], m01, m20}, {m01, bary[1], m12}, {m20, m12, bary[2]}, {m01, m12, m20}}};
  T sum = eval(kids[0]);
  for (int k = 1; k < 4; ++k) sum += eval(kids[k]);
  const double err = norm(whole - sum);
  if (depth <= 0 || err <= std::max(abs_tol, rel_tol * norm(sum))) return sum;
  T out = adaptive_rec<T>(eval, norm, kids[0], rel_tol, 0.25 * abs_tol, depth - 1);
  for (int k = 1; k < 4; ++k)
    out += adaptive_rec<T>(eval, norm, kids[k], rel_tol, 0.25 * abs_tol, depth - 1);
  return out;
}

} // namespace

double adaptive_triangle_integrate(const std::function<double(const Vec3&)>& f,
                                   const Vec3& a, const Vec3& b, const Vec3& c,
                                   double rel_tol, double abs_tol, int max_depth) {
  const QuadRule& rule = quad_degree4();
  auto eval = [&](const std::array<std::array<double, 3>, 3>& bary) {
    const Vec3 pa = bary_point(a, b, c, bary[0]);
    const Vec3 pb = bary_point(a, b, c, bary[1]);
    const Vec3 pc = bary_point(a, b, c, bary[2]);
    const double area = triangle_area(pa, pb, pc);
    double s = 0.0;
    for (int q = 0; q < rule.size(); ++q) {
      s += rule.weights[q] * f(bary_point(pa, pb, pc, rule.points[q]));
    }
    return area * s;
  };
  auto norm = [](double v) { return std::abs(v); };
  return adaptive_rec<double>(eval, norm, {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}, rel_tol,
                              abs_tol, max_depth);
}

Eigen::Vector3d adaptive_triangle_integrate3(
    const std::function<Eigen::Vector3d(const Vec3&, const std::array<double, 3>&)>& f,
    const Vec3& a, const Vec3& b, const Vec3& c, double rel_tol, double abs_tol,
    int max_depth) {
  const QuadRule& rule = quad_degree4();
  auto eval = [&](const std::array<std::array<double, 3>, 3>& bary) {
    const Vec3 pa = bary_point(a, b, c, bary[0]);
    const Vec3 pb = bary_point(a, b, c, bary[1]);
    const Vec3 pc = bary_point(a, b, c, bary[2]);
    const double area = triangle_area(pa, pb, pc);
    Eigen::Vector3d s = Eigen::Vector3d::Zero();
    for (int q = 0; q < rule.size(); ++q) {
      // Root-triangle barycentric coordinates of the quadrature point.
      std::array<double, 3> root;
      for (int k = 0; k < 3; ++k) {
        root[k] = rule.points[q][0] * bary[0][k] + rule.points[q][1] * bary[1][k] +
                  rule.points[q][2] * bary[2][k];
      }
      s += rule.weights[q] * f(bary_point(pa, pb, pc, rule.points[q]), root);
    }
    return Eigen::Vector3d(area * s);
  };
  auto norm = [](const Eigen::Vector3d& v) { return v.cwiseAbs().sum(); };
  return adaptive_rec<Eigen::Vector3d>(eval, norm, {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}},
                                       rel_tol, abs_tol, max_depth);
}

} // namespace lapbel
