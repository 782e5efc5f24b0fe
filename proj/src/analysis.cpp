#include "analysis.hpp"

#include <Eigen/Dense>
#include <cmath>

namespace lapbel {

namespace {

// Geodesic distance on the unit sphere; used only for singularity caps.
double geodesic(const Vec3& x, const Vec3& y) {
  return std::acos(std::clamp(x.dot(y) / (x.norm() * y.norm()), -1.0, 1.0));
}

struct ErrorAccum {
  double sq = 0.0;
  double worst = 0.0;
};

} // namespace

double lifted_error(const FeFunction& fh, const ReferenceSolution& ref, ErrNorm norm,
                    const ErrorQuadrature& quad) {
  const SurfaceMesh& mesh = *fh.mesh;
  const Surface& surf = mesh.surface;
  const bool need_grad = norm == ErrNorm::H1;
  require(!need_grad || static_cast<bool>(ref.gradient), errc::incompatible_reference,
          "H1 error needs a reference gradient");
  require(static_cast<bool>(ref.value), errc::incompatible_reference, "reference not evaluable");

  const double cap = ref.singularity ? 2.0 * mesh.h : 0.0;
  const QuadRule& rule = *quad.rule;
  ErrorAccum acc;

  for (int t = 0; t < mesh.triangle_count(); ++t) {
    const auto& tri = mesh.triangles[t];
    const Vec3 a = mesh.vertices[tri[0]], b = mesh.vertices[tri[1]], c = mesh.vertices[tri[2]];
    const Vec3 plane_n = triangle_unit_normal(a, b, c);
    const Vec3 fg = need_grad ? fe_gradient(fh, t) : Vec3::Zero();

    int depth = 0;
    if (quad.refine_depth > 0 && ref.singularity) {
      const double d = std::min({(a - *ref.singularity).norm(), (b - *ref.singularity).norm(),
                                 (c - *ref.singularity).norm()});
      if (d <= quad.refine_radius_factor * mesh.h) depth = quad.refine_depth;
    }

    // Recursive uniform refinement toward the singular point; root-triangle
    // barycentric coordinates track the (linear) discrete function exactly.
    auto integrate = [&](auto&& self, const std::array<std::array<double, 3>, 3>& bary,
                         int lvl) -> void {
      if (lvl > 0) {
        std::array<double, 3> m01, m12, m20;
        for (int k = 0; k < 3; ++k) {
          m01[k] = 0.5 * (bary[0][k] + bary[1][k]);
          m12[k] = 0.5 * (bary[1][k] + bary[2][k]);
          m20[k] = 0.5 * (bary[2][k] + bary[0][k]);
        }
        self(self, {bary[0], m01, m20}, lvl - 1);
        self(self, {m01, bary[1], m12}, lvl - 1);
        self(self, {m20, m12, bary[2]}, lvl - 1);
        self(self, {m01, m12, m20}, lvl - 1);
        return;
      }
      const Vec3 pa = bary_point(a, b, c, bary[0]);
      const Vec3 pb = bary_point(a, b, c, bary[1]);
      const Vec3 pc = bary_point(a, b, c, bary[2]);
      const double area = triangle_area(pa, pb, pc);
      for (int q = 0; q < rule.size(); ++q) {
        std::array<double, 3> root;
        for (int k = 0; k < 3; ++k) {
          root[k] = rule.points[q][0] * bary[0][k] + rule.points[q][1] * bary[1][k] +
                    rule.points[q][2] * bary[2][k];
        }
        const Vec3 x = bary_point(pa, pb, pc, rule.points[q]);
        const Vec3 y = surf.closest_point(x);
        if (norm == ErrNorm::H1) {
          Vec3 g = ref.gradient(y);
          g -= g.dot(plane_n) * plane_n;
          acc.sq += area * rule.weights[q] * (g - fg).squaredNorm();
        } else {
          const double diff = ref.value(y) - fe_value(fh, t, root);
          if (norm == ErrNorm::Linf) {
            if (!ref.singularity || geodesic(y, *ref.singularity) >= cap) {
              acc.worst = std::max(acc.worst, std::abs(diff));
            }
          } else {
            acc.sq += area * rule.weights[q] * diff * diff;
          }
        }
      }
    };
    integrate(integrate, {{{1, 0, 0}, {0, 1, 0}, {0, 0, 1}}}, depth);
  }

  if (norm == ErrNorm::Linf) {
    for (int v = 0; v < mesh.vertex_count(); ++v) {
      const Vec3& x = mesh.vertices[v];
      if (ref.singularity && geodesic(x, *ref.singularity) < cap) continue;
      acc.worst = std::max(acc.worst, std::abs(ref.value(surf.closest_point(x)) - fh.coeffs[v]));
    }
    return acc.worst;
  }
  return std::sqrt(acc.sq);
}

std::vector<std::optional<double>> eoc(const std::vector<double>& h,
                                       const std::vector<double>& err) {
  require(h.size() == err.size(), errc::invalid_argument, "eoc: length mismatch");
  require(h.size() >= 2, errc::insufficient_data, "eoc: need at least two records");
  std::vector<std::optional<double>> out;
  for (size_t i = 0; i + 1 < h.size(); ++i) {
    require(h[i + 1] < h[i], errc::invalid_argument, "eoc: h must decrease");
    if (err[i] == 0.0 || err[i + 1] == 0.0) {
      out.push_back(std::nullopt); // saturated: exact zero error
    } else {
      out.push_back(std::log(err[i] / err[i + 1]) / std::log(h[i] / h[i + 1]));
    }
  }
  return out;
}

std::optional<double> min_eoc(const std::vector<std::optional<double>>& eocs) {
  std::optional<double> m;
  for (const auto& e : eocs) {
    if (e && (!m || *e < *m)) m = e;
  }
  return m;
}

RateFit fit_rate_with_log(const std::vector<double>& h, const std::vector<double>& err,
                          double log_power) {
  const int n = static_cast<int>(h.size());
  require(n >= 4 && err.size() == h.size(), errc::insufficient_data,
          "fit_rate_with_log: need at least 4 records");
  Eigen::MatrixXd X(n, 2);
  Eigen::VectorXd rhs(n);
  for (int i = 0; i < n; ++i) {
    require(err[i] > 0.0 && h[i] > 0.0, errc::insufficient_data,
            "fit_rate_with_log: nonpositive entry");
    X(i, 0) = 1.0;
    X(i, 1) = std::log(h[i]);
    rhs[i] = std::log(err[i]) - log_power * std::log(std::abs(std::log(h[i])));
  }
  Eigen::Vector2d beta = (X.transpose() * X).ldlt().solve(X.transpose() * rhs);
  RateFit fit;
  fit.order = beta[1];
  fit.log_power = log_power;
  fit.residual = std::sqrt((X * beta - rhs).squaredNorm() / n);
  return fit;
}

} // namespace lapbel
