#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <random>

#include "harmonics.hpp"
#include "mesh.hpp"
#include "oracle.hpp"
#include "quadrature.hpp"

using namespace lapbel;

namespace {

const double kPi = std::acos(-1.0);

std::vector<Vec3> sphere_samples() {
  std::vector<Vec3> pts;
  std::mt19937 rng(7);
  std::normal_distribution<double> gauss;
  for (int i = 0; i < 24; ++i) {
    Vec3 v(gauss(rng), gauss(rng), gauss(rng));
    pts.push_back(v.normalized());
  }
  pts.push_back(Vec3(0, 0, 1));
  pts.push_back(Vec3(0, 0, -1));
  pts.push_back(Vec3(1, 0, 0));
  return pts;
}

// Central difference of f along a great circle through x with direction d.
Vec3 sphere_fd_gradient(const std::function<double(const Vec3&)>& f, const Vec3& x) {
  Vec3 any = std::abs(x[0]) < 0.9 ? Vec3(1, 0, 0) : Vec3(0, 1, 0);
  Vec3 e1 = (any - any.dot(x) * x).normalized();
  Vec3 e2 = x.cross(e1);
  const double eps = 1e-5;
  auto along = [&](const Vec3& d) {
    return (f((x + eps * d).normalized()) - f((x - eps * d).normalized())) / (2.0 * eps);
  };
  return along(e1) * e1 + along(e2) * e2;
}

} // namespace

TEST_CASE("low-degree harmonics match their closed forms") {
  const double c00 = std::sqrt(1.0 / (4.0 * kPi));
  const double c1 = std::sqrt(3.0 / (4.0 * kPi));
  const double c20 = std::sqrt(5.0 / (16.0 * kPi));
  const double c21 = std::sqrt(15.0 / (4.0 * kPi));
  const double c22 = std::sqrt(15.0 / (16.0 * kPi));
  for (const Vec3& x : sphere_samples()) {
    CHECK(harmonic_basis(0, 0, x) == doctest::Approx(c00).epsilon(1e-13));
    CHECK(harmonic_basis(1, 0, x) == doctest::Approx(c1 * x[2]).epsilon(1e-12));
    CHECK(harmonic_basis(1, 1, x) == doctest::Approx(c1 * x[0]).epsilon(1e-12));
    CHECK(harmonic_basis(1, -1, x) == doctest::Approx(c1 * x[1]).epsilon(1e-12));
    CHECK(harmonic_basis(2, 0, x) ==
          doctest::Approx(c20 * (3.0 * x[2] * x[2] - 1.0)).epsilon(1e-12));
    CHECK(harmonic_basis(2, 1, x) == doctest::Approx(c21 * x[0] * x[2]).epsilon(1e-12));
    CHECK(harmonic_basis(2, 2, x) ==
          doctest::Approx(c22 * (x[0] * x[0] - x[1] * x[1])).epsilon(1e-12));
  }
}

TEST_CASE("harmonics are orthonormal under product quadrature") {
  // Gauss-Legendre in t, trapezoid in phi (exact for the Fourier modes here).
  const int L = 4;
  const int nphi = 32;
  GaussRule1d gl = gauss_legendre(16);
  const int dim = (L + 1) * (L + 1);
  Eigen::MatrixXd gram = Eigen::MatrixXd::Zero(dim, dim);
  for (size_t it = 0; it < gl.nodes.size(); ++it) {
    const double t = gl.nodes[it];
    const double s = std::sqrt(1.0 - t * t);
    for (int ip = 0; ip < nphi; ++ip) {
      const double phi = 2.0 * kPi * ip / nphi;
      const Vec3 x(s * std::cos(phi), s * std::sin(phi), t);
      Eigen::VectorXd vals(dim);
      for (int l = 0; l <= L; ++l) {
        for (int m = -l; m <= l; ++m) vals[l * l + l + m] = harmonic_basis(l, m, x);
      }
      gram += (gl.weights[it] * 2.0 * kPi / nphi) * vals * vals.transpose();
    }
  }
  CHECK((gram - Eigen::MatrixXd::Identity(dim, dim)).cwiseAbs().maxCoeff() < 1e-12);
}

TEST_CASE("spectral Green operator divides by l(l+1)+1") {
  for (int l = 0; l <= 2; ++l) {
    const double lambda[] = {1.0, 3.0, 7.0};
    for (int m = -l; m <= l; ++m) {
      HarmonicExpansion e = HarmonicExpansion::zero(2);
      e.at(l, m) = 1.0;
      HarmonicExpansion g = spectral_green(e);
      for (int ll = 0; ll <= 2; ++ll) {
        for (int mm = -ll; mm <= ll; ++mm) {
          const double want = (ll == l && mm == m) ? 1.0 / lambda[l] : 0.0;
          CHECK(g.at(ll, mm) == doctest::Approx(want).epsilon(1e-15));
        }
      }
    }
  }
}

TEST_CASE("spectral_green is the exact inverse of spectral_apply") {
  std::mt19937 rng(11);
  std::uniform_real_distribution<double> unif(-1.0, 1.0);
  HarmonicExpansion e = HarmonicExpansion::zero(8);
  for (int i = 0; i < e.coeffs.size(); ++i) e.coeffs[i] = unif(rng);
  HarmonicExpansion back = spectral_apply(spectral_green(e));
  CHECK((back.coeffs - e.coeffs).cwiseAbs().maxCoeff() < 1e-15);
  CHECK(parseval_norm(e) == doctest::Approx(e.coeffs.norm()).epsilon(1e-15));
}

TEST_CASE("harmonic gradient agrees with finite differences") {
  HarmonicExpansion e = HarmonicExpansion::zero(5);
  e.at(0, 0) = 0.3;
  e.at(1, 1) = -1.1;
  e.at(2, 0) = 0.7;
  e.at(3, -2) = 0.4;
  e.at(5, 4) = -0.25;
  auto f = [&](const Vec3& x) { return harmonic_eval(e, x); };
  for (const Vec3& x : sphere_samples()) {
    if (std::abs(x[2]) > 0.999) continue; // FD frame degenerates at the poles
    Vec3 g = harmonic_tangential_gradient(e, x);
    Vec3 gfd = sphere_fd_gradient(f, x);
    CHECK((g - gfd).norm() < 1e-6 * std::max(1.0, gfd.norm()));
    CHECK(std::abs(g.dot(x)) < 1e-12); // tangential
  }
}

TEST_CASE("Legendre recurrence is stable up to l = 2000") {
  std::vector<double> P;
  for (double t : {-1.0, -0.99, -0.6180339887, 0.0, 0.3, 0.77, 0.99, 1.0}) {
    legendre_all(2000, t, P);
    REQUIRE(P.size() == 2001);
    for (double v : P) CHECK(std::abs(v) <= 1.0 + 1e-12);
    CHECK(P[0] == 1.0);
    CHECK(P[1] == t);
  }
  legendre_all(2000, 1.0, P);
  for (double v : P) CHECK(v == 1.0);
  legendre_all(2000, -1.0, P);
  for (int l = 0; l <= 2000; ++l) CHECK(P[l] == (l % 2 == 0 ? 1.0 : -1.0));
}

TEST_CASE("Legendre derivatives match closed forms for small degree") {
  std::vector<double> P, dP;
  for (double t : {-0.8, -0.2, 0.0, 0.45, 0.9}) {
    legendre_all_deriv(4, t, P, dP);
    CHECK(P[2] == doctest::Approx(0.5 * (3 * t * t - 1)).epsilon(1e-14));
    CHECK(P[3] == doctest::Approx(0.5 * (5 * t * t * t - 3 * t)).epsilon(1e-14));
    CHECK(dP[1] == doctest::Approx(1.0).epsilon(1e-14));
    CHECK(dP[2] == doctest::Approx(3.0 * t).epsilon(1e-14));
    CHECK(dP[3] == doctest::Approx(7.5 * t * t - 1.5).epsilon(1e-14));
  }
}

TEST_CASE("axisymmetric series evaluation and gradient") {
  AxisymSeries s;
  s.axis = Vec3(0.2, -0.3, 0.9).normalized();
  s.coeffs = {0.5, -1.2, 0.8, 0.1};
  auto f = [&](const Vec3& x) { return axisym_eval(s, x); };
  for (const Vec3& x : sphere_samples()) {
    const double t = x.dot(s.axis);
    const double want = s.coeffs[0] + s.coeffs[1] * t + s.coeffs[2] * 0.5 * (3 * t * t - 1) +
                        s.coeffs[3] * 0.5 * (5 * t * t * t - 3 * t);
    CHECK(f(x) == doctest::Approx(want).epsilon(1e-13));
    if (std::abs(t) > 0.999 || std::abs(x[2]) > 0.999) continue;
    Vec3 g = axisym_tangential_gradient(s, x);
    Vec3 gfd = sphere_fd_gradient(f, x);
    CHECK((g - gfd).norm() < 1e-6 * std::max(1.0, gfd.norm()));
    CHECK(std::abs(g.dot(x)) < 1e-12);
  }
}

TEST_CASE("Green's function: symmetry, singularity guard, preconditions") {
  const Vec3 a = Vec3(0.1, 0.2, 0.97).normalized();
  const Vec3 x = Vec3(-0.5, 0.7, 0.1).normalized();
  CHECK(legendre_green_function(a, 500, x) == legendre_green_function(x, 500, a));
  CHECK_THROWS_AS((void)legendre_green_function(a, 500, a), Error);
  CHECK_THROWS_AS((void)legendre_green_function(a, 50, x), Error);
  // Just outside the exclusion window: evaluable and finite.
  const double theta = 3e-6;
  Vec3 near = (std::cos(theta) * a + std::sin(theta) * Vec3(1, 0, 0).cross(a).normalized());
  double v = legendre_green_function(a, 2000, near.normalized());
  CHECK(std::isfinite(v));
}

TEST_CASE("Green's function integrates to one over the sphere") {
  // Axisymmetric reduction: int_S u = 2 pi int_{-1}^{1} u(t) dt.  A Gauss rule
  // of degree > N kills every l >= 1 term exactly, leaving the l = 0 mass.
  // In theta the P_l(cos theta) oscillation is uniform at wavelength 2pi/N,
  // so composite Gauss panels a few wavelengths wide converge fast.
  const int N = 2000;
  AxisymSeries s = green_series(Vec3(0, 0, 1), N);
  GaussRule1d gl = gauss_legendre(32);
  const int panels = 200;
  double integral = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = kPi * p / panels, hi = kPi * (p + 1) / panels;
    for (size_t i = 0; i < gl.nodes.size(); ++i) {
      const double th = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gl.nodes[i];
      integral += kPi * (hi - lo) * gl.weights[i] * std::sin(th) *
                  axisym_eval(s, Vec3(std::sin(th), 0, std::cos(th)));
    }
  }
  CHECK(integral == doctest::Approx(1.0).epsilon(1e-9));
}

TEST_CASE("Parseval norm of the Green atom agrees with quadrature at N = 2000") {
  const int N = 2000;
  AxisymSeries s = green_series(Vec3(0, 0, 1), N);
  // ||u||^2 = 2 pi int u(cos theta)^2 sin theta d theta, composite Gauss in
  // theta with panels fine enough for the degree-2N oscillation near t = 1.
  GaussRule1d gl = gauss_legendre(32);
  const int panels = 160;
  double sq = 0.0;
  for (int p = 0; p < panels; ++p) {
    const double lo = kPi * p / panels, hi = kPi * (p + 1) / panels;
    for (size_t i = 0; i < gl.nodes.size(); ++i) {
      const double th = 0.5 * (lo + hi) + 0.5 * (hi - lo) * gl.nodes[i];
      const double u = axisym_eval(s, Vec3(std::sin(th), 0, std::cos(th)));
      sq += kPi * (hi - lo) * gl.weights[i] * u * u * std::sin(th);
    }
  }
  const double quad_norm = std::sqrt(sq);
  const double series_norm = green_series_l2_norm(N);
  CHECK(std::abs(quad_norm - series_norm) / series_norm < 1e-4);
}

TEST_CASE("reference wrappers expose values, gradients and singularities") {
  HarmonicExpansion e = HarmonicExpansion::zero(2);
  e.at(2, 0) = 1.0;
  ReferenceSolution spec = make_spectral_reference(e, "Y20");
  const Vec3 x = Vec3(0.3, -0.4, 0.87).normalized();
  CHECK(spec.value(x) == doctest::Approx(harmonic_basis(2, 0, x)).epsilon(1e-14));
  CHECK(static_cast<bool>(spec.gradient));
  CHECK(!spec.singularity);
  CHECK(spec.fine_level == -1);

  AxisymSeries s = green_series(Vec3(0, 0, 1), 400);
  ReferenceSolution atom = make_axisym_reference(s, "green-atom", Vec3(0, 0, 1));
  REQUIRE(atom.singularity.has_value());
  CHECK((*atom.singularity - Vec3(0, 0, 1)).norm() == 0.0);
  CHECK(atom.value(x) == doctest::Approx(axisym_eval(s, x)).epsilon(1e-14));
}

TEST_CASE("fine-mesh reference reproduces the function it wraps") {
  MeshPtr fine = build_mesh(Surface::unit_sphere(), 4);
  HarmonicExpansion e = HarmonicExpansion::zero(3);
  e.at(1, 0) = 1.0;
  e.at(3, 2) = 0.5;
  FeFunction uh = interpolate_nodal(fine, [&](const Vec3& x) { return harmonic_eval(e, x); });
  ReferenceSolution ref = make_fine_mesh_reference(uh, "interp");
  CHECK(ref.fine_level == 4);
  // At the fine mesh's own vertices the locator must reproduce coefficients.
  for (int v = 0; v < fine->vertex_count(); v += 97) {
    CHECK(ref.value(fine->vertices[v]) == doctest::Approx(uh.coeffs[v]).epsilon(1e-10));
  }
  // Off-vertex: piecewise linear interpolant of a smooth function, O(h^2).
  std::mt19937 rng(3);
  std::normal_distribution<double> gauss;
  for (int i = 0; i < 40; ++i) {
    Vec3 x = Vec3(gauss(rng), gauss(rng), gauss(rng)).normalized();
    CHECK(std::abs(ref.value(x) - harmonic_eval(e, x)) < 5e-3);
    Vec3 g = ref.gradient(x);
    CHECK((g - harmonic_tangential_gradient(e, x)).norm() < 0.2);
  }
}
