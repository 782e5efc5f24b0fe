#pragma once

#include <vector>

#include "surface.hpp"

namespace lapbel {

// Real, fully normalized spherical harmonics (orthonormal in L2(S^2), no
// Condon-Shortley phase).  Y(l,0) = Pbar_l0, Y(l,+-m) = sqrt(2) Pbar_lm cos/sin(m phi).
// Index layout: l*l + l + m for coefficients.
struct HarmonicExpansion {
  int max_degree = 0;
  Eigen::VectorXd coeffs;

  static HarmonicExpansion zero(int L) {
    HarmonicExpansion e;
    e.max_degree = L;
    e.coeffs = Eigen::VectorXd::Zero((L + 1) * (L + 1));
    return e;
  }
  double& at(int l, int m) { return coeffs[l * l + l + m]; }
  double at(int l, int m) const { return coeffs[l * l + l + m]; }
};

double harmonic_eval(const HarmonicExpansion& e, const Vec3& x);
Vec3 harmonic_tangential_gradient(const HarmonicExpansion& e, const Vec3& x);

// A acts diagonally with eigenvalue l(l+1)+1 on degree-l harmonics.
HarmonicExpansion spectral_green(const HarmonicExpansion& data);
HarmonicExpansion spectral_apply(const HarmonicExpansion& u);

// L2(S^2) norm via orthonormality.
double parseval_norm(const HarmonicExpansion& e);

// Single basis function Y_lm at x on the unit sphere.
double harmonic_basis(int l, int m, const Vec3& x);

// Legendre polynomials P_0..P_N at t by the three-term recurrence.
void legendre_all(int N, double t, std::vector<double>& P);
// Derivatives via P'_{l+1} = P'_{l-1} + (2l+1) P_l (no 1/(1-t^2) division).
void legendre_all_deriv(int N, double t, std::vector<double>& P, std::vector<double>& dP);

// Zonal series u(x) = sum_l coeffs[l] P_l(x . axis): closed-form solutions of
// axisymmetric data problems and the truncated Green's function.
struct AxisymSeries {
  Vec3 axis = Vec3(0, 0, 1);
  std::vector<double> coeffs;
};

double axisym_eval(const AxisymSeries& s, const Vec3& x);
Vec3 axisym_tangential_gradient(const AxisymSeries& s, const Vec3& x);

// Truncated expansion of the Green's function of A = -Laplace + I on S^2 with
// a unit atom at `anchor`: sum_{l<=N} (2l+1) / (4 pi (l(l+1)+1)) P_l(x.anchor).
double legendre_green_function(const Vec3& anchor, int N, const Vec3& x);
AxisymSeries green_series(const Vec3& anchor, int N);

// Parseval value of ||G delta_anchor||_{L2(S^2)} for the truncated series.
double green_series_l2_norm(int N);

} // namespace lapbel
