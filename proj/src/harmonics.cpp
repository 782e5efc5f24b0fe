#include "harmonics.hpp"

#include <cmath>
#include <numbers>

namespace lapbel {

namespace {

constexpr double kPi = std::numbers::pi;

// Pbar_mm, then upward in l:
//   Pbar_00 = sqrt(1/4pi)
//   Pbar_mm = sqrt((2m+1)/(2m)) sin(theta) Pbar_{m-1,m-1}
//   Pbar_{m+1,m} = sqrt(2m+3) t Pbar_mm
//   Pbar_lm = sqrt((4l^2-1)/(l^2-m^2)) (t Pbar_{l-1,m}
//             - sqrt(((l-1)^2-m^2)/(4(l-1)^2-1)) Pbar_{l-2,m})
// Values are fully normalized: int_{S^2} (Pbar_l0)^2 = 1 etc.
void pbar_block(int m, int L, double t, double sin_theta, std::vector<double>& out) {
  out.assign(L - m + 1, 0.0);
  double pmm = std::sqrt(1.0 / (4.0 * kPi));
  for (int k = 1; k <= m; ++k) pmm *= std::sqrt((2.0 * k + 1.0) / (2.0 * k)) * sin_theta;
  out[0] = pmm;
  if (m + 1 <= L) out[1] = std::sqrt(2.0 * m + 3.0) * t * pmm;
  for (int l = m + 2; l <= L; ++l) {
    const double a = std::sqrt((4.0 * l * l - 1.0) / (double(l) * l - double(m) * m));
    const double b =
        std::sqrt((double(l - 1) * (l - 1) - double(m) * m) / (4.0 * double(l - 1) * (l - 1) - 1.0));
    out[l - m] = a * (t * out[l - 1 - m] - b * out[l - 2 - m]);
  }
}

struct SphericalFrame {
  double t;          // cos(theta) = z
  double sin_theta;  // >= 0
  double phi;
  Vec3 e_theta, e_phi;
};

SphericalFrame frame_at(const Vec3& x_in) {
  Vec3 x = x_in / x_in.norm();
  SphericalFrame f;
  f.t = std::clamp(x.z(), -1.0, 1.0);
  f.sin_theta = std::hypot(x.x(), x.y());
  f.phi = (f.sin_theta > 0.0) ? std::atan2(x.y(), x.x()) : 0.0;
  const double cphi = (f.sin_theta > 0.0) ? x.x() / f.sin_theta : 1.0;
  const double sphi = (f.sin_theta > 0.0) ? x.y() / f.sin_theta : 0.0;
  f.e_theta = Vec3(f.t * cphi, f.t * sphi, -f.sin_theta);
  f.e_phi = Vec3(-sphi, cphi, 0.0);
  return f;
}

double eigenvalue(int l) { return double(l) * (l + 1) + 1.0; }

} // namespace

double harmonic_eval(const HarmonicExpansion& e, const Vec3& x) {
  const SphericalFrame f = frame_at(x);
  const int L = e.max_degree;
  std::vector<double> pb;
  double val = 0.0;
  const double sqrt2 = std::sqrt(2.0);
  for (int m = 0; m <= L; ++m) {
    pbar_block(m, L, f.t, f.sin_theta, pb);
    const double cs = std::cos(m * f.phi), sn = std::sin(m * f.phi);
    for (int l = m; l <= L; ++l) {
      if (m == 0) {
        val += e.at(l, 0) * pb[l - m];
      } else {
        val += sqrt2 * pb[l - m] * (e.at(l, m) * cs + e.at(l, -m) * sn);
      }
    }
  }
  return val;
}

Vec3 harmonic_tangential_gradient(const HarmonicExpansion& e, const Vec3& x) {
  const SphericalFrame f = frame_at(x);
  const int L = e.max_degree;
  // Shipped evaluation points stay clear of the poles; the clamp only guards
  // against harmless roundoff at machine scale.
  const double s = std::max(f.sin_theta, 1e-8);
  std::vector<double> pb;
  double g_theta = 0.0, g_phi = 0.0;
  const double sqrt2 = std::sqrt(2.0);
  for (int m = 0; m <= L; ++m) {
    pbar_block(m, L, f.t, f.sin_theta, pb);
    const double cs = std::cos(m * f.phi), sn = std::sin(m * f.phi);
    for (int l = m; l <= L; ++l) {
      // d Pbar_lm / d theta = (l t Pbar_lm - e_lm Pbar_{l-1,m}) / sin theta
      const double elm =
          (l > m) ? std::sqrt((2.0 * l + 1.0) * (double(l) * l - double(m) * m) / (2.0 * l - 1.0))
                  : 0.0;
      const double dtheta =
          (l * f.t * pb[l - m] - (l > m ? elm * pb[l - 1 - m] : 0.0)) / s;
      if (m == 0) {
        g_theta += e.at(l, 0) * dtheta;
      } else {
        g_theta += sqrt2 * dtheta * (e.at(l, m) * cs + e.at(l, -m) * sn);
        g_phi += sqrt2 * (m * pb[l - m] / s) * (-e.at(l, m) * sn + e.at(l, -m) * cs);
      }
    }
  }
  return g_theta * f.e_theta + g_phi * f.e_phi;
}

HarmonicExpansion spectral_green(const HarmonicExpansion& data) {
  HarmonicExpansion out = data;
  for (int l = 0; l <= out.max_degree; ++l)
    for (int m = -l; m <= l; ++m) out.at(l, m) /= eigenvalue(l);
  return out;
}

HarmonicExpansion spectral_apply(const HarmonicExpansion& u) {
  HarmonicExpansion out = u;
  for (int l = 0; l <= out.max_degree; ++l)
    for (int m = -l; m <= l; ++m) out.at(l, m) *= eigenvalue(l);
  return out;
}

double parseval_norm(const HarmonicExpansion& e) { return e.coeffs.norm(); }

double harmonic_basis(int l, int m, const Vec3& x) {
  require(l >= 0 && std::abs(m) <= l, errc::invalid_argument, "harmonic_basis: bad (l,m)");
  HarmonicExpansion e = HarmonicExpansion::zero(l);
  e.at(l, m) = 1.0;
  return harmonic_eval(e, x);
}

void legendre_all(int N, double t, std::vector<double>& P) {
  P.assign(N + 1, 0.0);
  P[0] = 1.0;
  if (N >= 1) P[1] = t;
  for (int l = 1; l < N; ++l) {
    P[l + 1] = ((2.0 * l + 1.0) * t * P[l] - l * P[l - 1]) / (l + 1.0);
  }
}

void legendre_all_deriv(int N, double t, std::vector<double>& P, std::vector<double>& dP) {
  legendre_all(N, t, P);
  dP.assign(N + 1, 0.0);
  if (N >= 1) dP[1] = 1.0;
  for (int l = 1; l < N; ++l) dP[l + 1] = dP[l - 1] + (2.0 * l + 1.0) * P[l];
}

double axisym_eval(const AxisymSeries& s, const Vec3& x) {
  const double t = std::clamp(x.dot(s.axis) / x.norm(), -1.0, 1.0);
  // Inline three-term recurrence; this is the hot loop of series references.
  double pm1 = 1.0, p = t, val = 0.0;
  const int N = static_cast<int>(s.coeffs.size()) - 1;
  if (N >= 0) val += s.coeffs[0] * pm1;
  if (N >= 1) val += s.coeffs[1] * p;
  for (int l = 1; l < N; ++l) {
    const double pnext = ((2.0 * l + 1.0) * t * p - l * pm1) / (l + 1.0);
    pm1 = p;
    p = pnext;
    val += s.coeffs[l + 1] * p;
  }
  return val;
}

Vec3 axisym_tangential_gradient(const AxisymSeries& s, const Vec3& x_in) {
  const Vec3 x = x_in / x_in.norm();
  const double t = std::clamp(x.dot(s.axis), -1.0, 1.0);
  const int N = static_cast<int>(s.coeffs.size()) - 1;
  // sum c_l P'_l(t) via P'_{l+1} = P'_{l-1} + (2l+1) P_l.
  double deriv = 0.0;
  double pm1 = 1.0, p = t, dpm1 = 0.0, dp = 1.0;
  if (N >= 1) deriv += s.coeffs[1] * dp;
  for (int l = 1; l < N; ++l) {
    const double pnext = ((2.0 * l + 1.0) * t * p - l * pm1) / (l + 1.0);
    const double dpnext = dpm1 + (2.0 * l + 1.0) * p;
    pm1 = p;
    p = pnext;
    dpm1 = dp;
    dp = dpnext;
    deriv += s.coeffs[l + 1] * dp;
  }
  // grad_S (x . a) = a - (x . a) x on the unit sphere.
  return deriv * (s.axis - t * x);
}

double legendre_green_function(const Vec3& anchor, int N, const Vec3& x) {
  require(N >= 100, errc::invalid_argument, "legendre_green_function: N >= 100 required");
  const double t = x.dot(anchor) / (x.norm() * anchor.norm());
  require(t <= 1.0 - 1e-12, errc::evaluation_at_singularity,
          "legendre_green_function: x coincides with the anchor");
  std::vector<double> P;
  legendre_all(N, t, P);
  double val = 0.0;
  for (int l = 0; l <= N; ++l) val += (2.0 * l + 1.0) / (4.0 * kPi * eigenvalue(l)) * P[l];
  return val;
}

AxisymSeries green_series(const Vec3& anchor, int N) {
  AxisymSeries s;
  s.axis = anchor / anchor.norm();
  s.coeffs.resize(N + 1);
  for (int l = 0; l <= N; ++l) s.coeffs[l] = (2.0 * l + 1.0) / (4.0 * kPi * eigenvalue(l));
  return s;
}

double green_series_l2_norm(int N) {
  // Addition theorem: ||u||^2 = sum_l (2l+1) / (4 pi lambda_l^2).
  double sum = 0.0;
  for (int l = 0; l <= N; ++l) {
    sum += (2.0 * l + 1.0) / (4.0 * kPi * eigenvalue(l) * eigenvalue(l));
  }
  return std::sqrt(sum);
}

} // namespace lapbel
