#include "locator.hpp"

#include <algorithm>
#include <cmath>

namespace lapbel {

namespace {

// Line-triangle intersection (Moeller-Trumbore without the ray restriction:
// s may be negative).  Returns false for lines parallel to the triangle.
bool line_hits_triangle(const Vec3& origin, const Vec3& dir, const Vec3& a, const Vec3& b,
                        const Vec3& c, double& s, double& u, double& v) {
  const Vec3 e1 = b - a, e2 = c - a;
  const Vec3 pvec = dir.cross(e2);
  const double det = e1.dot(pvec);
  if (std::abs(det) < 1e-14) return false;
  const double inv = 1.0 / det;
  const Vec3 tvec = origin - a;
  u = tvec.dot(pvec) * inv;
  if (u < -1e-10 || u > 1.0 + 1e-10) return false;
  const Vec3 qvec = tvec.cross(e1);
  v = dir.dot(qvec) * inv;
  if (v < -1e-10 || u + v > 1.0 + 1e-10) return false;
  s = e2.dot(qvec) * inv;
  return true;
}

std::array<double, 3> clamp_bary(double u, double v) {
  double w0 = 1.0 - u - v, w1 = u, w2 = v;
  w0 = std::max(w0, 0.0);
  w1 = std::max(w1, 0.0);
  w2 = std::max(w2, 0.0);
  const double s = w0 + w1 + w2;
  return {w0 / s, w1 / s, w2 / s};
}

// Closest point on a triangle, as barycentric weights (fallback path).
std::array<double, 3> closest_bary(const Vec3& p, const Vec3& a, const Vec3& b, const Vec3& c,
                                   double& dist2) {
  const Vec3 ab = b - a, ac = c - a, ap = p - a;
  const double d1 = ab.dot(ap), d2 = ac.dot(ap);
  const double d3 = ab.dot(ab), d4 = ab.dot(ac), d5 = ac.dot(ac);
  const double det = d3 * d5 - d4 * d4;
  double u = (d5 * d1 - d4 * d2) / det;
  double v = (d3 * d2 - d4 * d1) / det;
  auto w = clamp_bary(u, v);
  const Vec3 q = w[0] * a + w[1] * b + w[2] * c;
  dist2 = (p - q).squaredNorm();
  return w;
}

} // namespace

MeshLocator::MeshLocator(MeshPtr mesh) : mesh_(std::move(mesh)) {
  double max_diam = 0.0;
  Vec3 lo = mesh_->vertices[0], hi = mesh_->vertices[0];
  for (const Vec3& v : mesh_->vertices) {
    lo = lo.cwiseMin(v);
    hi = hi.cwiseMax(v);
  }
  for (const auto& t : mesh_->triangles) {
    const Vec3 &a = mesh_->vertices[t[0]], &b = mesh_->vertices[t[1]], &c = mesh_->vertices[t[2]];
    max_diam = std::max({max_diam, (a - b).norm(), (b - c).norm(), (c - a).norm()});
  }
  cell_ = std::max(1.5 * max_diam, 1e-6);
  lo_ = lo - Vec3::Constant(2.0 * cell_);
  const Vec3 span = hi + Vec3::Constant(2.0 * cell_) - lo_;
  nx_ = std::max(1, static_cast<int>(span.x() / cell_) + 1);
  ny_ = std::max(1, static_cast<int>(span.y() / cell_) + 1);
  nz_ = std::max(1, static_cast<int>(span.z() / cell_) + 1);

  // Two passes: count, then fill (CSR over cells).
  std::vector<std::pair<int, int>> pairs;
  pairs.reserve(mesh_->triangles.size() * 2);
  for (int t = 0; t < mesh_->triangle_count(); ++t) {
    const auto& tri = mesh_->triangles[t];
    Vec3 tlo = mesh_->vertices[tri[0]], thi = tlo;
    for (int k = 1; k < 3; ++k) {
      tlo = tlo.cwiseMin(mesh_->vertices[tri[k]]);
      thi = thi.cwiseMax(mesh_->vertices[tri[k]]);
    }
    int ix0, iy0, iz0, ix1, iy1, iz1;
    cell_of(tlo, ix0, iy0, iz0);
    cell_of(thi, ix1, iy1, iz1);
    for (int iz = iz0; iz <= iz1; ++iz)
      for (int iy = iy0; iy <= iy1; ++iy)
        for (int ix = ix0; ix <= ix1; ++ix) pairs.emplace_back(cell_index(ix, iy, iz), t);
  }
  std::sort(pairs.begin(), pairs.end());
  cell_offsets_.assign(static_cast<size_t>(nx_) * ny_ * nz_ + 1, 0);
  for (const auto& pr : pairs) ++cell_offsets_[pr.first + 1];
  for (size_t c = 1; c < cell_offsets_.size(); ++c) cell_offsets_[c] += cell_offsets_[c - 1];
  cell_tris_.resize(pairs.size());
  for (size_t i = 0; i < pairs.size(); ++i) cell_tris_[i] = pairs[i].second;
}

void MeshLocator::cell_of(const Vec3& p, int& ix, int& iy, int& iz) const {
  ix = std::clamp(static_cast<int>((p.x() - lo_.x()) / cell_), 0, nx_ - 1);
  iy = std::clamp(static_cast<int>((p.y() - lo_.y()) / cell_), 0, ny_ - 1);
  iz = std::clamp(static_cast<int>((p.z() - lo_.z()) / cell_), 0, nz_ - 1);
}

bool MeshLocator::try_shell(const Vec3& x, const Vec3& dir, int shell, Hit& hit) const {
  int cx, cy, cz;
  cell_of(x, cx, cy, cz);
  double best = 1e300;
  for (int iz = std::max(0, cz - shell); iz <= std::min(nz_ - 1, cz + shell); ++iz) {
    for (int iy = std::max(0, cy - shell); iy <= std::min(ny_ - 1, cy + shell); ++iy) {
      for (int ix = std::max(0, cx - shell); ix <= std::min(nx_ - 1, cx + shell); ++ix) {
        const int c = cell_index(ix, iy, iz);
        for (int k = cell_offsets_[c]; k < cell_offsets_[c + 1]; ++k) {
          const int t = cell_tris_[k];
          const auto& tri = mesh_->triangles[t];
          double s, u, v;
          if (line_hits_triangle(x, dir, mesh_->vertices[tri[0]], mesh_->vertices[tri[1]],
                                 mesh_->vertices[tri[2]], s, u, v) &&
              std::abs(s) < best) {
            best = std::abs(s);
            hit.tri = t;
            hit.bary = clamp_bary(u, v);
          }
        }
      }
    }
  }
  return hit.tri >= 0;
}

MeshLocator::Hit MeshLocator::locate(const Vec3& x) const {
  const Vec3 dir = mesh_->surface.normal(mesh_->surface.closest_point(x));
  Hit hit;
  for (int shell = 1; shell <= 4; ++shell) {
    if (try_shell(x, dir, shell, hit)) return hit;
  }
  // Fallback: nearest triangle point among a generous neighborhood.  Should
  // not trigger for valid lifted queries; kept for robustness.
  int cx, cy, cz;
  cell_of(x, cx, cy, cz);
  double best = 1e300;
  for (int iz = std::max(0, cz - 4); iz <= std::min(nz_ - 1, cz + 4); ++iz) {
    for (int iy = std::max(0, cy - 4); iy <= std::min(ny_ - 1, cy + 4); ++iy) {
      for (int ix = std::max(0, cx - 4); ix <= std::min(nx_ - 1, cx + 4); ++ix) {
        const int c = cell_index(ix, iy, iz);
        for (int k = cell_offsets_[c]; k < cell_offsets_[c + 1]; ++k) {
          const int t = cell_tris_[k];
          const auto& tri = mesh_->triangles[t];
          double d2;
          auto bary = closest_bary(x, mesh_->vertices[tri[0]], mesh_->vertices[tri[1]],
                                   mesh_->vertices[tri[2]], d2);
          if (d2 < best) {
            best = d2;
            hit.tri = t;
            hit.bary = bary;
          }
        }
      }
    }
  }
  require(hit.tri >= 0, errc::incompatible_reference, "locate: no triangle near query point");
  return hit;
}

} // namespace lapbel
