#pragma once

#include "mesh.hpp"

namespace lapbel {

// Point location on a fine mesh: for x on S, finds the triangle pierced by
// the surface-normal line through x.  Uniform-grid acceleration; the mesh is
// an O(h^2) graph over S, so the hit always lies in the immediate cell
// neighborhood of x.
class MeshLocator {
public:
  explicit MeshLocator(MeshPtr mesh);

  struct Hit {
    int tri = -1;
    std::array<double, 3> bary{};
  };

  // pre: x lies on the surface the mesh approximates.
  Hit locate(const Vec3& x) const;

  const SurfaceMesh& mesh() const { return *mesh_; }
  MeshPtr mesh_ptr() const { return mesh_; }

private:
  int cell_index(int ix, int iy, int iz) const { return (iz * ny_ + iy) * nx_ + ix; }
  void cell_of(const Vec3& p, int& ix, int& iy, int& iz) const;
  bool try_shell(const Vec3& x, const Vec3& dir, int shell, Hit& hit) const;

  MeshPtr mesh_;
  Vec3 lo_;
  double cell_ = 1.0;
  int nx_ = 1, ny_ = 1, nz_ = 1;
  // CSR layout: cell_offsets_[c]..cell_offsets_[c+1] index into cell_tris_.
  std::vector<int> cell_offsets_;
  std::vector<int> cell_tris_;
};

} // namespace lapbel
