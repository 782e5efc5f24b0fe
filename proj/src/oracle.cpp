#include "oracle.hpp"

namespace lapbel {

ReferenceSolution make_spectral_reference(const HarmonicExpansion& expansion,
                                          const std::string& label) {
  auto e = std::make_shared<HarmonicExpansion>(expansion);
  ReferenceSolution ref;
  ref.label = label;
  ref.value = [e](const Vec3& x) { return harmonic_eval(*e, x); };
  ref.gradient = [e](const Vec3& x) { return harmonic_tangential_gradient(*e, x); };
  return ref;
}

ReferenceSolution make_axisym_reference(const AxisymSeries& series, const std::string& label,
                                        std::optional<Vec3> singularity) {
  auto s = std::make_shared<AxisymSeries>(series);
  ReferenceSolution ref;
  ref.label = label;
  ref.value = [s](const Vec3& x) { return axisym_eval(*s, x); };
  ref.gradient = [s](const Vec3& x) { return axisym_tangential_gradient(*s, x); };
  ref.singularity = singularity;
  return ref;
}

ReferenceSolution make_fine_mesh_reference(const FeFunction& fine, const std::string& label) {
  auto locator = std::make_shared<MeshLocator>(fine.mesh);
  auto fe = std::make_shared<FeFunction>(fine);
  ReferenceSolution ref;
  ref.label = label;
  ref.fine_level = fine.mesh->level;
  ref.value = [locator, fe](const Vec3& x) {
    auto hit = locator->locate(x);
    return fe_value(*fe, hit.tri, hit.bary);
  };
  ref.gradient = [locator, fe](const Vec3& x) {
    auto hit = locator->locate(x);
    return fe_gradient(*fe, hit.tri);
  };
  return ref;
}

ReferenceSolution make_analytic_reference(const Field& field) {
  ReferenceSolution ref;
  ref.label = field.spec;
  ref.value = field.value;
  if (field.gradient) ref.gradient = *field.gradient;
  return ref;
}

} // namespace lapbel
