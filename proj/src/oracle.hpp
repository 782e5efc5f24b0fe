#pragma once

#include <optional>
#include <string>

#include "fields.hpp"
#include "harmonics.hpp"
#include "locator.hpp"

namespace lapbel {

// Evaluable reference against which lifted discrete errors are measured.
// Three oracle kinds (spectral expansion, truncated Legendre series, fine-mesh
// solve) plus plain analytic fields for interpolation benchmarks.
struct ReferenceSolution {
  std::string label;
  std::function<double(const Vec3&)> value;
  // Tangential gradient on S; empty when the reference has no usable gradient.
  std::function<Vec3(const Vec3&)> gradient;
  // Mesh level of a fine-mesh reference, -1 otherwise.
  int fine_level = -1;
  // Singular point of the reference (atomic data): error quadrature refines
  // toward it and the L-infinity scan excises a 2h geodesic cap around it.
  std::optional<Vec3> singularity;
};

ReferenceSolution make_spectral_reference(const HarmonicExpansion& expansion,
                                          const std::string& label);

ReferenceSolution make_axisym_reference(const AxisymSeries& series, const std::string& label,
                                        std::optional<Vec3> singularity = std::nullopt);

ReferenceSolution make_fine_mesh_reference(const FeFunction& fine, const std::string& label);

ReferenceSolution make_analytic_reference(const Field& field);

} // namespace lapbel
