#pragma once

#include <optional>
#include <string>

#include "fem.hpp"

namespace lapbel {

// Named analytic scalar field on S.  Data functions for experiments are
// selected by spec strings of the form "name:param:param".
struct Field {
  std::string spec;
  ScalarField value;
  // Tangential gradient on S where a closed form is available.
  std::optional<std::function<Vec3(const Vec3&)>> gradient;
};

// Supported specs:
//   constant:<c>
//   affine_z:<a>:<b>            a + b*x3
//   harmonic:<l>:<m>[:<scale>]  scale * Y_lm (unit sphere)
//   exp_cap:<A>                 A * exp(x3 - 1)
//   step_z:<z0>[:<lo>:<hi>]     hi where x3 > z0, else lo (default 0/1)
//   geodesic_pow:<beta>         (geodesic distance to the north pole)^beta
// Throws config_parse on anything else.
Field make_field(const std::string& spec);

} // namespace lapbel
