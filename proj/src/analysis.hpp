#pragma once

#include <optional>
#include <vector>

#include "oracle.hpp"

namespace lapbel {

enum class ErrNorm { L2, H1, Linf, U };

// One row of a convergence table; norms that do not apply stay empty.
struct ErrorRecord {
  int level = 0;
  double h = 0.0;
  double gamma = 0.0;
  std::optional<double> err_l2, err_h1, err_linf, err_u;
};

// Quadrature policy for error integrals: base degree-4 rule everywhere, with
// uniform subdivision of triangles near an (optional) singular point.
struct ErrorQuadrature {
  const QuadRule* rule = &quad_degree4();
  int refine_depth = 0;
  double refine_radius_factor = 3.0; // refine inside this multiple of h
};

// ||ref - lifted fh|| over S_h.  L2/U by quadrature, H1 compares tangential
// gradients in each flat triangle's plane, Linf scans quadrature points and
// vertices (excising a 2h geodesic cap around a singular reference point).
double lifted_error(const FeFunction& fh, const ReferenceSolution& ref, ErrNorm norm,
                    const ErrorQuadrature& quad = {});

// EOC between consecutive rows: log(e_i/e_{i+1}) / log(h_i/h_{i+1}).
// nullopt marks a saturated pair (an exact zero error).
std::vector<std::optional<double>> eoc(const std::vector<double>& h,
                                       const std::vector<double>& err);

std::optional<double> min_eoc(const std::vector<std::optional<double>>& eocs);

struct RateFit {
  double order = 0.0;
  double log_power = 0.0;
  double residual = 0.0; // RMS misfit of the model
};

// Least squares of log e = log C + p log h + log_power * log|log h| with the
// log power held fixed; reported alongside raw EOCs, never instead of them.
RateFit fit_rate_with_log(const std::vector<double>& h, const std::vector<double>& err,
                          double log_power);

} // namespace lapbel
