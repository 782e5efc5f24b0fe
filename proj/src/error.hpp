#pragma once

#include <stdexcept>
#include <string>

namespace lapbel {

// Failure classes surfaced across the library.  The C API maps these to
// status codes, the CLI maps them to exit codes (config / solver buckets).
enum class errc {
  invalid_argument,
  config_parse,
  point_outside_tube,
  level_too_large,
  degenerate_triangle,
  invalid_atom_node,
  no_convergence,
  singular_matrix,
  evaluation_at_singularity,
  pdas_no_convergence,
  slater_violation,
  saddle_solve_failure,
  incompatible_reference,
  insufficient_data,
  io_error,
};

class Error : public std::runtime_error {
public:
  Error(errc code, const std::string& what) : std::runtime_error(what), code_(code) {}
  errc code() const { return code_; }

private:
  errc code_;
};

[[noreturn]] inline void fail(errc code, const std::string& what) { throw Error(code, what); }

inline void require(bool ok, errc code, const std::string& what) {
  if (!ok) fail(code, what);
}

} // namespace lapbel
