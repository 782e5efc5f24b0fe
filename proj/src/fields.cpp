#include "fields.hpp"

#include <cmath>
#include <sstream>
#include <vector>

#include "harmonics.hpp"

namespace lapbel {

namespace {

std::vector<std::string> split(const std::string& s, char sep) {
  std::vector<std::string> out;
  std::istringstream in(s);
  std::string item;
  while (std::getline(in, item, sep)) out.push_back(item);
  return out;
}

double num(const std::string& s) {
  try {
    size_t pos = 0;
    double v = std::stod(s, &pos);
    require(pos == s.size(), errc::config_parse, "trailing characters in number: " + s);
    return v;
  } catch (const Error&) {
    throw;
  } catch (const std::exception&) {
    fail(errc::config_parse, "not a number: " + s);
  }
}

int integer(const std::string& s) {
  double v = num(s);
  int i = static_cast<int>(v);
  require(v == i, errc::config_parse, "not an integer: " + s);
  return i;
}

} // namespace

Field make_field(const std::string& spec) {
  auto parts = split(spec, ':');
  require(!parts.empty(), errc::config_parse, "empty field spec");
  const std::string& name = parts[0];
  const int nargs = static_cast<int>(parts.size()) - 1;
  Field f;
  f.spec = spec;

  if (name == "constant") {
    require(nargs == 1, errc::config_parse, "constant:<c>");
    const double c = num(parts[1]);
    f.value = [c](const Vec3&) { return c; };
    f.gradient = [](const Vec3&) { return Vec3::Zero().eval(); };
  } else if (name == "affine_z") {
    require(nargs == 2, errc::config_parse, "affine_z:<a>:<b>");
    const double a = num(parts[1]), b = num(parts[2]);
    f.value = [a, b](const Vec3& x) { return a + b * x.z(); };
    // grad_S x3 = e3 - x3 * n; exact on the unit sphere where n = x.
    f.gradient = [b](const Vec3& x) {
      Vec3 n = x / x.norm();
      return Vec3(b * (Vec3(0, 0, 1) - n.z() * n));
    };
  } else if (name == "harmonic") {
    require(nargs == 2 || nargs == 3, errc::config_parse, "harmonic:<l>:<m>[:<scale>]");
    const int l = integer(parts[1]), m = integer(parts[2]);
    require(l >= 0 && std::abs(m) <= l, errc::config_parse, "harmonic: need |m| <= l");
    const double scale = nargs == 3 ? num(parts[3]) : 1.0;
    auto e = std::make_shared<HarmonicExpansion>(HarmonicExpansion::zero(l));
    e->at(l, m) = scale;
    f.value = [e](const Vec3& x) { return harmonic_eval(*e, x); };
    f.gradient = [e](const Vec3& x) { return harmonic_tangential_gradient(*e, x); };
  } else if (name == "exp_cap") {
    require(nargs == 1, errc::config_parse, "exp_cap:<A>");
    const double A = num(parts[1]);
    f.value = [A](const Vec3& x) { return A * std::exp(x.z() - 1.0); };
    f.gradient = [A](const Vec3& x) {
      Vec3 n = x / x.norm();
      return Vec3(A * std::exp(n.z() - 1.0) * (Vec3(0, 0, 1) - n.z() * n));
    };
  } else if (name == "step_z") {
    require(nargs == 1 || nargs == 3, errc::config_parse, "step_z:<z0>[:<lo>:<hi>]");
    const double z0 = num(parts[1]);
    const double lo = nargs == 3 ? num(parts[2]) : 0.0;
    const double hi = nargs == 3 ? num(parts[3]) : 1.0;
    f.value = [z0, lo, hi](const Vec3& x) { return x.z() > z0 ? hi : lo; };
  } else if (name == "geodesic_pow") {
    require(nargs == 1, errc::config_parse, "geodesic_pow:<beta>");
    const double beta = num(parts[1]);
    f.value = [beta](const Vec3& x) {
      const double theta = std::acos(std::clamp(x.z() / x.norm(), -1.0, 1.0));
      // The north pole is a mesh node; quadrature points never reach it.
      return std::pow(std::max(theta, 1e-14), beta);
    };
  } else {
    fail(errc::config_parse, "unknown field spec: " + spec);
  }
  return f;
}

} // namespace lapbel
