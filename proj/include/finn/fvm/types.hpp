#pragma once

#include <cstddef>
#include <string>
#include <variant>
#include <vector>

namespace finn {

/// Uniform 1-D control-volume mesh. `length` is informational: the volume
/// count and spacing drive every computation.
struct Grid1D {
  std::size_t n_volumes = 0;
  double dx = 0.0;     // m
  double length = 0.0;  // m

  /// Throws ConfigError unless n_volumes >= 3 and dx > 0.
  void validate() const;
  bool operator==(const Grid1D&) const = default;
};

struct Dirichlet {
  double value = 0.0;  // kg/m^3
  bool operator==(const Dirichlet&) const = default;
};

/// Prescribed boundary-face contribution, usually zero (no flow).
struct Neumann {
  double flux = 0.0;
  bool operator==(const Neumann&) const = default;
};

/// Outflow into a flushed reservoir with flow rate Q (m^3/day).
struct Cauchy {
  double flow_rate = 1.0;
  bool operator==(const Cauchy&) const = default;
};

using BoundaryCondition = std::variant<Dirichlet, Neumann, Cauchy>;

std::string bc_kind(const BoundaryCondition& bc);
/// The single number each variant carries.
double bc_value(const BoundaryCondition& bc);
/// Inverse of bc_kind/bc_value; throws ConfigError on an unknown kind.
BoundaryCondition make_bc(const std::string& kind, double value);

struct SoilParams {
  double D_e = 0.0;    // m^2/day
  double phi = 0.0;    // porosity
  double rho_s = 0.0;  // kg/m^3
  double K_f = 0.0;    // (m^3/kg)^n_f
  double n_f = 1.0;

  void validate() const;
  bool operator==(const SoilParams&) const = default;
};

/// Dissolved (c) and total (c_t) concentration of every volume at one time.
struct FieldPair {
  std::vector<double> c;
  std::vector<double> c_t;

  bool operator==(const FieldPair&) const = default;
};

}  // namespace finn
