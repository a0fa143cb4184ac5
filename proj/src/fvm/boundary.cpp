#include <cmath>

#include "finn/dataset.hpp"
#include "finn/errors.hpp"
#include "finn/fvm/flux.hpp"
#include "finn/fvm/types.hpp"

namespace finn {

void Grid1D::validate() const {
  if (n_volumes < 3) throw ConfigError("grid needs at least 3 volumes, got " + std::to_string(n_volumes));
  if (!(dx > 0.0) || !std::isfinite(dx)) throw ConfigError("grid spacing dx must be positive");
}

void SoilParams::validate() const {
  if (!(D_e > 0.0)) throw ConfigError("soil D_e must be positive");
  if (!(phi > 0.0 && phi < 1.0)) throw ConfigError("soil porosity must lie in (0, 1)");
  if (!(rho_s > 0.0)) throw ConfigError("soil rho_s must be positive");
  if (!(K_f > 0.0)) throw ConfigError("soil K_f must be positive");
  if (!(n_f > 0.0)) throw ConfigError("soil n_f must be positive");
}

std::string bc_kind(const BoundaryCondition& bc) {
  struct {
    std::string operator()(const Dirichlet&) const { return "dirichlet"; }
    std::string operator()(const Neumann&) const { return "neumann"; }
    std::string operator()(const Cauchy&) const { return "cauchy"; }
  } v;
  return std::visit(v, bc);
}

double bc_value(const BoundaryCondition& bc) {
  struct {
    double operator()(const Dirichlet& d) const { return d.value; }
    double operator()(const Neumann& n) const { return n.flux; }
    double operator()(const Cauchy& c) const { return c.flow_rate; }
  } v;
  return std::visit(v, bc);
}

BoundaryCondition make_bc(const std::string& kind, double value) {
  if (kind == "dirichlet") return Dirichlet{value};
  if (kind == "neumann") return Neumann{value};
  if (kind == "cauchy") {
    if (!(value > 0.0)) throw ConfigError("cauchy flow rate must be positive");
    return Cauchy{value};
  }
  throw ConfigError("unknown boundary condition kind '" + kind + "'");
}

FieldPair Dataset::at(std::size_t k) const {
  if (k >= steps()) throw ShapeError("time index " + std::to_string(k) + " out of range");
  return FieldPair{c[k], c_t[k]};
}

void Dataset::validate() const {
  const std::size_t n = meta.grid.n_volumes;
  if (t.empty()) throw FormatError("dataset has no time steps");
  for (std::size_t k = 1; k < t.size(); ++k)
    if (!(t[k] > t[k - 1]))
      throw FormatError("time grid not strictly increasing at row " + std::to_string(k));
  if (c.size() != t.size() || c_t.size() != t.size())
    throw FormatError("dataset has " + std::to_string(t.size()) + " times but " +
                      std::to_string(c.size()) + " c rows and " + std::to_string(c_t.size()) +
                      " c_t rows");
  for (std::size_t k = 0; k < t.size(); ++k)
    if (c[k].size() != n || c_t[k].size() != n)
      throw FormatError("row " + std::to_string(k) + " does not have " + std::to_string(n) +
                        " volumes");
}

std::vector<double> uniform_time_grid(double dt, std::size_t count) {
  if (!(dt > 0.0)) throw ConfigError("time step must be positive");
  std::vector<double> t(count);
  for (std::size_t k = 0; k < count; ++k) t[k] = static_cast<double>(k) * dt;
  return t;
}

BoundaryClosure ghost_values(std::span<const double> u, const BoundaryCondition& left,
                             const BoundaryCondition& right, double d_boundary, double dx) {
  const std::size_t n = u.size();
  if (n < 2) throw ShapeError("ghost_values needs at least two volumes");
  BoundaryClosure b;
  if (const auto* d = std::get_if<Dirichlet>(&left)) {
    b.ghost_left = d->value;
  } else if (const auto* nm = std::get_if<Neumann>(&left)) {
    b.ghost_left = u[0];
    b.flux_left = nm->flux;
  } else {
    const double q = std::get<Cauchy>(left).flow_rate;
    b.ghost_left = d_boundary / q * (u[0] - u[1]) / dx;
  }
  if (const auto* d = std::get_if<Dirichlet>(&right)) {
    b.ghost_right = d->value;
  } else if (const auto* nm = std::get_if<Neumann>(&right)) {
    b.ghost_right = u[n - 1];
    b.flux_right = nm->flux;
  } else {
    const double q = std::get<Cauchy>(right).flow_rate;
    b.ghost_right = d_boundary / q * (u[n - 1] - u[n - 2]) / dx;
  }
  return b;
}

}  // namespace finn
