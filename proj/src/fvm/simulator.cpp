#include "finn/fvm/simulator.hpp"

#include <algorithm>
#include <string>

#include "finn/errors.hpp"
#include "finn/fvm/flux.hpp"
#include "finn/fvm/retardation.hpp"

namespace finn {

FieldPair diffusion_sorption_rhs(const Grid1D& grid, const SoilParams& soil,
                                 const BoundaryCondition& left, const BoundaryCondition& right,
                                 const FieldPair& state, bool unit_retardation) {
  const std::size_t n = grid.n_volumes;
  if (state.c.size() != n || state.c_t.size() != n)
    throw ShapeError("diffusion_sorption_rhs: state does not match the grid");

  const auto closure = ghost_values(state.c, left, right, soil.D_e, grid.dx);
  std::vector<double> d(n);
  for (std::size_t i = 0; i < n; ++i)
    d[i] = unit_retardation ? soil.D_e
                            : soil.D_e / retardation_freundlich(std::max(state.c[i], 0.0), soil);
  FieldPair out;
  out.c = flux_divergence(state.c, closure, d, grid.dx);
  out.c_t = flux_divergence(state.c, closure, soil.D_e * soil.phi, grid.dx);
  return out;
}

Dataset simulate_diffusion_sorption(const Grid1D& grid, const SoilParams& soil,
                                    const BoundaryCondition& left, const BoundaryCondition& right,
                                    std::span<const double> t_grid, const FieldPair& initial,
                                    const SimulationOptions& options) {
  grid.validate();
  soil.validate();
  const std::size_t n = grid.n_volumes;
  if (initial.c.size() != n || initial.c_t.size() != n)
    throw ShapeError("simulate_diffusion_sorption: initial condition has the wrong length");

  auto rhs = [&](double, const std::vector<double>& u) {
    FieldPair s{{u.begin(), u.begin() + static_cast<std::ptrdiff_t>(n)},
                {u.begin() + static_cast<std::ptrdiff_t>(n), u.end()}};
    FieldPair f = diffusion_sorption_rhs(grid, soil, left, right, s, options.unit_retardation);
    f.c.insert(f.c.end(), f.c_t.begin(), f.c_t.end());
    return f.c;
  };

  std::vector<double> u0 = initial.c;
  u0.insert(u0.end(), initial.c_t.begin(), initial.c_t.end());

  ode::AdaptiveOptions opts;
  opts.rtol = options.rtol;
  opts.atol = options.atol;
  std::vector<std::vector<double>> traj;
  try {
    traj = ode::integrate_adaptive(rhs, std::move(u0), t_grid, opts);
  } catch (const StiffnessError& e) {
    throw SimulationError(std::string("simulation failed: ") + e.what());
  }

  Dataset out;
  out.t.assign(t_grid.begin(), t_grid.end());
  out.meta.grid = grid;
  out.meta.soil = soil;
  out.meta.left = left;
  out.meta.right = right;
  out.meta.provenance = options.unit_retardation ? "simulator:linear" : "simulator:freundlich";
  out.c.reserve(traj.size());
  out.c_t.reserve(traj.size());
  for (auto& row : traj) {
    out.c.emplace_back(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(n));
    out.c_t.emplace_back(row.begin() + static_cast<std::ptrdiff_t>(n), row.end());
  }
  return out;
}

}  // namespace finn
