#pragma once

#include <span>

#include "finn/dataset.hpp"
#include "finn/fvm/types.hpp"
#include "finn/ode/integrators.hpp"

namespace finn {

struct SimulationOptions {
  /// Replace R(c) by 1 (pure diffusion).
  bool unit_retardation = false;
  double rtol = 1e-6;
  double atol = 1e-8;
};

/// Right-hand side of the diffusion-sorption system at one state:
///   dc/dt   = D_e / R(c_i) * lap(c)_i
///   dc_t/dt = D_e * phi    * lap(c)_i
/// Both Laplacians read c with the same boundary closure (D_e for Cauchy ends).
/// R is evaluated at max(c_i, 0).
FieldPair diffusion_sorption_rhs(const Grid1D& grid, const SoilParams& soil,
                                 const BoundaryCondition& left, const BoundaryCondition& right,
                                 const FieldPair& state, bool unit_retardation = false);

/// Ground-truth dataset on `t_grid`, integrated with the adaptive solver.
/// Throws SimulationError when the integrator gives up.
Dataset simulate_diffusion_sorption(const Grid1D& grid, const SoilParams& soil,
                                    const BoundaryCondition& left, const BoundaryCondition& right,
                                    std::span<const double> t_grid, const FieldPair& initial,
                                    const SimulationOptions& options = {});

}  // namespace finn
