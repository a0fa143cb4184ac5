#pragma once

#include <optional>
#include <span>
#include <vector>

#include "finn/fvm/types.hpp"

namespace finn {

/// Boundary closure for one field: the neighbor value injected beyond each end
/// and, for Neumann ends, the value that replaces the boundary face term.
struct BoundaryClosure {
  double ghost_left = 0.0;
  double ghost_right = 0.0;
  std::optional<double> flux_left;
  std::optional<double> flux_right;
};

/// Dirichlet: ghost = value. Neumann: face override = flux. Cauchy(Q): the
/// ghost is (d_boundary / Q) times the one-sided difference of the two
/// volumes nearest that end, e.g. (D/Q)(u[n-1] - u[n-2])/dx on the right.
BoundaryClosure ghost_values(std::span<const double> u, const BoundaryCondition& left,
                             const BoundaryCondition& right, double d_boundary, double dx);

/// Reference assembly of D (u[i-1] - 2u[i] + u[i+1]) / dx^2 with ghosts at
/// the ends and Neumann overrides replacing the boundary face terms.
std::vector<double> flux_divergence(std::span<const double> u, const BoundaryClosure& closure,
                                    double d, double dx);

/// Same, with a cell-centered coefficient: volume i uses d[i] on both faces.
std::vector<double> flux_divergence(std::span<const double> u, const BoundaryClosure& closure,
                                    std::span<const double> d, double dx);

}  // namespace finn
