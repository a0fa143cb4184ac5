#pragma once

#include "finn/fvm/types.hpp"

namespace finn {

/// Lower clamp applied to c inside the Freundlich law (kg/m^3). For n_f < 1
/// the isotherm's retardation diverges at c = 0.
inline constexpr double kConcentrationFloor = 1e-6;

/// R(c) = 1 + (1 - phi)/phi * rho_s * K_f * n_f * max(c, floor)^(n_f - 1).
/// Throws DomainError for negative c.
double retardation_freundlich(double c, const SoilParams& soil);

/// dR/dc of the clamped law (zero below the floor).
double retardation_freundlich_derivative(double c, const SoilParams& soil);

}  // namespace finn
