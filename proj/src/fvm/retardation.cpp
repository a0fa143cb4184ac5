#include "finn/fvm/retardation.hpp"

#include <cmath>
#include <string>

#include "finn/errors.hpp"

namespace finn {
namespace {

double sorption_coefficient(const SoilParams& s) {
  return (1.0 - s.phi) / s.phi * s.rho_s * s.K_f * s.n_f;
}

}  // namespace

double retardation_freundlich(double c, const SoilParams& soil) {
  if (!(c >= 0.0)) throw DomainError("retardation_freundlich: negative or NaN concentration " + std::to_string(c));
  const double cc = std::max(c, kConcentrationFloor);
  return 1.0 + sorption_coefficient(soil) * std::pow(cc, soil.n_f - 1.0);
}

double retardation_freundlich_derivative(double c, const SoilParams& soil) {
  if (!(c >= 0.0)) throw DomainError("retardation_freundlich: negative or NaN concentration " + std::to_string(c));
  if (c < kConcentrationFloor) return 0.0;
  return sorption_coefficient(soil) * (soil.n_f - 1.0) * std::pow(c, soil.n_f - 2.0);
}

}  // namespace finn
