#include "finn/fvm/flux.hpp"

#include <string>

#include "finn/errors.hpp"
#include "finn/simd/kernels.hpp"

namespace finn {
namespace {

std::vector<double> extended(std::span<const double> u, const BoundaryClosure& b) {
  std::vector<double> ext(u.size() + 2);
  ext.front() = b.ghost_left;
  std::copy(u.begin(), u.end(), ext.begin() + 1);
  ext.back() = b.ghost_right;
  return ext;
}

}  // namespace

std::vector<double> flux_divergence(std::span<const double> u, const BoundaryClosure& closure,
                                    double d, double dx) {
  const std::vector<double> per_volume(u.size(), d);
  return flux_divergence(u, closure, per_volume, dx);
}

std::vector<double> flux_divergence(std::span<const double> u, const BoundaryClosure& closure,
                                    std::span<const double> d, double dx) {
  const std::size_t n = u.size();
  if (n < 2) throw ShapeError("flux_divergence needs at least two volumes");
  if (d.size() != n)
    throw ShapeError("flux_divergence: " + std::to_string(d.size()) + " coefficients for " +
                     std::to_string(n) + " volumes");
  if (!(dx > 0.0)) throw ConfigError("flux_divergence: dx must be positive");

  const double inv_dx2 = 1.0 / (dx * dx);
  const auto ext = extended(u, closure);
  std::vector<double> out(n);
  simd::active().second_difference(inv_dx2, ext, out);
  for (std::size_t i = 0; i < n; ++i) out[i] *= d[i];

  if (closure.flux_left)
    out[0] = *closure.flux_left + d[0] * (u[1] - u[0]) * inv_dx2;
  if (closure.flux_right)
    out[n - 1] = d[n - 1] * (u[n - 2] - u[n - 1]) * inv_dx2 + *closure.flux_right;
  return out;
}

}  // namespace finn
