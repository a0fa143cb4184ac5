#pragma once

#include <cmath>
#include <cstddef>
#include <functional>
#include <span>
#include <string>
#include <vector>

#include "finn/autodiff/tape.hpp"
#include "finn/errors.hpp"
#include "finn/simd/kernels.hpp"

namespace finn::ode {

template <class State>
using Rhs = std::function<State(double t, const State& u)>;

/// Called after every completed output step with the step index (1-based) and
/// the new state. May replace the state (e.g. detach it from a tape) or
/// throw to abort the integration.
template <class State>
using StepHook = std::function<void(std::size_t step, State& u)>;

enum class FixedMethod { euler, rk4 };

/// Vector-space operations an integrator state needs.
template <class State>
struct StateOps;

template <>
struct StateOps<std::vector<double>> {
  using State = std::vector<double>;
  static State add_scaled(const State& u, double h, const State& k) {
    if (k.size() != u.size()) throw ShapeError("rhs returned a state of the wrong length");
    State out(u.size());
    simd::active().add_scaled(u, h, k, out);
    return out;
  }
  static State rk4_combine(const State& u, double h, const State& k1, const State& k2,
                           const State& k3, const State& k4) {
    State out = u;
    const auto& kern = simd::active();
    kern.axpy(h / 6.0, k1, out);
    kern.axpy(h / 3.0, k2, out);
    kern.axpy(h / 3.0, k3, out);
    kern.axpy(h / 6.0, k4, out);
    return out;
  }
  static bool finite(const State& u) {
    for (double v : u)
      if (!std::isfinite(v)) return false;
    return true;
  }
};

template <>
struct StateOps<ad::Var> {
  using State = ad::Var;
  static State add_scaled(const State& u, double h, const State& k) {
    const double coef[] = {1.0, h};
    const ad::Var xs[] = {u, k};
    return ad::lincomb(coef, xs);
  }
  static State rk4_combine(const State& u, double h, const State& k1, const State& k2,
                           const State& k3, const State& k4) {
    const double coef[] = {1.0, h / 6.0, h / 3.0, h / 3.0, h / 6.0};
    const ad::Var xs[] = {u, k1, k2, k3, k4};
    return ad::lincomb(coef, xs);
  }
  static bool finite(const State& u) {
    for (double v : u.value())
      if (!std::isfinite(v)) return false;
    return true;
  }
};

/// Fixed-step integration over `t_grid`. Row 0 of the result is `u0`; each
/// later row is reached with `substeps` equal steps of `method`. With
/// State = ad::Var the whole trajectory is recorded on the tape.
template <class State>
std::vector<State> integrate_fixed(const Rhs<State>& rhs, State u0, std::span<const double> t_grid,
                                   FixedMethod method, const StepHook<State>& hook = {},
                                   std::size_t substeps = 1) {
  using Ops = StateOps<State>;
  if (t_grid.empty()) throw ConfigError("integrate_fixed: empty time grid");
  if (substeps == 0) throw ConfigError("integrate_fixed: substeps must be positive");
  for (std::size_t k = 1; k < t_grid.size(); ++k)
    if (!(t_grid[k] > t_grid[k - 1]))
      throw ConfigError("integrate_fixed: time grid not strictly increasing at index " +
                        std::to_string(k));

  std::vector<State> traj;
  traj.reserve(t_grid.size());
  traj.push_back(u0);
  State u = std::move(u0);
  for (std::size_t k = 1; k < t_grid.size(); ++k) {
    const double h = (t_grid[k] - t_grid[k - 1]) / static_cast<double>(substeps);
    for (std::size_t s = 0; s < substeps; ++s) {
      const double t = t_grid[k - 1] + static_cast<double>(s) * h;
      if (method == FixedMethod::euler) {
        u = Ops::add_scaled(u, h, rhs(t, u));
      } else {
        const State k1 = rhs(t, u);
        const State k2 = rhs(t + 0.5 * h, Ops::add_scaled(u, 0.5 * h, k1));
        const State k3 = rhs(t + 0.5 * h, Ops::add_scaled(u, 0.5 * h, k2));
        const State k4 = rhs(t + h, Ops::add_scaled(u, h, k3));
        u = Ops::rk4_combine(u, h, k1, k2, k3, k4);
      }
    }
    if (!Ops::finite(u)) throw DivergenceError("integrate_fixed: non-finite state", k);
    if (hook) hook(k, u);
    traj.push_back(u);
  }
  return traj;
}

struct AdaptiveOptions {
  double rtol = 1e-6;
  double atol = 1e-8;
  /// 0 selects the initial step automatically.
  double h_initial = 0.0;
  double safety = 0.9;
  double min_factor = 0.2;
  double max_factor = 5.0;
  std::size_t max_steps = 50'000'000;
};

struct AdaptiveStats {
  std::size_t accepted = 0;
  std::size_t rejected = 0;
  std::size_t rhs_evals = 0;
};

/// Dormand-Prince 5(4) with error control max_i |err_i| / (atol + rtol |u_i|)
/// <= 1. Steps are shortened to land exactly on every t_eval entry.
std::vector<std::vector<double>> integrate_adaptive(const Rhs<std::vector<double>>& rhs,
                                                    std::vector<double> u0,
                                                    std::span<const double> t_eval,
                                                    const AdaptiveOptions& options = {},
                                                    AdaptiveStats* stats = nullptr);

}  // namespace finn::ode
