#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "finn/autodiff/mlp.hpp"
#include "finn/autodiff/param_store.hpp"
#include "finn/autodiff/tape.hpp"
#include "finn/dataset.hpp"
#include "finn/fvm/types.hpp"
#include "finn/ode/integrators.hpp"

namespace finn {

/// How the diffusion coefficient of the dissolved-phase equation is modelled.
enum class DiffusionKind {
  network,            // d_unit * scale * sigmoid(mlp(c))
  scalar,             // d_unit * raw, one learnable number
  frozen_freundlich,  // D_e / R(c) of fixed soil parameters (oracle)
};

std::string diffusion_kind_name(DiffusionKind k);
DiffusionKind parse_diffusion_kind(const std::string& name);

struct FinnConfig {
  Grid1D grid;
  BoundaryCondition left = Dirichlet{1.0};
  BoundaryCondition right = Cauchy{1.0};
  double porosity = 0.29;
  /// Experimental mode: D_e is known. D_ct is then fixed to D_e * phi and
  /// Cauchy ghosts use D_e; otherwise they use the learned D_ct / phi.
  std::optional<double> known_de;
  /// Upper clamp of the network input.
  double c_max = 2.0;
  bool learn_stencil = true;
  DiffusionKind d_c = DiffusionKind::network;
  std::vector<std::size_t> hidden = {15, 15, 15};
  /// Units of the learned coefficients: D_c = d_unit * (network or raw),
  /// D_ct = ct_unit * raw.
  double d_unit = 2e-4;
  double ct_unit = 1e-3;
  double ct_init = 0.1;
  double stencil_noise = 0.1;
  /// Soil of the frozen_freundlich module.
  std::optional<SoilParams> frozen_soil;
  /// Learnable source term q(u) added in the state kernel of each equation.
  bool source = false;

  void validate() const;
};

/// Trainable tensors plus the configuration itself (as non-trainable
/// `model.*` tensors), so a store alone describes a model.
ParamStore finn_init(const FinnConfig& config, std::uint64_t seed);

/// Parameters that reproduce the ground-truth physics exactly: stencil
/// (-1, 1), frozen Freundlich D_c, D_ct = D_e * phi.
ParamStore finn_physics(const FinnConfig& config, const SoilParams& soil);

void store_config(ParamStore& store, const FinnConfig& config);
FinnConfig load_config(const ParamStore& store);

/// Parameters of one FINN registered on a tape.
struct FinnVars {
  ad::Var stencil;  // (w_self, w_neighbor)
  std::optional<MlpVars> d_c_net;
  ad::Var d_c_raw;  // scalar kind only
  ad::Var d_ct;     // scalar, already in physical units
  std::optional<MlpVars> source_c;
  std::optional<MlpVars> source_ct;
};

FinnVars bind_finn(const BoundParams& bound, const ParamStore& store, const FinnConfig& config);

/// Ghost values as tape nodes. Neumann ends carry a flux override.
struct TapeClosure {
  ad::Var ghost_left;
  ad::Var ghost_right;
  std::optional<double> flux_left;
  std::optional<double> flux_right;
};

TapeClosure tape_ghosts(ad::Var u, const BoundaryCondition& left, const BoundaryCondition& right,
                        ad::Var d_boundary, double dx);

/// F_i = sum over the two faces of d_i * (w_self u_i + w_nb u_nb) / dx^2.
/// `d` has length n (cell-centered) or 1. A Neumann override replaces the
/// whole boundary face term.
ad::Var flux_kernel(ad::Var u, const TapeClosure& closure, ad::Var stencil, ad::Var d, double dx);

/// F + q(u), or F when there is no source network.
ad::Var state_kernel(ad::Var flux, ad::Var u, const MlpVars* source);

/// D_c evaluated per volume at c clamped to [0, c_max].
ad::Var diffusion_c(const FinnVars& vars, const FinnConfig& config, ad::Var c);

/// Coefficient used inside Cauchy ghosts.
ad::Var boundary_diffusion(const FinnVars& vars, const FinnConfig& config);

/// Plain-tanh-hidden network with a linear output (source terms).
ad::Var linear_head_forward(const MlpVars& net, ad::Var x);

struct VarPair {
  ad::Var c;
  ad::Var c_t;
};

/// (dc/dt, dc_t/dt). Both flux kernels read the dissolved concentration c.
VarPair finn_rhs(const FinnVars& vars, const FinnConfig& config, const VarPair& state, double t);

enum class Integrator { euler, rk4, adaptive };

std::string integrator_name(Integrator i);
Integrator parse_integrator(const std::string& name);

struct RolloutOptions {
  Integrator integrator = Integrator::rk4;
  std::size_t substeps = 1;
  double rtol = 1e-6;
  double atol = 1e-8;
  /// Abort when |u| exceeds this (0 disables).
  double divergence_bound = 0.0;
  /// Detach the state every `truncate_every` steps (0: full backpropagation).
  std::size_t truncate_every = 0;
};

/// Differentiable closed-loop rollout with a fixed-step method. Element k is
/// the concatenated state (c, c_t) at t_grid[k].
std::vector<ad::Var> rollout_tape(const FinnVars& vars, const FinnConfig& config, ad::Var u0,
                                  std::span<const double> t_grid, const RolloutOptions& options);

/// Value-only rollout (any integrator). Throws DivergenceError on runaway
/// states and StiffnessError when the adaptive solver gives up.
Dataset rollout(const ParamStore& params, const FinnConfig& config, const FieldPair& initial,
                std::span<const double> t_grid, const RolloutOptions& options = {});

/// Splits a concatenated (c, c_t) tape state.
VarPair split_state(ad::Var u, std::size_t n);

struct RetardationCurve {
  std::vector<double> c;
  std::vector<double> r;
  std::size_t underflows = 0;
};

/// R(c) = D_e / D_c(c) where D_e is the known value or learned D_ct / phi.
/// Entries whose D_c falls below 1e-12 are reported as +infinity.
RetardationCurve extract_retardation(const ParamStore& params, const FinnConfig& config,
                                     std::span<const double> c_values);

/// Learned D_e estimate: known D_e when configured, else D_ct / phi.
double effective_de(const ParamStore& params, const FinnConfig& config);

}  // namespace finn
