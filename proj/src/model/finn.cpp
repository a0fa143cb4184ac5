#include "finn/model/finn.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <memory>
#include <random>

#include "finn/errors.hpp"
#include "finn/fvm/retardation.hpp"

namespace finn {
namespace {

double bc_code(const BoundaryCondition& bc) { return static_cast<double>(bc.index()); }

BoundaryCondition bc_from_code(double code, double value) {
  switch (static_cast<int>(code)) {
    case 0: return Dirichlet{value};
    case 1: return Neumann{value};
    case 2: return Cauchy{value};
    default: throw FormatError("unknown boundary code " + std::to_string(code));
  }
}

double scalar_of(const ParamStore& s, const char* name) {
  const auto& t = s.at(name);
  if (t.values.size() != 1) throw FormatError(std::string("tensor '") + name + "' is not a scalar");
  return t.values[0];
}

std::vector<std::size_t> net_sizes(const FinnConfig& c) {
  std::vector<std::size_t> s{1};
  s.insert(s.end(), c.hidden.begin(), c.hidden.end());
  s.push_back(1);
  return s;
}

bool all_finite(std::span<const double> v) {
  return std::all_of(v.begin(), v.end(), [](double x) { return std::isfinite(x); });
}

std::shared_ptr<const ad::ElementwiseFn> freundlich_fn(const SoilParams& soil) {
  auto fn = std::make_shared<ad::ElementwiseFn>();
  fn->f = [soil](double c) { return soil.D_e / retardation_freundlich(std::max(c, 0.0), soil); };
  fn->df = [soil](double c) {
    const double r = retardation_freundlich(std::max(c, 0.0), soil);
    return -soil.D_e * retardation_freundlich_derivative(std::max(c, 0.0), soil) / (r * r);
  };
  return fn;
}

// Stencil sum S_i = sum_faces (w_self u_i + w_nb u_nb) / dx^2 with faces that
// carry a Neumann override masked out, plus the override vector itself.
struct StencilSum {
  ad::Var s;
  std::optional<std::vector<double>> overrides;
};

StencilSum stencil_sum(ad::Var u, const TapeClosure& closure, ad::Var stencil, double dx) {
  const std::size_t n = u.size();
  if (n < 2) throw ShapeError("flux_kernel needs at least two volumes");
  if (stencil.size() != 2) throw ShapeError("stencil must hold (w_self, w_neighbor)");
  if (!(dx > 0.0)) throw ConfigError("flux_kernel: dx must be positive");
  ad::Tape& tape = *u.tape;

  const ad::Var ext = ad::concat({closure.ghost_left, u, closure.ghost_right});
  const ad::Var left = ad::slice(ext, 0, n);
  const ad::Var right = ad::slice(ext, 2, n);
  const ad::Var ws = ad::slice(stencil, 0, 1);
  const ad::Var wn = ad::slice(stencil, 1, 1);
  const ad::Var self = ws * u;
  ad::Var face_l = self + wn * left;
  ad::Var face_r = self + wn * right;

  StencilSum out;
  if (closure.flux_left || closure.flux_right) out.overrides = std::vector<double>(n, 0.0);
  if (closure.flux_left) {
    std::vector<double> mask(n, 1.0);
    mask[0] = 0.0;
    face_l = face_l * tape.constant(mask);
    (*out.overrides)[0] += *closure.flux_left;
  }
  if (closure.flux_right) {
    std::vector<double> mask(n, 1.0);
    mask[n - 1] = 0.0;
    face_r = face_r * tape.constant(mask);
    (*out.overrides)[n - 1] += *closure.flux_right;
  }
  out.s = (face_l + face_r) * (1.0 / (dx * dx));
  return out;
}

ad::Var apply_coefficient(const StencilSum& s, ad::Var d) {
  if (d.size() != 1 && d.size() != s.s.size())
    throw ShapeError("flux_kernel: coefficient length does not match the field");
  ad::Var f = d * s.s;
  if (s.overrides) f = f + s.s.tape->constant(*s.overrides);
  return f;
}

ad::Var concat_state(const VarPair& p) { return ad::concat({p.c, p.c_t}); }

}  // namespace

std::string diffusion_kind_name(DiffusionKind k) {
  switch (k) {
    case DiffusionKind::network: return "network";
    case DiffusionKind::scalar: return "scalar";
    case DiffusionKind::frozen_freundlich: return "frozen-freundlich";
  }
  return "network";
}

DiffusionKind parse_diffusion_kind(const std::string& name) {
  if (name == "network") return DiffusionKind::network;
  if (name == "scalar") return DiffusionKind::scalar;
  if (name == "frozen-freundlich") return DiffusionKind::frozen_freundlich;
  throw ConfigError("unknown diffusion module '" + name + "'");
}

std::string integrator_name(Integrator i) {
  switch (i) {
    case Integrator::euler: return "euler";
    case Integrator::rk4: return "rk4";
    case Integrator::adaptive: return "adaptive";
  }
  return "rk4";
}

Integrator parse_integrator(const std::string& name) {
  if (name == "euler") return Integrator::euler;
  if (name == "rk4") return Integrator::rk4;
  if (name == "adaptive" || name == "dopri5") return Integrator::adaptive;
  throw ConfigError("unknown integrator '" + name + "'");
}

void FinnConfig::validate() const {
  grid.validate();
  if (!(porosity > 0.0 && porosity < 1.0)) throw ConfigError("porosity must lie in (0, 1)");
  if (known_de && !(*known_de > 0.0)) throw ConfigError("known D_e must be positive");
  if (!(c_max > 0.0)) throw ConfigError("c_max must be positive");
  if (!(d_unit > 0.0) || !(ct_unit > 0.0)) throw ConfigError("coefficient units must be positive");
  if (d_c == DiffusionKind::frozen_freundlich && !frozen_soil)
    throw ConfigError("frozen Freundlich module needs soil parameters");
  if (frozen_soil) frozen_soil->validate();
  for (auto h : hidden)
    if (h == 0) throw ConfigError("hidden layer widths must be positive");
}

void store_config(ParamStore& s, const FinnConfig& c) {
  s.add("model.grid", {3}, {static_cast<double>(c.grid.n_volumes), c.grid.dx, c.grid.length}, false);
  s.add("model.bc", {4}, {bc_code(c.left), bc_value(c.left), bc_code(c.right), bc_value(c.right)}, false);
  s.add("model.porosity", {1}, {c.porosity}, false);
  s.add("model.c_max", {1}, {c.c_max}, false);
  s.add("model.units", {4}, {c.d_unit, c.ct_unit, c.ct_init, c.stencil_noise}, false);
  s.add("model.flags", {3},
        {c.learn_stencil ? 1.0 : 0.0, static_cast<double>(static_cast<int>(c.d_c)), c.source ? 1.0 : 0.0},
        false);
  std::vector<double> hidden(c.hidden.begin(), c.hidden.end());
  s.add("model.hidden", {hidden.size()}, hidden, false);
  if (c.known_de) s.add("model.known_de", {1}, {*c.known_de}, false);
  if (c.frozen_soil) {
    const auto& f = *c.frozen_soil;
    s.add("model.frozen_soil", {5}, {f.D_e, f.phi, f.rho_s, f.K_f, f.n_f}, false);
  }
}

FinnConfig load_config(const ParamStore& s) {
  FinnConfig c;
  const auto& g = s.at("model.grid").values;
  const auto& bc = s.at("model.bc").values;
  const auto& units = s.at("model.units").values;
  const auto& flags = s.at("model.flags").values;
  if (g.size() != 3 || bc.size() != 4 || units.size() != 4 || flags.size() != 3)
    throw FormatError("model configuration tensors have unexpected sizes");
  c.grid = Grid1D{static_cast<std::size_t>(g[0]), g[1], g[2]};
  c.left = bc_from_code(bc[0], bc[1]);
  c.right = bc_from_code(bc[2], bc[3]);
  c.porosity = scalar_of(s, "model.porosity");
  c.c_max = scalar_of(s, "model.c_max");
  c.d_unit = units[0];
  c.ct_unit = units[1];
  c.ct_init = units[2];
  c.stencil_noise = units[3];
  c.learn_stencil = flags[0] != 0.0;
  const int kind = static_cast<int>(flags[1]);
  if (kind < 0 || kind > 2) throw FormatError("unknown diffusion module code");
  c.d_c = static_cast<DiffusionKind>(kind);
  c.source = flags[2] != 0.0;
  c.hidden.clear();
  for (double h : s.at("model.hidden").values) c.hidden.push_back(static_cast<std::size_t>(h));
  if (s.contains("model.known_de")) c.known_de = scalar_of(s, "model.known_de");
  if (const auto* f = s.find("model.frozen_soil")) {
    if (f->values.size() != 5) throw FormatError("model.frozen_soil must hold 5 values");
    c.frozen_soil = SoilParams{f->values[0], f->values[1], f->values[2], f->values[3], f->values[4]};
  }
  c.validate();
  return c;
}

ParamStore finn_init(const FinnConfig& config, std::uint64_t seed) {
  config.validate();
  std::mt19937_64 rng(seed);
  std::uniform_real_distribution<double> noise(-config.stencil_noise, config.stencil_noise);

  ParamStore s;
  // (-1 - d, 1 + d): the row sum stays zero.
  const double delta = config.stencil_noise > 0.0 ? noise(rng) : 0.0;
  s.add("stencil", {2}, {-1.0 - delta, 1.0 + delta}, config.learn_stencil);

  switch (config.d_c) {
    case DiffusionKind::network:
      store_mlp(s, "d_c", mlp_init(net_sizes(config), rng()));
      break;
    case DiffusionKind::scalar:
      s.add("d_c.raw", {1}, {0.5});
      break;
    case DiffusionKind::frozen_freundlich:
      break;  // parameters live in model.frozen_soil
  }

  if (config.known_de)
    s.add("d_ct.raw", {1}, {*config.known_de * config.porosity / config.ct_unit}, false);
  else
    s.add("d_ct.raw", {1}, {config.ct_init});

  if (config.source) {
    for (const char* name : {"src_c", "src_ct"}) {
      MlpParams p = mlp_init(net_sizes(config), rng());
      std::fill(p.layers.back().weight.begin(), p.layers.back().weight.end(), 0.0);
      store_mlp(s, name, p);
    }
  }
  store_config(s, config);
  return s;
}

ParamStore finn_physics(const FinnConfig& config, const SoilParams& soil) {
  FinnConfig c = config;
  c.d_c = DiffusionKind::frozen_freundlich;
  c.frozen_soil = soil;
  c.stencil_noise = 0.0;
  c.porosity = soil.phi;
  ParamStore s = finn_init(c, 0);
  if (!c.known_de) s.at("d_ct.raw").values[0] = soil.D_e * soil.phi / c.ct_unit;
  return s;
}

FinnVars bind_finn(const BoundParams& bound, const ParamStore& store, const FinnConfig& config) {
  FinnVars v;
  v.stencil = bound["stencil"];
  switch (config.d_c) {
    case DiffusionKind::network: v.d_c_net = bind_mlp(bound, store, "d_c"); break;
    case DiffusionKind::scalar: v.d_c_raw = bound["d_c.raw"]; break;
    case DiffusionKind::frozen_freundlich: break;
  }
  v.d_ct = bound["d_ct.raw"] * config.ct_unit;
  if (config.source) {
    v.source_c = bind_mlp(bound, store, "src_c");
    v.source_ct = bind_mlp(bound, store, "src_ct");
  }
  return v;
}

TapeClosure tape_ghosts(ad::Var u, const BoundaryCondition& left, const BoundaryCondition& right,
                        ad::Var d_boundary, double dx) {
  const std::size_t n = u.size();
  if (n < 2) throw ShapeError("ghost values need at least two volumes");
  ad::Tape& tape = *u.tape;
  TapeClosure c;
  if (const auto* d = std::get_if<Dirichlet>(&left)) {
    c.ghost_left = tape.constant(d->value);
  } else if (const auto* nm = std::get_if<Neumann>(&left)) {
    c.ghost_left = ad::slice(u, 0, 1);
    c.flux_left = nm->flux;
  } else {
    const double q = std::get<Cauchy>(left).flow_rate;
    c.ghost_left = (d_boundary * (ad::slice(u, 0, 1) - ad::slice(u, 1, 1))) * (1.0 / (q * dx));
  }
  if (const auto* d = std::get_if<Dirichlet>(&right)) {
    c.ghost_right = tape.constant(d->value);
  } else if (const auto* nm = std::get_if<Neumann>(&right)) {
    c.ghost_right = ad::slice(u, n - 1, 1);
    c.flux_right = nm->flux;
  } else {
    const double q = std::get<Cauchy>(right).flow_rate;
    c.ghost_right =
        (d_boundary * (ad::slice(u, n - 1, 1) - ad::slice(u, n - 2, 1))) * (1.0 / (q * dx));
  }
  return c;
}

ad::Var flux_kernel(ad::Var u, const TapeClosure& closure, ad::Var stencil, ad::Var d, double dx) {
  return apply_coefficient(stencil_sum(u, closure, stencil, dx), d);
}

ad::Var linear_head_forward(const MlpVars& net, ad::Var x) {
  const std::size_t in = net.sizes.front();
  if (x.size() % in != 0) throw ShapeError("network input length not a multiple of width");
  const std::size_t batch = x.size() / in;
  ad::Var h = x;
  const std::size_t layers = net.weights.size();
  for (std::size_t k = 0; k < layers; ++k) {
    const simd::DenseDims d{net.sizes[k], net.sizes[k + 1], batch};
    h = k + 1 < layers ? ad::dense_tanh(h, net.weights[k], net.biases[k], d)
                       : ad::dense(h, net.weights[k], net.biases[k], d);
  }
  return h;
}

ad::Var state_kernel(ad::Var flux, ad::Var u, const MlpVars* source) {
  if (flux.size() != u.size()) throw ShapeError("state_kernel: flux and state lengths differ");
  if (!source) return flux;
  return flux + linear_head_forward(*source, u);
}

ad::Var diffusion_c(const FinnVars& vars, const FinnConfig& config, ad::Var c) {
  switch (config.d_c) {
    case DiffusionKind::network:
      return mlp_forward(*vars.d_c_net, ad::clamp(c, 0.0, config.c_max)) * config.d_unit;
    case DiffusionKind::scalar:
      return vars.d_c_raw * config.d_unit;
    case DiffusionKind::frozen_freundlich:
      return ad::elementwise(ad::clamp(c, 0.0, config.c_max), freundlich_fn(*config.frozen_soil));
  }
  throw ConfigError("unknown diffusion module");
}

ad::Var boundary_diffusion(const FinnVars& vars, const FinnConfig& config) {
  if (config.known_de) return vars.d_ct.tape->constant(*config.known_de);
  return vars.d_ct * (1.0 / config.porosity);
}

VarPair split_state(ad::Var u, std::size_t n) {
  if (u.size() != 2 * n) throw ShapeError("state length does not match 2 x n_volumes");
  return {ad::slice(u, 0, n), ad::slice(u, n, n)};
}

VarPair finn_rhs(const FinnVars& vars, const FinnConfig& config, const VarPair& state, double) {
  const std::size_t n = config.grid.n_volumes;
  if (state.c.size() != n || state.c_t.size() != n)
    throw ShapeError("finn_rhs: state does not match the grid");
  if (!all_finite(state.c.value()) || !all_finite(state.c_t.value()))
    throw DivergenceError("finn_rhs: non-finite state", 0);

  const ad::Var d_b = boundary_diffusion(vars, config);
  const TapeClosure closure = tape_ghosts(state.c, config.left, config.right, d_b, config.grid.dx);
  const StencilSum s = stencil_sum(state.c, closure, vars.stencil, config.grid.dx);
  const ad::Var f_c = apply_coefficient(s, diffusion_c(vars, config, state.c));
  const ad::Var f_ct = apply_coefficient(s, vars.d_ct);
  return {state_kernel(f_c, state.c, vars.source_c ? &*vars.source_c : nullptr),
          state_kernel(f_ct, state.c_t, vars.source_ct ? &*vars.source_ct : nullptr)};
}

std::vector<ad::Var> rollout_tape(const FinnVars& vars, const FinnConfig& config, ad::Var u0,
                                  std::span<const double> t_grid, const RolloutOptions& options) {
  const std::size_t n = config.grid.n_volumes;
  if (options.integrator == Integrator::adaptive)
    throw ConfigError("differentiable rollouts need a fixed-step integrator");
  const auto method =
      options.integrator == Integrator::euler ? ode::FixedMethod::euler : ode::FixedMethod::rk4;

  ode::Rhs<ad::Var> rhs = [&](double t, const ad::Var& u) {
    return concat_state(finn_rhs(vars, config, split_state(u, n), t));
  };
  ode::StepHook<ad::Var> hook = [&](std::size_t step, ad::Var& u) {
    if (options.divergence_bound > 0.0)
      for (double v : u.value())
        if (std::abs(v) > options.divergence_bound)
          throw DivergenceError("rollout exceeded the divergence bound", step);
    if (options.truncate_every > 0 && step % options.truncate_every == 0) u = ad::detach(u);
  };
  return ode::integrate_fixed<ad::Var>(rhs, u0, t_grid, method, hook, options.substeps);
}

Dataset rollout(const ParamStore& params, const FinnConfig& config, const FieldPair& initial,
                std::span<const double> t_grid, const RolloutOptions& options) {
  config.validate();
  const std::size_t n = config.grid.n_volumes;
  if (initial.c.size() != n || initial.c_t.size() != n)
    throw ShapeError("rollout: initial condition does not match the grid");

  ad::Tape tape;
  const BoundParams bound(tape, params);
  const FinnVars vars = bind_finn(bound, params, config);
  const std::size_t mark = tape.size();

  ode::Rhs<std::vector<double>> rhs = [&](double t, const std::vector<double>& u) {
    const ad::Var x = tape.constant(u);
    const ad::Var f = concat_state(finn_rhs(vars, config, split_state(x, n), t));
    std::vector<double> out(f.value().begin(), f.value().end());
    tape.truncate(mark);
    return out;
  };
  auto check = [&](std::size_t step, const std::vector<double>& u) {
    if (options.divergence_bound > 0.0)
      for (double v : u)
        if (std::abs(v) > options.divergence_bound)
          throw DivergenceError("rollout exceeded the divergence bound", step);
  };

  std::vector<double> u0 = initial.c;
  u0.insert(u0.end(), initial.c_t.begin(), initial.c_t.end());

  std::vector<std::vector<double>> traj;
  if (options.integrator == Integrator::adaptive) {
    ode::AdaptiveOptions o;
    o.rtol = options.rtol;
    o.atol = options.atol;
    traj = ode::integrate_adaptive(rhs, std::move(u0), t_grid, o);
    for (std::size_t k = 0; k < traj.size(); ++k) check(k, traj[k]);
  } else {
    const auto method =
        options.integrator == Integrator::euler ? ode::FixedMethod::euler : ode::FixedMethod::rk4;
    traj = ode::integrate_fixed<std::vector<double>>(
        rhs, std::move(u0), t_grid, method,
        [&](std::size_t step, std::vector<double>& u) { check(step, u); }, options.substeps);
  }

  Dataset out;
  out.t.assign(t_grid.begin(), t_grid.end());
  out.meta.grid = config.grid;
  out.meta.left = config.left;
  out.meta.right = config.right;
  out.meta.provenance = "finn:" + integrator_name(options.integrator);
  for (auto& row : traj) {
    out.c.emplace_back(row.begin(), row.begin() + static_cast<std::ptrdiff_t>(n));
    out.c_t.emplace_back(row.begin() + static_cast<std::ptrdiff_t>(n), row.end());
  }
  return out;
}

double effective_de(const ParamStore& params, const FinnConfig& config) {
  if (config.known_de) return *config.known_de;
  return config.ct_unit * params.at("d_ct.raw").values.at(0) / config.porosity;
}

RetardationCurve extract_retardation(const ParamStore& params, const FinnConfig& config,
                                     std::span<const double> c_values) {
  for (double c : c_values)
    if (!(c >= kConcentrationFloor && c <= config.c_max))
      throw DomainError("extract_retardation: concentration " + std::to_string(c) +
                        " outside [1e-6, c_max]");
  ad::Tape tape;
  const BoundParams bound(tape, params);
  const FinnVars vars = bind_finn(bound, params, config);
  const ad::Var d = diffusion_c(vars, config, tape.constant(c_values));
  const double de = effective_de(params, config);

  RetardationCurve curve;
  curve.c.assign(c_values.begin(), c_values.end());
  const auto dv = d.value();
  for (std::size_t i = 0; i < c_values.size(); ++i) {
    const double di = dv.size() == 1 ? dv[0] : dv[i];
    if (di < 1e-12) {
      curve.r.push_back(std::numeric_limits<double>::infinity());
      ++curve.underflows;
    } else {
      curve.r.push_back(de / di);
    }
  }
  return curve;
}

}  // namespace finn
