#include "finn/io/presets.hpp"

#include <cmath>

#include "finn/errors.hpp"

namespace finn::io {
namespace {

// Freundlich parameters of the synthetic soil; the core samples reuse them.
constexpr double kKf = 3.53e-4;
constexpr double kNf = 0.874;
constexpr std::size_t kVolumes = 26;
constexpr std::size_t kSteps = 2000;

ScenarioConfig synthetic(double c_s) {
  ScenarioConfig s;
  s.name = c_s == 1.0 ? "synthetic-train" : "synthetic-test";
  s.soil = SoilParams{5e-4, 0.29, 2880.0, kKf, kNf};
  s.grid = Grid1D{kVolumes, 0.04, 1.0};
  s.left = Dirichlet{c_s};
  s.right = Cauchy{1.0};
  s.t_end = 1e4;
  s.dt = 5.0;
  s.c_s = c_s;
  return s;
}

ScenarioConfig core(const std::string& name, double d_e, double length, double t_end, double c_s,
                    std::optional<double> radius, std::optional<double> q) {
  ScenarioConfig s;
  s.name = name;
  s.soil = SoilParams{d_e, 0.288, 1957.0, kKf, kNf};
  s.grid = Grid1D{kVolumes, length / static_cast<double>(kVolumes - 1), length};
  s.left = Dirichlet{c_s};
  s.right = q ? BoundaryCondition{Cauchy{*q}} : BoundaryCondition{Neumann{0.0}};
  s.t_end = t_end;
  s.dt = t_end / static_cast<double>(kSteps);
  s.c_s = c_s;
  s.radius = radius;
  s.flow_rate = q;
  return s;
}

}  // namespace

void ScenarioConfig::validate() const {
  soil.validate();
  grid.validate();
  if (!(t_end > 0.0) || !(dt > 0.0) || dt > t_end) throw ConfigError("scenario needs 0 < dt <= t_end");
  if (!(c_s > 0.0)) throw ConfigError("scenario c_s must be positive");
  if (radius && !(*radius > 0.0)) throw ConfigError("core radius must be positive");
  if (flow_rate && !(*flow_rate > 0.0)) throw ConfigError("flow rate must be positive");
}

std::size_t ScenarioConfig::steps() const {
  return static_cast<std::size_t>(std::llround(t_end / dt));
}

std::vector<double> ScenarioConfig::time_grid() const { return uniform_time_grid(dt, steps()); }

std::vector<std::string> preset_names() {
  return {"synthetic-train", "synthetic-test", "core1", "core2", "core2b"};
}

ScenarioConfig preset(const std::string& name) {
  if (name == "synthetic-train") return synthetic(1.0);
  if (name == "synthetic-test") return synthetic(0.7);
  if (name == "core1") return core("core1", 2.00e-5, 0.0254, 38.81, 1.4, 0.02375, 1.01e-4);
  if (name == "core2") return core("core2", 2.00e-5, 0.02604, 39.82, 1.6, 0.02375, 1.04e-4);
  if (name == "core2b") return core("core2b", 2.78e-5, 0.105, 48.88, 1.4, std::nullopt, std::nullopt);
  throw ConfigError("unknown preset '" + name + "'");
}

KvDoc scenario_to_kv(const ScenarioConfig& s) {
  KvDoc d;
  d.set("name", s.name);
  d.set("soil.D_e", s.soil.D_e);
  d.set("soil.phi", s.soil.phi);
  d.set("soil.rho_s", s.soil.rho_s);
  d.set("soil.K_f", s.soil.K_f);
  d.set("soil.n_f", s.soil.n_f);
  d.set("grid.n_volumes", s.grid.n_volumes);
  d.set("grid.dx", s.grid.dx);
  d.set("grid.length", s.grid.length);
  d.set("bc.left.kind", bc_kind(s.left));
  d.set("bc.left.value", bc_value(s.left));
  d.set("bc.right.kind", bc_kind(s.right));
  d.set("bc.right.value", bc_value(s.right));
  d.set("time.t_end", s.t_end);
  d.set("time.dt", s.dt);
  d.set("c_s", s.c_s);
  d.set("core.radius", s.radius ? format_double(*s.radius) : std::string("none"));
  d.set("core.flow_rate", s.flow_rate ? format_double(*s.flow_rate) : std::string("none"));
  return d;
}

ScenarioConfig scenario_from_kv(const KvDoc& d) {
  ScenarioConfig s;
  s.name = d.get("name").value_or("custom");
  s.soil = SoilParams{d.number("soil.D_e"), d.number("soil.phi"), d.number("soil.rho_s"),
                      d.number("soil.K_f"), d.number("soil.n_f")};
  s.grid = Grid1D{d.count("grid.n_volumes"), d.number("grid.dx"), d.number("grid.length")};
  s.left = make_bc(d.text("bc.left.kind"), d.number("bc.left.value"));
  s.right = make_bc(d.text("bc.right.kind"), d.number("bc.right.value"));
  s.t_end = d.number("time.t_end");
  s.dt = d.number("time.dt");
  s.c_s = d.number("c_s");
  auto optional_number = [&](const std::string& key) -> std::optional<double> {
    const auto v = d.get(key);
    if (!v || *v == "none") return std::nullopt;
    return d.number(key);
  };
  s.radius = optional_number("core.radius");
  s.flow_rate = optional_number("core.flow_rate");
  s.validate();
  return s;
}

Dataset generate_dataset(const ScenarioConfig& s, const SimulationOptions& options) {
  s.validate();
  const auto t = s.time_grid();
  const FieldPair zero{std::vector<double>(s.grid.n_volumes, 0.0),
                       std::vector<double>(s.grid.n_volumes, 0.0)};
  Dataset d = simulate_diffusion_sorption(s.grid, s.soil, s.left, s.right, t, zero, options);
  d.meta.provenance = "simulator:" + s.name;
  return d;
}

FinnConfig finn_config_for(const ScenarioConfig& s) {
  FinnConfig c;
  c.grid = s.grid;
  c.left = s.left;
  c.right = s.right;
  c.porosity = s.soil.phi;
  c.c_max = 2.0 * s.c_s;
  return c;
}

}  // namespace finn::io
