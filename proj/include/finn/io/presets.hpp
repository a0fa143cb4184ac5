#pragma once

#include <optional>
#include <string>
#include <vector>

#include "finn/dataset.hpp"
#include "finn/fvm/simulator.hpp"
#include "finn/io/kv.hpp"
#include "finn/model/finn.hpp"

namespace finn::io {

struct ScenarioConfig {
  std::string name;
  SoilParams soil;
  Grid1D grid;
  BoundaryCondition left = Dirichlet{1.0};
  BoundaryCondition right = Cauchy{1.0};
  double t_end = 0.0;  // days
  double dt = 0.0;     // days
  double c_s = 0.0;    // kg/m^3, top concentration
  /// Core geometry; absent where the sample has none on record.
  std::optional<double> radius;
  std::optional<double> flow_rate;

  void validate() const;
  /// round(t_end / dt) output times starting at 0.
  std::size_t steps() const;
  std::vector<double> time_grid() const;
};

/// synthetic-train, synthetic-test, core1, core2, core2b.
ScenarioConfig preset(const std::string& name);
std::vector<std::string> preset_names();

KvDoc scenario_to_kv(const ScenarioConfig& s);
ScenarioConfig scenario_from_kv(const KvDoc& doc);

/// Ground-truth simulation from c = c_t = 0.
Dataset generate_dataset(const ScenarioConfig& s, const SimulationOptions& options = {});

/// FINN configuration matching a scenario (grid, boundaries, porosity,
/// c_max = 2 c_s).
FinnConfig finn_config_for(const ScenarioConfig& s);

}  // namespace finn::io
