#pragma once

#include <cstddef>
#include <optional>
#include <string>
#include <vector>

#include "finn/fvm/types.hpp"

namespace finn {

struct DatasetMeta {
  Grid1D grid;
  std::optional<SoilParams> soil;
  BoundaryCondition left = Dirichlet{};
  BoundaryCondition right = Neumann{};
  std::string provenance;

  bool operator==(const DatasetMeta&) const = default;
};

/// Time series of FieldPairs on a fixed grid. Row k of `c` and `c_t` is the
/// state at `t[k]`.
struct Dataset {
  std::vector<double> t;
  std::vector<std::vector<double>> c;
  std::vector<std::vector<double>> c_t;
  DatasetMeta meta;

  std::size_t steps() const noexcept { return t.size(); }
  std::size_t volumes() const noexcept { return meta.grid.n_volumes; }
  FieldPair at(std::size_t k) const;

  /// Throws FormatError unless t is strictly increasing and every row has
  /// n_volumes entries.
  void validate() const;

  bool operator==(const Dataset&) const = default;
};

/// t_k = k * dt for k = 0 .. count-1.
std::vector<double> uniform_time_grid(double dt, std::size_t count);

}  // namespace finn
