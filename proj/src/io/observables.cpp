#include "finn/io/observables.hpp"

#include <string>

#include "finn/errors.hpp"

namespace finn::io {

TimeSeries extract_breakthrough(const Dataset& data) {
  if (data.steps() == 0 || data.volumes() == 0) throw ShapeError("extract_breakthrough: empty dataset");
  TimeSeries s;
  s.t = data.t;
  s.value.reserve(data.steps());
  for (const auto& row : data.c) s.value.push_back(row.at(data.volumes() - 1));
  return s;
}

std::vector<double> extract_profile(const Dataset& data, Field which, std::size_t t_index) {
  if (t_index >= data.steps())
    throw ShapeError("extract_profile: time index " + std::to_string(t_index) + " out of range (" +
                     std::to_string(data.steps()) + " steps)");
  return which == Field::c ? data.c[t_index] : data.c_t[t_index];
}

}  // namespace finn::io
