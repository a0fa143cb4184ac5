#pragma once

#include <cstddef>
#include <vector>

#include "finn/dataset.hpp"

namespace finn::io {

struct TimeSeries {
  std::vector<double> t;
  std::vector<double> value;
};

enum class Field { c, c_t };

/// c at the last volume over time.
TimeSeries extract_breakthrough(const Dataset& data);

/// One row of c or c_t. Throws ShapeError when t_index is out of range.
std::vector<double> extract_profile(const Dataset& data, Field which, std::size_t t_index);

}  // namespace finn::io
