#pragma once

#include <filesystem>
#include <string>
#include <vector>

namespace finn::io {

struct SvgSeries {
  std::string label;
  std::vector<double> x;
  std::vector<double> y;
  bool dashed = false;
};

/// Static line chart with linear axes and a legend.
std::string svg_line_chart(const std::string& title, const std::string& x_label,
                           const std::string& y_label, const std::vector<SvgSeries>& series);
void write_svg(const std::filesystem::path& path, const std::string& svg);

}  // namespace finn::io
