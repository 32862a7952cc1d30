#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "dfw/io.hpp"

namespace dfw::cli {

struct PlotRequest {
  std::string x;
  std::vector<std::string> y;
  bool log_x = false;
  bool log_y = false;
};

/// Standalone SVG with one polyline and one circle marker per point for each
/// y column. Throws InvalidArgument on missing columns, an empty table or a
/// non-positive value on a log axis (naming the row).
std::string render_plot(const CsvTable& table, const PlotRequest& request);

/// Reads `csv`, renders it and writes `svg`; nothing is written on error.
void emit_plot(const std::filesystem::path& csv, const PlotRequest& request, const std::filesystem::path& svg);

}  // namespace dfw::cli
