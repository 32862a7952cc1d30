#pragma once

#include <filesystem>
#include <iosfwd>
#include <string>
#include <vector>

#include "dfw/hermite.hpp"
#include "dfw/series.hpp"
#include "dfw/transforms.hpp"

namespace dfw {

/// Shortest decimal text that reads back to the same double.
std::string format_double(double value);

/// Whitespace-separated numeric table, one row per line; blank lines and
/// lines starting with '#' are skipped. All rows must have equal length.
Eigen::MatrixXd read_table(const std::filesystem::path& path);

/// Point cloud: one point per line. Returned with one point per column.
Eigen::MatrixXd read_points(const std::filesystem::path& path);
void write_points(const std::filesystem::path& path, const Eigen::MatrixXd& coords);

/// Boundary layout: lines "i x..." for interior nodes and "b x... n..." for
/// boundary nodes with their outward normals.
BoundarySpec read_boundary_layout(const std::filesystem::path& path);

/// Grid file: "dims shape... period..." then the values in row-major order.
GridFunction read_grid(const std::filesystem::path& path);
void write_grid(const std::filesystem::path& path, const GridFunction& grid);

void write_model(std::ostream& out, const DfwModel& model);
DfwModel read_model(std::istream& in);
void save_model(const std::filesystem::path& path, const DfwModel& model);
DfwModel load_model(const std::filesystem::path& path);

struct CsvTable {
  std::vector<std::string> columns;
  std::vector<std::vector<double>> rows;
};

/// Reads a CSV written by CsvWriter (comment lines starting with '#' are skipped).
CsvTable read_csv(const std::filesystem::path& path);

/// Buffers a CSV table and writes it in one go: optional comment line,
/// header, then rows.
class CsvWriter {
 public:
  CsvWriter(std::string comment, std::vector<std::string> columns);

  void add_row(const std::vector<double>& row);
  void add_text_row(const std::vector<std::string>& row);
  std::string str() const;
  void save(const std::filesystem::path& path) const;

 private:
  std::string comment_;
  std::vector<std::string> columns_;
  std::vector<std::string> lines_;
};

/// Writes `content` to `path`, throwing IoError on failure.
void write_text_file(const std::filesystem::path& path, const std::string& content);

}  // namespace dfw
