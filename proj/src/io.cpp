#include "dfw/io.hpp"

#include <charconv>
#include <fstream>
#include <sstream>

#include "dfw/errors.hpp"

namespace dfw {

std::string format_double(double value) {
  char buf[64];
  const auto res = std::to_chars(buf, buf + sizeof(buf), value);
  return std::string(buf, res.ptr);
}

namespace {

std::ifstream open_input(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw IoError("cannot open '" + path.string() + "' for reading");
  return in;
}

double parse_double(const std::string& token, const std::filesystem::path& path, int line) {
  double v = 0.0;
  const char* first = token.data();
  const char* last = token.data() + token.size();
  const auto res = std::from_chars(first, last, v);
  if (res.ec != std::errc() || res.ptr != last) {
    throw InvalidArgument(path.string() + ":" + std::to_string(line) + ": bad number '" + token + "'");
  }
  return v;
}

bool skip_line(const std::string& line) {
  const auto pos = line.find_first_not_of(" \t\r");
  return pos == std::string::npos || line[pos] == '#';
}

std::vector<std::string> split_ws(const std::string& line) {
  std::istringstream ss(line);
  std::vector<std::string> out;
  std::string tok;
  while (ss >> tok) out.push_back(tok);
  return out;
}

}  // namespace

Eigen::MatrixXd read_table(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<std::vector<double>> rows;
  std::string line;
  int number = 0;
  while (std::getline(in, line)) {
    ++number;
    if (skip_line(line)) continue;
    std::vector<double> row;
    for (const auto& tok : split_ws(line)) row.push_back(parse_double(tok, path, number));
    if (!rows.empty() && row.size() != rows.front().size()) {
      throw InvalidArgument(path.string() + ":" + std::to_string(number) + ": row length differs from the first row");
    }
    rows.push_back(std::move(row));
  }
  if (rows.empty()) throw InvalidArgument(path.string() + ": no data rows");
  Eigen::MatrixXd out(static_cast<Eigen::Index>(rows.size()), static_cast<Eigen::Index>(rows.front().size()));
  for (std::size_t i = 0; i < rows.size(); ++i) {
    for (std::size_t j = 0; j < rows[i].size(); ++j) out(static_cast<Eigen::Index>(i), static_cast<Eigen::Index>(j)) = rows[i][j];
  }
  return out;
}

Eigen::MatrixXd read_points(const std::filesystem::path& path) { return read_table(path).transpose(); }

void write_points(const std::filesystem::path& path, const Eigen::MatrixXd& coords) {
  std::string text;
  for (Eigen::Index p = 0; p < coords.cols(); ++p) {
    for (Eigen::Index a = 0; a < coords.rows(); ++a) {
      if (a > 0) text += ' ';
      text += format_double(coords(a, p));
    }
    text += '\n';
  }
  write_text_file(path, text);
}

BoundarySpec read_boundary_layout(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<std::vector<double>> interior;
  std::vector<std::vector<double>> boundary;
  std::vector<std::vector<double>> normals;
  std::string line;
  int number = 0;
  std::size_t dim = 0;
  while (std::getline(in, line)) {
    ++number;
    if (skip_line(line)) continue;
    const auto toks = split_ws(line);
    const std::string where = path.string() + ":" + std::to_string(number) + ": ";
    std::vector<double> nums;
    for (std::size_t i = 1; i < toks.size(); ++i) nums.push_back(parse_double(toks[i], path, number));
    if (toks[0] == "i") {
      if (dim == 0) dim = nums.size();
      if (nums.size() != dim || dim == 0) throw InvalidArgument(where + "interior row has the wrong length");
      interior.push_back(nums);
    } else if (toks[0] == "b") {
      if (dim == 0) dim = nums.size() / 2;
      if (nums.size() != 2 * dim || dim == 0) throw InvalidArgument(where + "boundary row needs a point and a normal");
      boundary.emplace_back(nums.begin(), nums.begin() + static_cast<std::ptrdiff_t>(dim));
      normals.emplace_back(nums.begin() + static_cast<std::ptrdiff_t>(dim), nums.end());
    } else {
      throw InvalidArgument(where + "rows must start with 'i' or 'b'");
    }
  }
  auto to_matrix = [dim](const std::vector<std::vector<double>>& rows) {
    Eigen::MatrixXd m(static_cast<Eigen::Index>(dim), static_cast<Eigen::Index>(rows.size()));
    for (std::size_t j = 0; j < rows.size(); ++j) {
      for (std::size_t a = 0; a < dim; ++a) m(static_cast<Eigen::Index>(a), static_cast<Eigen::Index>(j)) = rows[j][a];
    }
    return m;
  };
  return BoundarySpec(to_matrix(interior), to_matrix(boundary), to_matrix(normals));
}

GridFunction read_grid(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  std::vector<std::string> toks;
  std::string line;
  while (std::getline(in, line)) {
    if (skip_line(line)) continue;
    for (auto& t : split_ws(line)) toks.push_back(std::move(t));
  }
  if (toks.empty()) throw InvalidArgument(path.string() + ": empty grid file");
  std::size_t pos = 0;
  auto next = [&]() {
    if (pos >= toks.size()) throw InvalidArgument(path.string() + ": truncated grid file");
    return parse_double(toks[pos++], path, 0);
  };
  const double dims_value = next();
  if (dims_value < 1 || dims_value > 3 || dims_value != std::floor(dims_value)) {
    throw InvalidArgument(path.string() + ": grid dimension must be 1, 2 or 3");
  }
  const int dims = static_cast<int>(dims_value);
  std::vector<int> shape;
  std::vector<double> period;
  std::size_t total = 1;
  for (int a = 0; a < dims; ++a) {
    const double s = next();
    if (s < 1 || s != std::floor(s)) throw InvalidArgument(path.string() + ": grid shape must be positive integers");
    shape.push_back(static_cast<int>(s));
    total *= static_cast<std::size_t>(s);
  }
  for (int a = 0; a < dims; ++a) period.push_back(next());
  if (toks.size() - pos != total) {
    throw InvalidArgument(path.string() + ": expected " + std::to_string(total) + " grid values, found " +
                          std::to_string(toks.size() - pos));
  }
  std::vector<double> values;
  values.reserve(total);
  while (pos < toks.size()) values.push_back(next());
  return GridFunction(shape, period, std::move(values));
}

void write_grid(const std::filesystem::path& path, const GridFunction& grid) {
  std::string text = std::to_string(grid.dims());
  for (int s : grid.shape()) text += ' ' + std::to_string(s);
  for (double p : grid.period()) text += ' ' + format_double(p);
  text += '\n';
  for (double v : grid.values()) text += format_double(v) + '\n';
  write_text_file(path, text);
}

void write_model(std::ostream& out, const DfwModel& model) {
  out << "dfw-model v1\n";
  out << "scale_kind " << scale_kind_name(model.scales().kind()) << '\n';
  out << "scales";
  for (double v : model.scales().values()) out << ' ' << format_double(v);
  out << '\n';
  out << "kernel_n " << model.kernel_n() << '\n';
  out << "strategy " << strategy_name(model.strategy()) << '\n';
  out << "offset " << format_double(model.offset()) << '\n';
  const NodeSet& nodes = model.nodes();
  out << "nodes " << nodes.dim() << ' ' << nodes.size() << '\n';
  for (Eigen::Index k = 0; k < nodes.size(); ++k) {
    for (Eigen::Index a = 0; a < nodes.dim(); ++a) out << (a ? " " : "") << format_double(nodes.coords()(a, k));
    out << '\n';
  }
  out << "coeffs " << model.coeffs().rows() << ' ' << model.coeffs().cols() << '\n';
  for (Eigen::Index j = 0; j < model.coeffs().rows(); ++j) {
    for (Eigen::Index k = 0; k < model.coeffs().cols(); ++k) out << (k ? " " : "") << format_double(model.coeffs()(j, k));
    out << '\n';
  }
}

DfwModel read_model(std::istream& in) {
  std::string line;
  auto fail = [](const std::string& what) { return InvalidArgument("model file: " + what); };
  if (!std::getline(in, line) || line != "dfw-model v1") throw fail("missing 'dfw-model v1' header");
  auto expect = [&](const std::string& key) {
    std::string word;
    if (!(in >> word) || word != key) throw fail("expected '" + key + "'");
  };
  auto number = [&]() {
    std::string tok;
    if (!(in >> tok)) throw fail("truncated file");
    return parse_double(tok, "model", 0);
  };
  expect("scale_kind");
  std::string kind;
  in >> kind;
  expect("scales");
  std::getline(in, line);
  std::vector<double> scales;
  for (const auto& tok : split_ws(line)) scales.push_back(parse_double(tok, "model", 0));
  expect("kernel_n");
  const int kernel_n = static_cast<int>(number());
  expect("strategy");
  std::string strategy;
  in >> strategy;
  expect("offset");
  const double offset = number();
  expect("nodes");
  const auto dim = static_cast<Eigen::Index>(number());
  const auto m = static_cast<Eigen::Index>(number());
  if (dim < 1 || m < 1) throw fail("bad node block size");
  Eigen::MatrixXd coords(dim, m);
  for (Eigen::Index k = 0; k < m; ++k) {
    for (Eigen::Index a = 0; a < dim; ++a) coords(a, k) = number();
  }
  expect("coeffs");
  const auto rows = static_cast<Eigen::Index>(number());
  const auto cols = static_cast<Eigen::Index>(number());
  if (rows < 1 || cols != m) throw fail("bad coefficient block size");
  Eigen::MatrixXd coeffs(rows, cols);
  for (Eigen::Index j = 0; j < rows; ++j) {
    for (Eigen::Index k = 0; k < cols; ++k) coeffs(j, k) = number();
  }
  return DfwModel(ScaleSet(parse_scale_kind(kind), scales), kernel_n, NodeSet(coords), coeffs, offset,
                  parse_strategy(strategy));
}

void save_model(const std::filesystem::path& path, const DfwModel& model) {
  std::ostringstream out;
  write_model(out, model);
  write_text_file(path, out.str());
}

DfwModel load_model(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  return read_model(in);
}

CsvTable read_csv(const std::filesystem::path& path) {
  std::ifstream in = open_input(path);
  CsvTable table;
  std::string line;
  int number = 0;
  auto split_comma = [](const std::string& l) {
    std::vector<std::string> out;
    std::stringstream ss(l);
    std::string cell;
    while (std::getline(ss, cell, ',')) {
      const auto a = cell.find_first_not_of(" \t\r");
      const auto b = cell.find_last_not_of(" \t\r");
      out.push_back(a == std::string::npos ? std::string() : cell.substr(a, b - a + 1));
    }
    return out;
  };
  while (std::getline(in, line)) {
    ++number;
    if (skip_line(line)) continue;
    const auto cells = split_comma(line);
    if (table.columns.empty()) {
      table.columns = cells;
      continue;
    }
    if (cells.size() != table.columns.size()) {
      throw InvalidArgument(path.string() + ":" + std::to_string(number) + ": wrong number of columns");
    }
    std::vector<double> row;
    for (const auto& c : cells) row.push_back(parse_double(c, path, number));
    table.rows.push_back(std::move(row));
  }
  if (table.columns.empty()) throw InvalidArgument(path.string() + ": missing CSV header");
  return table;
}

CsvWriter::CsvWriter(std::string comment, std::vector<std::string> columns)
    : comment_(std::move(comment)), columns_(std::move(columns)) {}

void CsvWriter::add_row(const std::vector<double>& row) {
  std::vector<std::string> cells;
  for (double v : row) cells.push_back(format_double(v));
  add_text_row(cells);
}

void CsvWriter::add_text_row(const std::vector<std::string>& row) {
  if (row.size() != columns_.size()) throw InvalidArgument("CSV row length does not match the header");
  std::string line;
  for (std::size_t i = 0; i < row.size(); ++i) line += (i ? "," : "") + row[i];
  lines_.push_back(std::move(line));
}

std::string CsvWriter::str() const {
  std::string text;
  if (!comment_.empty()) text += "# " + comment_ + '\n';
  for (std::size_t i = 0; i < columns_.size(); ++i) text += (i ? "," : "") + columns_[i];
  text += '\n';
  for (const auto& l : lines_) text += l + '\n';
  return text;
}

void CsvWriter::save(const std::filesystem::path& path) const { write_text_file(path, str()); }

void write_text_file(const std::filesystem::path& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary | std::ios::trunc);
  if (!out) throw IoError("cannot open '" + path.string() + "' for writing");
  out << content;
  out.close();
  if (!out) throw IoError("failed writing '" + path.string() + "'");
}

}  // namespace dfw
