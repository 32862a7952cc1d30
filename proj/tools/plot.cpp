#include "plot.hpp"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <limits>

#include "dfw/errors.hpp"

namespace dfw::cli {

namespace {

constexpr double kWidth = 640.0;
constexpr double kHeight = 400.0;
constexpr double kMargin = 60.0;
constexpr const char* kColors[] = {"#1f77b4", "#d62728", "#2ca02c", "#9467bd", "#ff7f0e", "#17becf"};

std::size_t column_index(const CsvTable& table, const std::string& name) {
  const auto it = std::find(table.columns.begin(), table.columns.end(), name);
  if (it == table.columns.end()) throw InvalidArgument("plot: CSV has no column '" + name + "'");
  return static_cast<std::size_t>(it - table.columns.begin());
}

std::string num(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.2f", v);
  return buf;
}

std::string label(double v) {
  char buf[32];
  std::snprintf(buf, sizeof buf, "%.3g", v);
  return buf;
}

std::string escape(const std::string& s) {
  std::string out;
  for (char c : s) {
    if (c == '<') out += "&lt;";
    else if (c == '>') out += "&gt;";
    else if (c == '&') out += "&amp;";
    else out += c;
  }
  return out;
}

struct Axis {
  double lo = std::numeric_limits<double>::infinity();
  double hi = -std::numeric_limits<double>::infinity();
  bool log = false;

  double map(double v) const { return log ? std::log10(v) : v; }
  void include(double v) {
    lo = std::min(lo, map(v));
    hi = std::max(hi, map(v));
  }
  void pad() {
    if (hi == lo) {
      lo -= 0.5;
      hi += 0.5;
    }
  }
  double unit(double v) const { return (map(v) - lo) / (hi - lo); }
  double value_at(double t) const {
    const double m = lo + t * (hi - lo);
    return log ? std::pow(10.0, m) : m;
  }
};

}  // namespace

std::string render_plot(const CsvTable& table, const PlotRequest& request) {
  if (request.y.empty()) throw InvalidArgument("plot: no y columns requested");
  const std::size_t xi = column_index(table, request.x);
  std::vector<std::size_t> yi;
  for (const auto& name : request.y) yi.push_back(column_index(table, name));
  if (table.rows.empty()) throw InvalidArgument("plot: CSV has no data rows");

  Axis ax;
  Axis ay;
  ax.log = request.log_x;
  ay.log = request.log_y;
  for (std::size_t r = 0; r < table.rows.size(); ++r) {
    const auto& row = table.rows[r];
    auto check = [&](double v, bool log, const std::string& col) {
      if (!std::isfinite(v)) throw InvalidArgument("plot: row " + std::to_string(r + 1) + " has a non-finite " + col);
      if (log && !(v > 0.0)) {
        throw InvalidArgument("plot: row " + std::to_string(r + 1) + " has non-positive " + col + " on a log axis");
      }
    };
    check(row[xi], ax.log, request.x);
    ax.include(row[xi]);
    for (std::size_t k = 0; k < yi.size(); ++k) {
      check(row[yi[k]], ay.log, request.y[k]);
      ay.include(row[yi[k]]);
    }
  }
  ax.pad();
  ay.pad();

  const double pw = kWidth - 2 * kMargin;
  const double ph = kHeight - 2 * kMargin;
  auto px = [&](double v) { return kMargin + ax.unit(v) * pw; };
  auto py = [&](double v) { return kHeight - kMargin - ay.unit(v) * ph; };

  std::string svg = "<svg xmlns=\"http://www.w3.org/2000/svg\" width=\"" + num(kWidth) + "\" height=\"" +
                    num(kHeight) + "\" viewBox=\"0 0 " + num(kWidth) + " " + num(kHeight) + "\">\n";
  svg += "<rect x=\"0\" y=\"0\" width=\"" + num(kWidth) + "\" height=\"" + num(kHeight) + "\" fill=\"white\"/>\n";
  svg += "<rect x=\"" + num(kMargin) + "\" y=\"" + num(kMargin) + "\" width=\"" + num(pw) + "\" height=\"" + num(ph) +
         "\" fill=\"none\" stroke=\"black\"/>\n";
  for (int t = 0; t <= 4; ++t) {
    const double f = t / 4.0;
    const double gx = kMargin + f * pw;
    const double gy = kHeight - kMargin - f * ph;
    svg += "<text x=\"" + num(gx) + "\" y=\"" + num(kHeight - kMargin + 16) +
           "\" font-size=\"11\" text-anchor=\"middle\">" + label(ax.value_at(f)) + "</text>\n";
    svg += "<text x=\"" + num(kMargin - 6) + "\" y=\"" + num(gy + 4) + "\" font-size=\"11\" text-anchor=\"end\">" +
           label(ay.value_at(f)) + "</text>\n";
  }
  svg += "<text x=\"" + num(kMargin + pw / 2) + "\" y=\"" + num(kHeight - 15) +
         "\" font-size=\"12\" text-anchor=\"middle\">" + escape(request.x) + (ax.log ? " (log)" : "") + "</text>\n";

  for (std::size_t k = 0; k < yi.size(); ++k) {
    const char* color = kColors[k % (sizeof kColors / sizeof kColors[0])];
    std::string points;
    for (const auto& row : table.rows) {
      if (!points.empty()) points += ' ';
      points += num(px(row[xi])) + "," + num(py(row[yi[k]]));
    }
    svg += "<polyline fill=\"none\" stroke=\"" + std::string(color) + "\" points=\"" + points + "\"/>\n";
    for (const auto& row : table.rows) {
      svg += "<circle cx=\"" + num(px(row[xi])) + "\" cy=\"" + num(py(row[yi[k]])) + "\" r=\"3\" fill=\"" + color +
             "\"/>\n";
    }
    svg += "<text x=\"" + num(kMargin + 8) + "\" y=\"" + num(kMargin + 16 + 14 * static_cast<double>(k)) +
           "\" font-size=\"12\" fill=\"" + color + "\">" + escape(request.y[k]) + (ay.log ? " (log)" : "") +
           "</text>\n";
  }
  svg += "</svg>\n";
  return svg;
}

void emit_plot(const std::filesystem::path& csv, const PlotRequest& request, const std::filesystem::path& svg) {
  const std::string content = render_plot(read_csv(csv), request);
  write_text_file(svg, content);
}

}  // namespace dfw::cli
