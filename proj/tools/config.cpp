#include "config.hpp"

#include <CLI11.hpp>

#include <cctype>
#include <charconv>
#include <cmath>
#include <fstream>
#include <set>
#include <sstream>

#include "dfw/errors.hpp"
#include "dfw/io.hpp"

namespace dfw::cli {

namespace {

const std::map<std::string, std::set<std::string>>& schema() {
  static const std::map<std::string, std::set<std::string>> s = {
      {"run", {"command", "output_dir", "seed"}},
      {"kernel", {"family", "n", "m", "shape", "power", "anisotropy"}},
      {"kernel_eval", {"points", "center", "normal"}},
      {"fit", {"nodes", "samples", "scale_kind", "scales", "kernel_n", "strategy", "model"}},
      {"evaluate", {"model", "points"}},
      {"hermite", {"layout", "target", "grid_density"}},
      {"transform",
       {"kind", "input", "order", "method", "target", "center", "radius", "points", "gamma", "n", "annuli",
        "radial_points", "angular_points", "polar_points"}},
      {"nodes", {"count", "lower", "upper", "initial", "iterations", "samples_per_axis"}},
      {"study",
       {"target", "lower", "upper", "m_list", "n_list", "scale_kind", "shape_base", "kernel_n", "node_rule",
        "strategy", "grid_density", "deriv_bound", "optimize_iterations"}},
      {"edge",
       {"target", "lower", "upper", "m", "n", "rules", "scale_kind", "shape_base", "kernel_n", "strategy",
        "grid_density", "optimize_iterations", "layout", "band_width"}},
      {"plot", {"csv", "x", "y", "log_x", "log_y", "output"}},
  };
  return s;
}

const std::set<std::string>& path_keys() {
  static const std::set<std::string> keys = {"kernel.anisotropy", "kernel_eval.points", "fit.nodes",   "fit.samples",
                                             "evaluate.model",    "evaluate.points",    "hermite.layout",
                                             "transform.input",   "transform.points",   "edge.layout", "plot.csv"};
  return keys;
}

void check_key(const std::string& key, const std::string& where) {
  const auto dot = key.find('.');
  if (dot == std::string::npos) throw InvalidArgument(where + ": key '" + key + "' needs a [section]");
  const auto section = schema().find(key.substr(0, dot));
  if (section == schema().end()) throw InvalidArgument(where + ": unknown section '" + key.substr(0, dot) + "'");
  if (!section->second.count(key.substr(dot + 1))) throw InvalidArgument(where + ": unknown key '" + key + "'");
}

double to_real(const std::string& key, const std::string& s) {
  double v = 0.0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size() || !std::isfinite(v)) {
    throw InvalidArgument("config key '" + key + "': '" + s + "' is not a finite number");
  }
  return v;
}

long long to_integer(const std::string& key, const std::string& s) {
  long long v = 0;
  const auto [ptr, ec] = std::from_chars(s.data(), s.data() + s.size(), v);
  if (ec != std::errc() || ptr != s.data() + s.size()) {
    throw InvalidArgument("config key '" + key + "': '" + s + "' is not an integer");
  }
  return v;
}

std::string join(const std::vector<std::string>& v) {
  std::string out;
  for (std::size_t i = 0; i < v.size(); ++i) out += (i ? " " : "") + v[i];
  return out;
}

std::vector<std::string> split_values(const std::string& text) {
  std::vector<std::string> out;
  std::string token;
  for (char c : text) {
    if (c == ',' || std::isspace(static_cast<unsigned char>(c))) {
      if (!token.empty()) out.push_back(token);
      token.clear();
    } else {
      token += c;
    }
  }
  if (!token.empty()) out.push_back(token);
  return out;
}

}  // namespace

bool is_path_key(const std::string& key) { return path_keys().count(key) > 0; }

Config Config::parse(std::istream& in, const std::string& source, const std::filesystem::path& base_dir) {
  Config cfg;
  std::vector<CLI::ConfigItem> items;
  try {
    items = CLI::ConfigINI().from_config(in);
  } catch (const CLI::Error& e) {
    throw InvalidArgument(source + ": " + e.what());
  }
  for (const auto& item : items) {
    if (item.name == "++" || item.name == "--") continue;
    std::vector<std::string> values;
    for (const auto& input : item.inputs) {
      for (auto& v : split_values(input)) values.push_back(std::move(v));
    }
    cfg.put(item.fullname(), std::move(values), base_dir, source);
  }
  return cfg;
}

Config Config::load(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw InvalidArgument("cannot open config file '" + path.string() + "'");
  return parse(in, path.string(), std::filesystem::absolute(path).parent_path());
}

void Config::put(const std::string& key, std::vector<std::string> values, const std::filesystem::path& base_dir,
                 const std::string& where) {
  check_key(key, where);
  if (entries_.count(key)) throw InvalidArgument(where + ": duplicate key '" + key + "'");
  if (values.empty()) throw InvalidArgument(where + ": key '" + key + "' has no value");
  entries_[key] = Entry{std::move(values), base_dir};
}

void Config::set(const std::string& assignment) {
  const auto eq = assignment.find('=');
  if (eq == std::string::npos) throw InvalidArgument("override '" + assignment + "' must look like section.key=value");
  const std::string key = assignment.substr(0, eq);
  check_key(key, "override");
  std::vector<std::string> values = split_values(assignment.substr(eq + 1));
  if (values.empty()) throw InvalidArgument("override '" + assignment + "' has no value");
  entries_[key] = Entry{std::move(values), std::filesystem::current_path()};
}

bool Config::has(const std::string& key) const { return entries_.count(key) > 0; }

const std::vector<std::string>& Config::raw(const std::string& key) const {
  const auto it = entries_.find(key);
  if (it == entries_.end()) throw InvalidArgument("missing config key '" + key + "'");
  return it->second.values;
}

void Config::note(const std::string& key, const std::string& value) const { resolved_[key] = value; }

std::string Config::text(const std::string& key) const {
  const auto& v = raw(key);
  if (v.size() != 1) throw InvalidArgument("config key '" + key + "' takes a single value");
  note(key, v[0]);
  return v[0];
}

std::string Config::text(const std::string& key, const std::string& fallback) const {
  if (has(key)) return text(key);
  note(key, fallback);
  return fallback;
}

double Config::real(const std::string& key) const { return to_real(key, text(key)); }

double Config::real(const std::string& key, double fallback) const {
  if (has(key)) return real(key);
  note(key, format_double(fallback));
  return fallback;
}

int Config::integer(const std::string& key) const {
  const long long v = to_integer(key, text(key));
  if (v < -(1LL << 30) || v > (1LL << 30)) throw InvalidArgument("config key '" + key + "' is out of range");
  return static_cast<int>(v);
}

int Config::integer(const std::string& key, int fallback) const {
  if (has(key)) return integer(key);
  note(key, std::to_string(fallback));
  return fallback;
}

bool Config::flag(const std::string& key, bool fallback) const {
  if (!has(key)) {
    note(key, fallback ? "true" : "false");
    return fallback;
  }
  const std::string v = text(key);
  if (v == "true" || v == "1" || v == "yes") return true;
  if (v == "false" || v == "0" || v == "no") return false;
  throw InvalidArgument("config key '" + key + "': '" + v + "' is not a boolean");
}

std::uint64_t Config::seed() const {
  if (!has("run.seed")) {
    note("run.seed", "0");
    return 0;
  }
  const long long v = to_integer("run.seed", text("run.seed"));
  if (v < 0) throw InvalidArgument("run.seed must be >= 0");
  return static_cast<std::uint64_t>(v);
}

std::vector<double> Config::reals(const std::string& key) const {
  std::vector<double> out;
  for (const auto& s : raw(key)) out.push_back(to_real(key, s));
  note(key, join(raw(key)));
  return out;
}

std::vector<double> Config::reals(const std::string& key, const std::vector<double>& fallback) const {
  if (has(key)) return reals(key);
  std::vector<std::string> text;
  for (double v : fallback) text.push_back(format_double(v));
  note(key, join(text));
  return fallback;
}

std::vector<int> Config::integers(const std::string& key) const {
  std::vector<int> out;
  for (const auto& s : raw(key)) {
    const long long v = to_integer(key, s);
    if (v < -(1LL << 30) || v > (1LL << 30)) throw InvalidArgument("config key '" + key + "' is out of range");
    out.push_back(static_cast<int>(v));
  }
  note(key, join(raw(key)));
  return out;
}

std::vector<std::string> Config::words(const std::string& key, const std::vector<std::string>& fallback) const {
  const std::vector<std::string> out = has(key) ? raw(key) : fallback;
  note(key, join(out));
  return out;
}

std::filesystem::path Config::path(const std::string& key) const {
  const std::string given = text(key);
  const std::filesystem::path p(given);
  if (p.is_absolute()) return p;
  return entries_.at(key).base_dir / p;
}

void Config::check_paths() const {
  for (const auto& [key, entry] : entries_) {
    if (!is_path_key(key)) continue;
    if (entry.values.size() != 1) throw InvalidArgument("config key '" + key + "' takes a single path");
    std::filesystem::path p(entry.values[0]);
    if (!p.is_absolute()) p = entry.base_dir / p;
    if (!std::filesystem::is_regular_file(p)) {
      throw InvalidArgument("config key '" + key + "': file '" + entry.values[0] + "' does not exist");
    }
  }
}

std::string Config::resolved() const {
  std::string out;
  for (const auto& [key, value] : resolved_) {
    if (key == "run.output_dir") continue;
    if (!out.empty()) out += "; ";
    out += key + "=" + value;
  }
  return out;
}

}  // namespace dfw::cli
