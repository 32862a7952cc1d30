#pragma once

#include <cstdint>
#include <filesystem>
#include <iosfwd>
#include <map>
#include <string>
#include <vector>

namespace dfw::cli {

/// Flat "section.key" settings from an INI file plus command-line overrides.
/// Keys outside the schema are rejected. Every getter records the value it
/// resolved (including defaults) so that outputs can document the full run.
class Config {
 public:
  static Config parse(std::istream& in, const std::string& source, const std::filesystem::path& base_dir);
  static Config load(const std::filesystem::path& path);

  /// Applies "section.key=value"; relative paths resolve against the cwd.
  void set(const std::string& assignment);

  bool has(const std::string& key) const;
  std::string text(const std::string& key) const;
  std::string text(const std::string& key, const std::string& fallback) const;
  double real(const std::string& key) const;
  double real(const std::string& key, double fallback) const;
  int integer(const std::string& key) const;
  int integer(const std::string& key, int fallback) const;
  bool flag(const std::string& key, bool fallback) const;
  std::uint64_t seed() const;
  std::vector<double> reals(const std::string& key) const;
  std::vector<double> reals(const std::string& key, const std::vector<double>& fallback) const;
  std::vector<int> integers(const std::string& key) const;
  std::vector<std::string> words(const std::string& key, const std::vector<std::string>& fallback) const;
  /// Resolved input path; existence was checked at load.
  std::filesystem::path path(const std::string& key) const;

  /// Checks that every configured input path exists.
  void check_paths() const;

  /// "key=value" pairs of everything read so far, sorted by key. The output
  /// directory is left out so that runs into different directories match.
  std::string resolved() const;

 private:
  struct Entry {
    std::vector<std::string> values;
    std::filesystem::path base_dir;
  };
  void put(const std::string& key, std::vector<std::string> values, const std::filesystem::path& base_dir,
           const std::string& where);
  const std::vector<std::string>& raw(const std::string& key) const;
  void note(const std::string& key, const std::string& value) const;

  std::map<std::string, Entry> entries_;
  mutable std::map<std::string, std::string> resolved_;
};

bool is_path_key(const std::string& key);

}  // namespace dfw::cli
