#pragma once

#include <string>
#include <vector>

#include "config.hpp"

namespace dfw::cli {

inline constexpr const char* kVersion = "0.1.0";

struct OutputFile {
  std::string name;
  std::string content;
};

/// Runs one command and returns its output files without touching the disk.
std::vector<OutputFile> run_command(const std::string& command, const Config& config);

std::vector<std::string> command_names();

/// Full command-line entry point; returns the process exit status
/// (0 success, 2 config error, 3 numerical failure, 4 I/O error).
int main_entry(int argc, char** argv);

}  // namespace dfw::cli
