#pragma once

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <sys/wait.h>
#include <unistd.h>

#include "unseen/prevalence.hpp"

namespace testing_support {

inline unseen::PrevalenceHistogram corbet() {
  return unseen::PrevalenceHistogram::from_prevalences({{1, 118}, {2, 74}, {3, 44}, {4, 24},
                                                        {5, 29}, {6, 22}, {7, 20}, {8, 19},
                                                        {9, 20}, {10, 15}, {11, 12}, {12, 14},
                                                        {13, 6}, {14, 12}, {15, 6}});
}

inline std::string data_path(const std::string& name) {
  return std::string(UNSEEN_DATA_DIR) + "/" + name;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

struct CliResult {
  int code = -1;
  std::string out;
  std::string err;
};

inline CliResult run_cli(const std::string& args) {
  const auto err_path = std::filesystem::temp_directory_path() /
                        ("unseen_cli_err_" + std::to_string(::getpid()) + ".txt");
  const std::string command =
      std::string("\"") + UNSEEN_CLI_PATH + "\" " + args + " 2>\"" + err_path.string() + "\"";
  CliResult result;
  FILE* pipe = ::popen(command.c_str(), "r");
  if (pipe == nullptr) return result;
  char buffer[4096];
  std::size_t got = 0;
  while ((got = std::fread(buffer, 1, sizeof buffer, pipe)) > 0) result.out.append(buffer, got);
  const int status = ::pclose(pipe);
  result.code = WIFEXITED(status) ? WEXITSTATUS(status) : -1;
  result.err = read_file(err_path);
  std::filesystem::remove(err_path);
  return result;
}

}  // namespace testing_support
