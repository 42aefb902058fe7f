#pragma once

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>

namespace test_util {

// Fresh per-invocation directory under the system temp root; wiped on reuse
// so reruns start clean.
inline std::filesystem::path temp_dir(const std::string& tag) {
  const auto dir = std::filesystem::temp_directory_path() /
                   ("beamsculpt_test_" + tag + "_" + std::to_string(::getpid()));
  std::filesystem::remove_all(dir);
  std::filesystem::create_directories(dir);
  return dir;
}

inline std::string read_file(const std::filesystem::path& path) {
  std::ifstream in(path, std::ios::binary);
  return std::string(std::istreambuf_iterator<char>(in),
                     std::istreambuf_iterator<char>());
}

inline void write_file(const std::filesystem::path& path,
                       const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  out << text;
}

// Runs the installed CLI with `args`, redirecting stdout/stderr into the
// given files when paths are supplied. Returns the process exit code.
inline int run_cli(const std::string& args,
                   const std::filesystem::path& stdout_path = {},
                   const std::filesystem::path& stderr_path = {}) {
  std::string cmd = std::string(BEAMSCULPT_CLI_PATH) + " " + args;
  if (!stdout_path.empty()) cmd += " > " + stdout_path.string();
  if (!stderr_path.empty()) cmd += " 2> " + stderr_path.string();
  const int status = std::system(cmd.c_str());
  if (status == -1) return -1;
  return WIFEXITED(status) ? WEXITSTATUS(status) : -1;
}

}  // namespace test_util
