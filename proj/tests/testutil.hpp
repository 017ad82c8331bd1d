#pragma once

#include <filesystem>
#include <fstream>
#include <random>
#include <string>
#include <vector>

namespace testutil {

// Scratch directory removed on destruction.
struct TempDir {
  std::filesystem::path path;

  TempDir() {
    static std::mt19937_64 rng{std::random_device{}()};
    path = std::filesystem::temp_directory_path() /
           ("lingsel_test_" + std::to_string(rng()));
    std::filesystem::create_directories(path);
  }
  ~TempDir() {
    std::error_code ec;
    std::filesystem::remove_all(path, ec);
  }
  TempDir(const TempDir &) = delete;
  TempDir &operator=(const TempDir &) = delete;

  std::string file(const std::string &name) const {
    return (path / name).string();
  }
};

inline std::string write_file(const TempDir &dir, const std::string &name,
                              const std::string &content) {
  const std::string p = dir.file(name);
  std::ofstream out(p, std::ios::binary);
  out << content;
  return p;
}

inline std::string write_lines(const TempDir &dir, const std::string &name,
                               const std::vector<std::string> &lines) {
  std::string content;
  for (const auto &line : lines) {
    content += line;
    content += '\n';
  }
  return write_file(dir, name, content);
}

}  // namespace testutil
