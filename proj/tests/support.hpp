#pragma once

#include <atomic>
#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "behent/dataset.hpp"
#include "behent/rng.hpp"

namespace testutil {

inline std::filesystem::path tmp_dir() {
  static const std::filesystem::path dir = [] {
    auto p = std::filesystem::temp_directory_path() / "behent-tests";
    std::filesystem::create_directories(p);
    return p;
  }();
  return dir;
}

// Fresh path under the test temp dir; unique within a binary run.
inline std::string tmp_path(const std::string& stem) {
  static std::atomic<int> counter{0};
  return (tmp_dir() / (stem + "-" + std::to_string(counter++))).string();
}

inline std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream os;
  os << in.rdbuf();
  return os.str();
}

inline void spit(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  out << content;
}

// Three points on a line: pairwise gaps 1, 2 and 3.
inline behent::Dataset line_fixture() {
  return behent::Dataset::from_points({0.0, 1.0, 3.0}, 1);
}

inline behent::Dataset random_box(std::int64_t n, int d, behent::CounterRng& rng,
                                  double lo = -2.0, double hi = 2.0) {
  std::vector<double> pts(static_cast<std::size_t>(n) * d);
  for (auto& x : pts) x = rng.uniform(lo, hi);
  return behent::Dataset::from_points(std::move(pts), d);
}

inline std::vector<std::string> split_lines(const std::string& text) {
  std::vector<std::string> lines;
  std::istringstream is(text);
  std::string line;
  while (std::getline(is, line)) lines.push_back(line);
  return lines;
}

} // namespace testutil
