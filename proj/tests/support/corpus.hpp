#pragma once

#include <algorithm>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iterator>
#include <string>
#include <vector>

#include "patchset/io.hpp"
#include "synthetic.hpp"

namespace patchset::testing {

/// Writes `count` synthetic PNGs of varied sizes and aspect ratios into dir.
inline void write_corpus(const std::filesystem::path& dir, int count, std::uint64_t seed = 1, int base = 160) {
  std::filesystem::create_directories(dir);
  RandomStream rng(seed);
  for (int i = 0; i < count; ++i) {
    const int w = base + static_cast<int>(rng.below(base / 2)), h = base + static_cast<int>(rng.below(base / 2));
    char name[32];
    std::snprintf(name, sizeof name, "img_%03d.png", i);
    io::write_png(dir / name, sweep_image(i, w, h, rng));
  }
}

inline std::vector<char> read_bytes(const std::filesystem::path& p) {
  std::ifstream in(p, std::ios::binary);
  return {std::istreambuf_iterator<char>(in), std::istreambuf_iterator<char>()};
}

inline void flip_byte(const std::filesystem::path& p, std::uint64_t offset) {
  std::fstream f(p, std::ios::binary | std::ios::in | std::ios::out);
  f.seekg(static_cast<std::streamoff>(offset));
  char c = 0;
  f.get(c);
  f.seekp(static_cast<std::streamoff>(offset));
  f.put(static_cast<char>(c ^ 0x01));
}

/// True when both directories hold the same file names with identical bytes.
inline bool same_tree(const std::filesystem::path& a, const std::filesystem::path& b) {
  std::vector<std::string> na, nb;
  for (const auto& e : std::filesystem::directory_iterator(a)) na.push_back(e.path().filename().string());
  for (const auto& e : std::filesystem::directory_iterator(b)) nb.push_back(e.path().filename().string());
  std::sort(na.begin(), na.end());
  std::sort(nb.begin(), nb.end());
  if (na != nb) return false;
  for (const auto& n : na)
    if (read_bytes(a / n) != read_bytes(b / n)) return false;
  return true;
}

}  // namespace patchset::testing
