#pragma once

// Independent reference implementations. These deliberately avoid the
// library's code paths: direct formulas, brute-force loops, enumeration.

#include <algorithm>
#include <array>
#include <cmath>
#include <cstdint>

#include "patchset/image.hpp"

namespace patchset::testing {

/// O(n^2 k^2) box mean with replicate borders.
inline Plane brute_force_box(const Plane& p, int k) {
  Plane out(p.width, p.height);
  const int r = k / 2;
  for (int y = 0; y < p.height; ++y) {
    for (int x = 0; x < p.width; ++x) {
      double s = 0.0;
      for (int dy = -r; dy <= r; ++dy)
        for (int dx = -r; dx <= r; ++dx)
          s += p.at(std::clamp(x + dx, 0, p.width - 1), std::clamp(y + dy, 0, p.height - 1));
      out.at(x, y) = s / (k * k);
    }
  }
  return out;
}

/// Textbook sRGB (D65) -> CIELAB using pow() and the published matrix.
inline std::array<double, 3> reference_lab(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
  auto lin = [](std::uint8_t c8) {
    const double c = c8 / 255.0;
    return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4);
  };
  const double M[3][3] = {{0.4124564, 0.3575761, 0.1804375},
                          {0.2126729, 0.7151522, 0.0721750},
                          {0.0193339, 0.1191920, 0.9503041}};
  const double rgb[3] = {lin(r8), lin(g8), lin(b8)};
  double xyz[3];
  for (int i = 0; i < 3; ++i) {
    const double white = M[i][0] + M[i][1] + M[i][2];
    xyz[i] = (M[i][0] * rgb[0] + M[i][1] * rgb[1] + M[i][2] * rgb[2]) / white;
  }
  auto f = [](double t) {
    const double d = 6.0 / 29.0;
    return t > d * d * d ? std::cbrt(t) : t / (3 * d * d) + 4.0 / 29.0;
  };
  return {116 * f(xyz[1]) - 16, 500 * (f(xyz[0]) - f(xyz[1])), 200 * (f(xyz[1]) - f(xyz[2]))};
}

inline int max_channel_diff(const RgbImage& a, const RgbImage& b) {
  int m = 0;
  for (std::size_t i = 0; i < a.data().size(); ++i) m = std::max(m, std::abs(int(a.data()[i]) - int(b.data()[i])));
  return m;
}

}  // namespace patchset::testing
