#pragma once

// Synthetic image generators shared by the unit and acceptance suites.

#include <cmath>
#include <cstdint>
#include <vector>

#include "patchset/image.hpp"
#include "patchset/rng.hpp"

namespace patchset::testing {

inline RgbImage noise_image(int w, int h, RandomStream& rng) {
  RgbImage img(w, h);
  for (auto& v : img.data()) v = static_cast<std::uint8_t>(rng.below(256));
  return img;
}

inline RgbImage constant_image(int w, int h, std::uint8_t r, std::uint8_t g, std::uint8_t b) {
  RgbImage img(w, h);
  auto d = img.data();
  for (std::size_t i = 0; i < d.size(); i += 3) {
    d[i] = r;
    d[i + 1] = g;
    d[i + 2] = b;
  }
  return img;
}

inline RgbImage gray_noise_image(int w, int h, RandomStream& rng) {
  RgbImage img(w, h);
  auto d = img.data();
  for (std::size_t i = 0; i < d.size(); i += 3) d[i] = d[i + 1] = d[i + 2] = static_cast<std::uint8_t>(rng.below(256));
  return img;
}

/// Random axis-aligned blocks of random colors, saturated half the time.
inline RgbImage block_image(int w, int h, RandomStream& rng) {
  RgbImage img(w, h);
  const int blocks = 2 + static_cast<int>(rng.below(12));
  for (int b = 0; b < blocks; ++b) {
    const int x0 = rng.uniform_int(0, w - 1), y0 = rng.uniform_int(0, h - 1);
    const int x1 = rng.uniform_int(x0, w - 1), y1 = rng.uniform_int(y0, h - 1);
    std::uint8_t c[3];
    const bool saturated = rng.coin();
    for (auto& v : c) v = saturated ? (rng.coin() ? 255 : 0) : static_cast<std::uint8_t>(rng.below(256));
    for (int y = y0; y <= y1; ++y)
      for (int x = x0; x <= x1; ++x)
        for (int k = 0; k < 3; ++k) img.pixel(x, y)[k] = c[k];
  }
  return img;
}

/// Smooth sinusoidal color field.
inline RgbImage smooth_image(int w, int h, RandomStream& rng) {
  RgbImage img(w, h);
  double fx[3], fy[3], ph[3];
  for (int c = 0; c < 3; ++c) {
    fx[c] = rng.uniform(0.01, 0.08);
    fy[c] = rng.uniform(0.01, 0.08);
    ph[c] = rng.uniform(0.0, 6.28);
  }
  for (int y = 0; y < h; ++y)
    for (int x = 0; x < w; ++x)
      for (int c = 0; c < 3; ++c)
        img.pixel(x, y)[c] =
            static_cast<std::uint8_t>(std::lround(127.5 + 127.5 * std::sin(fx[c] * x + fy[c] * y + ph[c])));
  return img;
}

/// Mix of the generators above, chosen by index so sweeps cover every kind.
inline RgbImage sweep_image(int index, int w, int h, RandomStream& rng) {
  switch (index % 4) {
    case 0:
      return noise_image(w, h, rng);
    case 1:
      return block_image(w, h, rng);
    case 2:
      return smooth_image(w, h, rng);
    default: {
      RgbImage a = block_image(w, h, rng);
      const RgbImage n = noise_image(w, h, rng);
      auto d = a.data();
      const auto s = n.data();
      for (std::size_t i = 0; i < d.size(); ++i) d[i] = static_cast<std::uint8_t>((3 * d[i] + s[i]) / 4);
      return a;
    }
  }
}

}  // namespace patchset::testing
