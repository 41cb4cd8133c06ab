#include "patchset/caraug.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

namespace patchset::caraug {

RgbImage hue_rotate(const RgbImage& img, int perm) {
  if (perm < 0 || perm >= static_cast<int>(kPermutations.size())) {
    throw std::out_of_range("channel permutation id must be in 0..5");
  }
  const auto& p = kPermutations[perm];
  RgbImage out(img.width(), img.height());
  const auto src = img.data();
  auto dst = out.data();
  for (std::size_t i = 0; i < src.size(); i += 3) {
    dst[i] = src[i + p[0]];
    dst[i + 1] = src[i + p[1]];
    dst[i + 2] = src[i + p[2]];
  }
  return out;
}

int inverse_permutation(int perm) {
  const auto& p = kPermutations.at(perm);
  std::array<int, 3> inv{};
  for (int i = 0; i < 3; ++i) inv[p[i]] = i;
  for (int id = 0; id < static_cast<int>(kPermutations.size()); ++id)
    if (kPermutations[id] == inv) return id;
  return 0;
}

namespace {

using Mat3 = std::array<double, 9>;

Mat3 mul(const Mat3& a, const Mat3& b) {
  Mat3 c{};
  for (int r = 0; r < 3; ++r)
    for (int k = 0; k < 3; ++k)
      for (int col = 0; col < 3; ++col) c[r * 3 + col] += a[r * 3 + k] * b[k * 3 + col];
  return c;
}

Mat3 inverse(const Mat3& m) {
  const double c00 = m[4] * m[8] - m[5] * m[7];
  const double c01 = m[5] * m[6] - m[3] * m[8];
  const double c02 = m[3] * m[7] - m[4] * m[6];
  const double det = m[0] * c00 + m[1] * c01 + m[2] * c02;
  return {c00 / det,
          (m[2] * m[7] - m[1] * m[8]) / det,
          (m[1] * m[5] - m[2] * m[4]) / det,
          c01 / det,
          (m[0] * m[8] - m[2] * m[6]) / det,
          (m[2] * m[3] - m[0] * m[5]) / det,
          c02 / det,
          (m[1] * m[6] - m[0] * m[7]) / det,
          (m[0] * m[4] - m[1] * m[3]) / det};
}

double radians(double deg) { return deg * std::numbers::pi / 180.0; }

}  // namespace

Homography jitter_homography(const EulerAngles& a, int width, int height, double focal) {
  const double cx = (width - 1) / 2.0, cy = (height - 1) / 2.0;
  const double ax = radians(a.x_deg), ay = radians(a.y_deg), az = radians(a.z_deg);
  const Mat3 rx{1, 0, 0, 0, std::cos(ax), -std::sin(ax), 0, std::sin(ax), std::cos(ax)};
  const Mat3 ry{std::cos(ay), 0, std::sin(ay), 0, 1, 0, -std::sin(ay), 0, std::cos(ay)};
  const Mat3 rz{std::cos(az), -std::sin(az), 0, std::sin(az), std::cos(az), 0, 0, 0, 1};
  const Mat3 k{focal, 0, cx, 0, focal, cy, 0, 0, 1};
  const Mat3 k_inv{1 / focal, 0, -cx / focal, 0, 1 / focal, -cy / focal, 0, 0, 1};
  Mat3 h = mul(k, mul(mul(rz, mul(ry, rx)), k_inv));
  for (double& v : h) v /= h[8];
  return h;
}

std::array<double, 2> apply_homography(const Homography& h, double x, double y) {
  const double w = h[6] * x + h[7] * y + h[8];
  return {(h[0] * x + h[1] * y + h[2]) / w, (h[3] * x + h[4] * y + h[5]) / w};
}

RgbImage warp_perspective(const RgbImage& img, const Homography& h) {
  const Homography inv = inverse(h);
  const int w = img.width(), hgt = img.height();
  RgbImage out(w, hgt);
  for (int y = 0; y < hgt; ++y) {
    for (int x = 0; x < w; ++x) {
      auto [sx, sy] = apply_homography(inv, x, y);
      sx = std::clamp(sx, 0.0, w - 1.0);
      sy = std::clamp(sy, 0.0, hgt - 1.0);
      const int x0 = static_cast<int>(std::floor(sx)), y0 = static_cast<int>(std::floor(sy));
      const int x1 = std::min(x0 + 1, w - 1), y1 = std::min(y0 + 1, hgt - 1);
      const double fx = sx - x0, fy = sy - y0;
      const std::uint8_t* p00 = img.pixel(x0, y0);
      const std::uint8_t* p10 = img.pixel(x1, y0);
      const std::uint8_t* p01 = img.pixel(x0, y1);
      const std::uint8_t* p11 = img.pixel(x1, y1);
      std::uint8_t* d = out.pixel(x, y);
      for (int c = 0; c < 3; ++c) {
        const double top = p00[c] + fx * (p10[c] - p00[c]);
        const double bottom = p01[c] + fx * (p11[c] - p01[c]);
        const double v = top + fy * (bottom - top);
        d[c] = static_cast<std::uint8_t>(std::floor(std::clamp(v, 0.0, 255.0) + 0.5));
      }
    }
  }
  return out;
}

RgbImage perspective_warp(const RgbImage& img, const EulerAngles& angles, double focal) {
  if (angles.x_deg == 0.0 && angles.y_deg == 0.0 && angles.z_deg == 0.0) return img;
  if (focal <= 0.0) focal = std::max(img.width(), img.height());
  return warp_perspective(img, jitter_homography(angles, img.width(), img.height(), focal));
}

EulerAngles draw_angles(RandomStream& rng, double bound) {
  if (!(bound > 0.0)) throw std::invalid_argument("angle bound must be positive");
  const double x = rng.uniform(-bound, bound);
  const double y = rng.uniform(-bound, bound);
  const double z = rng.uniform(-bound, bound);
  return {x, y, z};
}

RgbImage perspective_jitter(const RgbImage& img, RandomStream& rng, double bound) {
  return perspective_warp(img, draw_angles(rng, bound));
}

CarAugPlan draw_plan(RandomStream& rng) {
  CarAugPlan plan{};
  for (int slot = 0; slot < kVariantCount; ++slot) {
    PlanEntry& e = plan[slot];
    e.jitter = (slot >= 4 && slot < 12) || slot >= 18;
    e.hue_perm = slot >= 12 ? 1 + static_cast<int>(rng.below(5)) : 0;
  }
  return plan;
}

PlanCensus census(const CarAugPlan& plan) {
  PlanCensus c;
  for (const auto& e : plan) {
    const bool hue = e.hue_perm != 0;
    c.jitter += e.jitter;
    c.hue += hue;
    c.both += e.jitter && hue;
    c.identity += !e.jitter && !hue;
  }
  return c;
}

Augmented augment_24(const RgbImage& img, RandomStream& rng, double bound) {
  Augmented out;
  out.plan = draw_plan(rng);
  out.variants.reserve(kVariantCount);
  for (const auto& e : out.plan) {
    RgbImage v = e.hue_perm != 0 ? hue_rotate(img, e.hue_perm) : img;
    if (e.jitter) v = perspective_jitter(v, rng, bound);
    out.variants.push_back(std::move(v));
  }
  return out;
}

}  // namespace patchset::caraug
