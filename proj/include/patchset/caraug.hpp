#pragma once

#include <array>
#include <vector>

#include "patchset/image.hpp"
#include "patchset/rng.hpp"

namespace patchset::caraug {

inline constexpr double kDefaultAngleBoundDeg = 0.00286;
inline constexpr int kVariantCount = 24;

/// The six channel permutations; id 0 is the identity. Output channel i is
/// input channel kPermutations[id][i].
inline constexpr std::array<std::array<int, 3>, 6> kPermutations{
    {{0, 1, 2}, {0, 2, 1}, {1, 0, 2}, {1, 2, 0}, {2, 0, 1}, {2, 1, 0}}};

/// Throws std::out_of_range for perm outside 0..5.
RgbImage hue_rotate(const RgbImage& img, int perm);
int inverse_permutation(int perm);

using Homography = std::array<double, 9>;  // row-major 3x3

struct EulerAngles {
  double x_deg = 0.0;
  double y_deg = 0.0;
  double z_deg = 0.0;
};

/// H = K R K^-1 with K a pinhole camera centered on the image and focal
/// length `focal` (pixels); R = Rz Ry Rx.
Homography jitter_homography(const EulerAngles& angles, int width, int height, double focal);

/// Maps a pixel coordinate through H.
std::array<double, 2> apply_homography(const Homography& h, double x, double y);

/// Inverse-mapped bilinear warp with replicate borders; output size = input size.
RgbImage warp_perspective(const RgbImage& img, const Homography& h);

/// Warps by the given angles with focal = max(width, height) unless focal > 0.
RgbImage perspective_warp(const RgbImage& img, const EulerAngles& angles, double focal = 0.0);

EulerAngles draw_angles(RandomStream& rng, double angle_bound_deg);

/// Random angles in [-bound, bound] degrees, then perspective_warp.
RgbImage perspective_jitter(const RgbImage& img, RandomStream& rng, double angle_bound_deg = kDefaultAngleBoundDeg);

struct PlanEntry {
  int hue_perm = 0;  // 0 = identity
  bool jitter = false;
};

/// Slots 0-3: identity; 4-11: jitter only; 12-17: hue only; 18-23: hue and jitter.
using CarAugPlan = std::array<PlanEntry, kVariantCount>;

CarAugPlan draw_plan(RandomStream& rng);

struct PlanCensus {
  int jitter = 0;
  int hue = 0;
  int both = 0;
  int identity = 0;
};

PlanCensus census(const CarAugPlan& plan);

struct Augmented {
  std::vector<RgbImage> variants;  // kVariantCount images
  CarAugPlan plan;
};

Augmented augment_24(const RgbImage& img, RandomStream& rng, double angle_bound_deg = kDefaultAngleBoundDeg);

}  // namespace patchset::caraug
