#pragma once

#include <array>
#include <cstdint>
#include <string_view>

#include "patchset/image.hpp"

namespace patchset {

enum class ResampleMethod : std::uint8_t { Bilinear = 0, Area = 1, Bicubic = 2, Lanczos = 3 };

inline constexpr std::array<ResampleMethod, 4> kAllResampleMethods{
    ResampleMethod::Bilinear, ResampleMethod::Area, ResampleMethod::Bicubic, ResampleMethod::Lanczos};

std::string_view to_string(ResampleMethod m);

/// Default chroma blur window.
inline constexpr int kChromaBlurWindow = 13;

/// sRGB (D65) -> CIE XYZ -> CIELAB, per pixel. Neutral inputs (R = G = B) map
/// to a = b = 0 exactly.
LabImage rgb_to_lab(const RgbImage& img);

/// Inverse of rgb_to_lab; out-of-gamut values are clamped to [0, 255].
RgbImage lab_to_rgb(const LabImage& lab);

/// Like lab_to_rgb, but pixels outside the sRGB gamut have their chroma
/// scaled toward neutral at constant L until representable, instead of being
/// clamped per channel (which can shift lightness by many units).
RgbImage lab_to_rgb_preserving_lightness(const LabImage& lab);

/// Single-pixel conversions, shared by the raster versions.
std::array<double, 3> rgb_to_lab_pixel(std::uint8_t r, std::uint8_t g, std::uint8_t b);
std::array<double, 3> lab_to_linear_rgb_pixel(double L, double a, double b);
std::array<double, 3> lab_to_linear_rgb_in_gamut(double L, double a, double b);

/// Mean over a k x k window with replicate borders. Throws std::invalid_argument
/// for even or non-positive k.
Plane box_blur(const Plane& plane, int k);

/// Blurs the a/b planes of the Lab representation with a k x k box; L is
/// left untouched. Converts back with lab_to_rgb_preserving_lightness.
RgbImage chroma_blur(const RgbImage& img, int k = kChromaBlurWindow);

/// Separable resampling with center-aligned pixel grids and replicate
/// borders. Throws std::invalid_argument for zero target dimensions.
RgbImage resample(const RgbImage& img, int out_w, int out_h, ResampleMethod method);

/// Scales so the short side equals `side`, then takes the centered
/// side x side window (extra odd pixel goes to the right/bottom margin).
RgbImage aspect_resize_center_crop(const RgbImage& img, int side, ResampleMethod method = ResampleMethod::Bilinear);

struct ResizeCropGeometry {
  int scaled_width;
  int scaled_height;
  int crop_x;
  int crop_y;
};

ResizeCropGeometry aspect_resize_geometry(int width, int height, int side);

}  // namespace patchset
