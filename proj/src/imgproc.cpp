#include "patchset/imgproc.hpp"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include "patchset/kernels.hpp"

namespace patchset {

RgbImage::RgbImage(int width, int height) : RgbImage(width, height, {}) {}

RgbImage::RgbImage(int width, int height, std::vector<std::uint8_t> data)
    : width_(width), height_(height), data_(std::move(data)) {
  if (width < 1 || height < 1) throw std::invalid_argument("image dimensions must be positive");
  const std::size_t expected = static_cast<std::size_t>(width) * height * 3;
  if (data_.empty()) data_.assign(expected, 0);
  if (data_.size() != expected) {
    throw std::invalid_argument("image buffer holds " + std::to_string(data_.size()) + " bytes, expected " +
                                std::to_string(expected));
  }
}

RgbImage RgbImage::crop(int x, int y, int w, int h) const {
  if (x < 0 || y < 0 || w < 1 || h < 1 || x + w > width_ || y + h > height_) {
    throw std::out_of_range("crop window outside image");
  }
  RgbImage out(w, h);
  for (int r = 0; r < h; ++r) std::copy_n(pixel(x, y + r), static_cast<std::size_t>(w) * 3, out.row(r));
  return out;
}

Plane::Plane(int w, int h, double fill) : width(w), height(h), values(static_cast<std::size_t>(w) * h, fill) {
  if (w < 1 || h < 1) throw std::invalid_argument("plane dimensions must be positive");
}

std::string_view to_string(ResampleMethod m) {
  switch (m) {
    case ResampleMethod::Bilinear:
      return "bilinear";
    case ResampleMethod::Area:
      return "area";
    case ResampleMethod::Bicubic:
      return "bicubic";
    case ResampleMethod::Lanczos:
      return "lanczos";
  }
  return "unknown";
}

// ---------------------------------------------------------------------------
// Color conversion

namespace {

using Mat3 = std::array<std::array<double, 3>, 3>;

// sRGB primaries, D65. Each row is divided by its sum so that the reference
// white maps to (1, 1, 1).
constexpr Mat3 kRgbToXyz{{{0.4124564, 0.3575761, 0.1804375},
                          {0.2126729, 0.7151522, 0.0721750},
                          {0.0193339, 0.1191920, 0.9503041}}};

constexpr double kEpsilon = 216.0 / 24389.0;  // (6/29)^3
constexpr double kKappa = 24389.0 / 27.0;

Mat3 normalized_forward() {
  Mat3 m = kRgbToXyz;
  for (auto& row : m) {
    const double s = row[0] + row[1] + row[2];
    for (double& v : row) v /= s;
  }
  return m;
}

Mat3 invert(const Mat3& m) {
  const double c00 = m[1][1] * m[2][2] - m[1][2] * m[2][1];
  const double c01 = m[1][2] * m[2][0] - m[1][0] * m[2][2];
  const double c02 = m[1][0] * m[2][1] - m[1][1] * m[2][0];
  const double det = m[0][0] * c00 + m[0][1] * c01 + m[0][2] * c02;
  Mat3 inv{};
  inv[0][0] = c00 / det;
  inv[1][0] = c01 / det;
  inv[2][0] = c02 / det;
  inv[0][1] = (m[0][2] * m[2][1] - m[0][1] * m[2][2]) / det;
  inv[1][1] = (m[0][0] * m[2][2] - m[0][2] * m[2][0]) / det;
  inv[2][1] = (m[0][1] * m[2][0] - m[0][0] * m[2][1]) / det;
  inv[0][2] = (m[0][1] * m[1][2] - m[0][2] * m[1][1]) / det;
  inv[1][2] = (m[0][2] * m[1][0] - m[0][0] * m[1][2]) / det;
  inv[2][2] = (m[0][0] * m[1][1] - m[0][1] * m[1][0]) / det;
  return inv;
}

double srgb_to_linear(double c) { return c <= 0.04045 ? c / 12.92 : std::pow((c + 0.055) / 1.055, 2.4); }

struct ColorTables {
  Mat3 forward = normalized_forward();
  Mat3 inverse = invert(forward);
  std::array<double, 256> linear{};
  // thresholds[i] = linear value at which the encoded 8-bit value reaches i + 1
  std::array<double, 255> thresholds{};

  ColorTables() {
    for (int i = 0; i < 256; ++i) linear[i] = srgb_to_linear(i / 255.0);
    for (int i = 0; i < 255; ++i) thresholds[i] = srgb_to_linear((i + 0.5) / 255.0);
  }
};

const ColorTables& tables() {
  static const ColorTables t;
  return t;
}

double lab_f(double t) { return t > kEpsilon ? std::cbrt(t) : (kKappa * t + 16.0) / 116.0; }

double lab_f_inv(double f) {
  const double f3 = f * f * f;
  return f3 > kEpsilon ? f3 : (116.0 * f - 16.0) / kKappa;
}

// Rows of a matrix whose rows sum to one, applied around the middle channel:
// row . (c0, c1, c2) = c1 + row[0] (c0 - c1) + row[2] (c2 - c1). Equal inputs
// come out unchanged.
double neutral_dot(const std::array<double, 3>& row, double c0, double c1, double c2) {
  return c1 + row[0] * (c0 - c1) + row[2] * (c2 - c1);
}

std::uint8_t encode_linear(double v) {
  const auto& th = tables().thresholds;
  return static_cast<std::uint8_t>(std::upper_bound(th.begin(), th.end(), v) - th.begin());
}

}  // namespace

std::array<double, 3> rgb_to_lab_pixel(std::uint8_t r8, std::uint8_t g8, std::uint8_t b8) {
  const auto& t = tables();
  const double r = t.linear[r8], g = t.linear[g8], b = t.linear[b8];
  const double x = neutral_dot(t.forward[0], r, g, b);
  const double y = neutral_dot(t.forward[1], r, g, b);
  const double z = neutral_dot(t.forward[2], r, g, b);
  const double fx = lab_f(x), fy = lab_f(y), fz = lab_f(z);
  const double L = y > kEpsilon ? 116.0 * fy - 16.0 : kKappa * y;
  return {L, 500.0 * (fx - fy), 200.0 * (fy - fz)};
}

std::array<double, 3> lab_to_linear_rgb_pixel(double L, double a, double b) {
  const auto& t = tables();
  const double fy = (L + 16.0) / 116.0;
  const double y = L > kKappa * kEpsilon ? fy * fy * fy : L / kKappa;
  const double x = a == 0.0 ? y : lab_f_inv(fy + a / 500.0);
  const double z = b == 0.0 ? y : lab_f_inv(fy - b / 200.0);
  return {neutral_dot(t.inverse[0], x, y, z), neutral_dot(t.inverse[1], x, y, z),
          neutral_dot(t.inverse[2], x, y, z)};
}

LabImage rgb_to_lab(const RgbImage& img) {
  LabImage lab{Plane(img.width(), img.height()), Plane(img.width(), img.height()),
               Plane(img.width(), img.height())};
  const auto src = img.data();
  const std::size_t n = lab.L.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto [L, a, b] = rgb_to_lab_pixel(src[3 * i], src[3 * i + 1], src[3 * i + 2]);
    lab.L.values[i] = L;
    lab.a.values[i] = a;
    lab.b.values[i] = b;
  }
  return lab;
}

RgbImage lab_to_rgb(const LabImage& lab) {
  RgbImage out(lab.width(), lab.height());
  auto dst = out.data();
  const std::size_t n = lab.L.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto rgb = lab_to_linear_rgb_pixel(lab.L.values[i], lab.a.values[i], lab.b.values[i]);
    dst[3 * i] = encode_linear(rgb[0]);
    dst[3 * i + 1] = encode_linear(rgb[1]);
    dst[3 * i + 2] = encode_linear(rgb[2]);
  }
  return out;
}

// ---------------------------------------------------------------------------
// Box blur

namespace {

void transpose(const double* in, double* out, std::size_t w, std::size_t h) {
  constexpr std::size_t kBlock = 32;
  for (std::size_t y0 = 0; y0 < h; y0 += kBlock) {
    for (std::size_t x0 = 0; x0 < w; x0 += kBlock) {
      const std::size_t y1 = std::min(y0 + kBlock, h), x1 = std::min(x0 + kBlock, w);
      for (std::size_t y = y0; y < y1; ++y)
        for (std::size_t x = x0; x < x1; ++x) out[x * h + y] = in[y * w + x];
    }
  }
}

}  // namespace

Plane box_blur(const Plane& plane, int k) {
  if (k < 1 || k % 2 == 0) throw std::invalid_argument("box window must be odd and positive, got " + std::to_string(k));
  const auto& kern = kernels::active();
  const std::size_t w = plane.width, h = plane.height;
  const int radius = k / 2;

  std::vector<double> a(w * h), b(w * h);
  kern.box_sum_vertical(plane.values.data(), a.data(), w, h, radius);
  transpose(a.data(), b.data(), w, h);
  kern.box_sum_vertical(b.data(), a.data(), h, w, radius);

  Plane out(plane.width, plane.height);
  transpose(a.data(), out.values.data(), h, w);
  const double area = static_cast<double>(k) * k;
  for (double& v : out.values) v /= area;
  return out;
}

namespace {

// Round-off slack so colors that start in gamut are never pulled toward gray.
constexpr double kGamutSlack = 1e-6;

bool in_gamut(const std::array<double, 3>& rgb) {
  return std::all_of(rgb.begin(), rgb.end(), [](double v) { return v >= -kGamutSlack && v <= 1.0 + kGamutSlack; });
}

std::array<double, 3> clamp_unit(std::array<double, 3> rgb) {
  for (double& v : rgb) v = std::clamp(v, 0.0, 1.0);
  return rgb;
}

}  // namespace

std::array<double, 3> lab_to_linear_rgb_in_gamut(double L, double a, double b) {
  L = std::clamp(L, 0.0, 100.0);
  auto rgb = lab_to_linear_rgb_pixel(L, a, b);
  if (in_gamut(rgb)) return clamp_unit(rgb);
  // Neutral at the same L is always representable; bisect the chroma scale.
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 24; ++i) {
    const double mid = 0.5 * (lo + hi);
    if (in_gamut(lab_to_linear_rgb_pixel(L, a * mid, b * mid))) {
      lo = mid;
    } else {
      hi = mid;
    }
  }
  return clamp_unit(lab_to_linear_rgb_pixel(L, a * lo, b * lo));
}

RgbImage lab_to_rgb_preserving_lightness(const LabImage& lab) {
  RgbImage out(lab.width(), lab.height());
  auto dst = out.data();
  const std::size_t n = lab.L.values.size();
  for (std::size_t i = 0; i < n; ++i) {
    const auto rgb = lab_to_linear_rgb_in_gamut(lab.L.values[i], lab.a.values[i], lab.b.values[i]);
    dst[3 * i] = encode_linear(rgb[0]);
    dst[3 * i + 1] = encode_linear(rgb[1]);
    dst[3 * i + 2] = encode_linear(rgb[2]);
  }
  return out;
}

RgbImage chroma_blur(const RgbImage& img, int k) {
  LabImage lab = rgb_to_lab(img);
  lab.a = box_blur(lab.a, k);
  lab.b = box_blur(lab.b, k);
  return lab_to_rgb_preserving_lightness(lab);
}

// ---------------------------------------------------------------------------
// Resampling

namespace {

struct TapTable {
  std::vector<int> first;      // first source index per output index
  std::vector<int> count;      // taps per output index
  std::vector<double> weights; // count.size() x max_taps
  int max_taps = 0;

  const double* weights_for(int i) const { return weights.data() + static_cast<std::size_t>(i) * max_taps; }
};

double sinc(double x) {
  if (x == 0.0) return 1.0;
  const double px = std::numbers::pi * x;
  return std::sin(px) / px;
}

double kernel_value(ResampleMethod m, double x) {
  x = std::abs(x);
  switch (m) {
    case ResampleMethod::Bilinear:
      return x < 1.0 ? 1.0 - x : 0.0;
    case ResampleMethod::Bicubic: {
      constexpr double a = -0.5;
      if (x < 1.0) return ((a + 2.0) * x - (a + 3.0)) * x * x + 1.0;
      if (x < 2.0) return (((x - 5.0) * x + 8.0) * x - 4.0) * a;
      return 0.0;
    }
    case ResampleMethod::Lanczos:
      return x < 3.0 ? sinc(x) * sinc(x / 3.0) : 0.0;
    case ResampleMethod::Area:
      break;
  }
  return 0.0;
}

double kernel_radius(ResampleMethod m) {
  switch (m) {
    case ResampleMethod::Bilinear:
      return 1.0;
    case ResampleMethod::Bicubic:
      return 2.0;
    case ResampleMethod::Lanczos:
      return 3.0;
    case ResampleMethod::Area:
      break;
  }
  return 1.0;
}

// Weights of every source index contributing to output index i, with
// replicate borders folded into the edge samples.
TapTable build_taps(int in_size, int out_size, ResampleMethod method) {
  const double scale = static_cast<double>(in_size) / out_size;
  std::vector<std::vector<double>> dense(out_size);
  TapTable t;
  t.first.resize(out_size);
  t.count.resize(out_size);

  for (int i = 0; i < out_size; ++i) {
    std::vector<std::pair<int, double>> raw;
    if (method == ResampleMethod::Area) {
      const double lo = i * scale, hi = (i + 1) * scale;
      for (int j = static_cast<int>(std::floor(lo)); j < static_cast<int>(std::ceil(hi)); ++j) {
        const double overlap = std::min<double>(j + 1, hi) - std::max<double>(j, lo);
        if (overlap > 0.0) raw.emplace_back(j, overlap);
      }
    } else {
      const double filter_scale = std::max(scale, 1.0);
      const double support = kernel_radius(method) * filter_scale;
      const double center = (i + 0.5) * scale;
      const int lo = static_cast<int>(std::floor(center - support));
      const int hi = static_cast<int>(std::ceil(center + support));
      for (int j = lo; j <= hi; ++j) {
        const double w = kernel_value(method, (j + 0.5 - center) / filter_scale);
        if (w != 0.0) raw.emplace_back(j, w);
      }
    }
    double sum = 0.0;
    for (const auto& [j, w] : raw) sum += w;

    int first = in_size, last = -1;
    for (auto& [j, w] : raw) {
      j = std::clamp(j, 0, in_size - 1);
      first = std::min(first, j);
      last = std::max(last, j);
    }
    auto& d = dense[i];
    d.assign(last - first + 1, 0.0);
    for (const auto& [j, w] : raw) d[j - first] += w / sum;
    t.first[i] = first;
    t.count[i] = last - first + 1;
    t.max_taps = std::max(t.max_taps, t.count[i]);
  }

  t.weights.assign(static_cast<std::size_t>(out_size) * t.max_taps, 0.0);
  for (int i = 0; i < out_size; ++i) std::copy(dense[i].begin(), dense[i].end(), t.weights.begin() + i * t.max_taps);
  return t;
}

}  // namespace

RgbImage resample(const RgbImage& img, int out_w, int out_h, ResampleMethod method) {
  if (out_w < 1 || out_h < 1) throw std::invalid_argument("resample target dimensions must be positive");
  const auto& kern = kernels::active();
  const TapTable tx = build_taps(img.width(), out_w, method);
  const TapTable ty = build_taps(img.height(), out_h, method);
  const std::size_t out_row = static_cast<std::size_t>(out_w) * 3;

  // Horizontal pass over only the source rows the vertical taps touch.
  const int row_lo = ty.first.front();
  const int row_hi = ty.first.back() + ty.count.back() - 1;
  std::vector<double> horiz(static_cast<std::size_t>(row_hi - row_lo + 1) * out_row);
  for (int y = row_lo; y <= row_hi; ++y) {
    const std::uint8_t* src = img.row(y);
    double* dst = horiz.data() + static_cast<std::size_t>(y - row_lo) * out_row;
    for (int x = 0; x < out_w; ++x) {
      const double* w = tx.weights_for(x);
      const std::uint8_t* s = src + static_cast<std::size_t>(tx.first[x]) * 3;
      double r = 0.0, g = 0.0, b = 0.0;
      for (int t = 0; t < tx.count[x]; ++t) {
        r += w[t] * s[3 * t];
        g += w[t] * s[3 * t + 1];
        b += w[t] * s[3 * t + 2];
      }
      dst[3 * x] = r;
      dst[3 * x + 1] = g;
      dst[3 * x + 2] = b;
    }
  }

  RgbImage out(out_w, out_h);
  std::vector<double> acc(out_row);
  std::vector<const double*> rows(ty.max_taps);
  for (int y = 0; y < out_h; ++y) {
    for (int t = 0; t < ty.count[y]; ++t)
      rows[t] = horiz.data() + static_cast<std::size_t>(ty.first[y] + t - row_lo) * out_row;
    kern.weighted_row_sum(rows.data(), ty.weights_for(y), ty.count[y], acc.data(), out_row);
    kern.quantize_u8(acc.data(), out.row(y), out_row);
  }
  return out;
}

ResizeCropGeometry aspect_resize_geometry(int width, int height, int side) {
  if (side < 1) throw std::invalid_argument("target side must be positive");
  const auto scaled = [&](long long other, long long shortest) {
    // round(other * side / shortest)
    const long long v = (2 * other * side + shortest) / (2 * shortest);
    return static_cast<int>(std::max<long long>(v, side));
  };
  ResizeCropGeometry g{};
  if (width <= height) {
    g.scaled_width = side;
    g.scaled_height = scaled(height, width);
  } else {
    g.scaled_height = side;
    g.scaled_width = scaled(width, height);
  }
  g.crop_x = (g.scaled_width - side) / 2;
  g.crop_y = (g.scaled_height - side) / 2;
  return g;
}

RgbImage aspect_resize_center_crop(const RgbImage& img, int side, ResampleMethod method) {
  const ResizeCropGeometry g = aspect_resize_geometry(img.width(), img.height(), side);
  if (g.scaled_width == img.width() && g.scaled_height == img.height()) {
    return g.crop_x == 0 && g.crop_y == 0 ? img : img.crop(g.crop_x, g.crop_y, side, side);
  }
  return resample(img, g.scaled_width, g.scaled_height, method).crop(g.crop_x, g.crop_y, side, side);
}

}  // namespace patchset
