#include "kernels_impl.hpp"

#include <algorithm>
#include <cmath>

namespace patchset::kernels::scalar {

void weighted_row_sum(const double* const* rows, const double* weights, std::size_t taps, double* out,
                      std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t t = 0; t < taps; ++t) acc += weights[t] * rows[t][i];
    out[i] = acc;
  }
}

void box_sum_vertical(const double* in, double* out, std::size_t width, std::size_t height, int radius) {
  const auto last = static_cast<std::ptrdiff_t>(height) - 1;
  auto row = [&](std::ptrdiff_t y) { return in + std::clamp<std::ptrdiff_t>(y, 0, last) * width; };

  for (std::size_t x = 0; x < width; ++x) {
    double acc = 0.0;
    for (std::ptrdiff_t d = -radius; d <= radius; ++d) acc += row(d)[x];
    out[x] = acc;
  }
  for (std::ptrdiff_t y = 1; y <= last; ++y) {
    const double* add = row(y + radius);
    const double* sub = row(y - radius - 1);
    const double* prev = out + (y - 1) * width;
    double* cur = out + y * width;
    for (std::size_t x = 0; x < width; ++x) cur[x] = (prev[x] + add[x]) - sub[x];
  }
}

void quantize_u8(const double* in, std::uint8_t* out, std::size_t n) {
  for (std::size_t i = 0; i < n; ++i) {
    const double v = std::min(std::max(in[i], 0.0), 255.0);
    out[i] = static_cast<std::uint8_t>(std::floor(v + 0.5));
  }
}

}  // namespace patchset::kernels::scalar
