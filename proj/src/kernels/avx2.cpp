// Compiled with -mavx2 only; callers reach these through the dispatch table
// after a CPUID check.

#include "kernels_impl.hpp"

#include <immintrin.h>

#include <algorithm>
#include <cmath>
#include <cstring>

namespace patchset::kernels::avx2 {

void weighted_row_sum(const double* const* rows, const double* weights, std::size_t taps, double* out,
                      std::size_t n) {
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::size_t t = 0; t < taps; ++t) {
      // mul then add, matching the scalar rounding sequence
      acc = _mm256_add_pd(acc, _mm256_mul_pd(_mm256_set1_pd(weights[t]), _mm256_loadu_pd(rows[t] + i)));
    }
    _mm256_storeu_pd(out + i, acc);
  }
  for (; i < n; ++i) {
    double acc = 0.0;
    for (std::size_t t = 0; t < taps; ++t) acc += weights[t] * rows[t][i];
    out[i] = acc;
  }
}

void box_sum_vertical(const double* in, double* out, std::size_t width, std::size_t height, int radius) {
  const auto last = static_cast<std::ptrdiff_t>(height) - 1;
  auto row = [&](std::ptrdiff_t y) { return in + std::clamp<std::ptrdiff_t>(y, 0, last) * width; };

  std::size_t x = 0;
  for (; x + 4 <= width; x += 4) {
    __m256d acc = _mm256_setzero_pd();
    for (std::ptrdiff_t d = -radius; d <= radius; ++d) acc = _mm256_add_pd(acc, _mm256_loadu_pd(row(d) + x));
    _mm256_storeu_pd(out + x, acc);
  }
  for (; x < width; ++x) {
    double acc = 0.0;
    for (std::ptrdiff_t d = -radius; d <= radius; ++d) acc += row(d)[x];
    out[x] = acc;
  }

  for (std::ptrdiff_t y = 1; y <= last; ++y) {
    const double* add = row(y + radius);
    const double* sub = row(y - radius - 1);
    const double* prev = out + (y - 1) * width;
    double* cur = out + y * width;
    std::size_t xi = 0;
    for (; xi + 4 <= width; xi += 4) {
      const __m256d s = _mm256_add_pd(_mm256_loadu_pd(prev + xi), _mm256_loadu_pd(add + xi));
      _mm256_storeu_pd(cur + xi, _mm256_sub_pd(s, _mm256_loadu_pd(sub + xi)));
    }
    for (; xi < width; ++xi) cur[xi] = (prev[xi] + add[xi]) - sub[xi];
  }
}

void quantize_u8(const double* in, std::uint8_t* out, std::size_t n) {
  const __m256d lo = _mm256_setzero_pd();
  const __m256d hi = _mm256_set1_pd(255.0);
  const __m256d half = _mm256_set1_pd(0.5);
  std::size_t i = 0;
  for (; i + 4 <= n; i += 4) {
    __m256d v = _mm256_min_pd(_mm256_max_pd(_mm256_loadu_pd(in + i), lo), hi);
    v = _mm256_floor_pd(_mm256_add_pd(v, half));
    const __m128i q = _mm256_cvttpd_epi32(v);
    const __m128i packed16 = _mm_packus_epi32(q, q);
    const __m128i packed8 = _mm_packus_epi16(packed16, packed16);
    const int bytes = _mm_cvtsi128_si32(packed8);
    std::memcpy(out + i, &bytes, 4);
  }
  for (; i < n; ++i) {
    const double v = std::min(std::max(in[i], 0.0), 255.0);
    out[i] = static_cast<std::uint8_t>(std::floor(v + 0.5));
  }
}

}  // namespace patchset::kernels::avx2
