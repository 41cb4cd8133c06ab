#pragma once

#include "patchset/kernels.hpp"

namespace patchset::kernels {

namespace scalar {
void weighted_row_sum(const double* const* rows, const double* weights, std::size_t taps, double* out,
                      std::size_t n);
void box_sum_vertical(const double* in, double* out, std::size_t width, std::size_t height, int radius);
void quantize_u8(const double* in, std::uint8_t* out, std::size_t n);
}  // namespace scalar

#ifdef PATCHSET_HAVE_AVX2
namespace avx2 {
void weighted_row_sum(const double* const* rows, const double* weights, std::size_t taps, double* out,
                      std::size_t n);
void box_sum_vertical(const double* in, double* out, std::size_t width, std::size_t height, int radius);
void quantize_u8(const double* in, std::uint8_t* out, std::size_t n);
}  // namespace avx2
#endif

}  // namespace patchset::kernels
