#pragma once

// Data-parallel inner loops used by the pixel primitives. Every kernel has a
// scalar reference and, where the CPU supports it, an AVX2 variant. Variants
// are required to produce bit-identical results, so backend choice never
// changes the bytes a pipeline run emits.

#include <cstddef>
#include <cstdint>
#include <string_view>

namespace patchset::kernels {

enum class Backend { Scalar, Avx2 };

std::string_view backend_name(Backend b);

struct KernelTable {
  Backend backend;

  /// out[i] = sum_t weights[t] * rows[t][i] for i < n, accumulated in tap order.
  void (*weighted_row_sum)(const double* const* rows, const double* weights, std::size_t taps, double* out,
                           std::size_t n);

  /// Column-wise sliding window sum with replicate borders:
  /// out(x, y) = sum_{d=-radius..radius} in(x, clamp(y + d)). Planes are width x height, row-major.
  void (*box_sum_vertical)(const double* in, double* out, std::size_t width, std::size_t height, int radius);

  /// out[i] = floor(clamp(in[i], 0, 255) + 0.5).
  void (*quantize_u8)(const double* in, std::uint8_t* out, std::size_t n);
};

const KernelTable& scalar_table();
/// Null when the build or the CPU lacks AVX2.
const KernelTable* avx2_table();

/// The table selected at startup (best available), unless overridden.
const KernelTable& active();

/// Forces a backend for the current process. Returns false if unavailable.
bool select_backend(Backend b);

}  // namespace patchset::kernels
