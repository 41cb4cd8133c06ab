#include "kernels_impl.hpp"

#include <atomic>

namespace patchset::kernels {
namespace {

constexpr KernelTable kScalar{Backend::Scalar, scalar::weighted_row_sum, scalar::box_sum_vertical,
                              scalar::quantize_u8};

#ifdef PATCHSET_HAVE_AVX2
constexpr KernelTable kAvx2{Backend::Avx2, avx2::weighted_row_sum, avx2::box_sum_vertical, avx2::quantize_u8};

bool cpu_has_avx2() {
#if defined(__GNUC__) && (defined(__x86_64__) || defined(__i386__))
  __builtin_cpu_init();
  return __builtin_cpu_supports("avx2");
#else
  return false;
#endif
}
#endif

const KernelTable* detect() {
#ifdef PATCHSET_HAVE_AVX2
  static const bool has = cpu_has_avx2();
  if (has) return &kAvx2;
#endif
  return nullptr;
}

std::atomic<const KernelTable*>& current() {
  static std::atomic<const KernelTable*> table{detect() ? detect() : &kScalar};
  return table;
}

}  // namespace

std::string_view backend_name(Backend b) {
  switch (b) {
    case Backend::Scalar:
      return "scalar";
    case Backend::Avx2:
      return "avx2";
  }
  return "unknown";
}

const KernelTable& scalar_table() { return kScalar; }

const KernelTable* avx2_table() { return detect(); }

const KernelTable& active() { return *current().load(std::memory_order_acquire); }

bool select_backend(Backend b) {
  const KernelTable* t = b == Backend::Scalar ? &kScalar : avx2_table();
  if (t == nullptr) return false;
  current().store(t, std::memory_order_release);
  return true;
}

}  // namespace patchset::kernels
