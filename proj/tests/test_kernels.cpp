#include <cstring>
#include <vector>

#include "doctest.h"
#include "patchset/imgproc.hpp"
#include "patchset/kernels.hpp"
#include "patchset/rng.hpp"
#include "synthetic.hpp"

using namespace patchset;
namespace k = patchset::kernels;

namespace {

std::vector<double> random_values(std::size_t n, RandomStream& rng, double lo, double hi) {
  std::vector<double> v(n);
  for (double& x : v) x = rng.uniform(lo, hi);
  return v;
}

bool same_bits(const std::vector<double>& a, const std::vector<double>& b) {
  return a.size() == b.size() && std::memcmp(a.data(), b.data(), a.size() * sizeof(double)) == 0;
}

struct BackendGuard {
  k::Backend saved = k::active().backend;
  ~BackendGuard() { k::select_backend(saved); }
};

}  // namespace

TEST_CASE("scalar backend is always selectable") {
  BackendGuard guard;
  CHECK(k::select_backend(k::Backend::Scalar));
  CHECK(k::active().backend == k::Backend::Scalar);
  CHECK(k::backend_name(k::Backend::Avx2) == "avx2");
}

TEST_CASE("avx2 weighted_row_sum matches scalar bit for bit") {
  const k::KernelTable* simd = k::avx2_table();
  if (simd == nullptr) {
    MESSAGE("AVX2 unavailable; equivalence not exercised");
    return;
  }
  RandomStream rng(11);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t n = 1 + rng.below(400);
    const std::size_t taps = 1 + rng.below(14);
    std::vector<std::vector<double>> rows(taps);
    std::vector<const double*> ptrs;
    for (auto& r : rows) {
      r = random_values(n, rng, -300.0, 300.0);
      ptrs.push_back(r.data());
    }
    const auto weights = random_values(taps, rng, -0.5, 1.5);
    std::vector<double> a(n), b(n);
    k::scalar_table().weighted_row_sum(ptrs.data(), weights.data(), taps, a.data(), n);
    simd->weighted_row_sum(ptrs.data(), weights.data(), taps, b.data(), n);
    REQUIRE(same_bits(a, b));
  }
}

TEST_CASE("avx2 box_sum_vertical matches scalar bit for bit") {
  const k::KernelTable* simd = k::avx2_table();
  if (simd == nullptr) return;
  RandomStream rng(12);
  for (int trial = 0; trial < 200; ++trial) {
    const std::size_t w = 1 + rng.below(70), h = 1 + rng.below(70);
    const int radius = static_cast<int>(rng.below(20));
    const auto in = random_values(w * h, rng, -120.0, 120.0);
    std::vector<double> a(w * h), b(w * h);
    k::scalar_table().box_sum_vertical(in.data(), a.data(), w, h, radius);
    simd->box_sum_vertical(in.data(), b.data(), w, h, radius);
    REQUIRE(same_bits(a, b));
  }
}

TEST_CASE("avx2 quantize_u8 matches scalar including halves and out-of-range values") {
  const k::KernelTable* simd = k::avx2_table();
  if (simd == nullptr) return;
  RandomStream rng(13);
  auto in = random_values(4099, rng, -50.0, 300.0);
  for (int i = 0; i < 256; ++i) in[i] = i + 0.5;  // exact ties round up
  in[300] = -0.0;
  in[301] = 254.5;
  in[302] = 255.49;
  std::vector<std::uint8_t> a(in.size()), b(in.size());
  k::scalar_table().quantize_u8(in.data(), a.data(), in.size());
  simd->quantize_u8(in.data(), b.data(), in.size());
  CHECK(a == b);
  CHECK(a[0] == 1);
  CHECK(a[254] == 255);
}

TEST_CASE("pixel primitives produce identical bytes under every backend") {
  if (k::avx2_table() == nullptr) return;
  BackendGuard guard;
  RandomStream rng(14);
  for (int trial = 0; trial < 20; ++trial) {
    const RgbImage img = testing::sweep_image(trial, 37 + trial, 29 + 2 * trial, rng);
    Plane plane(img.width(), img.height());
    for (double& v : plane.values) v = rng.uniform(-100, 100);
    const int out_w = 5 + static_cast<int>(rng.below(80)), out_h = 5 + static_cast<int>(rng.below(80));
    const ResampleMethod m = kAllResampleMethods[trial % 4];

    k::select_backend(k::Backend::Scalar);
    const RgbImage r_scalar = resample(img, out_w, out_h, m);
    const Plane b_scalar = box_blur(plane, 13);
    const RgbImage c_scalar = chroma_blur(img);

    k::select_backend(k::Backend::Avx2);
    CHECK(resample(img, out_w, out_h, m) == r_scalar);
    CHECK(same_bits(box_blur(plane, 13).values, b_scalar.values));
    CHECK(chroma_blur(img) == c_scalar);
  }
}
