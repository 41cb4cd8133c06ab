#pragma once

#include <array>
#include <cstdint>
#include <filesystem>
#include <stdexcept>
#include <string>
#include <string_view>
#include <vector>

#include "patchset/image.hpp"
#include "patchset/imgproc.hpp"
#include "patchset/rng.hpp"

namespace patchset {

inline constexpr int kSourcePatchSide = 110;
inline constexpr int kPatchSide = 96;
inline constexpr int kMaxJitter = kSourcePatchSide - kPatchSide;  // 14
inline constexpr int kCatalogSize = 20;
inline constexpr std::string_view kCatalogFormat = "patchset-catalog/1";

class CatalogError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

struct Offset {
  int x = 0;
  int y = 0;
  friend bool operator==(const Offset&, const Offset&) = default;
};

struct GridSpec {
  std::string name;
  int image_side = 0;
  int patch_side = kSourcePatchSide;
  std::vector<Offset> cells;

  friend bool operator==(const GridSpec&, const GridSpec&) = default;
};

enum class Family : std::uint8_t { ThreeByThree, TwoByTwo, Hybrid };

std::string_view to_string(Family f);
Family family_from_string(std::string_view s);

struct CellRef {
  int grid = 0;  // index into ConfigCatalog::grids
  int cell = 0;  // index into GridSpec::cells
  friend bool operator==(const CellRef&, const CellRef&) = default;
};

struct PatchConfiguration {
  int id = 0;
  Family family = Family::ThreeByThree;
  std::array<CellRef, 3> cells{};  // P1, P2, P3
  int mirror_id = 0;
  // Filled in by validation: after a horizontal flip, partner position i is
  // taken from this configuration's position mirror_order[i].
  std::array<int, 3> mirror_order{0, 1, 2};

  friend bool operator==(const PatchConfiguration&, const PatchConfiguration&) = default;
};

struct ConfigCatalog {
  std::vector<GridSpec> grids;
  std::vector<PatchConfiguration> configs;

  int size() const { return static_cast<int>(configs.size()); }
  int grid_index(std::string_view name) const;  // -1 if absent
  std::size_t pool_size() const;                 // total cells over all grids
  const PatchConfiguration& config(int id) const { return configs.at(static_cast<std::size_t>(id)); }

  friend bool operator==(const ConfigCatalog&, const ConfigCatalog&) = default;
};

/// Checks every catalog invariant and derives mirror_order. Throws
/// CatalogError naming the offending entry.
void validate_catalog(ConfigCatalog& catalog);

/// The shipped 20-configuration catalog (8 three-by-three lines, 4 L-shaped
/// two-by-two sets, 8 hybrids of the 3x3 and overlap grids).
const ConfigCatalog& default_catalog();

std::string serialize_catalog(const ConfigCatalog& catalog);
ConfigCatalog parse_catalog(std::string_view text);
ConfigCatalog load_catalog(const std::filesystem::path& path);

/// Horizontal reflection of a cell offset within its grid.
Offset reflect(const GridSpec& grid, Offset o);

// ---------------------------------------------------------------------------

/// One source image per catalog grid, in catalog grid order.
using GridPlanes = std::vector<RgbImage>;

/// All source patches of one image, pool[grid][cell].
struct PatchPool {
  std::vector<std::vector<RgbImage>> patches;

  const RgbImage& at(CellRef c) const;
  std::size_t size() const;
};

PatchPool extract_source_patches(const GridPlanes& planes, const ConfigCatalog& catalog);
/// Convenience for the default three-grid layout.
PatchPool extract_source_patches(const RgbImage& img384, const RgbImage& img256, const RgbImage& img196,
                                 const ConfigCatalog& catalog);

// ---------------------------------------------------------------------------

namespace flags {
inline constexpr std::uint8_t kChromaBlur = 1u << 0;
inline constexpr std::uint8_t kYokedCrop = 1u << 1;
inline constexpr std::uint8_t kZoomCrop = 1u << 2;
inline constexpr std::uint8_t kRandomResample = 1u << 3;
inline constexpr std::uint8_t kAperture = 1u << 4;
inline constexpr std::uint8_t kMirrored = 1u << 5;
inline constexpr std::uint8_t kChannelDrop = 1u << 6;
}  // namespace flags

/// What happened to one patch of a set; used to audit yoking.
struct PatchProvenance {
  int crop_x = -1;
  int crop_y = -1;
  int zoom_side = 0;  // 0: no zoom
  ResampleMethod method = ResampleMethod::Bilinear;
  bool resampled = false;
  bool mirrored = false;
  int quarter_turns = 0;
  bool apertured = false;
  int aperture_side = 0;
  int aperture_x = 0;
  int aperture_y = 0;
  int kept_channel = -1;  // channel drop; -1 when not applied

  friend bool operator==(const PatchProvenance&, const PatchProvenance&) = default;
};

struct PatchSet {
  int image_id = 0;
  int config_id = 0;
  int rot_index = 0;
  std::uint8_t flags = 0;
  std::array<RgbImage, 3> patches;
  std::array<PatchProvenance, 3> provenance;
};

/// Throws std::out_of_range if the pool lacks a referenced cell.
PatchSet assemble_set(const PatchPool& pool, const PatchConfiguration& config, int image_id);

struct CropOffset {
  int dx = 0;
  int dy = 0;
  friend bool operator==(const CropOffset&, const CropOffset&) = default;
};

CropOffset draw_crop_offset(RandomStream& rng);

/// Crops all three 110x110 patches to 96x96 at the same offset.
PatchSet yoked_crop(PatchSet set, CropOffset offset);
PatchSet yoked_crop(PatchSet set, RandomStream& rng);

/// Unyoked baseline: one independent offset per patch.
PatchSet random_crop(PatchSet set, const std::array<CropOffset, 3>& offsets);
PatchSet random_crop(PatchSet set, RandomStream& rng);

/// Records per image (one per configuration) and for a whole corpus.
constexpr std::uint64_t sets_per_corpus(std::uint64_t images, std::uint64_t configs_per_image = kCatalogSize) {
  return images * configs_per_image;
}

}  // namespace patchset
