#pragma once

#include <array>
#include <cstdint>
#include <optional>
#include <string>
#include <string_view>
#include <vector>

#include "patchset/image.hpp"
#include "patchset/labels.hpp"
#include "patchset/patchgrid.hpp"
#include "patchset/record.hpp"
#include "patchset/rng.hpp"

namespace patchset {

enum class RotationMode : std::uint8_t { None = 1, Two = 2, Four = 4 };

/// Per-sample augmentation switches. Each flag corresponds to one ablation
/// step, so any intermediate data condition can be reproduced.
struct AugmentConfig {
  bool enable_cb = true;   // chroma blur of the source planes
  bool enable_yj = true;   // yoked (vs independent) crop jitter
  bool enable_ubt = true;  // yoked mirror + zoom + crop
  bool enable_rrm = true;  // per-patch random resampling method (only with UBT)
  bool enable_ra = true;   // random aperture on two of three patches
  bool enable_channel_drop = false;
  RotationMode rotations = RotationMode::Four;
  int aperture_min = 64;
  int aperture_max = 96;
  int zoom_min = 96;
  int zoom_max = 128;
  std::array<std::uint8_t, 3> fill_rgb{124, 117, 104};
  /// Configuration families that produce samples; empty means all.
  std::vector<Family> families;

  /// Throws std::invalid_argument on broken ranges.
  void validate() const;

  bool family_enabled(Family f) const;
  int num_rots() const { return static_cast<int>(rotations); }

  friend bool operator==(const AugmentConfig&, const AugmentConfig&) = default;
};

/// Named ablation presets, cumulative in the order returned by preset_names().
AugmentConfig preset(std::string_view name);
const std::vector<std::string>& preset_names();

/// Configuration ids of `catalog` that produce samples under `cfg`, ascending.
std::vector<int> active_configs(const ConfigCatalog& catalog, const AugmentConfig& cfg);

// ---------------------------------------------------------------------------

/// Lossless rotation by 90 degrees * quarter_turns, counter-clockwise.
/// Odd turns require a square image (std::invalid_argument otherwise).
RgbImage rotate_image(const RgbImage& img, int quarter_turns);

RgbImage flip_horizontal(const RgbImage& img);

/// Flips all three patches, reorders them to the mirror partner's P1..P3
/// order and relabels the set with the partner's id.
PatchSet mirror_set(PatchSet set, const ConfigCatalog& catalog);
PatchSet apply_mirror(PatchSet set, const ConfigCatalog& catalog, RandomStream& rng);

struct ZoomDraw {
  int side = kPatchSide;  // zoomed size in [zoom_min, zoom_max]
  int dx = 0;             // crop offset inside the zoomed patch
  int dy = 0;
  std::array<ResampleMethod, 3> methods{ResampleMethod::Bilinear, ResampleMethod::Bilinear, ResampleMethod::Bilinear};
};

ZoomDraw draw_zoom(RandomStream& rng, const AugmentConfig& cfg);
PatchSet apply_ubt_zoom_crop(PatchSet set, const ZoomDraw& draw);
PatchSet apply_ubt_zoom_crop(PatchSet set, RandomStream& rng, const AugmentConfig& cfg);

struct ApertureSpec {
  int side = kPatchSide;
  int x = 0;
  int y = 0;
  int untouched = 2;  // index of the patch left intact; the other two are targets

  bool targets(int patch) const { return patch != untouched; }
  friend bool operator==(const ApertureSpec&, const ApertureSpec&) = default;
};

ApertureSpec draw_aperture(RandomStream& rng, const AugmentConfig& cfg);
/// Pixels outside the aperture square of both target patches become fill.
PatchSet apply_aperture(PatchSet set, const ApertureSpec& spec, std::array<std::uint8_t, 3> fill);
PatchSet apply_aperture(PatchSet set, RandomStream& rng, const AugmentConfig& cfg);

/// Keeps one random channel per patch and replaces the others with the
/// fill color (the channel-dropping baseline).
PatchSet apply_channel_drop(PatchSet set, RandomStream& rng, const AugmentConfig& cfg);

inline constexpr int kLayer4Window = 48;
inline constexpr int kLayer4Stride = 16;

/// Number of 48x48 windows at stride 16 inside a 96x96 patch that lie fully
/// within the aperture square (side, x, y). Brute force.
int layer4_coverage(int side, int x, int y);

// ---------------------------------------------------------------------------

/// Source planes of one image, optionally pre-rotated. Rotating a plane and
/// then extracting equals extracting from the cached rotation, so the
/// pipeline computes each rotation once per image.
class SampleSource {
 public:
  SampleSource(GridPlanes planes, const ConfigCatalog& catalog);

  /// Pool of the image rotated by quarter_turns, built on first use.
  const PatchPool& pool(int quarter_turns);

 private:
  GridPlanes planes_;
  const ConfigCatalog* catalog_;
  std::array<std::optional<PatchPool>, 4> pools_;
};

struct SampleKey {
  std::uint64_t seed = 0;
  std::uint64_t image_id = 0;
  std::uint64_t config_id = 0;
  std::uint64_t epoch = 0;
};

RandomStream sample_stream(const SampleKey& key);

/// Runs the full per-sample stack in its fixed order:
/// rotation draw -> rotate planes -> extract -> assemble -> mirror (UBT) ->
/// zoom/crop (UBT) or yoked crop (YJ) or random crop -> channel drop -> aperture.
PatchSet make_patch_set(SampleSource& source, int config_id, const ConfigCatalog& catalog, const SampleKey& key,
                        const AugmentConfig& cfg);
PatchSet make_patch_set(const GridPlanes& planes, int config_id, const ConfigCatalog& catalog, const SampleKey& key,
                        const AugmentConfig& cfg);

SampleRecord to_record(const PatchSet& set, const ClassSpace& space);

SampleRecord make_sample(const GridPlanes& planes, int config_id, const ConfigCatalog& catalog, const SampleKey& key,
                         const AugmentConfig& cfg);

}  // namespace patchset
