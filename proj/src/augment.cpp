#include "patchset/augment.hpp"

#include <algorithm>
#include <stdexcept>

namespace patchset {

void AugmentConfig::validate() const {
  if (!(64 <= aperture_min && aperture_min <= aperture_max && aperture_max <= kPatchSide)) {
    throw std::invalid_argument("aperture range must satisfy 64 <= min <= max <= 96");
  }
  if (!(kPatchSide <= zoom_min && zoom_min <= zoom_max)) {
    throw std::invalid_argument("zoom range must satisfy 96 <= min <= max");
  }
}

bool AugmentConfig::family_enabled(Family f) const {
  return families.empty() || std::find(families.begin(), families.end(), f) != families.end();
}

const std::vector<std::string>& preset_names() {
  static const std::vector<std::string> names{"baseline",
                                              "cb",
                                              "cb+yj",
                                              "cb+yj+tp",
                                              "cb+yj+tp+epc",
                                              "cb+yj+tp+epc+ubt",
                                              "cb+yj+tp+epc+ubt+ra",
                                              "cb+yj+tp+epc+ubt+ra+rwc",
                                              "full"};
  return names;
}

AugmentConfig preset(std::string_view name) {
  // Short aliases name the last tool added.
  static const std::vector<std::pair<std::string_view, std::string_view>> aliases{
      {"yj", "cb+yj"}, {"tp", "cb+yj+tp"}, {"epc", "cb+yj+tp+epc"}, {"ubt", "cb+yj+tp+epc+ubt"},
      {"ra", "cb+yj+tp+epc+ubt+ra"}, {"rwc", "cb+yj+tp+epc+ubt+ra+rwc"}};
  for (const auto& [alias, full] : aliases)
    if (name == alias) name = full;

  const auto& names = preset_names();
  const auto it = std::find(names.begin(), names.end(), name);
  if (it == names.end()) throw std::invalid_argument("unknown preset '" + std::string(name) + "'");
  const auto level = it - names.begin();

  AugmentConfig c;
  c.enable_channel_drop = level == 0;
  c.enable_cb = level >= 1;
  c.enable_yj = level >= 2;
  c.families = level >= 4 ? std::vector<Family>{} : std::vector<Family>{Family::ThreeByThree};
  c.enable_ubt = level >= 5;
  c.enable_rrm = level >= 5;
  c.enable_ra = level >= 6;
  c.rotations = level >= 8 ? RotationMode::Four : level >= 7 ? RotationMode::Two : RotationMode::None;
  return c;
}

std::vector<int> active_configs(const ConfigCatalog& catalog, const AugmentConfig& cfg) {
  std::vector<int> ids;
  for (const auto& c : catalog.configs)
    if (cfg.family_enabled(c.family)) ids.push_back(c.id);
  return ids;
}

// ---------------------------------------------------------------------------

RgbImage rotate_image(const RgbImage& img, int quarter_turns) {
  const int turns = ((quarter_turns % 4) + 4) % 4;
  const int w = img.width(), h = img.height();
  if (turns % 2 == 1 && w != h) throw std::invalid_argument("odd quarter turns need a square image");
  if (turns == 0) return img;

  RgbImage out(turns % 2 ? h : w, turns % 2 ? w : h);
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      int nx = 0, ny = 0;
      switch (turns) {
        case 1:
          nx = y;
          ny = w - 1 - x;
          break;
        case 2:
          nx = w - 1 - x;
          ny = h - 1 - y;
          break;
        default:
          nx = h - 1 - y;
          ny = x;
          break;
      }
      std::copy_n(img.pixel(x, y), 3, out.pixel(nx, ny));
    }
  }
  return out;
}

RgbImage flip_horizontal(const RgbImage& img) {
  RgbImage out(img.width(), img.height());
  const int w = img.width();
  for (int y = 0; y < img.height(); ++y)
    for (int x = 0; x < w; ++x) std::copy_n(img.pixel(x, y), 3, out.pixel(w - 1 - x, y));
  return out;
}

PatchSet mirror_set(PatchSet set, const ConfigCatalog& catalog) {
  const PatchConfiguration& cfg = catalog.config(set.config_id);
  PatchSet out;
  out.image_id = set.image_id;
  out.config_id = cfg.mirror_id;
  out.rot_index = set.rot_index;
  out.flags = set.flags ^ flags::kMirrored;
  for (int i = 0; i < 3; ++i) {
    const int src = cfg.mirror_order[i];
    out.patches[i] = flip_horizontal(set.patches[src]);
    out.provenance[i] = set.provenance[src];
    out.provenance[i].mirrored = !out.provenance[i].mirrored;
  }
  return out;
}

PatchSet apply_mirror(PatchSet set, const ConfigCatalog& catalog, RandomStream& rng) {
  if (rng.coin()) return mirror_set(std::move(set), catalog);
  return set;
}

ZoomDraw draw_zoom(RandomStream& rng, const AugmentConfig& cfg) {
  ZoomDraw d;
  d.side = rng.uniform_int(cfg.zoom_min, cfg.zoom_max);
  d.dx = rng.uniform_int(0, d.side - kPatchSide);
  d.dy = rng.uniform_int(0, d.side - kPatchSide);
  // The method choice is the only per-patch draw.
  for (auto& m : d.methods) m = cfg.enable_rrm ? kAllResampleMethods[rng.below(4)] : ResampleMethod::Bilinear;
  return d;
}

PatchSet apply_ubt_zoom_crop(PatchSet set, const ZoomDraw& d) {
  if (d.side < kPatchSide || d.dx < 0 || d.dy < 0 || d.dx + kPatchSide > d.side || d.dy + kPatchSide > d.side) {
    throw std::out_of_range("zoom crop window outside the zoomed patch");
  }
  for (int i = 0; i < 3; ++i) {
    auto& p = set.patches[i];
    if (p.width() != kSourcePatchSide || p.height() != kSourcePatchSide) {
      throw std::invalid_argument("zoom expects 110x110 patches");
    }
    p = resample(p, d.side, d.side, d.methods[i]).crop(d.dx, d.dy, kPatchSide, kPatchSide);
    auto& prov = set.provenance[i];
    prov.zoom_side = d.side;
    prov.crop_x = d.dx;
    prov.crop_y = d.dy;
    prov.method = d.methods[i];
    prov.resampled = true;
  }
  set.flags |= flags::kZoomCrop;
  return set;
}

PatchSet apply_ubt_zoom_crop(PatchSet set, RandomStream& rng, const AugmentConfig& cfg) {
  PatchSet out = apply_ubt_zoom_crop(std::move(set), draw_zoom(rng, cfg));
  if (cfg.enable_rrm) out.flags |= flags::kRandomResample;
  return out;
}

ApertureSpec draw_aperture(RandomStream& rng, const AugmentConfig& cfg) {
  ApertureSpec s;
  s.side = rng.uniform_int(cfg.aperture_min, cfg.aperture_max);
  s.x = rng.uniform_int(0, kPatchSide - s.side);
  s.y = rng.uniform_int(0, kPatchSide - s.side);
  s.untouched = static_cast<int>(rng.below(3));
  return s;
}

PatchSet apply_aperture(PatchSet set, const ApertureSpec& s, std::array<std::uint8_t, 3> fill) {
  if (s.side < 1 || s.x < 0 || s.y < 0 || s.x + s.side > kPatchSide || s.y + s.side > kPatchSide ||
      s.untouched < 0 || s.untouched > 2) {
    throw std::out_of_range("aperture does not fit the 96x96 patch");
  }
  for (int i = 0; i < 3; ++i) {
    if (!s.targets(i)) continue;
    RgbImage& p = set.patches[i];
    if (p.width() != kPatchSide || p.height() != kPatchSide) throw std::invalid_argument("aperture expects 96x96 patches");
    for (int y = 0; y < kPatchSide; ++y) {
      const bool row_inside = y >= s.y && y < s.y + s.side;
      for (int x = 0; x < kPatchSide; ++x) {
        if (row_inside && x >= s.x && x < s.x + s.side) continue;
        std::copy(fill.begin(), fill.end(), p.pixel(x, y));
      }
    }
    auto& prov = set.provenance[i];
    prov.apertured = true;
    prov.aperture_side = s.side;
    prov.aperture_x = s.x;
    prov.aperture_y = s.y;
  }
  set.flags |= flags::kAperture;
  return set;
}

PatchSet apply_aperture(PatchSet set, RandomStream& rng, const AugmentConfig& cfg) {
  return apply_aperture(std::move(set), draw_aperture(rng, cfg), cfg.fill_rgb);
}

PatchSet apply_channel_drop(PatchSet set, RandomStream& rng, const AugmentConfig& cfg) {
  for (int i = 0; i < 3; ++i) {
    const int keep = static_cast<int>(rng.below(3));
    auto data = set.patches[i].data();
    for (std::size_t px = 0; px < data.size(); px += 3)
      for (int c = 0; c < 3; ++c)
        if (c != keep) data[px + c] = cfg.fill_rgb[c];
    set.provenance[i].kept_channel = keep;
  }
  set.flags |= flags::kChannelDrop;
  return set;
}

int layer4_coverage(int side, int x, int y) {
  int count = 0;
  for (int wy = 0; wy + kLayer4Window <= kPatchSide; wy += kLayer4Stride) {
    for (int wx = 0; wx + kLayer4Window <= kPatchSide; wx += kLayer4Stride) {
      if (wx >= x && wy >= y && wx + kLayer4Window <= x + side && wy + kLayer4Window <= y + side) ++count;
    }
  }
  return count;
}

// ---------------------------------------------------------------------------

SampleSource::SampleSource(GridPlanes planes, const ConfigCatalog& catalog)
    : planes_(std::move(planes)), catalog_(&catalog) {}

const PatchPool& SampleSource::pool(int quarter_turns) {
  const int turns = ((quarter_turns % 4) + 4) % 4;
  auto& slot = pools_[turns];
  if (!slot) {
    if (turns == 0) {
      slot = extract_source_patches(planes_, *catalog_);
    } else {
      GridPlanes rotated;
      rotated.reserve(planes_.size());
      for (const auto& p : planes_) rotated.push_back(rotate_image(p, turns));
      slot = extract_source_patches(rotated, *catalog_);
    }
  }
  return *slot;
}

RandomStream sample_stream(const SampleKey& key) {
  return RandomStream::keyed({key.seed, key.image_id, key.config_id, key.epoch});
}

PatchSet make_patch_set(SampleSource& source, int config_id, const ConfigCatalog& catalog, const SampleKey& key,
                        const AugmentConfig& cfg) {
  RandomStream rng = sample_stream(key);
  const ClassSpace space = ClassSpace::make(catalog.size(), cfg.num_rots());
  const int rot_index = space.num_rots > 1 ? static_cast<int>(rng.below(space.num_rots)) : 0;
  const int turns = space.quarter_turns(rot_index);

  PatchSet set = assemble_set(source.pool(turns), catalog.config(config_id), static_cast<int>(key.image_id));
  set.rot_index = rot_index;
  for (auto& p : set.provenance) p.quarter_turns = turns;
  if (cfg.enable_cb) set.flags |= flags::kChromaBlur;

  if (cfg.enable_ubt) {
    set = apply_mirror(std::move(set), catalog, rng);
    set = apply_ubt_zoom_crop(std::move(set), rng, cfg);
  } else if (cfg.enable_yj) {
    set = yoked_crop(std::move(set), rng);
  } else {
    set = random_crop(std::move(set), rng);
  }
  if (cfg.enable_channel_drop) set = apply_channel_drop(std::move(set), rng, cfg);
  if (cfg.enable_ra) set = apply_aperture(std::move(set), rng, cfg);
  return set;
}

PatchSet make_patch_set(const GridPlanes& planes, int config_id, const ConfigCatalog& catalog, const SampleKey& key,
                        const AugmentConfig& cfg) {
  SampleSource source(planes, catalog);
  return make_patch_set(source, config_id, catalog, key, cfg);
}

SampleRecord to_record(const PatchSet& set, const ClassSpace& space) {
  SampleRecord rec;
  rec.class_id = static_cast<std::uint16_t>(encode_label(set.config_id, set.rot_index, space));
  rec.rot_index = static_cast<std::uint8_t>(set.rot_index);
  rec.config_id = static_cast<std::uint8_t>(set.config_id);
  rec.flags = set.flags;
  rec.patches = set.patches;
  return rec;
}

SampleRecord make_sample(const GridPlanes& planes, int config_id, const ConfigCatalog& catalog, const SampleKey& key,
                         const AugmentConfig& cfg) {
  const PatchSet set = make_patch_set(planes, config_id, catalog, key, cfg);
  return to_record(set, ClassSpace::make(catalog.size(), cfg.num_rots()));
}

}  // namespace patchset
