#include "patchset/patchgrid.hpp"

#include <algorithm>
#include <fstream>
#include <set>
#include <sstream>

#include "json.hpp"

namespace patchset {

using nlohmann::json;

std::string_view to_string(Family f) {
  switch (f) {
    case Family::ThreeByThree:
      return "threebythree";
    case Family::TwoByTwo:
      return "twobytwo";
    case Family::Hybrid:
      return "hybrid";
  }
  return "unknown";
}

Family family_from_string(std::string_view s) {
  if (s == "threebythree") return Family::ThreeByThree;
  if (s == "twobytwo") return Family::TwoByTwo;
  if (s == "hybrid") return Family::Hybrid;
  throw CatalogError("unknown configuration family '" + std::string(s) + "'");
}

int ConfigCatalog::grid_index(std::string_view name) const {
  for (std::size_t i = 0; i < grids.size(); ++i)
    if (grids[i].name == name) return static_cast<int>(i);
  return -1;
}

std::size_t ConfigCatalog::pool_size() const {
  std::size_t n = 0;
  for (const auto& g : grids) n += g.cells.size();
  return n;
}

Offset reflect(const GridSpec& grid, Offset o) { return {grid.image_side - grid.patch_side - o.x, o.y}; }

namespace {

std::string config_tag(const PatchConfiguration& c) { return "config " + std::to_string(c.id); }

std::string describe(const ConfigCatalog& cat, CellRef r) {
  return cat.grids[r.grid].name + "[" + std::to_string(r.cell) + "]";
}

}  // namespace

void validate_catalog(ConfigCatalog& cat) {
  std::set<std::string> names;
  for (const auto& g : cat.grids) {
    if (!names.insert(g.name).second) throw CatalogError("duplicate grid name '" + g.name + "'");
    if (g.patch_side != kSourcePatchSide) {
      throw CatalogError("grid " + g.name + ": patch_side must be " + std::to_string(kSourcePatchSide));
    }
    if (g.image_side < g.patch_side) throw CatalogError("grid " + g.name + ": image_side smaller than patch_side");
    if (g.cells.empty()) throw CatalogError("grid " + g.name + ": no cells");
    for (std::size_t i = 0; i < g.cells.size(); ++i) {
      const Offset o = g.cells[i];
      if (o.x < 0 || o.y < 0 || o.x + g.patch_side > g.image_side || o.y + g.patch_side > g.image_side) {
        throw CatalogError("grid " + g.name + " cell " + std::to_string(i) + " at (" + std::to_string(o.x) + "," +
                           std::to_string(o.y) + ") is out of bounds: offset + " + std::to_string(g.patch_side) +
                           " > " + std::to_string(g.image_side));
      }
      for (std::size_t j = 0; j < i; ++j) {
        if (g.cells[j] == o) {
          throw CatalogError("grid " + g.name + " cells " + std::to_string(j) + " and " + std::to_string(i) +
                             " share an offset");
        }
      }
    }
  }

  if (cat.configs.size() != static_cast<std::size_t>(kCatalogSize)) {
    throw CatalogError("expected " + std::to_string(kCatalogSize) + " configurations, found " +
                       std::to_string(cat.configs.size()));
  }
  std::sort(cat.configs.begin(), cat.configs.end(), [](const auto& a, const auto& b) { return a.id < b.id; });
  for (std::size_t i = 0; i < cat.configs.size(); ++i) {
    const auto& c = cat.configs[i];
    if (i > 0 && cat.configs[i - 1].id == c.id) throw CatalogError("duplicate configuration id " + std::to_string(c.id));
    if (c.id != static_cast<int>(i)) {
      throw CatalogError("configuration ids must be 0.." + std::to_string(kCatalogSize - 1) + " without gaps; " +
                         config_tag(c) + " found at position " + std::to_string(i));
    }
  }

  for (const auto& c : cat.configs) {
    std::set<int> grids_used;
    for (const CellRef r : c.cells) {
      if (r.grid < 0 || r.grid >= static_cast<int>(cat.grids.size())) {
        throw CatalogError(config_tag(c) + ": unknown grid index " + std::to_string(r.grid));
      }
      if (r.cell < 0 || r.cell >= static_cast<int>(cat.grids[r.grid].cells.size())) {
        throw CatalogError(config_tag(c) + ": cell " + std::to_string(r.cell) + " does not exist in grid " +
                           cat.grids[r.grid].name);
      }
      grids_used.insert(r.grid);
    }
    if (c.cells[0] == c.cells[1] || c.cells[0] == c.cells[2] || c.cells[1] == c.cells[2]) {
      throw CatalogError(config_tag(c) + ": cells must be distinct");
    }
    if (c.family == Family::Hybrid && grids_used.size() != 2) {
      throw CatalogError(config_tag(c) + ": hybrid configurations must reference two distinct grids");
    }
    if (c.family != Family::Hybrid && grids_used.size() != 1) {
      throw CatalogError(config_tag(c) + ": non-hybrid configurations must use a single grid");
    }
  }

  for (auto& c : cat.configs) {
    if (c.mirror_id < 0 || c.mirror_id >= kCatalogSize) {
      throw CatalogError(config_tag(c) + ": mirror id " + std::to_string(c.mirror_id) + " out of range");
    }
    const auto& m = cat.configs[c.mirror_id];
    if (m.mirror_id != c.id) {
      throw CatalogError("mirror map is not an involution: " + config_tag(c) + " -> " + std::to_string(c.mirror_id) +
                         " -> " + std::to_string(m.mirror_id));
    }
    if (m.family != c.family) throw CatalogError(config_tag(c) + ": mirror partner belongs to another family");
    // A horizontally flipped set must be a reordering of the partner's cells.
    for (int i = 0; i < 3; ++i) {
      int found = -1;
      for (int j = 0; j < 3; ++j) {
        const CellRef src = c.cells[j];
        const GridSpec& g = cat.grids[src.grid];
        if (m.cells[i].grid == src.grid && g.cells[m.cells[i].cell] == reflect(g, g.cells[src.cell])) found = j;
      }
      if (found < 0) {
        throw CatalogError(config_tag(c) + ": mirror partner " + std::to_string(m.id) + " cell " +
                           describe(cat, m.cells[i]) + " is not the reflection of any cell");
      }
      c.mirror_order[i] = found;
    }
  }
}

namespace {

ConfigCatalog build_default() {
  ConfigCatalog cat;
  GridSpec g3{"grid3x3", 384, kSourcePatchSide, {}};
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) g3.cells.push_back({137 * c, 137 * r});
  GridSpec g2{"grid2x2", 256, kSourcePatchSide, {{0, 0}, {146, 0}, {0, 146}, {146, 146}}};
  // corners, center, mid-left, mid-right
  GridSpec ov{"overlap", 196, kSourcePatchSide, {{0, 0}, {86, 0}, {0, 86}, {86, 86}, {43, 43}, {0, 43}, {86, 43}}};
  cat.grids = {g3, g2, ov};

  constexpr int G3 = 0, G2 = 1, OV = 2;
  auto add = [&](Family f, CellRef a, CellRef b, CellRef c, int mirror) {
    const int id = static_cast<int>(cat.configs.size());
    cat.configs.push_back({id, f, {a, b, c}, mirror, {0, 1, 2}});
  };
  auto t = [](int cell) { return CellRef{G3, cell}; };
  auto s = [](int cell) { return CellRef{G2, cell}; };
  auto o = [](int cell) { return CellRef{OV, cell}; };

  // Lines through the 3x3 center, each in both endpoint orders.
  add(Family::ThreeByThree, t(1), t(4), t(7), 0);  // N-C-S
  add(Family::ThreeByThree, t(7), t(4), t(1), 1);  // S-C-N
  add(Family::ThreeByThree, t(3), t(4), t(5), 3);  // W-C-E
  add(Family::ThreeByThree, t(5), t(4), t(3), 2);  // E-C-W
  add(Family::ThreeByThree, t(0), t(4), t(8), 5);  // NW-C-SE
  add(Family::ThreeByThree, t(2), t(4), t(6), 4);  // NE-C-SW
  add(Family::ThreeByThree, t(8), t(4), t(0), 7);  // SE-C-NW
  add(Family::ThreeByThree, t(6), t(4), t(2), 6);  // SW-C-NE

  // L shapes, one corner omitted, clockwise from the top-left.
  add(Family::TwoByTwo, s(0), s(1), s(3), 9);   // no BL
  add(Family::TwoByTwo, s(0), s(1), s(2), 8);   // no BR
  add(Family::TwoByTwo, s(0), s(3), s(2), 11);  // no TR
  add(Family::TwoByTwo, s(1), s(3), s(2), 10);  // no TL

  // Hybrids of the coarse 3x3 grid and the overlap grid.
  add(Family::Hybrid, o(0), t(4), o(3), 13);
  add(Family::Hybrid, o(1), t(4), o(2), 12);
  add(Family::Hybrid, o(5), t(4), o(6), 15);
  add(Family::Hybrid, o(6), t(4), o(5), 14);
  add(Family::Hybrid, o(4), t(1), t(7), 16);
  add(Family::Hybrid, o(4), t(3), t(5), 18);
  add(Family::Hybrid, o(4), t(5), t(3), 17);
  add(Family::Hybrid, o(4), t(7), t(1), 19);

  validate_catalog(cat);
  return cat;
}

}  // namespace

const ConfigCatalog& default_catalog() {
  static const ConfigCatalog cat = build_default();
  return cat;
}

std::string serialize_catalog(const ConfigCatalog& cat) {
  json j;
  j["format"] = kCatalogFormat;
  j["grids"] = json::array();
  for (const auto& g : cat.grids) {
    json cells = json::array();
    for (const auto& c : g.cells) cells.push_back({c.x, c.y});
    j["grids"].push_back({{"name", g.name}, {"image_side", g.image_side}, {"patch_side", g.patch_side}, {"cells", cells}});
  }
  j["configs"] = json::array();
  for (const auto& c : cat.configs) {
    json cells = json::array();
    for (const auto& r : c.cells) cells.push_back({cat.grids[r.grid].name, r.cell});
    j["configs"].push_back({{"id", c.id}, {"family", to_string(c.family)}, {"cells", cells}, {"mirror", c.mirror_id}});
  }
  return j.dump(2) + "\n";
}

ConfigCatalog parse_catalog(std::string_view text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw CatalogError(std::string("catalog parse error: ") + e.what());
  }

  ConfigCatalog cat;
  try {
    if (!j.contains("format") || j["format"] != kCatalogFormat) {
      throw CatalogError("catalog format tag must be '" + std::string(kCatalogFormat) + "'");
    }
    for (const auto& g : j.at("grids")) {
      GridSpec spec{g.at("name").get<std::string>(), g.at("image_side").get<int>(), g.value("patch_side", kSourcePatchSide),
                    {}};
      for (const auto& c : g.at("cells")) spec.cells.push_back({c.at(0).get<int>(), c.at(1).get<int>()});
      cat.grids.push_back(std::move(spec));
    }
    for (const auto& c : j.at("configs")) {
      PatchConfiguration pc;
      pc.id = c.at("id").get<int>();
      pc.family = family_from_string(c.at("family").get<std::string>());
      pc.mirror_id = c.at("mirror").get<int>();
      const auto& cells = c.at("cells");
      if (cells.size() != 3) throw CatalogError("config " + std::to_string(pc.id) + ": expected 3 cells");
      for (std::size_t i = 0; i < 3; ++i) {
        const auto grid = cells[i].at(0).get<std::string>();
        const int gi = cat.grid_index(grid);
        if (gi < 0) throw CatalogError("config " + std::to_string(pc.id) + ": unknown grid '" + grid + "'");
        pc.cells[i] = {gi, cells[i].at(1).get<int>()};
      }
      cat.configs.push_back(pc);
    }
  } catch (const json::exception& e) {
    throw CatalogError(std::string("catalog schema error: ") + e.what());
  }
  validate_catalog(cat);
  return cat;
}

ConfigCatalog load_catalog(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw CatalogError("cannot open catalog " + path.string());
  std::stringstream ss;
  ss << in.rdbuf();
  return parse_catalog(ss.str());
}

// ---------------------------------------------------------------------------

const RgbImage& PatchPool::at(CellRef c) const {
  if (c.grid < 0 || c.grid >= static_cast<int>(patches.size()) || c.cell < 0 ||
      c.cell >= static_cast<int>(patches[c.grid].size())) {
    throw std::out_of_range("patch pool has no cell " + std::to_string(c.grid) + ":" + std::to_string(c.cell));
  }
  return patches[c.grid][c.cell];
}

std::size_t PatchPool::size() const {
  std::size_t n = 0;
  for (const auto& g : patches) n += g.size();
  return n;
}

PatchPool extract_source_patches(const GridPlanes& planes, const ConfigCatalog& catalog) {
  if (planes.size() != catalog.grids.size()) throw std::invalid_argument("one source plane per grid is required");
  PatchPool pool;
  pool.patches.resize(catalog.grids.size());
  for (std::size_t g = 0; g < catalog.grids.size(); ++g) {
    const GridSpec& spec = catalog.grids[g];
    const RgbImage& img = planes[g];
    if (img.width() != spec.image_side || img.height() != spec.image_side) {
      throw std::invalid_argument("grid " + spec.name + " needs a " + std::to_string(spec.image_side) + "x" +
                                  std::to_string(spec.image_side) + " image, got " + std::to_string(img.width()) +
                                  "x" + std::to_string(img.height()));
    }
    for (const Offset o : spec.cells) pool.patches[g].push_back(img.crop(o.x, o.y, spec.patch_side, spec.patch_side));
  }
  return pool;
}

PatchPool extract_source_patches(const RgbImage& img384, const RgbImage& img256, const RgbImage& img196,
                                 const ConfigCatalog& catalog) {
  return extract_source_patches(GridPlanes{img384, img256, img196}, catalog);
}

PatchSet assemble_set(const PatchPool& pool, const PatchConfiguration& config, int image_id) {
  PatchSet set;
  set.image_id = image_id;
  set.config_id = config.id;
  for (int i = 0; i < 3; ++i) set.patches[i] = pool.at(config.cells[i]);
  return set;
}

namespace {

void require_source_size(const PatchSet& set) {
  for (const auto& p : set.patches) {
    if (p.width() != kSourcePatchSide || p.height() != kSourcePatchSide) {
      throw std::invalid_argument("crop expects 110x110 patches");
    }
  }
}

void check_offset(CropOffset o) {
  if (o.dx < 0 || o.dy < 0 || o.dx > kMaxJitter || o.dy > kMaxJitter) throw std::out_of_range("crop offset outside [0,14]");
}

}  // namespace

CropOffset draw_crop_offset(RandomStream& rng) {
  const int dx = rng.uniform_int(0, kMaxJitter);
  const int dy = rng.uniform_int(0, kMaxJitter);
  return {dx, dy};
}

PatchSet yoked_crop(PatchSet set, CropOffset offset) {
  return random_crop(std::move(set), {offset, offset, offset});
}

PatchSet yoked_crop(PatchSet set, RandomStream& rng) {
  require_source_size(set);
  PatchSet out = yoked_crop(std::move(set), draw_crop_offset(rng));
  out.flags |= flags::kYokedCrop;
  return out;
}

PatchSet random_crop(PatchSet set, const std::array<CropOffset, 3>& offsets) {
  require_source_size(set);
  for (int i = 0; i < 3; ++i) {
    check_offset(offsets[i]);
    set.patches[i] = set.patches[i].crop(offsets[i].dx, offsets[i].dy, kPatchSide, kPatchSide);
    set.provenance[i].crop_x = offsets[i].dx;
    set.provenance[i].crop_y = offsets[i].dy;
  }
  return set;
}

PatchSet random_crop(PatchSet set, RandomStream& rng) {
  require_source_size(set);
  std::array<CropOffset, 3> offsets{};
  for (auto& o : offsets) o = draw_crop_offset(rng);
  return random_crop(std::move(set), offsets);
}

}  // namespace patchset
