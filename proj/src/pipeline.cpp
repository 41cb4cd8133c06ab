#include "patchset/pipeline.hpp"

#include <fcntl.h>
#include <sys/stat.h>
#include <unistd.h>

#include <algorithm>
#include <array>
#include <atomic>
#include <cstdio>
#include <exception>
#include <fstream>
#include <iomanip>
#include <mutex>
#include <numeric>
#include <sstream>
#include <thread>

#include "patchset/hash.hpp"
#include "patchset/imgproc.hpp"
#include "patchset/io.hpp"

namespace patchset {

namespace fs = std::filesystem;
using nlohmann::json;

// ---------------------------------------------------------------------------
// Ingest and preprocessing

Corpus ingest(const fs::path& dir) {
  std::error_code ec;
  if (!fs::is_directory(dir, ec)) throw PipelineError("cannot read input directory " + dir.string());

  std::vector<CorpusEntry> files;
  fs::recursive_directory_iterator it(dir, fs::directory_options::skip_permission_denied, ec);
  if (ec) throw PipelineError("cannot read input directory " + dir.string() + ": " + ec.message());
  for (const auto& entry : it) {
    if (!entry.is_regular_file()) continue;
    files.push_back({entry.path(), fs::relative(entry.path(), dir).generic_string()});
  }
  std::sort(files.begin(), files.end(), [](const auto& a, const auto& b) { return a.relative < b.relative; });

  Corpus corpus;
  for (auto& f : files) {
    try {
      (void)io::read_image(f.path);
      corpus.images.push_back(std::move(f));
    } catch (const std::exception& e) {
      corpus.skipped.push_back({f.relative, e.what()});
    }
  }
  if (corpus.images.empty()) throw PipelineError("no decodable images in " + dir.string());
  return corpus;
}

GridPlanes preprocess_image(const RgbImage& img, const ConfigCatalog& catalog, const AugmentConfig& cfg) {
  GridPlanes planes;
  planes.reserve(catalog.grids.size());
  for (const auto& grid : catalog.grids) {
    RgbImage plane = aspect_resize_center_crop(img, grid.image_side, ResampleMethod::Bilinear);
    if (cfg.enable_cb) plane = chroma_blur(plane, kChromaBlurWindow);
    planes.push_back(std::move(plane));
  }
  return planes;
}

// ---------------------------------------------------------------------------
// Configuration

void PipelineConfig::validate() const {
  augment.validate();
  if (shard_records < 1) throw std::invalid_argument("shard_records must be at least 1");
  if (epochs < 0) throw std::invalid_argument("epochs must be non-negative");
  if (workers < 1) throw std::invalid_argument("workers must be at least 1");
  if (!(holdout_fraction >= 0.0 && holdout_fraction < 1.0)) {
    throw std::invalid_argument("holdout_fraction must be in [0, 1)");
  }
}

json to_json(const AugmentConfig& c) {
  json families = json::array();
  for (Family f : c.families) families.push_back(to_string(f));
  return {{"enable_cb", c.enable_cb},
          {"enable_yj", c.enable_yj},
          {"enable_ubt", c.enable_ubt},
          {"enable_rrm", c.enable_rrm},
          {"enable_ra", c.enable_ra},
          {"enable_channel_drop", c.enable_channel_drop},
          {"rotations", static_cast<int>(c.rotations)},
          {"aperture_min", c.aperture_min},
          {"aperture_max", c.aperture_max},
          {"zoom_min", c.zoom_min},
          {"zoom_max", c.zoom_max},
          {"fill_rgb", {c.fill_rgb[0], c.fill_rgb[1], c.fill_rgb[2]}},
          {"families", families}};
}

AugmentConfig augment_from_json(const json& j) {
  AugmentConfig c;
  if (j.contains("preset")) c = preset(j.at("preset").get<std::string>());
  c.enable_cb = j.value("enable_cb", c.enable_cb);
  c.enable_yj = j.value("enable_yj", c.enable_yj);
  c.enable_ubt = j.value("enable_ubt", c.enable_ubt);
  c.enable_rrm = j.value("enable_rrm", c.enable_rrm);
  c.enable_ra = j.value("enable_ra", c.enable_ra);
  c.enable_channel_drop = j.value("enable_channel_drop", c.enable_channel_drop);
  if (j.contains("rotations")) {
    const int r = j.at("rotations").get<int>();
    if (r == 0 || r == 1) {
      c.rotations = RotationMode::None;
    } else if (r == 2) {
      c.rotations = RotationMode::Two;
    } else if (r == 4) {
      c.rotations = RotationMode::Four;
    } else {
      throw std::invalid_argument("rotations must be 0, 2 or 4");
    }
  }
  c.aperture_min = j.value("aperture_min", c.aperture_min);
  c.aperture_max = j.value("aperture_max", c.aperture_max);
  c.zoom_min = j.value("zoom_min", c.zoom_min);
  c.zoom_max = j.value("zoom_max", c.zoom_max);
  if (j.contains("fill_rgb")) {
    const auto& f = j.at("fill_rgb");
    for (int i = 0; i < 3; ++i) c.fill_rgb[i] = f.at(i).get<std::uint8_t>();
  }
  if (j.contains("families")) {
    c.families.clear();
    for (const auto& f : j.at("families")) c.families.push_back(family_from_string(f.get<std::string>()));
  }
  c.validate();
  return c;
}

json to_json(const PipelineConfig& c) {
  json j{{"input_dir", c.input_dir.string()},
         {"output_dir", c.output_dir.string()},
         {"seed", c.seed},
         {"augment", to_json(c.augment)},
         {"epochs", c.epochs},
         {"shard_records", c.shard_records},
         {"workers", c.workers},
         {"holdout_fraction", c.holdout_fraction}};
  if (c.catalog_path) j["catalog_path"] = c.catalog_path->string();
  return j;
}

PipelineConfig pipeline_from_json(const json& j) {
  PipelineConfig c;
  c.input_dir = j.value("input_dir", std::string{});
  c.output_dir = j.value("output_dir", std::string{});
  c.seed = j.value("seed", std::uint64_t{0});
  if (j.contains("catalog_path")) c.catalog_path = j.at("catalog_path").get<std::string>();
  if (j.contains("augment")) c.augment = augment_from_json(j.at("augment"));
  c.epochs = j.value("epochs", c.epochs);
  c.shard_records = j.value("shard_records", c.shard_records);
  c.workers = j.value("workers", c.workers);
  c.holdout_fraction = j.value("holdout_fraction", c.holdout_fraction);
  c.validate();
  return c;
}

PlanStats plan_stats(std::uint64_t images, std::uint64_t configs_per_image, std::uint64_t epochs) {
  PlanStats s;
  s.images = images;
  s.configs_per_image = configs_per_image;
  s.epochs = epochs;
  s.records = images * configs_per_image * epochs;
  s.bytes = s.records * kRecordBytes;
  return s;
}

namespace {

ConfigCatalog catalog_for(const PipelineConfig& cfg) {
  return cfg.catalog_path ? load_catalog(*cfg.catalog_path) : default_catalog();
}

}  // namespace

PlanStats stats(const PipelineConfig& cfg) {
  const ConfigCatalog catalog = catalog_for(cfg);
  const Corpus corpus = ingest(cfg.input_dir);
  return plan_stats(corpus.images.size(), active_configs(catalog, cfg.augment).size(),
                    static_cast<std::uint64_t>(cfg.epochs));
}

// ---------------------------------------------------------------------------
// Manifest

json to_json(const ShardManifest& m) {
  json skipped = json::array();
  for (const auto& s : m.skipped) skipped.push_back({{"path", s.relative}, {"reason", s.reason}});
  json shards = json::array();
  for (const auto& s : m.shards) {
    shards.push_back(
        {{"file", s.file}, {"split", s.split}, {"epoch", s.epoch}, {"records", s.records}, {"sha256", s.sha256}});
  }
  json degrees = json::array();
  for (int r = 0; r < m.class_space.num_rots; ++r) degrees.push_back(90 * m.class_space.quarter_turns(r));
  return {{"format_version", m.format_version},
          {"seed", m.seed},
          {"config_fingerprint", m.config_fingerprint},
          {"catalog_fingerprint", m.catalog_fingerprint},
          {"class_space",
           {{"num_configs", m.class_space.num_configs},
            {"num_rots", m.class_space.num_rots},
            {"num_classes", m.class_space.num_classes()},
            {"layout", "rot-major"},
            {"rotation_degrees", degrees}}},
          {"image_count", m.image_count},
          {"epochs", m.epochs},
          {"active_configs", m.active_configs},
          {"records_total", m.records_total},
          {"record_bytes", kRecordBytes},
          {"holdout_fraction", m.holdout_fraction},
          {"augment", to_json(m.augment)},
          {"skipped", skipped},
          {"shards", shards}};
}

ShardManifest manifest_from_json(const json& j) {
  ShardManifest m;
  m.format_version = j.at("format_version").get<std::uint32_t>();
  if (m.format_version != kManifestFormatVersion) {
    throw FormatError("unsupported manifest version " + std::to_string(m.format_version));
  }
  m.seed = j.at("seed").get<std::uint64_t>();
  m.config_fingerprint = j.at("config_fingerprint").get<std::string>();
  m.catalog_fingerprint = j.at("catalog_fingerprint").get<std::string>();
  const auto& cs = j.at("class_space");
  m.class_space = ClassSpace::make(cs.at("num_configs").get<int>(), cs.at("num_rots").get<int>());
  m.image_count = j.at("image_count").get<std::uint64_t>();
  m.epochs = j.at("epochs").get<int>();
  m.active_configs = j.at("active_configs").get<std::vector<int>>();
  m.records_total = j.at("records_total").get<std::uint64_t>();
  m.holdout_fraction = j.value("holdout_fraction", 0.0);
  m.augment = augment_from_json(j.at("augment"));
  for (const auto& s : j.at("skipped")) m.skipped.push_back({s.at("path"), s.at("reason")});
  for (const auto& s : j.at("shards")) {
    m.shards.push_back({s.at("file").get<std::string>(), s.at("split").get<std::string>(), s.at("epoch").get<int>(),
                        s.at("records").get<std::uint32_t>(), s.at("sha256").get<std::string>()});
  }
  return m;
}

ShardManifest read_manifest(const fs::path& path) {
  std::ifstream in(path);
  if (!in) throw PipelineError("cannot open manifest " + path.string());
  try {
    return manifest_from_json(json::parse(in));
  } catch (const json::exception& e) {
    throw FormatError("malformed manifest " + path.string() + ": " + e.what());
  }
}

// ---------------------------------------------------------------------------
// Generation

namespace {

class FileDescriptor {
 public:
  FileDescriptor() = default;
  explicit FileDescriptor(int fd) : fd_(fd) {}
  FileDescriptor(FileDescriptor&& o) noexcept : fd_(std::exchange(o.fd_, -1)) {}
  FileDescriptor& operator=(FileDescriptor&& o) noexcept {
    if (this != &o) {
      reset();
      fd_ = std::exchange(o.fd_, -1);
    }
    return *this;
  }
  FileDescriptor(const FileDescriptor&) = delete;
  FileDescriptor& operator=(const FileDescriptor&) = delete;
  ~FileDescriptor() { reset(); }

  int get() const { return fd_; }
  void reset() {
    if (fd_ >= 0) ::close(fd_);
    fd_ = -1;
  }

 private:
  int fd_ = -1;
};

void write_at(int fd, const std::uint8_t* data, std::size_t size, off_t offset, const std::string& name) {
  while (size > 0) {
    const ssize_t n = ::pwrite(fd, data, size, offset);
    if (n <= 0) throw PipelineError("write failed on " + name);
    data += n;
    size -= static_cast<std::size_t>(n);
    offset += n;
  }
}

struct ShardFile {
  ShardInfo info;
  fs::path path;
  FileDescriptor fd;
};

// One (split, epoch) stream of records: a shuffled layout over shard files.
struct EpochLayout {
  std::string split;
  int epoch = 0;
  std::vector<std::uint32_t> slot_of_key;  // key = local image index * configs + active index
  std::size_t first_shard = 0;             // index into the shard list
};

std::vector<std::uint32_t> inverse_shuffle(std::uint64_t n, RandomStream rng) {
  std::vector<std::uint32_t> order(n);
  std::iota(order.begin(), order.end(), 0u);
  for (std::uint64_t i = n; i > 1; --i) std::swap(order[i - 1], order[rng.below(i)]);
  std::vector<std::uint32_t> slot(n);
  for (std::uint64_t pos = 0; pos < n; ++pos) slot[order[pos]] = static_cast<std::uint32_t>(pos);
  return slot;
}

std::string shard_name(const std::string& split, int epoch, std::size_t index) {
  std::ostringstream os;
  os << split << "-e" << std::setw(3) << std::setfill('0') << epoch << "-s" << std::setw(5) << index << ".psss";
  return os.str();
}

std::string hash_file(const fs::path& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw PipelineError("cannot read " + path.string());
  Sha256 h;
  std::vector<std::uint8_t> buf(1 << 20);
  while (in) {
    in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()));
    h.update(std::span<const std::uint8_t>(buf.data(), static_cast<std::size_t>(in.gcount())));
  }
  return h.hex_digest();
}

bool in_holdout(std::uint64_t seed, std::uint64_t image_id, double fraction) {
  if (fraction <= 0.0) return false;
  return RandomStream::keyed({seed, 0x686f6c646f7574ULL, image_id}).uniform01() < fraction;
}

}  // namespace

std::vector<std::uint32_t> epoch_slots(std::uint64_t records, std::uint64_t seed, int epoch, int split) {
  return inverse_shuffle(records, RandomStream::keyed({seed, 0x73687566666c65ULL, static_cast<std::uint64_t>(epoch),
                                                       static_cast<std::uint64_t>(split)}));
}

ShardManifest generate(const PipelineConfig& cfg) {
  cfg.validate();
  const ConfigCatalog catalog = catalog_for(cfg);
  const Corpus corpus = ingest(cfg.input_dir);
  const std::vector<int> active = active_configs(catalog, cfg.augment);
  const ClassSpace space = ClassSpace::make(catalog.size(), cfg.augment.num_rots());
  const std::uint64_t per_image = active.size();
  if (per_image == 0) throw PipelineError("no configuration is enabled");

  ShardManifest manifest;
  manifest.seed = cfg.seed;
  manifest.class_space = space;
  manifest.image_count = corpus.images.size();
  manifest.epochs = cfg.epochs;
  manifest.active_configs = active;
  manifest.records_total = plan_stats(corpus.images.size(), per_image, cfg.epochs).records;
  manifest.holdout_fraction = cfg.holdout_fraction;
  manifest.augment = cfg.augment;
  manifest.skipped = corpus.skipped;
  const std::string catalog_text = serialize_catalog(catalog);
  manifest.catalog_fingerprint = sha256_hex(catalog_text);
  {
    json fp{{"seed", cfg.seed},
            {"epochs", cfg.epochs},
            {"shard_records", cfg.shard_records},
            {"holdout_fraction", cfg.holdout_fraction},
            {"augment", to_json(cfg.augment)},
            {"catalog", catalog_text}};
    json names = json::array();
    for (const auto& e : corpus.images) names.push_back(e.relative);
    fp["corpus"] = names;
    manifest.config_fingerprint = sha256_hex(fp.dump());
  }

  // Split membership and each image's position inside its split.
  std::array<std::vector<std::uint64_t>, 2> split_images;  // 0 train, 1 test
  std::vector<std::pair<int, std::uint64_t>> placement(corpus.images.size());
  for (std::uint64_t i = 0; i < corpus.images.size(); ++i) {
    const int s = in_holdout(cfg.seed, i, cfg.holdout_fraction) ? 1 : 0;
    placement[i] = {s, split_images[s].size()};
    split_images[s].push_back(i);
  }
  static constexpr std::array<const char*, 2> kSplitNames{"train", "test"};

  std::error_code ec;
  fs::create_directories(cfg.output_dir, ec);
  if (ec) throw PipelineError("cannot create output directory " + cfg.output_dir.string());

  std::vector<ShardFile> shards;
  std::vector<EpochLayout> layouts;
  auto cleanup = [&] {
    for (auto& s : shards) {
      s.fd.reset();
      fs::remove(s.path, ec);
    }
    fs::remove(cfg.output_dir / (std::string(kManifestName) + ".tmp"), ec);
  };

  try {
    for (int e = 0; e < cfg.epochs; ++e) {
      for (int s = 0; s < 2; ++s) {
        const std::uint64_t n = split_images[s].size() * per_image;
        if (n == 0) continue;
        if (n > UINT32_MAX) throw PipelineError("too many records in one epoch");
        EpochLayout layout;
        layout.split = kSplitNames[s];
        layout.epoch = e;
        layout.slot_of_key = epoch_slots(n, cfg.seed, e, s);
        layout.first_shard = shards.size();
        const std::uint64_t count = (n + cfg.shard_records - 1) / cfg.shard_records;
        for (std::uint64_t k = 0; k < count; ++k) {
          ShardFile f;
          const auto records = static_cast<std::uint32_t>(std::min<std::uint64_t>(cfg.shard_records, n - k * cfg.shard_records));
          f.info = {shard_name(layout.split, e, k), layout.split, e, records, {}};
          f.path = cfg.output_dir / f.info.file;
          f.fd = FileDescriptor(::open(f.path.c_str(), O_RDWR | O_CREAT | O_TRUNC, 0644));
          if (f.fd.get() < 0) throw PipelineError("cannot create " + f.path.string());
          shards.push_back(std::move(f));
          ShardFile& sf = shards.back();
          std::array<std::uint8_t, kShardHeaderBytes> header{};
          encode_shard_header({kShardFormatVersion, records, static_cast<std::uint16_t>(space.num_classes()), 0}, header);
          write_at(sf.fd.get(), header.data(), header.size(), 0, sf.info.file);
          if (::ftruncate(sf.fd.get(), static_cast<off_t>(kShardHeaderBytes + records * kRecordBytes)) != 0) {
            throw PipelineError("cannot size " + sf.path.string());
          }
        }
        layouts.push_back(std::move(layout));
      }
    }

    // Workers take whole images; every record lands in a slot fixed by the
    // shuffle, so completion order never affects the output bytes.
    std::atomic<std::uint64_t> next{0};
    std::atomic<bool> failed{false};
    std::exception_ptr error;
    std::mutex error_mutex;
    auto work = [&] {
      std::vector<std::uint8_t> buf(kRecordBytes);
      for (;;) {
        const std::uint64_t i = next.fetch_add(1);
        if (i >= corpus.images.size() || failed.load()) return;
        try {
          const RgbImage img = io::read_image(corpus.images[i].path);
          SampleSource source(preprocess_image(img, catalog, cfg.augment), catalog);
          const auto [split, local] = placement[i];
          for (const auto& layout : layouts) {
            if (layout.split != kSplitNames[split]) continue;
            for (std::uint64_t a = 0; a < per_image; ++a) {
              const SampleKey key{cfg.seed, i, static_cast<std::uint64_t>(active[a]),
                                  static_cast<std::uint64_t>(layout.epoch)};
              const PatchSet set = make_patch_set(source, active[a], catalog, key, cfg.augment);
              encode_record(to_record(set, space), std::span<std::uint8_t, kRecordBytes>(buf.data(), kRecordBytes));
              const std::uint64_t slot = layout.slot_of_key[local * per_image + a];
              ShardFile& sf = shards[layout.first_shard + slot / cfg.shard_records];
              const off_t offset = static_cast<off_t>(kShardHeaderBytes + (slot % cfg.shard_records) * kRecordBytes);
              write_at(sf.fd.get(), buf.data(), buf.size(), offset, sf.info.file);
            }
          }
        } catch (...) {
          std::lock_guard lock(error_mutex);
          if (!error) error = std::current_exception();
          failed = true;
          return;
        }
      }
    };
    {
      std::vector<std::jthread> pool;
      for (int w = 1; w < cfg.workers; ++w) pool.emplace_back(work);
      work();
    }
    if (error) std::rethrow_exception(error);

    for (auto& s : shards) {
      if (::fsync(s.fd.get()) != 0) throw PipelineError("fsync failed on " + s.info.file);
      s.fd.reset();
      s.info.sha256 = hash_file(s.path);
      manifest.shards.push_back(s.info);
    }

    const fs::path tmp = cfg.output_dir / (std::string(kManifestName) + ".tmp");
    {
      std::ofstream out(tmp);
      out << to_json(manifest).dump(2) << "\n";
      out.flush();
      if (!out) throw PipelineError("cannot write manifest");
    }
    fs::rename(tmp, cfg.output_dir / kManifestName);
  } catch (...) {
    cleanup();
    throw;
  }
  return manifest;
}

// ---------------------------------------------------------------------------
// Verification

ShardHeader read_shard_header(const fs::path& shard) {
  std::ifstream in(shard, std::ios::binary);
  std::array<std::uint8_t, kShardHeaderBytes> h{};
  if (!in.read(reinterpret_cast<char*>(h.data()), h.size())) throw FormatError("short shard header in " + shard.string());
  return decode_shard_header(h);
}

SampleRecord read_record(const fs::path& shard, std::uint64_t index) {
  const ShardHeader header = read_shard_header(shard);
  if (index >= header.record_count) {
    throw std::out_of_range("record " + std::to_string(index) + " outside shard of " +
                            std::to_string(header.record_count));
  }
  std::ifstream in(shard, std::ios::binary);
  in.seekg(static_cast<std::streamoff>(kShardHeaderBytes + index * kRecordBytes));
  std::vector<std::uint8_t> buf(kRecordBytes);
  if (!in.read(reinterpret_cast<char*>(buf.data()), static_cast<std::streamsize>(buf.size()))) {
    throw FormatError("truncated record in " + shard.string());
  }
  return decode_record(std::span<const std::uint8_t, kRecordBytes>(buf.data(), kRecordBytes));
}

VerifyReport verify(const fs::path& manifest_path) {
  VerifyReport report;
  auto fail = [&](std::string msg) {
    report.ok = false;
    report.problems.push_back(std::move(msg));
  };

  ShardManifest m;
  try {
    m = read_manifest(manifest_path);
  } catch (const std::exception& e) {
    fail(e.what());
    return report;
  }
  const fs::path dir = manifest_path.parent_path();
  const ClassSpace& space = m.class_space;

  std::uint64_t total = 0;
  for (const auto& s : m.shards) {
    const fs::path path = dir / s.file;
    total += s.records;
    std::error_code ec;
    if (!fs::is_regular_file(path, ec)) {
      fail(s.file + ": missing shard");
      continue;
    }
    if (hash_file(path) != s.sha256) fail(s.file + ": content hash mismatch");

    const auto size = fs::file_size(path, ec);
    if (size != kShardHeaderBytes + static_cast<std::uint64_t>(s.records) * kRecordBytes) {
      fail(s.file + ": size " + std::to_string(size) + " does not match " + std::to_string(s.records) + " records");
      continue;
    }
    std::ifstream in(path, std::ios::binary);
    std::array<std::uint8_t, kShardHeaderBytes> hbytes{};
    in.read(reinterpret_cast<char*>(hbytes.data()), hbytes.size());
    try {
      const ShardHeader h = decode_shard_header(hbytes);
      if (h.record_count != s.records) fail(s.file + ": header record count " + std::to_string(h.record_count) +
                                            " != manifest " + std::to_string(s.records));
      if (h.class_count != space.num_classes()) fail(s.file + ": header class count " + std::to_string(h.class_count) +
                                                     " != " + std::to_string(space.num_classes()));
      if (h.reserved != 0) fail(s.file + ": header reserved field not zero");
    } catch (const FormatError& e) {
      fail(s.file + ": " + e.what());
      continue;
    }

    std::vector<std::uint8_t> rec(kRecordHeaderBytes);
    for (std::uint32_t r = 0; r < s.records; ++r) {
      in.seekg(static_cast<std::streamoff>(kShardHeaderBytes + static_cast<std::uint64_t>(r) * kRecordBytes));
      in.read(reinterpret_cast<char*>(rec.data()), static_cast<std::streamsize>(rec.size()));
      const std::string where = s.file + " record " + std::to_string(r);
      const int class_id = rec[0] | (rec[1] << 8);
      const int rot = rec[2], config = rec[3];
      if (rec[5] != 0 || rec[6] != 0 || rec[7] != 0) fail(where + ": reserved bytes not zero");
      if (class_id >= space.num_classes()) {
        fail(where + ": class_id " + std::to_string(class_id) + " outside [0, " + std::to_string(space.num_classes()) +
             ")");
      } else if (config >= space.num_configs || rot >= space.num_rots) {
        fail(where + ": config/rotation fields out of range");
      } else if (encode_label(config, rot, space) != class_id) {
        fail(where + ": class_id " + std::to_string(class_id) + " inconsistent with config " + std::to_string(config) +
             " rotation " + std::to_string(rot));
      }
      ++report.records_checked;
    }
  }
  if (total != m.records_total) {
    fail("shards hold " + std::to_string(total) + " records, manifest declares " + std::to_string(m.records_total));
  }
  const std::uint64_t expected = m.image_count * m.active_configs.size() * static_cast<std::uint64_t>(m.epochs);
  if (m.records_total != expected) {
    fail("records_total " + std::to_string(m.records_total) + " != images x configs x epochs = " +
         std::to_string(expected));
  }
  return report;
}

}  // namespace patchset
