#pragma once

#include <cstdint>
#include <filesystem>
#include <optional>
#include <stdexcept>
#include <string>
#include <vector>

#include "json.hpp"
#include "patchset/augment.hpp"
#include "patchset/labels.hpp"
#include "patchset/patchgrid.hpp"
#include "patchset/record.hpp"

namespace patchset {

class PipelineError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

inline constexpr std::uint32_t kManifestFormatVersion = 1;
inline constexpr const char* kManifestName = "manifest.json";

struct CorpusEntry {
  std::filesystem::path path;
  std::string relative;  // generic-format path below the corpus root
};

struct SkippedFile {
  std::string relative;
  std::string reason;
};

struct Corpus {
  std::vector<CorpusEntry> images;
  std::vector<SkippedFile> skipped;
};

/// Lists and decode-checks every regular file below `dir`, in lexicographic
/// order of relative path. Throws PipelineError when the directory is
/// unreadable or nothing decodes.
Corpus ingest(const std::filesystem::path& dir);

/// Aspect-preserving resize + center crop to every grid side of the catalog
/// (each from the original), chroma-blurred when cfg.enable_cb.
GridPlanes preprocess_image(const RgbImage& img, const ConfigCatalog& catalog, const AugmentConfig& cfg);

struct PipelineConfig {
  std::filesystem::path input_dir;
  std::filesystem::path output_dir;
  std::uint64_t seed = 0;
  std::optional<std::filesystem::path> catalog_path;
  AugmentConfig augment;
  int epochs = 1;
  std::uint32_t shard_records = 65536;
  int workers = 1;
  double holdout_fraction = 0.0;

  void validate() const;
};

nlohmann::json to_json(const AugmentConfig& cfg);
AugmentConfig augment_from_json(const nlohmann::json& j);
nlohmann::json to_json(const PipelineConfig& cfg);
PipelineConfig pipeline_from_json(const nlohmann::json& j);

struct PlanStats {
  std::uint64_t images = 0;
  std::uint64_t configs_per_image = 0;
  std::uint64_t epochs = 0;
  std::uint64_t records = 0;
  std::uint64_t bytes = 0;  // records * kRecordBytes
};

PlanStats plan_stats(std::uint64_t images, std::uint64_t configs_per_image = kCatalogSize, std::uint64_t epochs = 1);
/// Dry run over an ingested corpus.
PlanStats stats(const PipelineConfig& cfg);

struct ShardInfo {
  std::string file;
  std::string split;  // "train" or "test"
  int epoch = 0;
  std::uint32_t records = 0;
  std::string sha256;
};

struct ShardManifest {
  std::uint32_t format_version = kManifestFormatVersion;
  std::uint64_t seed = 0;
  std::string config_fingerprint;
  std::string catalog_fingerprint;
  ClassSpace class_space;
  std::uint64_t image_count = 0;
  int epochs = 1;
  std::vector<int> active_configs;
  std::uint64_t records_total = 0;
  double holdout_fraction = 0.0;
  AugmentConfig augment;
  std::vector<SkippedFile> skipped;
  std::vector<ShardInfo> shards;
};

nlohmann::json to_json(const ShardManifest& m);
ShardManifest manifest_from_json(const nlohmann::json& j);
ShardManifest read_manifest(const std::filesystem::path& path);

/// Shuffle layout of one (split, epoch) stream: slot[key] is the output
/// position of record key (local image index * configs + config index).
std::vector<std::uint32_t> epoch_slots(std::uint64_t records, std::uint64_t seed, int epoch, int split);

/// Materializes `epochs` shuffled epochs of records into cfg.output_dir and
/// writes the manifest last. Output bytes depend only on seed, catalog,
/// augmentation settings and corpus content, never on worker count.
ShardManifest generate(const PipelineConfig& cfg);

struct VerifyReport {
  bool ok = true;
  std::uint64_t records_checked = 0;
  std::vector<std::string> problems;
};

VerifyReport verify(const std::filesystem::path& manifest_path);

/// Shard-local access used by `inspect` and tests.
ShardHeader read_shard_header(const std::filesystem::path& shard);
SampleRecord read_record(const std::filesystem::path& shard, std::uint64_t index);

}  // namespace patchset
