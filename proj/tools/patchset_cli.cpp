// patchset: offline generator for three-patch arrangement samples.

#include <cstdio>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <optional>
#include <string>

#include "CLI11.hpp"
#include "json.hpp"
#include "patchset/caraug.hpp"
#include "patchset/io.hpp"
#include "patchset/kernels.hpp"
#include "patchset/pipeline.hpp"

namespace fs = std::filesystem;
using namespace patchset;

namespace {

struct GenerateArgs {
  std::string input, output, catalog, preset_name, config_file;
  std::uint64_t seed = 0;
  int epochs = 1;
  std::optional<int> rotations;
  bool no_ra = false, no_ubt = false, no_rrm = false;
  int workers = 1;
  std::uint32_t shard_records = 65536;
  double holdout = 0.0;
};

PipelineConfig build_config(const GenerateArgs& a, const CLI::App& cmd) {
  PipelineConfig cfg;
  if (!a.config_file.empty()) {
    std::ifstream in(a.config_file);
    if (!in) throw PipelineError("cannot open config " + a.config_file);
    cfg = pipeline_from_json(nlohmann::json::parse(in));
  }
  // Command-line flags override the config file.
  if (cmd.count("--input")) cfg.input_dir = a.input;
  if (cmd.count("--output")) cfg.output_dir = a.output;
  if (cmd.count("--seed")) cfg.seed = a.seed;
  if (cmd.count("--catalog")) cfg.catalog_path = a.catalog;
  if (cmd.count("--epochs")) cfg.epochs = a.epochs;
  if (cmd.count("--workers")) cfg.workers = a.workers;
  if (cmd.count("--shard-records")) cfg.shard_records = a.shard_records;
  if (cmd.count("--holdout-fraction")) cfg.holdout_fraction = a.holdout;
  if (cmd.count("--preset")) cfg.augment = preset(a.preset_name);
  if (a.rotations) {
    cfg.augment.rotations = *a.rotations == 4 ? RotationMode::Four : *a.rotations == 2 ? RotationMode::Two : RotationMode::None;
  }
  if (a.no_ra) cfg.augment.enable_ra = false;
  if (a.no_ubt) cfg.augment.enable_ubt = false;
  if (a.no_rrm) cfg.augment.enable_rrm = false;
  if (cfg.input_dir.empty() || cfg.output_dir.empty()) throw std::invalid_argument("--input and --output are required");
  cfg.validate();
  return cfg;
}

int run_generate(const GenerateArgs& a, const CLI::App& cmd) {
  const PipelineConfig cfg = build_config(a, cmd);
  const ShardManifest m = generate(cfg);
  std::cout << "wrote " << m.records_total << " records (" << m.image_count << " images, " << m.epochs
            << " epochs, " << m.class_space.num_classes() << " classes) in " << m.shards.size() << " shards to "
            << cfg.output_dir.string() << "\n";
  if (!m.skipped.empty()) std::cout << "skipped " << m.skipped.size() << " undecodable files\n";
  return 0;
}

int run_verify(const std::string& manifest) {
  const VerifyReport r = verify(manifest);
  for (const auto& p : r.problems) std::cout << "FAIL " << p << "\n";
  std::cout << (r.ok ? "PASS" : "FAIL") << " " << r.records_checked << " records checked\n";
  return r.ok ? 0 : 1;
}

int run_stats(const std::string& input, std::optional<std::uint64_t> count, int epochs, const std::string& preset_name,
              const std::string& catalog) {
  PlanStats s;
  if (count) {
    std::uint64_t configs = kCatalogSize;
    if (!preset_name.empty()) configs = active_configs(default_catalog(), preset(preset_name)).size();
    s = plan_stats(*count, configs, static_cast<std::uint64_t>(epochs));
  } else {
    PipelineConfig cfg;
    cfg.input_dir = input;
    cfg.epochs = epochs;
    if (!preset_name.empty()) cfg.augment = preset(preset_name);
    if (!catalog.empty()) cfg.catalog_path = catalog;
    s = stats(cfg);
  }
  std::cout << "images: " << s.images << "\n"
            << "configs_per_image: " << s.configs_per_image << "\n"
            << "epochs: " << s.epochs << "\n"
            << "records: " << s.records << "\n"
            << "bytes: " << s.bytes << "\n";
  return 0;
}

int run_inspect(const std::string& shard, std::uint64_t index, const std::string& prefix) {
  const ShardHeader h = read_shard_header(shard);
  const SampleRecord r = read_record(shard, index);
  std::cout << "shard: " << h.record_count << " records, " << h.class_count << " classes\n"
            << "record " << index << ": class " << r.class_id << ", config " << int(r.config_id) << ", rotation "
            << int(r.rot_index) << ", flags 0x" << std::hex << int(r.flags) << std::dec << "\n";
  if (!prefix.empty()) {
    for (int i = 0; i < 3; ++i) {
      const std::string path = prefix + "_p" + std::to_string(i + 1) + ".ppm";
      io::write_ppm(path, r.patches[i]);
      std::cout << "wrote " << path << "\n";
    }
  }
  return 0;
}

int run_caraug(const std::string& input, const std::string& output, std::uint64_t seed, double bound) {
  const Corpus corpus = ingest(input);
  fs::create_directories(output);
  for (std::size_t i = 0; i < corpus.images.size(); ++i) {
    const auto& entry = corpus.images[i];
    const RgbImage img = io::read_image(entry.path);
    RandomStream rng = RandomStream::keyed({seed, i});
    const caraug::Augmented aug = caraug::augment_24(img, rng, bound);

    // Stems keep the relative directory so equal names in subfolders do not clash.
    std::string stem = fs::path(entry.relative).replace_extension().generic_string();
    for (char& c : stem)
      if (c == '/') c = '_';
    nlohmann::json plan = nlohmann::json::array();
    for (int v = 0; v < caraug::kVariantCount; ++v) {
      char suffix[8];
      std::snprintf(suffix, sizeof suffix, "_v%02d", v);
      const std::string name = stem + suffix + ".png";
      io::write_png(fs::path(output) / name, aug.variants[v]);
      plan.push_back({{"file", name}, {"hue_perm", aug.plan[v].hue_perm}, {"jitter", aug.plan[v].jitter}});
    }
    const nlohmann::json sidecar{{"source", entry.relative}, {"seed", seed}, {"angle_bound_deg", bound}, {"variants", plan}};
    std::ofstream(fs::path(output) / (stem + "_plan.json")) << sidecar.dump(2) << "\n";
  }
  std::cout << "wrote " << corpus.images.size() * caraug::kVariantCount << " variants for " << corpus.images.size()
            << " images to " << output << "\n";
  return 0;
}

const CLI::Validator kPresetName(
    [](std::string& name) -> std::string {
      try {
        (void)preset(name);
      } catch (const std::invalid_argument& e) {
        return e.what();
      }
      return {};
    },
    "PRESET");

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Three-patch arrangement sample generator"};
  app.require_subcommand(1);
  bool scalar = false;
  app.add_flag("--scalar", scalar, "Disable SIMD kernels");

  GenerateArgs g;
  auto* gen = app.add_subcommand("generate", "Materialize shuffled shards and a manifest");
  gen->add_option("--input", g.input, "Image directory");
  gen->add_option("--output", g.output, "Output directory");
  gen->add_option("--seed", g.seed, "Run seed");
  gen->add_option("--catalog", g.catalog, "Configuration catalog file")->check(CLI::ExistingFile);
  gen->add_option("--epochs", g.epochs, "Epochs to materialize")->check(CLI::NonNegativeNumber);
  gen->add_option("--preset", g.preset_name, "Ablation preset")->check(kPresetName);
  gen->add_option("--rotations", g.rotations, "Rotation classes: 0, 2 or 4")->check(CLI::IsMember({0, 2, 4}));
  gen->add_flag("--no-ra", g.no_ra, "Disable the random aperture");
  gen->add_flag("--no-ubt", g.no_ubt, "Disable mirror/zoom/crop");
  gen->add_flag("--no-rrm", g.no_rrm, "Disable random resampling methods");
  gen->add_option("--workers", g.workers, "Worker threads")->check(CLI::PositiveNumber);
  gen->add_option("--shard-records", g.shard_records, "Records per shard")->check(CLI::PositiveNumber);
  gen->add_option("--holdout-fraction", g.holdout, "Fraction of images routed to the test split")
      ->check(CLI::Range(0.0, 0.999999));
  gen->add_option("--config", g.config_file, "JSON pipeline config")->check(CLI::ExistingFile);

  std::string manifest;
  auto* ver = app.add_subcommand("verify", "Re-hash and validate generated shards");
  ver->add_option("manifest", manifest, "Manifest path")->required();

  std::string stats_input, stats_preset, stats_catalog;
  std::optional<std::uint64_t> stats_count;
  int stats_epochs = 1;
  auto* st = app.add_subcommand("stats", "Dry-run record and byte counts");
  auto* st_in = st->add_option("--input", stats_input, "Image directory");
  auto* st_count = st->add_option("--count", stats_count, "Image count instead of a directory");
  st_in->excludes(st_count);
  st->add_option("--epochs", stats_epochs, "Epochs")->check(CLI::NonNegativeNumber);
  st->add_option("--preset", stats_preset, "Ablation preset")->check(kPresetName);
  st->add_option("--catalog", stats_catalog, "Configuration catalog file")->check(CLI::ExistingFile);

  std::string shard, dump_prefix;
  std::uint64_t index = 0;
  auto* ins = app.add_subcommand("inspect", "Print one record and optionally dump its patches");
  ins->add_option("shard", shard, "Shard file")->required()->check(CLI::ExistingFile);
  ins->add_option("--index", index, "Record index");
  ins->add_option("--dump-ppm", dump_prefix, "Write <prefix>_p1.ppm .. _p3.ppm");

  std::string car_in, car_out;
  std::uint64_t car_seed = 0;
  double car_bound = caraug::kDefaultAngleBoundDeg;
  auto* car = app.add_subcommand("caraug", "Write 24 hue/perspective variants per image");
  car->add_option("--input", car_in, "Image directory")->required();
  car->add_option("--output", car_out, "Output directory")->required();
  car->add_option("--seed", car_seed, "Seed");
  car->add_option("--angle-bound", car_bound, "Euler angle bound in degrees")->check(CLI::PositiveNumber);

  CLI11_PARSE(app, argc, argv);
  if (scalar) kernels::select_backend(kernels::Backend::Scalar);

  try {
    if (gen->parsed()) return run_generate(g, *gen);
    if (ver->parsed()) return run_verify(manifest);
    if (st->parsed()) {
      if (stats_input.empty() && !stats_count) throw std::invalid_argument("stats needs --input or --count");
      return run_stats(stats_input, stats_count, stats_epochs, stats_preset, stats_catalog);
    }
    if (ins->parsed()) return run_inspect(shard, index, dump_prefix);
    if (car->parsed()) return run_caraug(car_in, car_out, car_seed, car_bound);
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
