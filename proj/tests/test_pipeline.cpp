#include <algorithm>
#include <fstream>
#include <map>
#include <numeric>
#include <set>

#include "corpus.hpp"
#include "doctest.h"
#include "oracles.hpp"
#include "patchset/hash.hpp"
#include "patchset/imgproc.hpp"
#include "patchset/io.hpp"
#include "patchset/pipeline.hpp"
#include "stats.hpp"
#include "tempdir.hpp"

using namespace patchset;
using namespace patchset::testing;
namespace fs = std::filesystem;

namespace {

PipelineConfig small_config(const fs::path& in, const fs::path& out, std::uint64_t seed = 7) {
  PipelineConfig c;
  c.input_dir = in;
  c.output_dir = out;
  c.seed = seed;
  return c;
}

std::vector<SampleRecord> all_records(const fs::path& dir, const ShardManifest& m, const std::string& split,
                                      int epoch) {
  std::vector<SampleRecord> out;
  for (const auto& s : m.shards) {
    if (s.split != split || s.epoch != epoch) continue;
    for (std::uint32_t r = 0; r < s.records; ++r) out.push_back(read_record(dir / s.file, r));
  }
  return out;
}

bool has_problem(const VerifyReport& r, const std::string& needle) {
  return std::any_of(r.problems.begin(), r.problems.end(),
                     [&](const std::string& p) { return p.find(needle) != std::string::npos; });
}

double spearman(const std::vector<std::uint32_t>& a, const std::vector<std::uint32_t>& b) {
  const double n = static_cast<double>(a.size());
  double d2 = 0;
  for (std::size_t i = 0; i < a.size(); ++i) {
    const double d = static_cast<double>(a[i]) - static_cast<double>(b[i]);
    d2 += d * d;
  }
  return 1.0 - 6.0 * d2 / (n * (n * n - 1));
}

}  // namespace

TEST_CASE("sha256 known answers") {
  CHECK(sha256_hex("") == "e3b0c44298fc1c149afbf4c8996fb92427ae41e4649b934ca495991b7852b855");
  CHECK(sha256_hex("abc") == "ba7816bf8f01cfea414140de5dae2223b00361a396177a9cb410ff61f20015ad");
}

TEST_CASE("image io") {
  TempDir dir;
  RandomStream rng(71);
  const RgbImage img = noise_image(33, 21, rng);
  io::write_png(dir / "a.png", img);
  io::write_ppm(dir / "a.ppm", img);
  CHECK(io::read_image(dir / "a.png") == img);
  CHECK(io::read_image(dir / "a.ppm") == img);

  std::ofstream(dir / "gray.pgm", std::ios::binary) << "P5\n2 1\n255\n" << char(10) << char(200);
  const RgbImage gray = io::read_image(dir / "gray.pgm");
  CHECK(gray.width() == 2);
  CHECK(gray.pixel(1, 0)[0] == 200);
  CHECK(gray.pixel(1, 0)[2] == 200);

  std::ofstream(dir / "junk.png") << "definitely not an image";
  CHECK_THROWS_AS(io::read_image(dir / "junk.png"), io::DecodeError);
  CHECK_THROWS_AS(io::read_image(dir / "missing.png"), io::DecodeError);
}

TEST_CASE("ingest") {
  TempDir dir;
  RandomStream rng(72);
  SUBCASE("lexicographic listing, recursive, deterministic") {
    io::write_png(dir / "c.png", noise_image(8, 8, rng));
    io::write_png(dir / "a.png", noise_image(8, 8, rng));
    fs::create_directories(dir / "b");
    io::write_ppm(dir / "b" / "x.ppm", noise_image(8, 8, rng));
    const Corpus c = ingest(dir.path());
    REQUIRE(c.images.size() == 3);
    CHECK(c.images[0].relative == "a.png");
    CHECK(c.images[1].relative == "b/x.ppm");
    CHECK(c.images[2].relative == "c.png");
    CHECK(c.skipped.empty());
    const Corpus again = ingest(dir.path());
    for (std::size_t i = 0; i < 3; ++i) CHECK(again.images[i].relative == c.images[i].relative);
  }
  SUBCASE("corrupt files are skipped and counted") {
    io::write_png(dir / "a.png", noise_image(8, 8, rng));
    io::write_png(dir / "b.png", noise_image(8, 8, rng));
    std::ofstream(dir / "broken.jpg") << "\xff\xd8 truncated";
    const Corpus c = ingest(dir.path());
    CHECK(c.images.size() == 2);
    REQUIRE(c.skipped.size() == 1);
    CHECK(c.skipped[0].relative == "broken.jpg");
  }
  SUBCASE("empty or missing directories fail") {
    CHECK_THROWS_AS(ingest(dir.path()), PipelineError);
    CHECK_THROWS_AS(ingest(dir / "nope"), PipelineError);
  }
}

TEST_CASE("preprocess_image") {
  RandomStream rng(73);
  const auto& cat = default_catalog();
  AugmentConfig off;
  off.enable_cb = false;
  const RgbImage sq = noise_image(384, 384, rng);
  const GridPlanes p = preprocess_image(sq, cat, off);
  REQUIRE(p.size() == 3);
  CHECK(p[0] == sq);
  CHECK(p[1].width() == 256);
  CHECK(p[2].width() == 196);

  const RgbImage wide = sweep_image(1, 300, 200, rng);
  const GridPlanes plain = preprocess_image(wide, cat, off);
  for (std::size_t g = 0; g < 3; ++g) CHECK(plain[g] == aspect_resize_center_crop(wide, cat.grids[g].image_side));

  AugmentConfig on;
  const GridPlanes blurred = preprocess_image(wide, cat, on);
  for (std::size_t g = 0; g < 3; ++g) {
    CHECK(blurred[g] == chroma_blur(plain[g]));
    const LabImage a = rgb_to_lab(plain[g]), b = rgb_to_lab(blurred[g]);
    double worst = 0;
    for (std::size_t i = 0; i < a.L.values.size(); ++i) worst = std::max(worst, std::abs(a.L.values[i] - b.L.values[i]));
    CHECK(worst <= 2.0);
  }
}

TEST_CASE("stats arithmetic") {
  CHECK(plan_stats(1281167).records == 25623340);
  CHECK(plan_stats(1281167).bytes == 25623340ull * kRecordBytes);
  CHECK(plan_stats(7, 20, 3).records == 420);
  CHECK(plan_stats(7, 20, 0).records == 0);

  TempDir dir;
  write_corpus(dir / "in", 7, 3, 40);
  PipelineConfig c = small_config(dir / "in", dir / "out");
  c.epochs = 3;
  CHECK(stats(c).records == 420);
  c.augment = preset("cb+yj");
  CHECK(stats(c).records == 7 * 8 * 3);
}

TEST_CASE("config JSON round trip") {
  PipelineConfig c;
  c.input_dir = "/data/in";
  c.output_dir = "/data/out";
  c.seed = 0xfeedfacecafebeefULL;
  c.catalog_path = "/data/cat.json";
  c.augment = preset("cb+yj+tp");
  c.augment.fill_rgb = {1, 2, 3};
  c.epochs = 4;
  c.shard_records = 100;
  c.workers = 3;
  c.holdout_fraction = 0.25;
  const PipelineConfig back = pipeline_from_json(to_json(c));
  CHECK(back.seed == c.seed);
  CHECK(back.augment == c.augment);
  CHECK(back.catalog_path == c.catalog_path);
  CHECK(back.epochs == 4);
  CHECK(back.shard_records == 100);
  CHECK(back.workers == 3);
  CHECK(back.holdout_fraction == 0.25);

  CHECK(augment_from_json({{"preset", "rwc"}, {"enable_ra", false}}).num_rots() == 2);
  CHECK_THROWS(augment_from_json({{"rotations", 3}}));
  CHECK_THROWS(pipeline_from_json({{"shard_records", 0}}));
}

TEST_CASE("generate, verify, determinism") {
  TempDir dir;
  write_corpus(dir / "in", 10, 5);
  PipelineConfig c = small_config(dir / "in", dir / "a");
  c.shard_records = 64;
  const ShardManifest m = generate(c);

  SUBCASE("ten images give 200 records in a verifiable layout") {
    CHECK(m.records_total == 200);
    CHECK(m.image_count == 10);
    CHECK(m.class_space.num_classes() == 80);
    std::uint64_t total = 0;
    for (const auto& s : m.shards) {
      total += s.records;
      CHECK(read_shard_header(dir / "a" / s.file).record_count == s.records);
      CHECK(read_shard_header(dir / "a" / s.file).class_count == 80);
    }
    CHECK(total == 200);
    CHECK(m.shards.size() == 4);
    CHECK(m.shards[0].file == "train-e000-s00000.psss");
    CHECK(fs::exists(dir / "a" / kManifestName));
    CHECK_FALSE(fs::exists(dir / "a" / "manifest.json.tmp"));

    const VerifyReport r = verify(dir / "a" / kManifestName);
    CHECK(r.ok);
    CHECK(r.records_checked == 200);

    const ShardManifest disk = read_manifest(dir / "a" / kManifestName);
    CHECK(to_json(disk) == to_json(m));

    std::set<std::pair<int, int>> keys;
    for (const auto& rec : all_records(dir / "a", m, "train", 0)) {
      CHECK(rec.class_id < 80);
      CHECK(rec.class_id == rec.rot_index * 20 + rec.config_id);
    }
  }
  SUBCASE("same seed reproduces every byte regardless of worker count") {
    PipelineConfig c2 = small_config(dir / "in", dir / "b");
    c2.shard_records = 64;
    c2.workers = 4;
    generate(c2);
    CHECK(same_tree(dir / "a", dir / "b"));
  }
  SUBCASE("a different seed changes the output") {
    PipelineConfig c3 = small_config(dir / "in", dir / "c", 8);
    c3.shard_records = 64;
    generate(c3);
    CHECK_FALSE(read_bytes(dir / "a" / m.shards[0].file) == read_bytes(dir / "c" / m.shards[0].file));
  }
  SUBCASE("a flipped byte fails verification naming the shard") {
    flip_byte(dir / "a" / m.shards[1].file, kShardHeaderBytes + 5000);
    const VerifyReport r = verify(dir / "a" / kManifestName);
    CHECK_FALSE(r.ok);
    CHECK(has_problem(r, m.shards[1].file + ": content hash mismatch"));
  }
  SUBCASE("an out-of-range class is reported") {
    std::fstream f(dir / "a" / m.shards[0].file, std::ios::binary | std::ios::in | std::ios::out);
    f.seekp(kShardHeaderBytes);
    f.put(81);
    f.put(0);
    f.close();
    const VerifyReport r = verify(dir / "a" / kManifestName);
    CHECK_FALSE(r.ok);
    CHECK(has_problem(r, "class_id 81 outside [0, 80)"));
  }
  SUBCASE("truncated shards and missing manifests fail") {
    fs::resize_file(dir / "a" / m.shards[2].file, 100);
    CHECK_FALSE(verify(dir / "a" / kManifestName).ok);
    CHECK_FALSE(verify(dir / "nowhere" / kManifestName).ok);
  }
}

TEST_CASE("epochs reshuffle the same multiset of keys") {
  TempDir dir;
  write_corpus(dir / "in", 4, 9, 60);
  PipelineConfig c = small_config(dir / "in", dir / "out");
  c.epochs = 2;
  c.augment = preset("cb+yj+tp+epc");  // no rotation, so labels identify configs
  const ShardManifest m = generate(c);
  CHECK(m.records_total == 160);
  CHECK(verify(dir / "out" / kManifestName).ok);

  const auto e0 = all_records(dir / "out", m, "train", 0), e1 = all_records(dir / "out", m, "train", 1);
  REQUIRE(e0.size() == 80);
  REQUIRE(e1.size() == 80);
  std::multiset<int> k0, k1;
  for (const auto& r : e0) k0.insert(r.config_id);
  for (const auto& r : e1) k1.insert(r.config_id);
  CHECK(k0 == k1);
  std::vector<int> o0, o1;
  for (const auto& r : e0) o0.push_back(r.config_id);
  for (const auto& r : e1) o1.push_back(r.config_id);
  CHECK(o0 != o1);
  CHECK(epoch_slots(80, c.seed, 0, 0) != epoch_slots(80, c.seed, 1, 0));
}

TEST_CASE("epoch permutations look uniform") {
  const std::uint64_t n = 50;
  std::vector<std::uint32_t> identity(n);
  std::iota(identity.begin(), identity.end(), 0u);
  double sum = 0, sum_cross = 0;
  std::vector<std::uint64_t> first_slot(n);
  const int seeds = 2000;
  for (int s = 0; s < seeds; ++s) {
    const auto p = epoch_slots(n, s, 0, 0);
    const auto q = epoch_slots(n, s, 1, 0);
    std::vector<std::uint32_t> sorted = p;
    std::sort(sorted.begin(), sorted.end());
    REQUIRE(sorted == identity);
    sum += spearman(p, identity);
    sum_cross += spearman(p, q);
    ++first_slot[p[0]];
  }
  // rank correlation of independent permutations has sd 1/sqrt(n-1) per draw
  const double se = 1.0 / std::sqrt((n - 1.0) * seeds);
  CHECK(std::abs(sum / seeds) < 4 * se);
  CHECK(std::abs(sum_cross / seeds) < 4 * se);
  CHECK(uniform_chi_square_p(first_slot) > 0.001);
}

TEST_CASE("holdout assigns whole images to the test split") {
  TempDir dir;
  write_corpus(dir / "in", 12, 11, 40);
  PipelineConfig c = small_config(dir / "in", dir / "out");
  c.holdout_fraction = 0.4;
  c.augment = preset("cb+yj+tp+epc");
  const ShardManifest m = generate(c);
  std::uint64_t train = 0, test = 0;
  for (const auto& s : m.shards) (s.split == "test" ? test : train) += s.records;
  CHECK(train + test == 240);
  CHECK(train % 20 == 0);
  CHECK(test % 20 == 0);
  CHECK(test > 0);
  CHECK(train > 0);
  CHECK(verify(dir / "out" / kManifestName).ok);
}

TEST_CASE("generation failures") {
  TempDir dir;
  write_corpus(dir / "in", 2, 13, 40);
  std::ofstream(dir / "file") << "x";
  CHECK_THROWS_AS(generate(small_config(dir / "in", dir / "file")), PipelineError);
  CHECK_THROWS_AS(generate(small_config(dir / "empty", dir / "out")), PipelineError);

  PipelineConfig bad = small_config(dir / "in", dir / "out");
  bad.workers = 0;
  CHECK_THROWS_AS(generate(bad), std::invalid_argument);

  PipelineConfig no_catalog = small_config(dir / "in", dir / "out2");
  no_catalog.catalog_path = dir / "missing.json";
  CHECK_THROWS_AS(generate(no_catalog), CatalogError);
}

TEST_CASE("a custom catalog file drives generation") {
  TempDir dir;
  write_corpus(dir / "in", 2, 17, 40);
  std::ofstream(dir / "cat.json") << serialize_catalog(default_catalog());
  PipelineConfig a = small_config(dir / "in", dir / "a"), b = small_config(dir / "in", dir / "b");
  b.catalog_path = dir / "cat.json";
  generate(a);
  generate(b);
  CHECK(same_tree(dir / "a", dir / "b"));
}
