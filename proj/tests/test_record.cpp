#include <vector>

#include "doctest.h"
#include "patchset/record.hpp"
#include "synthetic.hpp"

using namespace patchset;
using namespace patchset::testing;

namespace {

SampleRecord random_record(RandomStream& rng) {
  SampleRecord r;
  r.class_id = static_cast<std::uint16_t>(rng.below(65536));
  r.rot_index = static_cast<std::uint8_t>(rng.below(4));
  r.config_id = static_cast<std::uint8_t>(rng.below(20));
  r.flags = static_cast<std::uint8_t>(rng.below(128));
  for (auto& p : r.patches) p = noise_image(96, 96, rng);
  return r;
}

}  // namespace

TEST_CASE("record sizes") {
  CHECK(kPatchBytes == 27648);
  CHECK(kRecordBytes == 8 + 3 * 27648);
}

TEST_CASE("records round trip byte for byte") {
  RandomStream rng(51);
  std::vector<std::uint8_t> a(kRecordBytes), b(kRecordBytes);
  for (int i = 0; i < 50; ++i) {
    const SampleRecord r = random_record(rng);
    encode_record(r, std::span<std::uint8_t, kRecordBytes>(a));
    const SampleRecord back = decode_record(std::span<const std::uint8_t, kRecordBytes>(a));
    REQUIRE(back == r);
    encode_record(back, std::span<std::uint8_t, kRecordBytes>(b));
    REQUIRE(a == b);
  }
}

TEST_CASE("record layout is little-endian with zero padding") {
  RandomStream rng(52);
  SampleRecord r = random_record(rng);
  r.class_id = 0x0142;
  r.rot_index = 3;
  r.config_id = 19;
  r.flags = 0x55;
  std::vector<std::uint8_t> buf(kRecordBytes, 0xee);
  encode_record(r, std::span<std::uint8_t, kRecordBytes>(buf));
  CHECK(buf[0] == 0x42);
  CHECK(buf[1] == 0x01);
  CHECK(buf[2] == 3);
  CHECK(buf[3] == 19);
  CHECK(buf[4] == 0x55);
  CHECK(buf[5] == 0);
  CHECK(buf[6] == 0);
  CHECK(buf[7] == 0);
  CHECK(buf[8] == r.patches[0].data()[0]);
  CHECK(buf[8 + kPatchBytes] == r.patches[1].data()[0]);
  CHECK(buf[kRecordBytes - 1] == r.patches[2].data().back());
}

TEST_CASE("record errors") {
  RandomStream rng(53);
  SampleRecord r = random_record(rng);
  std::vector<std::uint8_t> buf(kRecordBytes);
  encode_record(r, std::span<std::uint8_t, kRecordBytes>(buf));
  buf[6] = 1;
  CHECK_THROWS_AS(decode_record(std::span<const std::uint8_t, kRecordBytes>(buf)), FormatError);
  r.patches[1] = noise_image(110, 110, rng);
  CHECK_THROWS_AS(encode_record(r, std::span<std::uint8_t, kRecordBytes>(buf)), FormatError);
}

TEST_CASE("shard header") {
  const ShardHeader h{kShardFormatVersion, 200, 80, 0};
  std::array<std::uint8_t, kShardHeaderBytes> buf{};
  encode_shard_header(h, buf);
  CHECK(std::string(buf.begin(), buf.begin() + 4) == "PSSS");
  CHECK(buf[4] == 1);
  CHECK(buf[8] == 200);
  CHECK(buf[12] == 80);
  CHECK(decode_shard_header(buf) == h);

  auto bad = buf;
  bad[0] = 'X';
  CHECK_THROWS_AS(decode_shard_header(bad), FormatError);
  bad = buf;
  bad[4] = 2;
  CHECK_THROWS_AS(decode_shard_header(bad), FormatError);
}
