#include "patchset/record.hpp"

#include <algorithm>
#include <string>

namespace patchset {

namespace {

void put_u16(std::uint8_t* p, std::uint16_t v) {
  p[0] = static_cast<std::uint8_t>(v);
  p[1] = static_cast<std::uint8_t>(v >> 8);
}

void put_u32(std::uint8_t* p, std::uint32_t v) {
  for (int i = 0; i < 4; ++i) p[i] = static_cast<std::uint8_t>(v >> (8 * i));
}

std::uint16_t get_u16(const std::uint8_t* p) { return static_cast<std::uint16_t>(p[0] | (p[1] << 8)); }

std::uint32_t get_u32(const std::uint8_t* p) {
  std::uint32_t v = 0;
  for (int i = 0; i < 4; ++i) v |= static_cast<std::uint32_t>(p[i]) << (8 * i);
  return v;
}

}  // namespace

void encode_record(const SampleRecord& rec, std::span<std::uint8_t, kRecordBytes> out) {
  std::uint8_t* p = out.data();
  put_u16(p, rec.class_id);
  p[2] = rec.rot_index;
  p[3] = rec.config_id;
  p[4] = rec.flags;
  p[5] = p[6] = p[7] = 0;
  p += kRecordHeaderBytes;
  for (const auto& patch : rec.patches) {
    if (patch.width() != 96 || patch.height() != 96) throw FormatError("record patches must be 96x96");
    std::copy(patch.data().begin(), patch.data().end(), p);
    p += kPatchBytes;
  }
}

SampleRecord decode_record(std::span<const std::uint8_t, kRecordBytes> in) {
  const std::uint8_t* p = in.data();
  if (p[5] != 0 || p[6] != 0 || p[7] != 0) throw FormatError("record reserved bytes are not zero");
  SampleRecord rec;
  rec.class_id = get_u16(p);
  rec.rot_index = p[2];
  rec.config_id = p[3];
  rec.flags = p[4];
  p += kRecordHeaderBytes;
  for (auto& patch : rec.patches) {
    patch = RgbImage(96, 96, std::vector<std::uint8_t>(p, p + kPatchBytes));
    p += kPatchBytes;
  }
  return rec;
}

void encode_shard_header(const ShardHeader& h, std::span<std::uint8_t, kShardHeaderBytes> out) {
  std::uint8_t* p = out.data();
  std::copy(kShardMagic.begin(), kShardMagic.end(), p);
  put_u32(p + 4, h.format_version);
  put_u32(p + 8, h.record_count);
  put_u16(p + 12, h.class_count);
  put_u16(p + 14, h.reserved);
}

ShardHeader decode_shard_header(std::span<const std::uint8_t, kShardHeaderBytes> in) {
  const std::uint8_t* p = in.data();
  if (!std::equal(kShardMagic.begin(), kShardMagic.end(), p)) throw FormatError("bad shard magic");
  ShardHeader h;
  h.format_version = get_u32(p + 4);
  if (h.format_version != kShardFormatVersion) {
    throw FormatError("unsupported shard format version " + std::to_string(h.format_version));
  }
  h.record_count = get_u32(p + 8);
  h.class_count = get_u16(p + 12);
  h.reserved = get_u16(p + 14);
  return h;
}

}  // namespace patchset
