#pragma once

#include <array>
#include <cstddef>
#include <cstdint>
#include <span>
#include <stdexcept>

#include "patchset/image.hpp"

namespace patchset {

inline constexpr std::size_t kPatchBytes = 96 * 96 * 3;              // 27648
inline constexpr std::size_t kRecordHeaderBytes = 8;
inline constexpr std::size_t kRecordBytes = kRecordHeaderBytes + 3 * kPatchBytes;  // 82952
inline constexpr std::size_t kShardHeaderBytes = 16;
inline constexpr std::array<char, 4> kShardMagic{'P', 'S', 'S', 'S'};
inline constexpr std::uint32_t kShardFormatVersion = 1;

class FormatError : public std::runtime_error {
 public:
  using std::runtime_error::runtime_error;
};

/// One training sample. On disk (little-endian):
///   u16 class_id | u8 rot_index | u8 config_id | u8 flags | 3 reserved zero bytes |
///   P1, P2, P3 as 96x96 row-major interleaved RGB.
struct SampleRecord {
  std::uint16_t class_id = 0;
  std::uint8_t rot_index = 0;
  std::uint8_t config_id = 0;
  std::uint8_t flags = 0;
  std::array<RgbImage, 3> patches;

  friend bool operator==(const SampleRecord&, const SampleRecord&) = default;
};

/// Writes exactly kRecordBytes into out. Patches must be 96x96.
void encode_record(const SampleRecord& rec, std::span<std::uint8_t, kRecordBytes> out);
/// Throws FormatError on non-zero reserved bytes.
SampleRecord decode_record(std::span<const std::uint8_t, kRecordBytes> in);

struct ShardHeader {
  std::uint32_t format_version = kShardFormatVersion;
  std::uint32_t record_count = 0;
  std::uint16_t class_count = 0;
  std::uint16_t reserved = 0;

  friend bool operator==(const ShardHeader&, const ShardHeader&) = default;
};

void encode_shard_header(const ShardHeader& h, std::span<std::uint8_t, kShardHeaderBytes> out);
/// Throws FormatError on bad magic or version.
ShardHeader decode_shard_header(std::span<const std::uint8_t, kShardHeaderBytes> in);

}  // namespace patchset
