#pragma once

#include <cstdint>

namespace patchset {

/// Label layout for rotation-with-classification. Labels are rot-major:
/// class = rot_index * num_configs + config_id, so the zero-rotation block
/// coincides with the plain configuration labels.
struct ClassSpace {
  int num_configs = 20;
  int num_rots = 1;

  /// Throws std::invalid_argument unless num_rots is 1, 2 or 4 and num_configs >= 1.
  static ClassSpace make(int num_configs, int num_rots);

  int num_classes() const { return num_configs * num_rots; }

  /// Rotation index -> quarter turns counter-clockwise. For two rotations the
  /// indices are (0 deg, 180 deg); for four (0, 90, 180, 270).
  int quarter_turns(int rot_index) const;

  friend bool operator==(const ClassSpace&, const ClassSpace&) = default;
};

struct DecodedLabel {
  int config_id;
  int rot_index;
  friend bool operator==(const DecodedLabel&, const DecodedLabel&) = default;
};

/// Throws std::out_of_range on arguments outside the space.
int encode_label(int config_id, int rot_index, const ClassSpace& space);
DecodedLabel decode_label(int class_id, const ClassSpace& space);

}  // namespace patchset
