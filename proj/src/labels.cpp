#include "patchset/labels.hpp"

#include <stdexcept>
#include <string>

namespace patchset {

ClassSpace ClassSpace::make(int num_configs, int num_rots) {
  if (num_configs < 1) throw std::invalid_argument("class space needs at least one configuration");
  if (num_rots != 1 && num_rots != 2 && num_rots != 4) {
    throw std::invalid_argument("rotation count must be 1, 2 or 4, got " + std::to_string(num_rots));
  }
  return ClassSpace{num_configs, num_rots};
}

int ClassSpace::quarter_turns(int rot_index) const {
  if (rot_index < 0 || rot_index >= num_rots) throw std::out_of_range("rotation index out of range");
  return rot_index * (4 / num_rots);
}

int encode_label(int config_id, int rot_index, const ClassSpace& space) {
  if (config_id < 0 || config_id >= space.num_configs) {
    throw std::out_of_range("config id " + std::to_string(config_id) + " outside [0, " +
                            std::to_string(space.num_configs) + ")");
  }
  if (rot_index < 0 || rot_index >= space.num_rots) {
    throw std::out_of_range("rotation index " + std::to_string(rot_index) + " outside [0, " +
                            std::to_string(space.num_rots) + ")");
  }
  return rot_index * space.num_configs + config_id;
}

DecodedLabel decode_label(int class_id, const ClassSpace& space) {
  if (class_id < 0 || class_id >= space.num_classes()) {
    throw std::out_of_range("class id " + std::to_string(class_id) + " outside [0, " +
                            std::to_string(space.num_classes()) + ")");
  }
  return {class_id % space.num_configs, class_id / space.num_configs};
}

}  // namespace patchset
