#pragma once

#include <filesystem>
#include <string>
#include <string_view>
#include <vector>

#include "exgs/gaussian.hpp"

namespace exgs {

// {"cameras": [{"width", "height", "fx", "fy", "cx", "cy", "world_to_camera": [16 numbers]}]}
// Every camera is validated on load (InvariantError); malformed JSON raises FormatError.
std::vector<Camera> parse_camera_rig(std::string_view json_text);
std::string camera_rig_to_json(const std::vector<Camera>& cameras);

std::vector<Camera> load_camera_rig(const std::filesystem::path& path);
void save_camera_rig(const std::filesystem::path& path, const std::vector<Camera>& cameras);

}  // namespace exgs
