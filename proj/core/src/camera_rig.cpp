#include "exgs/camera_rig.hpp"

#include <nlohmann/json.hpp>

#include "exgs/error.hpp"
#include "exgs/file_io.hpp"

namespace exgs {

using nlohmann::json;

std::vector<Camera> parse_camera_rig(std::string_view json_text) {
  json doc;
  try {
    doc = json::parse(json_text);
  } catch (const json::parse_error& e) {
    throw FormatError(std::string("camera rig: ") + e.what());
  }
  if (!doc.is_object() || !doc.contains("cameras") || !doc["cameras"].is_array()) {
    throw FormatError("camera rig: expected an object with a \"cameras\" array");
  }
  std::vector<Camera> cams;
  for (const auto& entry : doc["cameras"]) {
    Camera cam;
    try {
      cam.width = entry.at("width").get<int>();
      cam.height = entry.at("height").get<int>();
      cam.fx = entry.at("fx").get<double>();
      cam.fy = entry.at("fy").get<double>();
      cam.cx = entry.at("cx").get<double>();
      cam.cy = entry.at("cy").get<double>();
      const auto& m = entry.at("world_to_camera");
      if (!m.is_array() || m.size() != 16) throw FormatError("camera rig: world_to_camera needs 16 numbers");
      for (std::size_t i = 0; i < 16; ++i) cam.world_to_camera[i] = m[i].get<double>();
    } catch (const json::exception& e) {
      throw FormatError(std::string("camera rig: ") + e.what());
    }
    cam.validate();
    cams.push_back(cam);
  }
  return cams;
}

std::string camera_rig_to_json(const std::vector<Camera>& cameras) {
  json list = json::array();
  for (const Camera& cam : cameras) {
    list.push_back({{"width", cam.width},
                    {"height", cam.height},
                    {"fx", cam.fx},
                    {"fy", cam.fy},
                    {"cx", cam.cx},
                    {"cy", cam.cy},
                    {"world_to_camera", cam.world_to_camera}});
  }
  return json{{"cameras", list}}.dump(2) + "\n";
}

std::vector<Camera> load_camera_rig(const std::filesystem::path& path) {
  const auto bytes = read_file(path);
  return parse_camera_rig(std::string_view(reinterpret_cast<const char*>(bytes.data()), bytes.size()));
}

void save_camera_rig(const std::filesystem::path& path, const std::vector<Camera>& cameras) {
  write_file(path, camera_rig_to_json(cameras));
}

}  // namespace exgs
