#include "shapepose/calibration.h"

#include <fstream>

#include "json.hpp"
#include "shapepose/error.h"

namespace shapepose {

namespace {

using nlohmann::json;

json CameraToJson(const Camera& cam) {
  const CameraIntrinsics& in = cam.intrinsics;
  const Eigen::Matrix4d m = cam.extrinsics.world_to_camera.Matrix();
  json mat = json::array();
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) mat.push_back(m(r, c));
  }
  return json{{"focal_length", in.focal_length},
              {"principal_point", {in.principal_point.x(), in.principal_point.y()}},
              {"resolution", {in.width, in.height}},
              {"world_to_camera", mat}};
}

Camera CameraFromJson(const json& j) {
  Camera cam;
  cam.intrinsics.focal_length = j.at("focal_length").get<double>();
  const json& pp = j.at("principal_point");
  cam.intrinsics.principal_point = Vec2(pp.at(0).get<double>(), pp.at(1).get<double>());
  const json& res = j.at("resolution");
  cam.intrinsics.width = res.at(0).get<int>();
  cam.intrinsics.height = res.at(1).get<int>();
  cam.intrinsics.Validate();
  const json& mat = j.at("world_to_camera");
  if (!mat.is_array() || mat.size() != 16) {
    throw FormatError("world_to_camera must hold 16 numbers");
  }
  Eigen::Matrix4d m;
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) m(r, c) = mat.at(r * 4 + c).get<double>();
  }
  cam.extrinsics.world_to_camera = RigidTransform::FromMatrix(m);
  return cam;
}

}  // namespace

const Camera& Calibration::at(const std::string& name) const {
  return cameras.at(name);
}

void WriteCalibration(const std::filesystem::path& path, const Calibration& calib) {
  json cams = json::object();
  for (const auto& [name, cam] : calib.cameras) cams[name] = CameraToJson(cam);
  const json doc{{"version", 1}, {"cameras", cams}};
  std::ofstream out(path);
  if (!out) throw FormatError("cannot write calibration: " + path.string());
  out << doc.dump(2) << '\n';
  if (!out) throw FormatError("failed writing calibration: " + path.string());
}

Calibration ReadCalibration(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read calibration: " + path.string());
  Calibration calib;
  try {
    const json doc = json::parse(in);
    if (doc.at("version").get<int>() != 1) {
      throw FormatError("unsupported calibration version");
    }
    for (const auto& [name, cam] : doc.at("cameras").items()) {
      calib.cameras.emplace(name, CameraFromJson(cam));
    }
  } catch (const json::exception& e) {
    throw FormatError("malformed calibration " + path.string() + ": " + e.what());
  } catch (const std::invalid_argument& e) {
    throw FormatError("invalid calibration " + path.string() + ": " + e.what());
  }
  return calib;
}

}  // namespace shapepose
