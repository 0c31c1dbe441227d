#ifndef SHAPEPOSE_CALIBRATION_H_
#define SHAPEPOSE_CALIBRATION_H_

#include <filesystem>
#include <map>
#include <string>

#include "shapepose/geometry.h"

namespace shapepose {

// Named camera set. The conventional names are "camera1" (the reference
// camera whose frame poses are expressed in) and "camera2".
struct Calibration {
  std::map<std::string, Camera> cameras;

  // Throws std::out_of_range if `name` is unknown.
  const Camera& at(const std::string& name) const;
};

// JSON key-value file:
//   {"version": 1, "cameras": {"camera1": {"focal_length": f,
//     "principal_point": [px, py], "resolution": [w, h],
//     "world_to_camera": [16 numbers, row-major]}, ...}}
// Doubles are written in shortest round-trip form, so Write → Read is
// bit-exact.
void WriteCalibration(const std::filesystem::path& path, const Calibration& calib);
Calibration ReadCalibration(const std::filesystem::path& path);

}  // namespace shapepose

#endif  // SHAPEPOSE_CALIBRATION_H_
