#ifndef SHAPEPOSE_SYNTH_H_
#define SHAPEPOSE_SYNTH_H_

#include <cstdint>
#include <filesystem>
#include <string>
#include <vector>

#include "shapepose/calibration.h"
#include "shapepose/geometry.h"
#include "shapepose/image.h"

namespace shapepose {

// Two-camera desk rig: camera1 oblique at (-8.95, -9.10, 10.35) looking at
// the origin, camera2 overhead at (0, 0, 10.1). 1024×736 pixels, f = 1000.
Calibration DefaultRig();

// World-frame object placement. Positions are uniform in the box and the
// three Euler angles (applied Rz · Ry · Rx) uniform in their ranges.
struct PoseRanges {
  Point3 position_min = Point3(-1.0, -1.0, 0.0);
  Point3 position_max = Point3(1.0, 1.0, 1.0);
  Point3 euler_min_deg = Point3(0.0, 0.0, 0.0);
  Point3 euler_max_deg = Point3(360.0, 360.0, 360.0);
};

// Object pose for Euler angles in degrees: T(position) · Rz · Ry · Rx.
RigidTransform WorldPose(const Point3& position, const Point3& euler_deg);

struct SceneOptions {
  double splat_radius = 0.03;  // world units
  int max_retries = 200;
  int margin_px = 4;           // keep-out band along the image border
};

struct SceneSpec {
  int class_id = 0;
  RigidTransform world_pose;  // model -> world
  RigidTransform pose;        // model -> camera1, the ground truth P̃
  Calibration cameras;        // "camera1", "camera2"
  std::uint64_t seed = 0;
};

struct Scene {
  LabelMap camera1;
  LabelMap camera2;
  SceneSpec spec;
};

// Renders one single-object scene. Poses that leave either image are
// resampled; after options.max_retries failures throws FrustumError.
// Identical arguments give bit-identical scenes.
Scene GenerateScene(const PointCloud& model, int class_id, const Calibration& cameras,
                    std::uint64_t seed, const PoseRanges& ranges = {},
                    const SceneOptions& options = {});

// True when every model point lies in front of the camera and projects
// at least `margin_px` inside the image.
bool InsideFrustum(const PointCloud& model, const RigidTransform& model_to_camera,
                   const CameraIntrinsics& intrinsics, int margin_px);

// Per-scene seed derived from the dataset seed and the scene index.
std::uint64_t SceneSeed(std::uint64_t dataset_seed, std::uint64_t index);

// 4×4 row-major text matrix, shortest round-trip decimal form.
void WritePoseFile(const std::filesystem::path& path, const RigidTransform& pose);
RigidTransform ReadPoseFile(const std::filesystem::path& path);

struct DatasetClass {
  int class_id = 0;
  std::string name;
  const PointCloud* model = nullptr;
};

struct DatasetScene {
  std::string id;
  int class_id = 0;
  std::filesystem::path camera1;  // label maps and pose, relative to the root
  std::filesystem::path camera2;
  std::filesystem::path pose;
};

struct DatasetClassInfo {
  int class_id = 0;
  std::string name;
  double diameter = 0.0;
};

struct Dataset {
  std::filesystem::path root;
  std::uint64_t seed = 0;
  int per_class = 0;
  std::vector<DatasetClassInfo> classes;
  std::vector<DatasetScene> scenes;
  Calibration calibration;
};

// Writes <out>/dataset.json, <out>/calibration.json and
// <out>/scenes/<id>/{cam1.pgm, cam2.pgm, pose.txt}. Scenes are ordered class
// by class; scene i uses SceneSeed(seed, i). A failing scene is reported as
// Error("scene <i>: ...").
Dataset GenerateDataset(const std::vector<DatasetClass>& classes, int per_class,
                        const Calibration& cameras, std::uint64_t seed,
                        const std::filesystem::path& out_dir,
                        const PoseRanges& ranges = {}, const SceneOptions& options = {});

Dataset LoadDataset(const std::filesystem::path& dir);

}  // namespace shapepose

#endif  // SHAPEPOSE_SYNTH_H_
