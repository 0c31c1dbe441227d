#ifndef SHAPEPOSE_PIPELINE_H_
#define SHAPEPOSE_PIPELINE_H_

#include <filesystem>
#include <functional>
#include <map>
#include <memory>
#include <mutex>
#include <optional>
#include <string>
#include <vector>

#include "shapepose/calibration.h"
#include "shapepose/geometry.h"
#include "shapepose/image.h"
#include "shapepose/manifest.h"
#include "shapepose/pose_matching.h"
#include "shapepose/shape_library.h"

namespace shapepose {

struct ClassResources {
  const PointCloud* model = nullptr;
  const ShapeLibrary* library = nullptr;
  double splat_radius = 0.03;  // world units, for camera-2 renders
};

// Returns the model and library of a class; throws UnknownClassError.
using ResourceLookup = std::function<ClassResources(int class_id)>;

struct EstimateOptions {
  int top_k = kDefaultTopK;
  int min_area = kDefaultMinArea;
};

struct PoseEstimate {
  int class_id = 0;
  PoseHypothesis best;
  std::vector<PoseHypothesis> hypotheses;  // camera-1 ranking, ascending cost
  bool used_second_view = false;
};

// Full pipeline on label maps: the largest component of `camera1` (at least
// min_area pixels) gives the class by majority vote and the segment to
// match. When `camera2` is given, its largest component of the same class
// re-ranks the top_k hypotheses; without one the single-view winner stands.
// Throws NoSegmentError when camera 1 has no usable segment.
PoseEstimate EstimateFromLabelMaps(const LabelMap& camera1, const LabelMap* camera2,
                                   const Calibration& calibration,
                                   const ResourceLookup& lookup,
                                   const EstimateOptions& options = {});

// Manifest-backed resources, loaded on first use.
class ResourceCache {
 public:
  explicit ResourceCache(Manifest manifest);

  const Manifest& manifest() const { return manifest_; }
  const Calibration& calibration() const { return calibration_; }
  // Throws UnknownClassError, or FormatError when a file is missing.
  ClassResources Get(int class_id);
  ResourceLookup Lookup();

 private:
  struct Entry {
    std::unique_ptr<PointCloud> model;
    std::unique_ptr<ShapeLibrary> library;
  };
  Manifest manifest_;
  Calibration calibration_;
  std::mutex mu_;
  std::map<int, Entry> loaded_;
};

// Text result file:
//   class <id>
//   pose
//   <4 rows of 4 numbers>
//   translation <x> <y> <z>
//   angles <theta1> <theta2> <theta3>
//   view_index <k>
//   cost <c>
//   second_view_cost <c | none>
void WriteEstimate(const std::filesystem::path& path, const PoseEstimate& estimate);

struct StoredEstimate {
  int class_id = 0;
  RigidTransform pose;
};
StoredEstimate ReadEstimate(const std::filesystem::path& path);

// CSV of every hypothesis in library view order:
// view,theta1,theta2,theta3,z,cost.
std::string CostDump(const PoseEstimate& estimate);

}  // namespace shapepose

#endif  // SHAPEPOSE_PIPELINE_H_
