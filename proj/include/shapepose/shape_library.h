#ifndef SHAPEPOSE_SHAPE_LIBRARY_H_
#define SHAPEPOSE_SHAPE_LIBRARY_H_

#include <filesystem>
#include <vector>

#include "shapepose/geometry.h"
#include "shapepose/mask_analysis.h"
#include "shapepose/render.h"

namespace shapepose {

struct ShapeLibraryEntry {
  ViewSample view;
  double area = 0.0;  // N_m, pixels
  // Silhouette centroid relative to the principal point, which is where the
  // model origin projects. Pixels, at the library distance and focal length.
  Vec2 centroid_offset = Vec2::Zero();
  PolarSignature signature;
};

// Precomputed silhouettes of one model around the view sphere. All entries
// share the view distance z_m, the render intrinsics and the splat radius.
struct ShapeLibrary {
  int class_id = 0;
  double view_distance = 0.0;  // z_m
  double splat_radius = 0.0;   // world units
  CameraIntrinsics intrinsics;
  std::vector<ShapeLibraryEntry> entries;

  int signature_length() const {
    return entries.empty() ? 0 : entries.front().signature.size();
  }
  std::size_t size() const { return entries.size(); }
  // Throws std::invalid_argument if an invariant is broken.
  void Validate() const;
};

inline constexpr int kLibraryResolution = 512;
inline constexpr double kLibraryFraming = 0.6;

// Square render camera at which the whole model, seen from any direction at
// `view_distance`, spans at most `framing` of the image height.
// Throws std::invalid_argument unless view_distance exceeds the model radius.
CameraIntrinsics LibraryIntrinsics(const PointCloud& model, double view_distance,
                                   int resolution = kLibraryResolution,
                                   double framing = kLibraryFraming);

// Pose that shows the model from `view` at distance view.view_distance on
// the optical axis: T(0, 0, z_m) · Rs(theta1, theta2).
RigidTransform LibraryViewPose(const ViewSample& view);

struct LibraryOptions {
  int n_views = 200;
  double view_distance = 8.0;
  double splat_radius = 0.03;  // world units
  int signature_length = kDefaultSignatureLength;
};

// Renders every view on the Fibonacci sphere and stores area, centroid
// offset and polar signature. Views are rendered in parallel; the result is
// independent of the thread count. A failing view is reported as
// Error("view <i>: ...").
ShapeLibrary BuildShapeLibrary(const PointCloud& model, int class_id,
                               const LibraryOptions& options,
                               const CameraIntrinsics& intrinsics);
// Uses LibraryIntrinsics(model, options.view_distance).
ShapeLibrary BuildShapeLibrary(const PointCloud& model, int class_id,
                               const LibraryOptions& options);

// Binary container, little-endian; see docs/FORMATS.md.
void SaveShapeLibrary(const std::filesystem::path& path, const ShapeLibrary& lib);
ShapeLibrary LoadShapeLibrary(const std::filesystem::path& path);

}  // namespace shapepose

#endif  // SHAPEPOSE_SHAPE_LIBRARY_H_
