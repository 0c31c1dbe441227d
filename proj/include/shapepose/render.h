#ifndef SHAPEPOSE_RENDER_H_
#define SHAPEPOSE_RENDER_H_

#include <span>
#include <vector>

#include "shapepose/geometry.h"
#include "shapepose/image.h"

namespace shapepose {

// Pinhole projection. Throws std::invalid_argument if p.z() <= 0.
Vec2 ProjectPoint(const CameraIntrinsics& intr, const Point3& p);

// Binary silhouette of `cloud` transformed by `pose`: the union of disks of
// `splat_radius` pixels centred on every projected point (pixel centres
// within the radius, sub-pixel disk centres), then a morphological closing
// with a disk of the same radius. Points with z <= 0 are ignored.
//
// Throws EmptyMaskError if no foreground pixel lands inside the image and
// std::invalid_argument for a non-positive radius.
BinaryMask RenderSilhouette(const PointCloud& cloud, const RigidTransform& pose,
                            const CameraIntrinsics& intr, double splat_radius);

// Same as above for points already in camera coordinates.
BinaryMask RenderPoints(std::span<const Point3> camera_points,
                        const CameraIntrinsics& intr, double splat_radius);

// Pixel radius of a world-space splat of `world_radius` seen at `depth`.
double SplatRadiusPixels(const CameraIntrinsics& intr, double world_radius,
                         double depth);

// Renders with the splat radius derived from the depth of the object
// origin, so that the silhouette scales exactly with 1/z.
BinaryMask RenderObject(const PointCloud& cloud, const RigidTransform& pose,
                        const CameraIntrinsics& intr, double world_splat_radius);

struct ViewSample {
  double theta1 = 0.0;         // degrees
  double theta2 = 0.0;         // degrees
  double view_distance = 1.0;  // z_m
};

// `n` near-uniform viewpoints from a Fibonacci lattice. Throws
// std::invalid_argument when n < 2.
std::vector<ViewSample> SampleViewSphere(int n, double view_distance = 1.0);

}  // namespace shapepose

#endif  // SHAPEPOSE_RENDER_H_
