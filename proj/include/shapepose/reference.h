#ifndef SHAPEPOSE_REFERENCE_H_
#define SHAPEPOSE_REFERENCE_H_

// Serial, unoptimised versions of the parallel kernels. They are kept for
// tests and the benchmark target.

#include <vector>

#include "shapepose/geometry.h"
#include "shapepose/pose_matching.h"

namespace shapepose::reference {

// Pearson correlation recomputed from scratch for every shift.
InplaneMatch MatchInplane(const PolarSignature& sample, const PolarSignature& model);

// Views scored one after another.
std::vector<PoseHypothesis> EstimatePoseSingle(const Segment& segment,
                                               const ShapeLibrary& library,
                                               const CameraIntrinsics& intrinsics);

// Double loop over both transformed clouds.
double AddsError(const RigidTransform& pose, const RigidTransform& pose_gt,
                 const PointCloud& model);

}  // namespace shapepose::reference

#endif  // SHAPEPOSE_REFERENCE_H_
