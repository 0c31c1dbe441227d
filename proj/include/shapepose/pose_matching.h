#ifndef SHAPEPOSE_POSE_MATCHING_H_
#define SHAPEPOSE_POSE_MATCHING_H_

#include <cstddef>
#include <limits>
#include <optional>
#include <vector>

#include "shapepose/geometry.h"
#include "shapepose/mask_analysis.h"
#include "shapepose/shape_library.h"

namespace shapepose {

struct PoseHypothesis {
  std::size_t view_index = 0;
  ViewSample view;
  double theta3 = 0.0;  // degrees
  Point3 translation = Point3::Zero();
  Rotation3 correction;
  // ComposePose(translation, correction, InplaneRotation(theta3),
  //             SphereViewRotation(view.theta1, view.theta2)).
  RigidTransform pose;
  double cost = 0.0;  // 1 - correlation, in [0, 2]
  // Set by RefineWithSecondView(); +inf when the hypothesis leaves camera 2.
  std::optional<double> second_view_cost;
};

// z = z_m · sqrt(N_m / N_s). Throws std::invalid_argument on a
// non-positive area or distance.
double EstimateDepth(double segment_area, double model_area, double view_distance);

// (x·z/f, y·z/f, z) for an image point relative to the principal point.
Point3 BackprojectCenter(const Vec2& image_point, double depth, double focal_length);

struct InplaneMatch {
  double theta3 = 0.0;       // degrees, shift · 360/N
  double correlation = 0.0;  // Pearson coefficient in [-1, 1]
};

// Relative standard deviation (std / mean) below which a signature counts
// as constant, i.e. a disk-like silhouette.
inline constexpr double kConstantSignatureTolerance = 0.02;

bool IsConstantSignature(const PolarSignature& signature);

// Maximum over all N circular shifts k of the Pearson correlation between
// sample[i] and model[i - k]; theta3 = k·360/N of the first maximum.
// Throws ConstantSignatureError if either signature is constant and
// std::invalid_argument if the lengths differ.
InplaneMatch MatchInplane(const PolarSignature& sample, const PolarSignature& model);

// Pearson correlation of sample[i] and model[i - shift].
double CorrelationAtShift(const PolarSignature& sample, const PolarSignature& model,
                          int shift);

// One hypothesis per library view, ascending by cost (stable, so equal
// costs keep library order). Views are scored in parallel; the output is
// bit-identical for any thread count.
//
// Constant signatures: if both the segment and a view are disk-like the
// view matches with correlation 1 and theta3 = 0; if only one of them is,
// the correlation is 0.
std::vector<PoseHypothesis> EstimatePoseSingle(const Segment& segment,
                                               const ShapeLibrary& library,
                                               const CameraIntrinsics& intrinsics);

// Scores a single library view; EstimatePoseSingle() is this over all views.
PoseHypothesis ScoreView(const Segment& segment, const ShapeLibrary& library,
                         std::size_t view_index, const CameraIntrinsics& intrinsics);

inline constexpr int kDefaultTopK = 20;

struct SecondView {
  CameraExtrinsics camera1;
  CameraExtrinsics camera2;
  CameraIntrinsics intrinsics2;
  double splat_radius = 0.03;  // world units, as used for the library
};

// Second-camera cost of every one of the first `top_k` hypotheses:
// 1 - correlation, at zero shift, between the signature of the model
// rendered in camera 2 under the hypothesis pose and segment2's signature.
// +inf when the model origin is behind camera 2 or nothing lands in its
// image.
std::vector<double> SecondViewCosts(const std::vector<PoseHypothesis>& hypotheses,
                                    const PointCloud& model, const SecondView& view,
                                    const Segment& segment2, int top_k);

// Re-ranks the `top_k` best hypotheses by their second-camera cost and
// returns the winner with second_view_cost set. top_k <= 1 returns the
// single-view winner unchanged. Ties keep single-view order.
PoseHypothesis RefineWithSecondView(const std::vector<PoseHypothesis>& hypotheses,
                                    const PointCloud& model, const SecondView& view,
                                    const Segment& segment2, int top_k);

}  // namespace shapepose

#endif  // SHAPEPOSE_POSE_MATCHING_H_
