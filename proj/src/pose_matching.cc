#include "shapepose/pose_matching.h"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <stdexcept>

#include "shapepose/error.h"
#include "shapepose/reference.h"
#include "shapepose/render.h"

namespace shapepose {

double EstimateDepth(double segment_area, double model_area, double view_distance) {
  if (!(segment_area > 0.0) || !(model_area > 0.0)) {
    throw std::invalid_argument("depth from area needs nonzero areas");
  }
  if (!(view_distance > 0.0)) {
    throw std::invalid_argument("view distance must be positive");
  }
  return view_distance * std::sqrt(model_area / segment_area);
}

Point3 BackprojectCenter(const Vec2& image_point, double depth, double focal_length) {
  if (!(depth > 0.0) || !(focal_length > 0.0)) {
    throw std::invalid_argument("back-projection needs positive depth and focal length");
  }
  return Point3(image_point.x() * depth / focal_length,
                image_point.y() * depth / focal_length, depth);
}

namespace {

struct Centered {
  std::vector<double> values;
  double sum_sq = 0.0;
};

Centered Center(const PolarSignature& s) {
  const double mean =
      std::accumulate(s.samples.begin(), s.samples.end(), 0.0) / s.size();
  Centered c;
  c.values.resize(s.samples.size());
  for (std::size_t i = 0; i < s.samples.size(); ++i) {
    c.values[i] = s.samples[i] - mean;
    c.sum_sq += c.values[i] * c.values[i];
  }
  return c;
}

void CheckLengths(const PolarSignature& a, const PolarSignature& b) {
  if (a.size() != b.size() || a.size() == 0) {
    throw std::invalid_argument("signatures must have the same nonzero length");
  }
}

}  // namespace

bool IsConstantSignature(const PolarSignature& signature) {
  const int n = signature.size();
  if (n == 0) return true;
  const double mean =
      std::accumulate(signature.samples.begin(), signature.samples.end(), 0.0) / n;
  double ss = 0.0;
  for (double v : signature.samples) ss += (v - mean) * (v - mean);
  const double sd = std::sqrt(ss / n);
  return sd <= kConstantSignatureTolerance * std::abs(mean);
}

InplaneMatch MatchInplane(const PolarSignature& sample, const PolarSignature& model) {
  CheckLengths(sample, model);
  if (IsConstantSignature(sample) || IsConstantSignature(model)) {
    throw ConstantSignatureError("signature has no variance");
  }
  const int n = sample.size();
  const Centered s = Center(sample);
  const Centered m = Center(model);
  // model[(i - k) mod n] == doubled[i + n - k]
  std::vector<double> doubled(2 * n);
  std::copy(m.values.begin(), m.values.end(), doubled.begin());
  std::copy(m.values.begin(), m.values.end(), doubled.begin() + n);
  const double norm = std::sqrt(s.sum_sq * m.sum_sq);
  const double* sv = s.values.data();
  int best_k = 0;
  double best = -std::numeric_limits<double>::infinity();
  for (int k = 0; k < n; ++k) {
    const double* mv = doubled.data() + (n - k);
    double dot = 0.0;
#pragma omp simd reduction(+ : dot)
    for (int i = 0; i < n; ++i) dot += sv[i] * mv[i];
    if (dot > best) {
      best = dot;
      best_k = k;
    }
  }
  const double corr = std::clamp(best / norm, -1.0, 1.0);
  return InplaneMatch{best_k * 360.0 / n, corr};
}

double CorrelationAtShift(const PolarSignature& sample, const PolarSignature& model,
                          int shift) {
  CheckLengths(sample, model);
  const int n = sample.size();
  const Centered s = Center(sample);
  const Centered m = Center(model);
  const int k = ((shift % n) + n) % n;
  double dot = 0.0;
  for (int i = 0; i < n; ++i) dot += s.values[i] * m.values[(i - k + n) % n];
  const double norm = std::sqrt(s.sum_sq * m.sum_sq);
  if (!(norm > 0.0)) throw ConstantSignatureError("signature has no variance");
  return std::clamp(dot / norm, -1.0, 1.0);
}

PoseHypothesis ScoreView(const Segment& segment, const ShapeLibrary& library,
                         std::size_t view_index, const CameraIntrinsics& intrinsics) {
  const ShapeLibraryEntry& entry = library.entries.at(view_index);
  const double f = intrinsics.focal_length;
  const double scale = f / library.intrinsics.focal_length;

  InplaneMatch match;
  const bool seg_const = IsConstantSignature(segment.signature);
  const bool view_const = IsConstantSignature(entry.signature);
  if (seg_const || view_const) {
    match = InplaneMatch{0.0, seg_const && view_const ? 1.0 : 0.0};
  } else {
    match = MatchInplane(segment.signature, entry.signature);
  }

  // An off-axis object covers 1/cos³ more pixels than the same object
  // centred on the optical axis at the same range; undo that before the
  // area law, which holds along the line of sight.
  const Vec2& centroid = segment.centroid;
  const double cos_seg = f / std::sqrt(f * f + centroid.squaredNorm());
  const double area_on_axis =
      static_cast<double>(segment.area()) * cos_seg * cos_seg * cos_seg;
  const double range = EstimateDepth(area_on_axis, entry.area * scale * scale,
                                     library.view_distance);

  // Where the model origin projects: the segment centroid minus the
  // library's centroid offset, turned by theta3 and rescaled.
  const double t3 = DegToRad(match.theta3);
  const double c3 = std::cos(t3), s3 = std::sin(t3);
  const Vec2& o = entry.centroid_offset;
  const Vec2 offset = Vec2(c3 * o.x() - s3 * o.y(), s3 * o.x() + c3 * o.y()) *
                      (scale * library.view_distance / range);
  const Vec2 origin = centroid - offset;
  const double cos_origin = f / std::sqrt(f * f + origin.squaredNorm());
  const Point3 t = BackprojectCenter(origin, range * cos_origin, f);

  PoseHypothesis h;
  h.view_index = view_index;
  h.view = entry.view;
  h.theta3 = match.theta3;
  h.translation = t;
  h.correction = CorrectionRotation(t);
  h.pose = ComposePose(t, h.correction, InplaneRotation(match.theta3),
                       SphereViewRotation(entry.view.theta1, entry.view.theta2));
  h.cost = 1.0 - match.correlation;
  return h;
}

namespace {

void SortByCost(std::vector<PoseHypothesis>& hyps) {
  std::stable_sort(hyps.begin(), hyps.end(),
                   [](const PoseHypothesis& a, const PoseHypothesis& b) {
                     return a.cost < b.cost;
                   });
}

void CheckEstimateInputs(const Segment& segment, const ShapeLibrary& library) {
  if (library.entries.empty()) throw std::invalid_argument("empty shape library");
  if (segment.signature.size() != library.signature_length()) {
    throw std::invalid_argument("segment signature length differs from the library");
  }
  if (segment.area() == 0) throw std::invalid_argument("empty segment");
}

}  // namespace

std::vector<PoseHypothesis> EstimatePoseSingle(const Segment& segment,
                                               const ShapeLibrary& library,
                                               const CameraIntrinsics& intrinsics) {
  CheckEstimateInputs(segment, library);
  std::vector<PoseHypothesis> hyps(library.entries.size());
  const long n = static_cast<long>(hyps.size());
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    hyps[i] = ScoreView(segment, library, static_cast<std::size_t>(i), intrinsics);
  }
  SortByCost(hyps);
  return hyps;
}

std::vector<double> SecondViewCosts(const std::vector<PoseHypothesis>& hypotheses,
                                    const PointCloud& model, const SecondView& view,
                                    const Segment& segment2, int top_k) {
  const int k = std::clamp(top_k, 0, static_cast<int>(hypotheses.size()));
  const RigidTransform cam1_to_cam2 = CameraToCamera(view.camera1, view.camera2);
  const int n_sig = segment2.signature.size();
  const bool seg_const = IsConstantSignature(segment2.signature);
  std::vector<double> costs(k, std::numeric_limits<double>::infinity());
#pragma omp parallel for schedule(dynamic)
  for (int i = 0; i < k; ++i) {
    const RigidTransform pose2 = cam1_to_cam2 * hypotheses[i].pose;
    const double depth = pose2.translation().z();
    if (!(depth > 0.0)) continue;
    try {
      const double r = SplatRadiusPixels(view.intrinsics2, view.splat_radius, depth);
      const BinaryMask mask = RenderSilhouette(model, pose2, view.intrinsics2, r);
      const Segment rendered =
          AnalyzeMask(mask, view.intrinsics2.principal_point, n_sig);
      const bool ren_const = IsConstantSignature(rendered.signature);
      if (seg_const || ren_const) {
        costs[i] = seg_const && ren_const ? 0.0 : 1.0;
      } else {
        costs[i] = 1.0 - CorrelationAtShift(segment2.signature, rendered.signature, 0);
      }
    } catch (const EmptyMaskError&) {
      // Outside camera 2: keep +inf.
    } catch (const DegenerateContourError&) {
    }
  }
  return costs;
}

PoseHypothesis RefineWithSecondView(const std::vector<PoseHypothesis>& hypotheses,
                                    const PointCloud& model, const SecondView& view,
                                    const Segment& segment2, int top_k) {
  if (hypotheses.empty()) throw std::invalid_argument("no hypotheses to refine");
  if (top_k <= 1) return hypotheses.front();
  const std::vector<double> costs =
      SecondViewCosts(hypotheses, model, view, segment2, top_k);
  std::size_t best = 0;
  for (std::size_t i = 1; i < costs.size(); ++i) {
    if (costs[i] < costs[best]) best = i;
  }
  PoseHypothesis out = hypotheses[best];
  out.second_view_cost = costs[best];
  return out;
}

namespace reference {

InplaneMatch MatchInplane(const PolarSignature& sample, const PolarSignature& model) {
  CheckLengths(sample, model);
  if (IsConstantSignature(sample) || IsConstantSignature(model)) {
    throw ConstantSignatureError("signature has no variance");
  }
  const int n = sample.size();
  InplaneMatch best{0.0, -2.0};
  for (int k = 0; k < n; ++k) {
    double ms = 0.0, mm = 0.0;
    for (int i = 0; i < n; ++i) {
      ms += sample.samples[i];
      mm += model.samples[(i - k + n) % n];
    }
    ms /= n;
    mm /= n;
    double sxy = 0.0, sxx = 0.0, syy = 0.0;
    for (int i = 0; i < n; ++i) {
      const double a = sample.samples[i] - ms;
      const double b = model.samples[(i - k + n) % n] - mm;
      sxy += a * b;
      sxx += a * a;
      syy += b * b;
    }
    const double r = sxy / std::sqrt(sxx * syy);
    if (r > best.correlation) best = InplaneMatch{k * 360.0 / n, r};
  }
  return best;
}

std::vector<PoseHypothesis> EstimatePoseSingle(const Segment& segment,
                                               const ShapeLibrary& library,
                                               const CameraIntrinsics& intrinsics) {
  CheckEstimateInputs(segment, library);
  std::vector<PoseHypothesis> hyps;
  hyps.reserve(library.entries.size());
  for (std::size_t i = 0; i < library.entries.size(); ++i) {
    hyps.push_back(ScoreView(segment, library, i, intrinsics));
  }
  SortByCost(hyps);
  return hyps;
}

}  // namespace reference

}  // namespace shapepose
