#ifndef SHAPEPOSE_MASK_ANALYSIS_H_
#define SHAPEPOSE_MASK_ANALYSIS_H_

#include <vector>

#include "shapepose/geometry.h"
#include "shapepose/image.h"

namespace shapepose {

inline constexpr int kDefaultSignatureLength = 360;
inline constexpr int kDefaultMinArea = 50;

using Contour = std::vector<Pixel>;

// Distance from the centroid to the contour, sampled at N equal angle steps
// starting at image angle 0 (the +x axis) and turning towards +y.
struct PolarSignature {
  std::vector<double> samples;

  int size() const { return static_cast<int>(samples.size()); }
};

struct BoundingBox {
  int x0 = 0, y0 = 0, x1 = -1, y1 = -1;  // inclusive
};

struct Segment {
  int class_id = 0;
  std::vector<Pixel> pixels;
  BoundingBox bbox;
  // Filled by AnalyzeSegment().
  Vec2 centroid = Vec2::Zero();  // relative to the principal point
  Contour contour;
  PolarSignature signature;

  std::size_t area() const { return pixels.size(); }
};

// Maximal 8-connected regions of nonzero pixels (any class) with at least
// `min_area` pixels, ordered by their first pixel in raster order.
// Two-pass labelling with union-find.
std::vector<Segment> ConnectedComponents(const LabelMap& map, int min_area);
std::vector<Segment> ConnectedComponents(const BinaryMask& mask, int min_area);

// Most frequent nonzero label over the segment; ties go to the smaller id.
int VoteClass(const Segment& segment, const LabelMap& map);

// Mean pixel coordinate minus `principal_point`.
Vec2 Centroid(const Segment& segment, const Vec2& principal_point);

// Outer border of the largest 8-connected component (the earliest in raster
// order on ties), traced with Suzuki–Abe border following. The loop starts
// at the component's first raster pixel and is not closed explicitly (the
// last pixel is 8-adjacent to the first). Throws EmptyMaskError.
Contour TraceContour(const BinaryMask& mask);

// Per-angle maximum distance from `center` (image coordinates) to the
// contour, N bins centred on k·360/N, empty bins filled by circular linear
// interpolation. Throws DegenerateContourError for fewer than 3 contour
// points and std::invalid_argument for N < 8.
PolarSignature ComputePolarSignature(const Contour& contour, const Vec2& center,
                                     int n);

// Binary mask of one segment, cropped to its bounding box plus a one-pixel
// border. `origin` receives the image position of the mask's (0, 0).
BinaryMask SegmentMask(const Segment& segment, Pixel* origin);

// Fills centroid, contour and signature of `segment` for a camera with the
// given principal point.
void AnalyzeSegment(Segment& segment, const Vec2& principal_point,
                    int signature_length);

// Largest component of a rendered mask, fully analysed.
Segment AnalyzeMask(const BinaryMask& mask, const Vec2& principal_point,
                    int signature_length);

}  // namespace shapepose

#endif  // SHAPEPOSE_MASK_ANALYSIS_H_
