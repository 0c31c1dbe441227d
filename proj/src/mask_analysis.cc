#include "shapepose/mask_analysis.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <numeric>
#include <stdexcept>

#include "shapepose/error.h"

namespace shapepose {

namespace {

class UnionFind {
 public:
  int Add() {
    parent_.push_back(static_cast<int>(parent_.size()));
    return parent_.back();
  }
  int Find(int a) {
    while (parent_[a] != a) {
      parent_[a] = parent_[parent_[a]];
      a = parent_[a];
    }
    return a;
  }
  void Unite(int a, int b) {
    a = Find(a);
    b = Find(b);
    if (a == b) return;
    if (b < a) std::swap(a, b);
    parent_[b] = a;
  }

 private:
  std::vector<int> parent_;
};

template <typename RasterT>
std::vector<Segment> Label(const RasterT& img, int min_area) {
  const int w = img.width(), h = img.height();
  std::vector<int> labels(static_cast<std::size_t>(w) * h, -1);
  UnionFind uf;
  auto lab = [&](int x, int y) -> int {
    if (x < 0 || y < 0 || x >= w) return -1;
    return labels[static_cast<std::size_t>(y) * w + x];
  };
  // First pass: provisional labels from the already-visited neighbours
  // W, NW, N, NE.
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      if (img.at(x, y) == 0) continue;
      const int nb[4] = {lab(x - 1, y), lab(x - 1, y - 1), lab(x, y - 1),
                         lab(x + 1, y - 1)};
      int l = -1;
      for (int n : nb) {
        if (n < 0) continue;
        if (l < 0) {
          l = n;
        } else {
          uf.Unite(l, n);
        }
      }
      if (l < 0) l = uf.Add();
      labels[static_cast<std::size_t>(y) * w + x] = l;
    }
  }
  // Second pass: resolve equivalences and gather pixels in raster order.
  std::vector<int> compact;
  std::vector<Segment> segs;
  for (int y = 0; y < h; ++y) {
    for (int x = 0; x < w; ++x) {
      const int l = labels[static_cast<std::size_t>(y) * w + x];
      if (l < 0) continue;
      const int root = uf.Find(l);
      if (static_cast<int>(compact.size()) <= root) compact.resize(root + 1, -1);
      if (compact[root] < 0) {
        compact[root] = static_cast<int>(segs.size());
        Segment s;
        s.bbox = BoundingBox{x, y, x, y};
        segs.push_back(std::move(s));
      }
      Segment& s = segs[compact[root]];
      s.pixels.push_back(Pixel{x, y});
      s.bbox.x0 = std::min(s.bbox.x0, x);
      s.bbox.x1 = std::max(s.bbox.x1, x);
      s.bbox.y1 = std::max(s.bbox.y1, y);
    }
  }
  std::erase_if(segs, [&](const Segment& s) {
    return static_cast<long>(s.pixels.size()) < min_area;
  });
  return segs;
}

// Neighbour offsets; increasing index turns clockwise on screen (y down).
constexpr int kDx[8] = {1, 1, 0, -1, -1, -1, 0, 1};
constexpr int kDy[8] = {0, 1, 1, 1, 0, -1, -1, -1};

int DirectionOf(const Pixel& from, const Pixel& to) {
  for (int d = 0; d < 8; ++d) {
    if (from.x + kDx[d] == to.x && from.y + kDy[d] == to.y) return d;
  }
  return -1;
}

}  // namespace

std::vector<Segment> ConnectedComponents(const LabelMap& map, int min_area) {
  return Label(map, min_area);
}

std::vector<Segment> ConnectedComponents(const BinaryMask& mask, int min_area) {
  return Label(mask, min_area);
}

int VoteClass(const Segment& segment, const LabelMap& map) {
  if (segment.pixels.empty()) throw std::invalid_argument("empty segment");
  std::vector<std::size_t> counts(256, 0);
  for (const Pixel& p : segment.pixels) ++counts[map.at(p.x, p.y)];
  int best = 0;
  for (int c = 1; c < 256; ++c) {
    if (counts[c] > 0 && (best == 0 || counts[c] > counts[best])) best = c;
  }
  return best;
}

Vec2 Centroid(const Segment& segment, const Vec2& principal_point) {
  if (segment.pixels.empty()) throw std::invalid_argument("empty segment");
  // Integer sums are exact for any realistic image size.
  long long sx = 0, sy = 0;
  for (const Pixel& p : segment.pixels) {
    sx += p.x;
    sy += p.y;
  }
  const double n = static_cast<double>(segment.pixels.size());
  return Vec2(sx / n - principal_point.x(), sy / n - principal_point.y());
}

BinaryMask SegmentMask(const Segment& segment, Pixel* origin) {
  const BoundingBox& b = segment.bbox;
  BinaryMask m(b.x1 - b.x0 + 3, b.y1 - b.y0 + 3);
  for (const Pixel& p : segment.pixels) m.at(p.x - b.x0 + 1, p.y - b.y0 + 1) = 1;
  if (origin) *origin = Pixel{b.x0 - 1, b.y0 - 1};
  return m;
}

Contour TraceContour(const BinaryMask& mask) {
  const std::vector<Segment> comps = ConnectedComponents(mask, 1);
  if (comps.empty()) throw EmptyMaskError("mask has no foreground pixel");
  const Segment* largest = &comps.front();
  for (const Segment& s : comps) {
    if (s.area() > largest->area()) largest = &s;
  }
  Pixel origin;
  const BinaryMask local = SegmentMask(*largest, &origin);
  auto fg = [&](const Pixel& p) {
    return local.Contains(p.x, p.y) && local.at(p.x, p.y) != 0;
  };
  auto step = [](const Pixel& p, int d) { return Pixel{p.x + kDx[d], p.y + kDy[d]}; };

  // The first raster pixel has a background west neighbour, so it starts
  // an outer border.
  const Pixel start{largest->pixels.front().x - origin.x,
                    largest->pixels.front().y - origin.y};
  Contour contour;
  int first_dir = -1;
  for (int k = 0; k < 8; ++k) {
    const int d = (4 + k) % 8;  // clockwise from west
    if (fg(step(start, d))) {
      first_dir = d;
      break;
    }
  }
  if (first_dir < 0) {
    contour.push_back(Pixel{start.x + origin.x, start.y + origin.y});
    return contour;
  }
  const Pixel p1 = step(start, first_dir);
  Pixel p2 = p1;
  Pixel p3 = start;
  for (;;) {
    const int d2 = DirectionOf(p3, p2);
    Pixel p4 = p3;
    for (int k = 1; k <= 8; ++k) {
      const int d = (d2 - k + 16) % 8;  // counter-clockwise after p2
      const Pixel q = step(p3, d);
      if (fg(q)) {
        p4 = q;
        break;
      }
    }
    contour.push_back(Pixel{p3.x + origin.x, p3.y + origin.y});
    if (p4 == start && p3 == p1) break;
    p2 = p3;
    p3 = p4;
  }
  return contour;
}

PolarSignature ComputePolarSignature(const Contour& contour, const Vec2& center,
                                     int n) {
  if (n < 8) throw std::invalid_argument("signature length must be >= 8");
  if (contour.size() < 3) {
    throw DegenerateContourError("contour has fewer than 3 points");
  }
  const double step = 2.0 * std::numbers::pi / n;
  std::vector<double> bins(n, -1.0);
  for (const Pixel& p : contour) {
    const double dx = p.x - center.x(), dy = p.y - center.y();
    double phi = std::atan2(dy, dx);
    if (phi < 0.0) phi += 2.0 * std::numbers::pi;
    const int k = static_cast<int>(std::lround(phi / step)) % n;
    bins[k] = std::max(bins[k], std::hypot(dx, dy));
  }
  std::vector<int> filled;
  for (int k = 0; k < n; ++k) {
    if (bins[k] >= 0.0) filled.push_back(k);
  }
  // At least one bin is filled because the contour is nonempty.
  const int m = static_cast<int>(filled.size());
  for (int i = 0; i < m; ++i) {
    const int a = filled[i];
    const int b = filled[(i + 1) % m];
    const int gap = m == 1 ? n : (b - a + n) % n;
    for (int j = 1; j < gap; ++j) {
      const double t = static_cast<double>(j) / gap;
      bins[(a + j) % n] = (1.0 - t) * bins[a] + t * bins[b];
    }
  }
  return PolarSignature{std::move(bins)};
}

void AnalyzeSegment(Segment& segment, const Vec2& principal_point,
                    int signature_length) {
  segment.centroid = Centroid(segment, principal_point);
  Pixel origin;
  segment.contour = TraceContour(SegmentMask(segment, &origin));
  for (Pixel& p : segment.contour) {
    p.x += origin.x;
    p.y += origin.y;
  }
  const Vec2 center = segment.centroid + principal_point;
  segment.signature =
      ComputePolarSignature(segment.contour, center, signature_length);
}

Segment AnalyzeMask(const BinaryMask& mask, const Vec2& principal_point,
                    int signature_length) {
  std::vector<Segment> comps = ConnectedComponents(mask, 1);
  if (comps.empty()) throw EmptyMaskError("mask has no foreground pixel");
  std::size_t best = 0;
  for (std::size_t i = 1; i < comps.size(); ++i) {
    if (comps[i].area() > comps[best].area()) best = i;
  }
  Segment seg = std::move(comps[best]);
  AnalyzeSegment(seg, principal_point, signature_length);
  return seg;
}

}  // namespace shapepose
