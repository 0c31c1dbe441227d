#include "shapepose/render.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>

#include "shapepose/error.h"

namespace shapepose {

Vec2 ProjectPoint(const CameraIntrinsics& intr, const Point3& p) {
  if (!(p.z() > 0.0)) {
    throw std::invalid_argument("cannot project a point at or behind the camera");
  }
  return Vec2(intr.principal_point.x() + intr.focal_length * p.x() / p.z(),
              intr.principal_point.y() + intr.focal_length * p.y() / p.z());
}

namespace {

// Working buffer covering a rectangle of the (unbounded) image plane.
struct Window {
  int x0, y0, w, h;
  std::vector<std::uint8_t> px;

  std::uint8_t* Row(int y) { return px.data() + static_cast<std::size_t>(y) * w; }
};

// Half-widths of the integer disk of radius r, indexed by |dy|.
std::vector<int> DiskHalfWidths(double r) {
  const int ri = static_cast<int>(std::floor(r));
  std::vector<int> hw(ri + 1);
  for (int dy = 0; dy <= ri; ++dy) {
    hw[dy] = static_cast<int>(std::floor(std::sqrt(r * r - dy * dy) + 1e-12));
  }
  return hw;
}

// out(x, y) = OR (dilate) or AND (erode) over the disk. Outside the window
// counts as background.
void Morph(Window& win, const std::vector<int>& hw, bool dilate) {
  const int w = win.w, h = win.h;
  // Row prefix counts of foreground pixels.
  std::vector<int> prefix(static_cast<std::size_t>(w + 1) * h);
  for (int y = 0; y < h; ++y) {
    int* pre = prefix.data() + static_cast<std::size_t>(y) * (w + 1);
    const std::uint8_t* row = win.Row(y);
    pre[0] = 0;
    for (int x = 0; x < w; ++x) pre[x + 1] = pre[x] + (row[x] ? 1 : 0);
  }
  auto count = [&](int y, int xa, int xb) {
    const int* pre = prefix.data() + static_cast<std::size_t>(y) * (w + 1);
    xa = std::max(xa, 0);
    xb = std::min(xb, w - 1);
    return xb < xa ? 0 : pre[xb + 1] - pre[xa];
  };
  const int rr = static_cast<int>(hw.size()) - 1;
  std::vector<std::uint8_t> out(win.px.size(), 0);
  for (int y = 0; y < h; ++y) {
    std::uint8_t* orow = out.data() + static_cast<std::size_t>(y) * w;
    for (int x = 0; x < w; ++x) {
      bool v = !dilate;
      for (int dy = -rr; dy <= rr && v != dilate; ++dy) {
        const int yy = y + dy;
        const int half = hw[std::abs(dy)];
        if (yy < 0 || yy >= h) {
          if (!dilate) v = false;
          continue;
        }
        const int c = count(yy, x - half, x + half);
        if (dilate) {
          if (c > 0) v = true;
        } else if (c != 2 * half + 1) {
          v = false;
        }
      }
      orow[x] = v ? 1 : 0;
    }
  }
  win.px.swap(out);
}

}  // namespace

BinaryMask RenderPoints(std::span<const Point3> camera_points,
                        const CameraIntrinsics& intr, double splat_radius) {
  if (!(splat_radius > 0.0) || !std::isfinite(splat_radius)) {
    throw std::invalid_argument("splat radius must be positive");
  }
  const double r = splat_radius;
  const double f = intr.focal_length;
  const double cx = intr.principal_point.x(), cy = intr.principal_point.y();

  std::vector<Vec2> proj;
  proj.reserve(camera_points.size());
  double minx = 1e300, miny = 1e300, maxx = -1e300, maxy = -1e300;
  for (const Point3& p : camera_points) {
    if (!(p.z() > 0.0)) continue;
    const Vec2 q(cx + f * p.x() / p.z(), cy + f * p.y() / p.z());
    if (!q.allFinite()) continue;
    proj.push_back(q);
    minx = std::min(minx, q.x());
    maxx = std::max(maxx, q.x());
    miny = std::min(miny, q.y());
    maxy = std::max(maxy, q.y());
  }
  if (proj.empty()) throw EmptyMaskError("no point in front of the camera");

  // The window reaches `pad` beyond both the splats and the image, so the
  // closing near the image border sees the off-image splats too.
  const int pad = 2 * static_cast<int>(std::ceil(r)) + 2;
  const double lo_x = std::max(minx - r - pad, -static_cast<double>(pad));
  const double lo_y = std::max(miny - r - pad, -static_cast<double>(pad));
  const double hi_x = std::min(maxx + r + pad, intr.width - 1.0 + pad);
  const double hi_y = std::min(maxy + r + pad, intr.height - 1.0 + pad);
  if (hi_x < lo_x || hi_y < lo_y) {
    throw EmptyMaskError("silhouette falls outside the image");
  }
  Window win;
  win.x0 = static_cast<int>(std::floor(lo_x));
  win.y0 = static_cast<int>(std::floor(lo_y));
  win.w = static_cast<int>(std::ceil(hi_x)) - win.x0 + 1;
  win.h = static_cast<int>(std::ceil(hi_y)) - win.y0 + 1;
  win.px.assign(static_cast<std::size_t>(win.w) * win.h, 0);

  const double r2 = r * r;
  for (const Vec2& q : proj) {
    const int ya = std::max(static_cast<int>(std::ceil(q.y() - r)), win.y0);
    const int yb = std::min(static_cast<int>(std::floor(q.y() + r)), win.y0 + win.h - 1);
    for (int y = ya; y <= yb; ++y) {
      const double dy = y - q.y();
      const double half = std::sqrt(std::max(0.0, r2 - dy * dy));
      const int xa = std::max(static_cast<int>(std::ceil(q.x() - half)), win.x0);
      const int xb = std::min(static_cast<int>(std::floor(q.x() + half)), win.x0 + win.w - 1);
      if (xb < xa) continue;
      std::uint8_t* row = win.Row(y - win.y0);
      std::fill(row + (xa - win.x0), row + (xb - win.x0) + 1, std::uint8_t{1});
    }
  }

  const std::vector<int> hw = DiskHalfWidths(r);
  Morph(win, hw, /*dilate=*/true);
  Morph(win, hw, /*dilate=*/false);

  BinaryMask mask(intr.width, intr.height);
  bool any = false;
  const int ya = std::max(win.y0, 0), yb = std::min(win.y0 + win.h, intr.height);
  const int xa = std::max(win.x0, 0), xb = std::min(win.x0 + win.w, intr.width);
  for (int y = ya; y < yb; ++y) {
    const std::uint8_t* row = win.Row(y - win.y0);
    for (int x = xa; x < xb; ++x) {
      if (row[x - win.x0]) {
        mask.at(x, y) = 1;
        any = true;
      }
    }
  }
  if (!any) throw EmptyMaskError("silhouette falls outside the image");
  return mask;
}

BinaryMask RenderSilhouette(const PointCloud& cloud, const RigidTransform& pose,
                            const CameraIntrinsics& intr, double splat_radius) {
  std::vector<Point3> cam(cloud.size());
  for (std::size_t i = 0; i < cloud.size(); ++i) cam[i] = pose * cloud[i];
  return RenderPoints(cam, intr, splat_radius);
}

double SplatRadiusPixels(const CameraIntrinsics& intr, double world_radius,
                         double depth) {
  if (!(depth > 0.0)) {
    throw std::invalid_argument("splat depth must be positive");
  }
  return intr.focal_length * world_radius / depth;
}

BinaryMask RenderObject(const PointCloud& cloud, const RigidTransform& pose,
                        const CameraIntrinsics& intr, double world_splat_radius) {
  const double r =
      SplatRadiusPixels(intr, world_splat_radius, pose.translation().z());
  return RenderSilhouette(cloud, pose, intr, r);
}

std::vector<ViewSample> SampleViewSphere(int n, double view_distance) {
  if (n < 2) throw std::invalid_argument("view sphere needs at least 2 samples");
  if (!(view_distance > 0.0)) {
    throw std::invalid_argument("view distance must be positive");
  }
  const double golden = std::numbers::pi * (3.0 - std::sqrt(5.0));
  std::vector<ViewSample> views;
  views.reserve(n);
  for (int i = 0; i < n; ++i) {
    const double z = 1.0 - (2.0 * i + 1.0) / n;
    const double rho = std::sqrt(std::max(0.0, 1.0 - z * z));
    const double phi = golden * i;
    const Point3 dir(rho * std::cos(phi), rho * std::sin(phi), z);
    const Vec2 angles = SphereAnglesFromDirection(dir);
    views.push_back(ViewSample{angles.x(), angles.y(), view_distance});
  }
  return views;
}

}  // namespace shapepose
