#include "shapepose/models.h"

#include <cmath>
#include <functional>
#include <numbers>
#include <random>
#include <stdexcept>

#include <Eigen/Geometry>

namespace shapepose {

namespace {

using Rng = std::mt19937_64;
constexpr double kPi = std::numbers::pi;

struct Patch {
  double area;
  std::function<Point3(Rng&)> sample;
};

double U(Rng& rng) { return std::uniform_real_distribution<double>(0.0, 1.0)(rng); }

Patch Rect(const Point3& origin, const Point3& u, const Point3& v) {
  return {u.cross(v).norm(), [=](Rng& rng) {
            const double a = U(rng);
            const double b = U(rng);
            return Point3(origin + a * u + b * v);
          }};
}

// Annulus r0..r1 in the plane z = z0 around the z axis.
Patch Annulus(double z0, double r0, double r1) {
  return {kPi * (r1 * r1 - r0 * r0), [=](Rng& rng) {
            const double r = std::sqrt(r0 * r0 + U(rng) * (r1 * r1 - r0 * r0));
            const double phi = 2.0 * kPi * U(rng);
            return Point3(r * std::cos(phi), r * std::sin(phi), z0);
          }};
}

// Lateral surface between (r0, z0) and (r1, z1) around the z axis.
Patch Frustum(double r0, double z0, double r1, double z1) {
  const double slant = std::hypot(r1 - r0, z1 - z0);
  const double rmax = std::max(r0, r1);
  return {kPi * (r0 + r1) * slant, [=](Rng& rng) {
            double t;
            do {
              t = U(rng);
            } while (U(rng) * rmax > r0 + t * (r1 - r0));
            const double r = r0 + t * (r1 - r0);
            const double phi = 2.0 * kPi * U(rng);
            return Point3(r * std::cos(phi), r * std::sin(phi), z0 + t * (z1 - z0));
          }};
}

// Tube of radius `minor` around a circular arc of radius `major` in the x-z
// plane centred at `center`, arc angles a0..a1 measured from +x.
Patch TorusArc(const Point3& center, double major, double minor, double a0, double a1) {
  const double area = 2.0 * kPi * minor * major * (a1 - a0);
  return {area, [=](Rng& rng) {
            double a, b;
            do {
              a = a0 + U(rng) * (a1 - a0);
              b = 2.0 * kPi * U(rng);
            } while (U(rng) * (major + minor) > major + minor * std::cos(b));
            const double rr = major + minor * std::cos(b);
            return Point3(center.x() + rr * std::cos(a), minor * std::sin(b),
                          center.z() + rr * std::sin(a));
          }};
}

// Lower half (z <= 0) of an ellipsoid shell with semi-axes (a, b, c).
Patch HalfEllipsoid(const Point3& center, double a, double b, double c) {
  // Thomsen's approximation for the ellipsoid area, halved; samples are
  // area-weighted by rejection on the local stretch factor.
  constexpr double p = 1.6075;
  const double area = 2.0 * kPi * std::pow((std::pow(a * b, p) + std::pow(a * c, p) +
                                            std::pow(b * c, p)) / 3.0, 1.0 / p);
  const double wmax = std::max({a * b, a * c, b * c});
  return {area, [=](Rng& rng) {
            for (;;) {
              const double z = -U(rng);
              const double phi = 2.0 * kPi * U(rng);
              const double s = std::sqrt(1.0 - z * z);
              const Point3 n(s * std::cos(phi), s * std::sin(phi), z);
              const double w = std::sqrt(std::pow(b * c * n.x(), 2) + std::pow(a * c * n.y(), 2) +
                                         std::pow(a * b * n.z(), 2));
              if (U(rng) * wmax <= w) {
                return Point3(center.x() + a * n.x(), center.y() + b * n.y(),
                              center.z() + c * n.z());
              }
            }
          }};
}

void AddBox(std::vector<Patch>& patches, const Point3& lo, const Point3& hi) {
  const Point3 d = hi - lo;
  const Point3 ex(d.x(), 0, 0), ey(0, d.y(), 0), ez(0, 0, d.z());
  patches.push_back(Rect(lo, ex, ey));
  patches.push_back(Rect(lo + ez, ex, ey));
  patches.push_back(Rect(lo, ex, ez));
  patches.push_back(Rect(lo + ey, ex, ez));
  patches.push_back(Rect(lo, ey, ez));
  patches.push_back(Rect(lo + ex, ey, ez));
}

PointCloud SampleSurface(const std::vector<Patch>& patches, int n, std::uint64_t seed) {
  if (n < 1) throw std::invalid_argument("model needs at least one point");
  Rng rng(seed);
  std::vector<double> weights;
  for (const Patch& p : patches) weights.push_back(p.area);
  std::discrete_distribution<int> pick(weights.begin(), weights.end());
  std::vector<Point3> pts;
  pts.reserve(n);
  for (int i = 0; i < n; ++i) pts.push_back(patches[pick(rng)].sample(rng));
  Point3 mean = Point3::Zero();
  for (const Point3& p : pts) mean += p;
  mean /= static_cast<double>(n);
  for (Point3& p : pts) p -= mean;
  return PointCloud(std::move(pts));
}

}  // namespace

PointCloud MakeBox(int n_points) {
  std::vector<Patch> patches;
  AddBox(patches, Point3(-0.8, -0.5, -0.3), Point3(0.8, 0.5, 0.3));
  return SampleSurface(patches, n_points, 101);
}

PointCloud MakeBottle(int n_points) {
  std::vector<Patch> patches;
  patches.push_back(Annulus(0.0, 0.0, 0.35));
  patches.push_back(Frustum(0.35, 0.0, 0.35, 1.2));
  patches.push_back(Frustum(0.35, 1.2, 0.12, 1.5));
  patches.push_back(Frustum(0.12, 1.5, 0.12, 1.85));
  patches.push_back(Annulus(1.85, 0.0, 0.12));
  return SampleSurface(patches, n_points, 102);
}

PointCloud MakeCup(int n_points) {
  std::vector<Patch> patches;
  patches.push_back(Annulus(0.0, 0.0, 0.45));
  patches.push_back(Frustum(0.45, 0.0, 0.45, 0.9));
  patches.push_back(Frustum(0.41, 0.05, 0.41, 0.9));
  patches.push_back(Annulus(0.05, 0.0, 0.41));
  patches.push_back(Annulus(0.9, 0.41, 0.45));
  patches.push_back(TorusArc(Point3(0.45, 0.0, 0.45), 0.25, 0.06, -kPi / 2, kPi / 2));
  return SampleSurface(patches, n_points, 103);
}

PointCloud MakePlate(int n_points) {
  std::vector<Patch> patches;
  constexpr double kThick = 0.03;
  patches.push_back(Annulus(0.0, 0.0, 0.55));
  patches.push_back(Annulus(kThick, 0.0, 0.55));
  patches.push_back(Frustum(0.55, 0.0, 1.0, 0.15));
  patches.push_back(Frustum(0.55, kThick, 1.0, 0.15 + kThick));
  patches.push_back(Frustum(1.0, 0.15, 1.0, 0.15 + kThick));
  return SampleSurface(patches, n_points, 104);
}

PointCloud MakeSpoon(int n_points) {
  std::vector<Patch> patches;
  AddBox(patches, Point3(0.0, -0.05, -0.015), Point3(1.25, 0.05, 0.015));
  patches.push_back(HalfEllipsoid(Point3(-0.33, 0.0, 0.0), 0.35, 0.22, 0.08));
  // Flat rim across the top of the bowl.
  patches.push_back({kPi * 0.35 * 0.22 * 0.15, [](Rng& rng) {
                       for (;;) {
                         const double x = 2.0 * U(rng) - 1.0, y = 2.0 * U(rng) - 1.0;
                         const double r2 = x * x + y * y;
                         if (r2 <= 1.0 && r2 >= 0.85 * 0.85) {
                           return Point3(-0.33 + 0.35 * x, 0.22 * y, 0.0);
                         }
                       }
                     }});
  return SampleSurface(patches, n_points, 105);
}

const std::vector<ProceduralClass>& ProceduralClasses() {
  static const std::vector<ProceduralClass> kClasses = {
      {1, "box"}, {2, "bottle"}, {3, "cup"}, {4, "plate"}, {5, "spoon"}};
  return kClasses;
}

PointCloud MakeProceduralModel(const std::string& name) {
  if (name == "box") return MakeBox();
  if (name == "bottle") return MakeBottle();
  if (name == "cup") return MakeCup();
  if (name == "plate") return MakePlate();
  if (name == "spoon") return MakeSpoon();
  throw std::invalid_argument("unknown procedural model '" + name + "'");
}

}  // namespace shapepose
