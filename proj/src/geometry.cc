#include "shapepose/geometry.h"

#include <algorithm>
#include <cmath>
#include <numbers>
#include <stdexcept>
#include <string>

#include <Eigen/Geometry>
#include <Eigen/SVD>

namespace shapepose {

double DegToRad(double deg) { return deg * std::numbers::pi / 180.0; }
double RadToDeg(double rad) { return rad * 180.0 / std::numbers::pi; }

double NormalizeDegrees(double deg) {
  double r = std::fmod(deg, 360.0);
  if (r < 0.0) r += 360.0;
  // fmod of a tiny negative value can round up to exactly 360.
  if (r >= 360.0) r = 0.0;
  return r;
}

bool Rotation3::IsRotation(const Eigen::Matrix3d& m, double tol) {
  if (!m.allFinite()) return false;
  const Eigen::Matrix3d err = m.transpose() * m - Eigen::Matrix3d::Identity();
  if (err.cwiseAbs().maxCoeff() > tol) return false;
  return std::abs(m.determinant() - 1.0) <= tol;
}

Rotation3 Rotation3::FromMatrix(const Eigen::Matrix3d& m) {
  if (!IsRotation(m)) {
    throw std::invalid_argument("matrix is not a proper rotation");
  }
  return Rotation3(m);
}

Rotation3 Rotation3::AxisAngle(const Point3& axis, double angle_rad) {
  const double n = axis.norm();
  if (!(n > 0.0) || !std::isfinite(angle_rad)) {
    throw std::invalid_argument("axis-angle needs a nonzero finite axis");
  }
  return Rotation3(Eigen::AngleAxisd(angle_rad, axis / n).toRotationMatrix());
}

double Rotation3::Angle() const {
  const double c = std::clamp((m_.trace() - 1.0) / 2.0, -1.0, 1.0);
  return std::acos(c);
}

RigidTransform RigidTransform::FromMatrix(const Eigen::Matrix4d& m) {
  const Eigen::RowVector4d last(0.0, 0.0, 0.0, 1.0);
  if (m.row(3) != last) {
    throw std::invalid_argument("last row of a rigid transform must be 0 0 0 1");
  }
  return RigidTransform(Rotation3::FromMatrix(m.topLeftCorner<3, 3>()),
                        m.topRightCorner<3, 1>());
}

Eigen::Matrix4d RigidTransform::Matrix() const {
  Eigen::Matrix4d m = Eigen::Matrix4d::Identity();
  m.topLeftCorner<3, 3>() = rotation_.matrix();
  m.topRightCorner<3, 1>() = translation_;
  return m;
}

RigidTransform RigidTransform::Inverse() const {
  const Rotation3 rt = rotation_.Inverse();
  return RigidTransform(rt, -(rt * translation_));
}

void CameraIntrinsics::Validate() const {
  if (!(focal_length > 0.0) || !std::isfinite(focal_length)) {
    throw std::invalid_argument("focal length must be positive");
  }
  if (width <= 0 || height <= 0) {
    throw std::invalid_argument("image resolution must be positive");
  }
  const double px = principal_point.x();
  const double py = principal_point.y();
  if (!(px >= 0.0 && px <= width - 1.0 && py >= 0.0 && py <= height - 1.0)) {
    throw std::invalid_argument("principal point outside the image");
  }
}

EulerView EulerView::Make(double theta1, double theta2, double theta3) {
  return EulerView{NormalizeDegrees(theta1), NormalizeDegrees(theta2),
                   NormalizeDegrees(theta3)};
}

PointCloud::PointCloud(std::vector<Point3> points) : points_(std::move(points)) {
  if (points_.empty()) {
    throw std::invalid_argument("point cloud must not be empty");
  }
  for (const Point3& p : points_) {
    if (!p.allFinite()) {
      throw std::invalid_argument("point cloud has a non-finite coordinate");
    }
  }
}

double PointCloud::diameter() const {
  if (diameter_ < 0.0) diameter_ = Diameter(points_);
  return diameter_;
}

double PointCloud::MaxRadius() const {
  double r = 0.0;
  for (const Point3& p : points_) r = std::max(r, p.norm());
  return r;
}

double Diameter(std::span<const Point3> points) {
  const long n = static_cast<long>(points.size());
  double best_sq = 0.0;
#pragma omp parallel for schedule(dynamic, 64) reduction(max : best_sq)
  for (long i = 0; i < n; ++i) {
    const Point3& a = points[i];
    for (long j = i + 1; j < n; ++j) {
      best_sq = std::max(best_sq, (a - points[j]).squaredNorm());
    }
  }
  return std::sqrt(best_sq);
}

namespace {

Eigen::Matrix3d RotX(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Eigen::Matrix3d m;
  m << 1, 0, 0,
       0, c, -s,
       0, s, c;
  return m;
}

Eigen::Matrix3d RotY(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Eigen::Matrix3d m;
  m << c, 0, s,
       0, 1, 0,
       -s, 0, c;
  return m;
}

Eigen::Matrix3d RotZ(double a) {
  const double c = std::cos(a), s = std::sin(a);
  Eigen::Matrix3d m;
  m << c, -s, 0,
       s, c, 0,
       0, 0, 1;
  return m;
}

}  // namespace

Rotation3 SphereViewRotation(double theta1_deg, double theta2_deg) {
  const double t1 = DegToRad(NormalizeDegrees(theta1_deg));
  const double t2 = DegToRad(NormalizeDegrees(theta2_deg));
  return Rotation3::FromMatrix(RotX(t2) * RotY(t1));
}

Point3 SphereViewDirection(double theta1_deg, double theta2_deg) {
  // Rs maps this direction onto -z, the direction back towards the camera.
  const double t1 = DegToRad(theta1_deg);
  const double t2 = DegToRad(theta2_deg);
  return Point3(std::sin(t1) * std::cos(t2), -std::sin(t2),
                -std::cos(t1) * std::cos(t2));
}

Vec2 SphereAnglesFromDirection(const Point3& direction) {
  const Point3 u = direction.normalized();
  const double t2 = std::asin(std::clamp(-u.y(), -1.0, 1.0));
  const double t1 = std::atan2(u.x(), -u.z());
  return Vec2(NormalizeDegrees(RadToDeg(t1)), NormalizeDegrees(RadToDeg(t2)));
}

Rotation3 InplaneRotation(double theta3_deg) {
  return Rotation3::FromMatrix(RotZ(DegToRad(NormalizeDegrees(theta3_deg))));
}

Rotation3 CorrectionRotation(const Point3& object_center) {
  if (!object_center.allFinite() || !(object_center.z() > 0.0)) {
    throw std::invalid_argument("object center must lie in front of the camera");
  }
  const Point3 d = object_center.normalized();
  const Point3 z = Point3::UnitZ();
  const Point3 axis = z.cross(d);
  const double angle = std::atan2(axis.norm(), z.dot(d));
  if (axis.norm() < 1e-15) return Rotation3::Identity();
  return Rotation3::AxisAngle(axis, angle);
}

RigidTransform ComposePose(const Point3& t, const Rotation3& rc,
                           const Rotation3& ri, const Rotation3& rs) {
  return RigidTransform::Translation(t) * RigidTransform::Rotation(rc) *
         RigidTransform::Rotation(ri) * RigidTransform::Rotation(rs);
}

PointCloud TransformCloud(const RigidTransform& pose, const PointCloud& cloud) {
  std::vector<Point3> out(cloud.size());
  const long n = static_cast<long>(cloud.size());
  const Eigen::Matrix3d& r = pose.rotation().matrix();
  const Point3& t = pose.translation();
  for (long i = 0; i < n; ++i) out[i] = r * cloud[i] + t;
  return PointCloud(std::move(out));
}

RigidTransform CameraToCamera(const CameraExtrinsics& e1,
                              const CameraExtrinsics& e2) {
  return e2.world_to_camera * e1.world_to_camera.Inverse();
}

PointCloud ChangeCamera(const CameraExtrinsics& e1, const CameraExtrinsics& e2,
                        const PointCloud& cloud_cam1) {
  return TransformCloud(CameraToCamera(e1, e2), cloud_cam1);
}

CameraExtrinsics LookAt(const Point3& position, const Point3& target,
                        const Point3& up) {
  const Point3 forward = (target - position).normalized();
  Point3 right = forward.cross(up);
  if (right.norm() < 1e-12) {
    throw std::invalid_argument("look-at up vector is parallel to the view");
  }
  right.normalize();
  const Point3 down = forward.cross(right);
  Eigen::Matrix3d r;
  r.row(0) = right.transpose();
  r.row(1) = down.transpose();
  r.row(2) = forward.transpose();
  // Re-orthonormalise so the result passes the 1e-9 rotation check.
  Eigen::JacobiSVD<Eigen::Matrix3d> svd(r, Eigen::ComputeFullU | Eigen::ComputeFullV);
  r = svd.matrixU() * svd.matrixV().transpose();
  const Rotation3 rot = Rotation3::FromMatrix(r);
  return CameraExtrinsics{RigidTransform(rot, -(rot * position))};
}

}  // namespace shapepose
