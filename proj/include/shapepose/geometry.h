#ifndef SHAPEPOSE_GEOMETRY_H_
#define SHAPEPOSE_GEOMETRY_H_

#include <span>
#include <vector>

#include <Eigen/Core>

namespace shapepose {

// Camera convention: the camera looks along +z, image x points right and
// image y points down. Angles are degrees at the API, radians inside.

using Point3 = Eigen::Vector3d;
using Vec2 = Eigen::Vector2d;

double DegToRad(double deg);
double RadToDeg(double rad);

// Maps any angle onto [0, 360).
double NormalizeDegrees(double deg);

// Proper rotation. Construction through FromMatrix() checks RᵀR = I and
// det = +1 within kTolerance.
class Rotation3 {
 public:
  static constexpr double kTolerance = 1e-9;

  Rotation3() : m_(Eigen::Matrix3d::Identity()) {}

  static Rotation3 Identity() { return Rotation3(); }
  // Throws std::invalid_argument if `m` is not a proper rotation.
  static Rotation3 FromMatrix(const Eigen::Matrix3d& m);
  // Right-handed rotation about `axis` (need not be unit length).
  static Rotation3 AxisAngle(const Point3& axis, double angle_rad);

  const Eigen::Matrix3d& matrix() const { return m_; }
  Rotation3 Inverse() const { return Rotation3(m_.transpose()); }
  // Rotation angle in radians, in [0, pi], from the trace.
  double Angle() const;

  Point3 operator*(const Point3& p) const { return m_ * p; }
  Rotation3 operator*(const Rotation3& other) const {
    return Rotation3(m_ * other.m_);
  }

  static bool IsRotation(const Eigen::Matrix3d& m, double tol = kTolerance);

 private:
  explicit Rotation3(const Eigen::Matrix3d& m) : m_(m) {}
  Eigen::Matrix3d m_;
};

// x ↦ R·x + t, with 4×4 homogeneous semantics.
class RigidTransform {
 public:
  RigidTransform() : translation_(Point3::Zero()) {}
  RigidTransform(const Rotation3& rotation, const Point3& translation)
      : rotation_(rotation), translation_(translation) {}

  static RigidTransform Identity() { return RigidTransform(); }
  static RigidTransform Translation(const Point3& t) {
    return RigidTransform(Rotation3::Identity(), t);
  }
  static RigidTransform Rotation(const Rotation3& r) {
    return RigidTransform(r, Point3::Zero());
  }
  // Throws std::invalid_argument unless the upper-left block is a rotation
  // and the last row is (0, 0, 0, 1).
  static RigidTransform FromMatrix(const Eigen::Matrix4d& m);

  const Rotation3& rotation() const { return rotation_; }
  const Point3& translation() const { return translation_; }

  Eigen::Matrix4d Matrix() const;
  RigidTransform Inverse() const;

  Point3 operator*(const Point3& p) const {
    return rotation_ * p + translation_;
  }
  RigidTransform operator*(const RigidTransform& other) const {
    return RigidTransform(rotation_ * other.rotation_,
                          rotation_ * other.translation_ + translation_);
  }

 private:
  Rotation3 rotation_;
  Point3 translation_;
};

struct CameraIntrinsics {
  double focal_length = 1.0;  // pixels
  Vec2 principal_point = Vec2::Zero();
  int width = 1;
  int height = 1;

  // Throws std::invalid_argument when focal_length <= 0 or the principal
  // point lies outside the image.
  void Validate() const;
};

struct CameraExtrinsics {
  RigidTransform world_to_camera;
};

struct Camera {
  CameraIntrinsics intrinsics;
  CameraExtrinsics extrinsics;
};

// Position on the view sphere (theta1, theta2) plus in-plane angle theta3,
// all in [0, 360).
struct EulerView {
  double theta1 = 0.0;
  double theta2 = 0.0;
  double theta3 = 0.0;

  static EulerView Make(double theta1, double theta2, double theta3 = 0.0);
};

class PointCloud {
 public:
  // Throws std::invalid_argument on an empty set or non-finite coordinates.
  explicit PointCloud(std::vector<Point3> points);

  const std::vector<Point3>& points() const { return points_; }
  std::size_t size() const { return points_.size(); }
  const Point3& operator[](std::size_t i) const { return points_[i]; }

  // Maximum pairwise distance; computed on first use.
  double diameter() const;
  // Largest distance of any point from the model origin.
  double MaxRadius() const;

 private:
  std::vector<Point3> points_;
  mutable double diameter_ = -1.0;
};

// Exact maximum pairwise distance: the O(n²) double loop, rows in parallel.
double Diameter(std::span<const Point3> points);

// Rotation that turns the model so the camera sees it from sphere point
// (theta1, theta2): R_s = Rx(theta2) · Ry(theta1).
Rotation3 SphereViewRotation(double theta1_deg, double theta2_deg);

// Unit direction, in model coordinates, from the model origin towards the
// virtual camera for sphere point (theta1, theta2).
Point3 SphereViewDirection(double theta1_deg, double theta2_deg);

// Inverse of SphereViewDirection. Returns (theta1, theta2) in [0, 360).
Vec2 SphereAnglesFromDirection(const Point3& direction);

// Rotation about the optical axis by theta3.
Rotation3 InplaneRotation(double theta3_deg);

// Minimal rotation carrying the optical axis onto the ray through
// `object_center`: axis ẑ × d̂, angle arccos(ẑ · d̂).
// Throws std::invalid_argument if object_center.z() <= 0.
Rotation3 CorrectionRotation(const Point3& object_center);

// P = T · Rc · Ri · Rs.
RigidTransform ComposePose(const Point3& t, const Rotation3& rc,
                           const Rotation3& ri, const Rotation3& rs);

PointCloud TransformCloud(const RigidTransform& pose, const PointCloud& cloud);

// q_cam2 = E2 · E1⁻¹ · q_cam1.
PointCloud ChangeCamera(const CameraExtrinsics& e1, const CameraExtrinsics& e2,
                        const PointCloud& cloud_cam1);

// Camera-1 to camera-2 transform E2 · E1⁻¹.
RigidTransform CameraToCamera(const CameraExtrinsics& e1,
                              const CameraExtrinsics& e2);

// World→camera transform for a camera at `position` looking at `target`.
// `up` picks the roll; image y points away from it.
CameraExtrinsics LookAt(const Point3& position, const Point3& target,
                        const Point3& up);

}  // namespace shapepose

#endif  // SHAPEPOSE_GEOMETRY_H_
