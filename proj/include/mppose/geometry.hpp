#pragma once

#include <Eigen/Dense>
#include <array>
#include <optional>
#include <string>
#include <vector>

#include "mppose/errors.hpp"

namespace mppose {

using Eigen::Matrix3d;
using Eigen::Vector2d;
using Eigen::Vector3d;
using Eigen::Vector4d;

// Frame labels checked at composition time.  An empty label is a wildcard so
// solver hot loops can work with unlabeled transforms.
namespace frames {
inline const std::string world = "world";
inline const std::string camera = "camera";  // global rig frame
inline const std::string canonical_world = "canonical-world";
inline const std::string canonical_camera = "canonical-camera";
}  // namespace frames

// Maps points of from_frame into to_frame: x' = R x + t.
struct RigidTransform {
  Matrix3d R = Matrix3d::Identity();
  Vector3d t = Vector3d::Zero();
  std::string from_frame;
  std::string to_frame;
};

// 3D line as (unit direction, moment); moment = q x direction for any point q
// on the line, so direction . moment = 0.
struct PluckerLine {
  Vector3d direction = Vector3d::UnitX();
  Vector3d moment = Vector3d::Zero();
};

// Plane normal . x + offset = 0.  In a camera's local frame the plane of an
// image line passes through the center, so offset = 0 there.
struct InterpretationPlane {
  Vector3d normal = Vector3d::UnitZ();
  double offset = 0.0;
};

struct Camera {
  RigidTransform extrinsic;  // camera-local -> global rig frame
  Matrix3d K = Matrix3d::Identity();
  int width = 0;
  int height = 0;
};

struct CameraRig {
  std::vector<Camera> cameras;
};

struct PointCorrespondence {
  int camera_index = 0;
  Vector3d world_point = Vector3d::Zero();
  Vector3d bearing = Vector3d::UnitZ();  // unit, camera-local
};

struct LineCorrespondence {
  int camera_index = 0;
  PluckerLine world_line;
  InterpretationPlane plane;  // camera-local, offset 0
  // Observed endpoints of the image segment, when the observation came from
  // pixels.  Needed by reprojection-based line scoring.
  std::optional<std::array<Vector2d, 2>> pixel_endpoints;
};

RigidTransform compose(const RigidTransform& a, const RigidTransform& b);
RigidTransform invert(const RigidTransform& T);
Vector3d transform_point(const RigidTransform& T, const Vector3d& p);
PluckerLine transform_line(const RigidTransform& T, const PluckerLine& line);
InterpretationPlane transform_plane(const RigidTransform& T,
                                    const InterpretationPlane& plane);

PluckerLine plucker_from_points(const Vector3d& q1, const Vector3d& q2);
InterpretationPlane interpretation_plane_from_bearings(const Vector3d& d1,
                                                       const Vector3d& d2);

// T_CW (delta * R_i d + c_i) - p.  Zero at a consistent pose and depth.
Vector3d point_residual(const RigidTransform& T_CW, const CameraRig& rig,
                        const PointCorrespondence& obs, double depth);
// Incidence of the world line with its interpretation plane mapped through
// the camera chain; zero iff the line lies in the plane.
Vector4d line_residual(const RigidTransform& T_CW, const CameraRig& rig,
                       const LineCorrespondence& obs);

bool is_rotation(const Matrix3d& R, double tol = 1e-9);
Matrix3d project_to_rotation(const Matrix3d& M);

// Pinhole helpers.  Bearings have positive z for visible features.
Vector3d bearing_from_pixel(const Camera& cam, const Vector2d& pixel);
std::optional<Vector2d> project_local(const Camera& cam, const Vector3d& x_local);
// Projects a world point through pose T_CW (camera -> world) into camera cam;
// empty if the point is behind the image plane.
std::optional<Vector2d> project_world_point(const Camera& cam,
                                            const RigidTransform& T_CW,
                                            const Vector3d& p_world);
// Homogeneous image line of a camera-local Plucker line: K^-T * moment.
Vector3d image_line_from_local(const Camera& cam, const PluckerLine& local_line);

}  // namespace mppose
