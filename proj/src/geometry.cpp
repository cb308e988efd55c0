#include "mppose/geometry.hpp"

#include <Eigen/SVD>
#include <cmath>

namespace mppose {

namespace {

bool frames_match(const std::string& a, const std::string& b) {
  return a.empty() || b.empty() || a == b;
}

}  // namespace

RigidTransform compose(const RigidTransform& a, const RigidTransform& b) {
  if (!frames_match(a.from_frame, b.to_frame)) {
    throw FrameError("compose: inner frames disagree ('" + a.from_frame +
                     "' vs '" + b.to_frame + "')");
  }
  RigidTransform out;
  out.R = a.R * b.R;
  out.t = a.R * b.t + a.t;
  out.from_frame = b.from_frame;
  out.to_frame = a.to_frame;
  return out;
}

RigidTransform invert(const RigidTransform& T) {
  RigidTransform out;
  out.R = T.R.transpose();
  out.t = -(out.R * T.t);
  out.from_frame = T.to_frame;
  out.to_frame = T.from_frame;
  return out;
}

Vector3d transform_point(const RigidTransform& T, const Vector3d& p) {
  return T.R * p + T.t;
}

PluckerLine transform_line(const RigidTransform& T, const PluckerLine& line) {
  PluckerLine out;
  out.direction = T.R * line.direction;
  out.moment = T.R * line.moment + T.t.cross(out.direction);
  return out;
}

InterpretationPlane transform_plane(const RigidTransform& T,
                                    const InterpretationPlane& plane) {
  InterpretationPlane out;
  out.normal = T.R * plane.normal;
  out.offset = plane.offset - T.t.dot(out.normal);
  return out;
}

PluckerLine plucker_from_points(const Vector3d& q1, const Vector3d& q2) {
  Vector3d d = q2 - q1;
  double scale = std::max({1.0, q1.norm(), q2.norm()});
  if (d.norm() < 1e-12 * scale)
    throw DegenerateInput("plucker_from_points: points coincide");
  d.normalize();
  PluckerLine line;
  line.direction = d;
  line.moment = q1.cross(d);
  return line;
}

InterpretationPlane interpretation_plane_from_bearings(const Vector3d& d1,
                                                       const Vector3d& d2) {
  Vector3d n = d1.cross(d2);
  if (n.norm() < 1e-12)
    throw DegenerateInput("interpretation_plane_from_bearings: bearings are parallel");
  InterpretationPlane plane;
  plane.normal = n.normalized();
  plane.offset = 0.0;
  return plane;
}

Vector3d point_residual(const RigidTransform& T_CW, const CameraRig& rig,
                        const PointCorrespondence& obs, double depth) {
  if (obs.camera_index < 0 ||
      obs.camera_index >= static_cast<int>(rig.cameras.size()))
    throw DegenerateInput("point_residual: camera_index out of range");
  const Camera& cam = rig.cameras[static_cast<std::size_t>(obs.camera_index)];
  Vector3d in_rig = transform_point(cam.extrinsic, depth * obs.bearing);
  return transform_point(T_CW, in_rig) - obs.world_point;
}

Vector4d line_residual(const RigidTransform& T_CW, const CameraRig& rig,
                       const LineCorrespondence& obs) {
  if (obs.camera_index < 0 ||
      obs.camera_index >= static_cast<int>(rig.cameras.size()))
    throw DegenerateInput("line_residual: camera_index out of range");
  const Camera& cam = rig.cameras[static_cast<std::size_t>(obs.camera_index)];
  InterpretationPlane world_plane =
      transform_plane(compose(T_CW, cam.extrinsic), obs.plane);
  const PluckerLine& line = obs.world_line;
  Vector3d top = line.moment.cross(world_plane.normal) +
                 world_plane.offset * line.direction;
  Vector4d r;
  r.head<3>() = top;
  r(3) = line.direction.dot(world_plane.normal);
  return r;
}

bool is_rotation(const Matrix3d& R, double tol) {
  Matrix3d err = R.transpose() * R - Matrix3d::Identity();
  return err.cwiseAbs().maxCoeff() <= tol && R.determinant() > 0.0;
}

Matrix3d project_to_rotation(const Matrix3d& M) {
  Eigen::JacobiSVD<Matrix3d> svd(M, Eigen::ComputeFullU | Eigen::ComputeFullV);
  Matrix3d R = svd.matrixU() * svd.matrixV().transpose();
  if (R.determinant() < 0.0) {
    Matrix3d flip = Matrix3d::Identity();
    flip(2, 2) = -1.0;
    R = svd.matrixU() * flip * svd.matrixV().transpose();
  }
  return R;
}

Vector3d bearing_from_pixel(const Camera& cam, const Vector2d& pixel) {
  Vector3d h(pixel.x(), pixel.y(), 1.0);
  Vector3d ray = cam.K.inverse() * h;
  return ray.normalized();
}

std::optional<Vector2d> project_local(const Camera& cam, const Vector3d& x_local) {
  if (x_local.z() <= 1e-12) return std::nullopt;
  Vector3d h = cam.K * x_local;
  return Vector2d(h.x() / h.z(), h.y() / h.z());
}

std::optional<Vector2d> project_world_point(const Camera& cam,
                                            const RigidTransform& T_CW,
                                            const Vector3d& p_world) {
  RigidTransform local_from_world = invert(compose(T_CW, cam.extrinsic));
  return project_local(cam, transform_point(local_from_world, p_world));
}

Vector3d image_line_from_local(const Camera& cam, const PluckerLine& local_line) {
  return cam.K.inverse().transpose() * local_line.moment;
}

}  // namespace mppose
