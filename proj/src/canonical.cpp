#include "mppose/canonical.hpp"

#include <cmath>

namespace mppose {

RigidTransform world_canonical_transform(const PluckerLine& l1,
                                         const Vector3d& p2) {
  const Vector3d& d = l1.direction;
  double dn = d.norm();
  if (std::abs(dn - 1.0) > 1e-9)
    throw InvalidLine("world_canonical_transform: direction is not unit length");
  if (std::abs(d.dot(l1.moment)) > 1e-9 * std::max(1.0, l1.moment.norm()))
    throw InvalidLine("world_canonical_transform: moment not orthogonal to direction");

  // Closest point of the line to the origin; q1 x d = moment holds for it.
  Vector3d q1 = d.cross(l1.moment);

  Vector3d rel = p2 - q1;
  Vector3d r1 = d.cross(rel);
  double scale = std::max({1.0, p2.norm(), q1.norm()});
  if (r1.norm() < 1e-12 * scale)
    throw DegenerateConfiguration("world_canonical_transform: point lies on the line");
  r1.normalize();
  Vector3d r2 = d;
  Vector3d r3 = r1.cross(r2);

  RigidTransform T;
  T.R.row(0) = r1.transpose();
  T.R.row(1) = r2.transpose();
  T.R.row(2) = r3.transpose();
  // Slide along the (canonical) y-axis so p2 has no y component left.
  Vector3d shift(0.0, d.dot(rel), 0.0);
  T.t = -(T.R * q1) - shift;
  T.from_frame = frames::world;
  T.to_frame = frames::canonical_world;
  return T;
}

RigidTransform camera_canonical_transform(const InterpretationPlane& plane1,
                                          const Vector3d& c1) {
  double nn = plane1.normal.norm();
  if (nn < 1e-12)
    throw DegenerateInput("camera_canonical_transform: zero plane normal");
  Vector3d r3 = plane1.normal / nn;

  Vector3d cx = Vector3d::UnitX().cross(r3);
  Vector3d cy = Vector3d::UnitY().cross(r3);
  // Pick the better-conditioned axis; ties go to x.
  Vector3d r1 = (cy.norm() > cx.norm()) ? cy : cx;
  if (r1.norm() < 1e-12)
    throw DegenerateInput("camera_canonical_transform: normal parallel to both axes");
  r1.normalize();
  Vector3d r2 = r3.cross(r1);

  RigidTransform T;
  T.R.row(0) = r1.transpose();
  T.R.row(1) = r2.transpose();
  T.R.row(2) = r3.transpose();
  T.t = -(T.R * c1);
  T.from_frame = frames::camera;
  T.to_frame = frames::canonical_camera;
  return T;
}

RigidTransform decanonicalize(const RigidTransform& pose_hat,
                              const RigidTransform& T1,
                              const RigidTransform& T2) {
  return compose(compose(invert(T1), pose_hat), T2);
}

Matrix3d canonical_rotation(double ct, double st, double ca, double sa) {
  Matrix3d R;
  R << ct * ca, ct * sa, -st,
       -sa, ca, 0.0,
       st * ca, st * sa, ct;
  return R;
}

CanonicalInstance canonicalize(const PluckerLine& l1_world,
                               const Vector3d& p2_world,
                               const InterpretationPlane& plane1_global,
                               const Vector3d& c1_global) {
  CanonicalInstance out;
  out.T1 = world_canonical_transform(l1_world, p2_world);
  out.T2 = camera_canonical_transform(plane1_global, c1_global);
  out.line1 = transform_line(out.T1, l1_world);
  out.p2 = transform_point(out.T1, p2_world);
  out.plane1 = transform_plane(out.T2, plane1_global);
  return out;
}

}  // namespace mppose
