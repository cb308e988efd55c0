#pragma once

#include "mppose/geometry.hpp"

namespace mppose {

// Canonical frames for a minimal problem.  T1 maps world features so the
// anchor line becomes the y-axis and the anchor point lands on (0, 0, z);
// T2 maps global-camera features so the anchor camera center is at the origin
// and its interpretation plane normal is (0, 0, 1).
struct CanonicalInstance {
  RigidTransform T1;  // world -> canonical-world
  RigidTransform T2;  // camera -> canonical-camera
  PluckerLine line1;  // y-axis after T1
  Vector3d p2 = Vector3d::Zero();  // (0, 0, z) after T1, z = dist(p2, l1)
  InterpretationPlane plane1;      // normal (0,0,1), offset 0 after T2
};

// Aligns l1 with the y-axis and slides along it so p2 = (0, 0, z).
RigidTransform world_canonical_transform(const PluckerLine& l1,
                                         const Vector3d& p2);
// Moves c1 to the origin and rotates the plane normal onto (0, 0, 1).
RigidTransform camera_canonical_transform(const InterpretationPlane& plane1,
                                          const Vector3d& c1);
// Pose in the original frames: T_CW = T1^-1 * pose_hat * T2.
RigidTransform decanonicalize(const RigidTransform& pose_hat,
                              const RigidTransform& T1,
                              const RigidTransform& T2);

// Two-angle rotation of the canonical pose: y-rotation theta then z-rotation
// alpha, in the convention whose third column is (-st, 0, ct).
Matrix3d canonical_rotation(double ct, double st, double ca, double sa);

CanonicalInstance canonicalize(const PluckerLine& l1_world,
                               const Vector3d& p2_world,
                               const InterpretationPlane& plane1_global,
                               const Vector3d& c1_global);

}  // namespace mppose
