#pragma once

#include "mppose/canonical.hpp"
#include "mppose/geometry.hpp"
#include "mppose/poly.hpp"

namespace mppose {

struct PoseSolution {
  RigidTransform pose;          // camera -> world
  std::vector<double> depths;   // per input point, scene units
  double residual_norm = 0.0;
  bool cheirality_ok = false;
};

// Two points and one line, each observed by a (not necessarily distinct)
// camera of the rig.  The line's camera anchors the canonical frames.
struct P2L1Problem {
  LineCorrespondence line;
  PointCorrespondence point2;
  PointCorrespondence point3;
  CameraRig rig;
};

// Canonical-frame scalars of a two-point-one-line instance; exposed so the
// closed-form quadric coefficients can be cross-checked against generic
// polynomial arithmetic.
struct P2L1Canonical {
  CanonicalInstance frames;
  Vector3d p2c = Vector3d::Zero();  // (0, 0, z)
  Vector3d p3c = Vector3d::Zero();
  Vector3d d2c = Vector3d::Zero();  // bearings in the canonical camera frame
  Vector3d d3c = Vector3d::Zero();
  Vector3d c2c = Vector3d::Zero();  // camera centers, canonical camera frame
  Vector3d c3c = Vector3d::Zero();
};

P2L1Canonical p2l1_canonicalize(const P2L1Problem& problem);

// The two conics in the point depths (d2, d3) whose intersection solves the
// problem: one from cos^2 + sin^2 = 1 of the first rotation angle, one from
// the second.  First = expanded closed-form coefficients, second = the same
// conics built by generic Poly2 arithmetic.
std::pair<Poly2, Poly2> p2l1_quadrics(const P2L1Canonical& cn);
std::pair<Poly2, Poly2> p2l1_quadrics_generic(const P2L1Canonical& cn);

// Up to 4 poses, sorted by residual norm ascending, cheirality flagged but
// not filtered.
std::vector<PoseSolution> solve_p2l1(const P2L1Problem& problem);

// Solutions whose point depths are all positive.
std::vector<PoseSolution> cheirality_filter(
    const std::vector<PoseSolution>& solutions);

}  // namespace mppose
