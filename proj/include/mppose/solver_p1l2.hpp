#pragma once

#include "mppose/canonical.hpp"
#include "mppose/geometry.hpp"
#include "mppose/poly.hpp"
#include "mppose/solver_p2l1.hpp"

namespace mppose {

// One point and two lines.  line1's camera anchors the canonical frames;
// line3 supplies the coplanarity constraints that close the system.
struct P1L2Problem {
  LineCorrespondence line1;
  PointCorrespondence point2;
  LineCorrespondence line3;
  CameraRig rig;
};

struct P1L2Canonical {
  CanonicalInstance frames;
  Vector3d p2c = Vector3d::Zero();  // (0, 0, z)
  Vector3d d2c = Vector3d::Zero();
  Vector3d c2c = Vector3d::Zero();
  PluckerLine line3c;               // canonical world frame
  InterpretationPlane plane3c;      // canonical camera frame
};

P1L2Canonical p1l2_canonicalize(const P1L2Problem& problem);

// Polynomial system over (s, x) = (sin theta, depth of the point).  The four
// coplanarity equations of the second line are linear in (cos alpha,
// sin alpha); the best-conditioned pair is solved by Cramer's rule and the
// unit-circle identity becomes `constraint`.  All coefficients are produced
// numerically at solve time.
struct P1L2System {
  double pz = 0.0;     // canonical z of the anchor point
  Poly1 ct_num;        // numerator of cos theta, affine in x
  Poly1 s_squared;     // sin^2 theta as a quadratic in x
  Poly2 det;           // Cramer determinant of the selected equation pair
  Poly2 num_c;         // cos alpha numerator
  Poly2 num_s;         // sin alpha numerator
  Poly2 constraint;    // num_c^2 + num_s^2 - det^2, vanishes at solutions
};

P1L2System p1l2_system(const P1L2Canonical& cn);

// Up to 8 poses, sorted by residual norm ascending, cheirality flagged but
// not filtered.
std::vector<PoseSolution> solve_p1l2(const P1L2Problem& problem);

}  // namespace mppose
