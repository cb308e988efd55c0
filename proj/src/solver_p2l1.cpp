#include "mppose/solver_p2l1.hpp"

#include <algorithm>
#include <cmath>

namespace mppose {

namespace {

const Camera& checked_camera(const CameraRig& rig, int index, const char* what) {
  if (index < 0 || index >= static_cast<int>(rig.cameras.size()))
    throw DegenerateInput(std::string(what) + ": camera_index out of range");
  return rig.cameras[static_cast<std::size_t>(index)];
}

double solution_residual(const RigidTransform& pose, const P2L1Problem& problem,
                         double d2, double d3) {
  Vector3d r2 = point_residual(pose, problem.rig, problem.point2, d2);
  Vector3d r3 = point_residual(pose, problem.rig, problem.point3, d3);
  Vector4d rl = line_residual(pose, problem.rig, problem.line);
  return std::sqrt(r2.squaredNorm() + r3.squaredNorm() + rl.squaredNorm());
}

}  // namespace

P2L1Canonical p2l1_canonicalize(const P2L1Problem& problem) {
  const Camera& cam1 = checked_camera(problem.rig, problem.line.camera_index,
                                      "p2l1_canonicalize line");
  const Camera& cam2 = checked_camera(problem.rig, problem.point2.camera_index,
                                      "p2l1_canonicalize point2");
  const Camera& cam3 = checked_camera(problem.rig, problem.point3.camera_index,
                                      "p2l1_canonicalize point3");

  InterpretationPlane plane1_global =
      transform_plane(cam1.extrinsic, problem.line.plane);
  P2L1Canonical out;
  out.frames = canonicalize(problem.line.world_line, problem.point2.world_point,
                            plane1_global, cam1.extrinsic.t);

  out.p2c = out.frames.p2;
  out.p3c = transform_point(out.frames.T1, problem.point3.world_point);
  out.d2c = out.frames.T2.R * (cam2.extrinsic.R * problem.point2.bearing);
  out.d3c = out.frames.T2.R * (cam3.extrinsic.R * problem.point3.bearing);
  out.c2c = transform_point(out.frames.T2, cam2.extrinsic.t);
  out.c3c = transform_point(out.frames.T2, cam3.extrinsic.t);
  return out;
}

std::pair<Poly2, Poly2> p2l1_quadrics(const P2L1Canonical& cn) {
  double pz = cn.p2c.z();
  double px3 = cn.p3c.x();
  double py3 = cn.p3c.y();
  double pz3 = cn.p3c.z();
  double wz = pz3 - pz;

  double e0 = cn.c2c.z() * pz3 - cn.c3c.z() * pz;
  double e2 = cn.d2c.z() * pz3;
  double e3 = -cn.d3c.z() * pz;

  double f0 = px3 * px3 * cn.c2c.z() + wz * e0;
  double f2 = px3 * px3 * cn.d2c.z() + wz * e2;
  double f3 = wz * e3;

  double g1 = cn.c3c.x() - cn.c2c.x();
  double g2 = -cn.d2c.x();
  double g3 = cn.d3c.x();
  double h1 = cn.c3c.y() - cn.c2c.y();
  double h2 = -cn.d2c.y();
  double h3 = cn.d3c.y();

  double px2 = px3 * px3;
  double G2 = pz * pz * px2;

  // sin^2 + cos^2 = 1 of the y-rotation, cleared of denominators:
  // E^2 + px3^2 (c2z + d2z d2)^2 - px3^2 pz^2 = 0 with E = e0 + e2 d2 + e3 d3.
  Poly2 q1(2, 2);
  q1.coeff(0, 0) = e0 * e0 + px2 * cn.c2c.z() * cn.c2c.z() - px2 * pz * pz;
  q1.coeff(1, 0) = 2.0 * e0 * e2 + 2.0 * px2 * cn.c2c.z() * cn.d2c.z();
  q1.coeff(0, 1) = 2.0 * e0 * e3;
  q1.coeff(2, 0) = e2 * e2 + px2 * cn.d2c.z() * cn.d2c.z();
  q1.coeff(1, 1) = 2.0 * e2 * e3;
  q1.coeff(0, 2) = e3 * e3;

  // Same identity for the z-rotation: F^2 + G^2 py3^2 - G^2 (v1^2 + v2^2) = 0.
  Poly2 q2(2, 2);
  q2.coeff(0, 0) = f0 * f0 + G2 * py3 * py3 - G2 * (g1 * g1 + h1 * h1);
  q2.coeff(1, 0) = 2.0 * f0 * f2 - 2.0 * G2 * (g1 * g2 + h1 * h2);
  q2.coeff(0, 1) = 2.0 * f0 * f3 - 2.0 * G2 * (g1 * g3 + h1 * h3);
  q2.coeff(2, 0) = f2 * f2 - G2 * (g2 * g2 + h2 * h2);
  q2.coeff(1, 1) = 2.0 * f2 * f3 - 2.0 * G2 * (g2 * g3 + h2 * h3);
  q2.coeff(0, 2) = f3 * f3 - G2 * (g3 * g3 + h3 * h3);
  return {q1, q2};
}

std::pair<Poly2, Poly2> p2l1_quadrics_generic(const P2L1Canonical& cn) {
  double pz = cn.p2c.z();
  double px3 = cn.p3c.x();
  double py3 = cn.p3c.y();
  double pz3 = cn.p3c.z();
  double wz = pz3 - pz;

  Poly2 E = Poly2::affine(cn.c2c.z() * pz3 - cn.c3c.z() * pz, cn.d2c.z() * pz3,
                          -cn.d3c.z() * pz);
  Poly2 u3 = Poly2::affine(cn.c2c.z(), cn.d2c.z(), 0.0);
  Poly2 F = (px3 * px3) * u3 + wz * E;
  Poly2 v1 = Poly2::affine(cn.c3c.x() - cn.c2c.x(), -cn.d2c.x(), cn.d3c.x());
  Poly2 v2 = Poly2::affine(cn.c3c.y() - cn.c2c.y(), -cn.d2c.y(), cn.d3c.y());

  double px2 = px3 * px3;
  double G2 = pz * pz * px2;
  Poly2 q1 = E * E + px2 * (u3 * u3) - Poly2::constant(px2 * pz * pz);
  Poly2 q2 = F * F + Poly2::constant(G2 * py3 * py3) - G2 * (v1 * v1 + v2 * v2);
  Poly2 z22(2, 2);
  return {z22 + q1, z22 + q2};
}

std::vector<PoseSolution> solve_p2l1(const P2L1Problem& problem) {
  P2L1Canonical cn = p2l1_canonicalize(problem);
  double scene_scale = std::max({1.0, cn.p2c.norm(), cn.p3c.norm(),
                                 cn.c2c.norm(), cn.c3c.norm()});
  double pz = cn.p2c.z();
  double px3 = cn.p3c.x();
  double py3 = cn.p3c.y();
  double pz3 = cn.p3c.z();
  if (std::abs(pz) < 1e-10 * scene_scale)
    throw DegenerateConfiguration(
        "solve_p2l1: second point lies on the anchor line");
  if (std::abs(px3) < 1e-10 * scene_scale)
    throw DegenerateConfiguration(
        "solve_p2l1: third point is coplanar with the line and second point");

  auto [q1, q2] = p2l1_quadrics(cn);
  auto pairs = intersect_quadrics(q1, q2);

  double wz = pz3 - pz;
  double e0 = cn.c2c.z() * pz3 - cn.c3c.z() * pz;
  double e2 = cn.d2c.z() * pz3;
  double e3 = -cn.d3c.z() * pz;

  std::vector<PoseSolution> out;
  for (const auto& [d2, d3] : pairs) {
    double u3 = cn.c2c.z() + cn.d2c.z() * d2;
    double ct = u3 / pz;
    double st = (e0 + e2 * d2 + e3 * d3) / (pz * px3);
    double tn = ct * ct + st * st;
    if (std::abs(tn - 1.0) > 1e-6) continue;
    double tscale = std::sqrt(tn);
    ct /= tscale;
    st /= tscale;

    double A = ct * px3 + st * wz;
    double v1 = cn.d3c.x() * d3 - cn.d2c.x() * d2 + (cn.c3c.x() - cn.c2c.x());
    double v2 = cn.d3c.y() * d3 - cn.d2c.y() * d2 + (cn.c3c.y() - cn.c2c.y());
    double S = v1 * v1 + v2 * v2;
    if (S < 1e-12 * scene_scale * scene_scale) continue;
    double ca = (v2 * py3 + v1 * A) / S;
    double sa = (v2 * A - v1 * py3) / S;
    double an = ca * ca + sa * sa;
    if (std::abs(an - 1.0) > 1e-6) continue;
    double ascale = std::sqrt(an);
    ca /= ascale;
    sa /= ascale;

    RigidTransform pose_hat;
    pose_hat.R = canonical_rotation(ct, st, ca, sa);
    pose_hat.t = cn.p2c - pose_hat.R * (d2 * cn.d2c + cn.c2c);
    pose_hat.from_frame = frames::canonical_camera;
    pose_hat.to_frame = frames::canonical_world;

    PoseSolution sol;
    sol.pose = decanonicalize(pose_hat, cn.frames.T1, cn.frames.T2);
    sol.depths = {d2, d3};
    sol.residual_norm = solution_residual(sol.pose, problem, d2, d3);
    sol.cheirality_ok = d2 > 0.0 && d3 > 0.0;
    out.push_back(std::move(sol));
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const PoseSolution& a, const PoseSolution& b) {
                     return a.residual_norm < b.residual_norm;
                   });
  return out;
}

std::vector<PoseSolution> cheirality_filter(
    const std::vector<PoseSolution>& solutions) {
  std::vector<PoseSolution> out;
  for (const auto& s : solutions)
    if (s.cheirality_ok) out.push_back(s);
  return out;
}

}  // namespace mppose
