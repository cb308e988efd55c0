#include "mppose/solver_p1l2.hpp"

#include <algorithm>
#include <array>
#include <cmath>

namespace mppose {

namespace {

const Camera& checked_camera(const CameraRig& rig, int index, const char* what) {
  if (index < 0 || index >= static_cast<int>(rig.cameras.size()))
    throw DegenerateInput(std::string(what) + ": camera_index out of range");
  return rig.cameras[static_cast<std::size_t>(index)];
}

// One coplanarity equation, linear in (cos alpha, sin alpha) with polynomial
// coefficients in (sin theta, depth).
struct LinEq {
  Poly2 P = Poly2::affine(0.0, 0.0, 0.0);
  Poly2 Q = Poly2::affine(0.0, 0.0, 0.0);
  Poly2 R = Poly2::affine(0.0, 0.0, 0.0);
};

LinEq scaled(const LinEq& e, double s) {
  LinEq out;
  out.P = s * e.P;
  out.Q = s * e.Q;
  out.R = s * e.R;
  return out;
}

LinEq add(const LinEq& a, const LinEq& b) {
  LinEq out;
  out.P = a.P + b.P;
  out.Q = a.Q + b.Q;
  out.R = a.R + b.R;
  return out;
}

double max_abs(const LinEq& e) {
  return std::max({e.P.max_abs_coeff(), e.Q.max_abs_coeff(), e.R.max_abs_coeff()});
}

double solution_residual(const RigidTransform& pose, const P1L2Problem& problem,
                         double d2) {
  Vector3d rp = point_residual(pose, problem.rig, problem.point2, d2);
  Vector4d r1 = line_residual(pose, problem.rig, problem.line1);
  Vector4d r3 = line_residual(pose, problem.rig, problem.line3);
  return std::sqrt(rp.squaredNorm() + r1.squaredNorm() + r3.squaredNorm());
}

}  // namespace

P1L2Canonical p1l2_canonicalize(const P1L2Problem& problem) {
  const Camera& cam1 = checked_camera(problem.rig, problem.line1.camera_index,
                                      "p1l2_canonicalize line1");
  const Camera& cam2 = checked_camera(problem.rig, problem.point2.camera_index,
                                      "p1l2_canonicalize point2");
  const Camera& cam3 = checked_camera(problem.rig, problem.line3.camera_index,
                                      "p1l2_canonicalize line3");

  InterpretationPlane plane1_global =
      transform_plane(cam1.extrinsic, problem.line1.plane);
  P1L2Canonical out;
  out.frames = canonicalize(problem.line1.world_line, problem.point2.world_point,
                            plane1_global, cam1.extrinsic.t);

  out.p2c = out.frames.p2;
  out.d2c = out.frames.T2.R * (cam2.extrinsic.R * problem.point2.bearing);
  out.c2c = transform_point(out.frames.T2, cam2.extrinsic.t);
  out.line3c = transform_line(out.frames.T1, problem.line3.world_line);
  out.plane3c = transform_plane(
      out.frames.T2, transform_plane(cam3.extrinsic, problem.line3.plane));
  return out;
}

P1L2System p1l2_system(const P1L2Canonical& cn) {
  double pz = cn.p2c.z();
  const Vector3d& n = cn.plane3c.normal;
  double w3 = cn.plane3c.offset;
  const Vector3d& ld = cn.line3c.direction;
  const Vector3d& lm = cn.line3c.moment;
  const Vector3d& c2 = cn.c2c;
  const Vector3d& d2 = cn.d2c;

  // g = pz * R n is linear in (cos alpha, sin alpha); its coefficients mix
  // ct_num = c2z + d2z x (affine in the depth) with pz * s terms, never both,
  // which keeps every entry free of s*x cross terms.
  LinEq g1, g2, g3, h;
  g1.P = Poly2::affine(n.x() * c2.z(), 0.0, n.x() * d2.z());
  g1.Q = Poly2::affine(n.y() * c2.z(), 0.0, n.y() * d2.z());
  g1.R = Poly2::affine(0.0, -pz * n.z(), 0.0);

  g2.P = Poly2::affine(pz * n.y(), 0.0, 0.0);
  g2.Q = Poly2::affine(-pz * n.x(), 0.0, 0.0);
  g2.R = Poly2::affine(0.0, 0.0, 0.0);

  g3.P = Poly2::affine(0.0, pz * n.x(), 0.0);
  g3.Q = Poly2::affine(0.0, pz * n.y(), 0.0);
  g3.R = Poly2::affine(n.z() * c2.z(), 0.0, n.z() * d2.z());

  // h = pz * (plane offset in the world frame): pz (w3 + u . n) - pz g3.
  h.P = Poly2::affine(0.0, -pz * pz * n.x(), 0.0);
  h.Q = Poly2::affine(0.0, -pz * pz * n.y(), 0.0);
  h.R = Poly2::affine(pz * (w3 + c2.x() * n.x() + c2.y() * n.y()), 0.0,
                      pz * (d2.x() * n.x() + d2.y() * n.y()));

  // Incidence of the second line with the transformed plane: three moment
  // equations and the direction equation.
  std::array<LinEq, 4> eqs;
  eqs[0] = add(add(scaled(g3, lm.y()), scaled(g2, -lm.z())), scaled(h, ld.x()));
  eqs[1] = add(add(scaled(g1, lm.z()), scaled(g3, -lm.x())), scaled(h, ld.y()));
  eqs[2] = add(add(scaled(g2, lm.x()), scaled(g1, -lm.y())), scaled(h, ld.z()));
  eqs[3] = add(add(scaled(g1, ld.x()), scaled(g2, ld.y())), scaled(g3, ld.z()));

  for (auto& e : eqs) {
    double m = max_abs(e);
    if (m > 0.0) e = scaled(e, 1.0 / m);
  }

  // Pick the pair whose Cramer determinant is best conditioned over a coarse
  // probe grid of plausible (s, depth) values.
  const double probe_s[] = {-0.9, -0.3, 0.3, 0.9};
  const double probe_x[] = {1.0, 3.0, 6.0, 10.0};
  int best_i = -1;
  int best_j = -1;
  double best_score = 0.0;
  for (int i = 0; i < 4; ++i) {
    for (int j = i + 1; j < 4; ++j) {
      if (max_abs(eqs[i]) == 0.0 || max_abs(eqs[j]) == 0.0) continue;
      Poly2 dt = eqs[i].P * eqs[j].Q - eqs[j].P * eqs[i].Q;
      double score = 0.0;
      for (double s : probe_s)
        for (double x : probe_x) score = std::max(score, std::abs(dt.eval(s, x)));
      if (score > best_score) {
        best_score = score;
        best_i = i;
        best_j = j;
      }
    }
  }
  if (best_i < 0 || best_score <= 1e-12)
    throw DegenerateSystem("p1l2_system: no equation pair determines the z-rotation");

  const LinEq& a = eqs[best_i];
  const LinEq& b = eqs[best_j];

  P1L2System sys;
  sys.pz = pz;
  sys.ct_num = Poly1({c2.z(), d2.z()});
  sys.s_squared =
      (1.0 / (pz * pz)) * (Poly1({pz * pz}) - sys.ct_num * sys.ct_num);
  sys.det = a.P * b.Q - b.P * a.Q;
  sys.num_c = b.R * a.Q - a.R * b.Q;
  sys.num_s = b.P * a.R - a.P * b.R;
  sys.constraint =
      sys.num_c * sys.num_c + sys.num_s * sys.num_s - sys.det * sys.det;
  return sys;
}

std::vector<PoseSolution> solve_p1l2(const P1L2Problem& problem) {
  P1L2Canonical cn = p1l2_canonicalize(problem);
  double scene_scale = std::max({1.0, cn.p2c.norm(), cn.c2c.norm(),
                                 cn.line3c.moment.norm(),
                                 std::abs(cn.plane3c.offset)});
  double pz = cn.p2c.z();
  if (std::abs(pz) < 1e-10 * scene_scale)
    throw DegenerateConfiguration("solve_p1l2: point lies on the anchor line");

  P1L2System sys = p1l2_system(cn);
  Poly1 octic = eliminate_to_octic(sys.constraint, sys.s_squared);
  std::vector<double> roots = solve_octic(octic);

  double cmax = sys.constraint.max_abs_coeff();
  double dmax = sys.det.max_abs_coeff();
  double smax = std::max(1.0, sys.s_squared.max_abs_coeff());
  Poly2 con_s = sys.constraint.derivative_x();
  Poly2 con_d = sys.constraint.derivative_y();
  Poly1 sq_d = sys.s_squared.derivative();

  std::vector<PoseSolution> out;
  for (double d2 : roots) {
    double kappa = sys.s_squared.eval(d2);
    if (kappa < -1e-10) continue;
    double st_abs = std::sqrt(std::max(kappa, 0.0));
    double ct = sys.ct_num.eval(d2) / pz;
    double tn = std::hypot(ct, st_abs);
    if (tn == 0.0) continue;
    ct /= tn;
    st_abs /= tn;

    // The octic came from squaring, so the sign of s must be recovered from
    // the unsquared constraint; spurious roots fail both signs.
    double box = std::max({1.0, st_abs, std::abs(d2)});
    double box2 = box * box;
    double gate = 1e-6 * cmax * box2 * box2;
    double st = st_abs;
    if (st_abs > 0.0) {
      double vp = std::abs(sys.constraint.eval(st_abs, d2));
      double vm = std::abs(sys.constraint.eval(-st_abs, d2));
      st = vp <= vm ? st_abs : -st_abs;
      if (std::min(vp, vm) > gate) continue;
    } else if (std::abs(sys.constraint.eval(0.0, d2)) > gate) {
      continue;
    }

    // Recovering s through the square root loses half the digits when ct is
    // near +-1; a joint Newton pass on the unsquared pair keeps both
    // variables at full accuracy. Steps are kept while the residual drops.
    for (int it = 0; it < 6; ++it) {
      double f1 = sys.constraint.eval(st, d2);
      double f2 = st * st - sys.s_squared.eval(d2);
      double j11 = con_s.eval(st, d2);
      double j12 = con_d.eval(st, d2);
      double j21 = 2.0 * st;
      double j22 = -sq_d.eval(d2);
      double det = j11 * j22 - j12 * j21;
      double dscale = std::abs(j11 * j22) + std::abs(j12 * j21);
      if (std::abs(det) <= 1e-14 * std::max(dscale, 1e-300)) break;
      double sn = st - (f1 * j22 - f2 * j12) / det;
      double dn = d2 - (f2 * j11 - f1 * j21) / det;
      double r1 = cmax * box2 * box2;
      double r2 = smax * box2;
      double before = std::hypot(f1 / r1, f2 / r2);
      double after =
          std::hypot(sys.constraint.eval(sn, dn) / r1,
                     (sn * sn - sys.s_squared.eval(dn)) / r2);
      if (!(after < before)) break;
      st = sn;
      d2 = dn;
    }
    ct = sys.ct_num.eval(d2) / pz;
    double rn = std::hypot(ct, st);
    if (rn == 0.0) continue;
    ct /= rn;
    st /= rn;

    double dt = sys.det.eval(st, d2);
    if (std::abs(dt) < 1e-10 * dmax * box2) continue;
    double ca = sys.num_c.eval(st, d2) / dt;
    double sa = sys.num_s.eval(st, d2) / dt;
    double an = std::hypot(ca, sa);
    if (std::abs(an - 1.0) > 1e-3) continue;
    ca /= an;
    sa /= an;

    RigidTransform pose_hat;
    pose_hat.R = canonical_rotation(ct, st, ca, sa);
    pose_hat.t = cn.p2c - pose_hat.R * (d2 * cn.d2c + cn.c2c);
    pose_hat.from_frame = frames::canonical_camera;
    pose_hat.to_frame = frames::canonical_world;

    PoseSolution sol;
    sol.pose = decanonicalize(pose_hat, cn.frames.T1, cn.frames.T2);
    sol.depths = {d2};
    sol.residual_norm = solution_residual(sol.pose, problem, d2);
    sol.cheirality_ok = d2 > 0.0;
    out.push_back(std::move(sol));
  }

  std::stable_sort(out.begin(), out.end(),
                   [](const PoseSolution& a, const PoseSolution& b) {
                     return a.residual_norm < b.residual_norm;
                   });
  return out;
}

}  // namespace mppose
