#pragma once

#include <cstdint>
#include <random>

#include "mppose/geometry.hpp"
#include "mppose/solver_p1l2.hpp"
#include "mppose/solver_p2l1.hpp"

namespace mppose {

struct SceneConfig {
  int n_cameras = 3;
  int n_points = 2;
  int n_lines = 1;
  double noise_pixels = 0.0;
  double depth_min = 2.0;
  double depth_max = 10.0;
  std::uint64_t seed = 0;
  bool central = false;  // all cameras share one extrinsic
};

struct ScenePoint {
  PointCorrespondence corr;  // noisy bearing
  double depth = 0.0;        // true range along the noise-free bearing
  Vector2d pixel = Vector2d::Zero();       // noisy observed pixel
  Vector2d true_pixel = Vector2d::Zero();  // exact projection
};

struct SceneLine {
  LineCorrespondence corr;  // noisy plane + observed pixel endpoints
  std::array<Vector3d, 2> endpoints_world{};
  std::array<Vector2d, 2> true_pixels{};
};

struct SyntheticScene {
  RigidTransform ground_truth_pose;  // camera -> world
  CameraRig rig;
  std::vector<ScenePoint> points;
  std::vector<SceneLine> lines;
  double noise_pixels = 0.0;
  std::uint64_t rng_seed = 0;
};

// Features are created in-camera (pixel + range) and lifted to the world
// through the ground-truth pose, so depths are positive and projections land
// inside the image by construction.  Gaussian pixel noise is applied to the
// observations before back-projecting to bearings.  Deterministic per seed.
SyntheticScene generate_scene(const SceneConfig& config);

double rotation_error_deg(const Matrix3d& R_est, const Matrix3d& R_gt);
double translation_error(const Vector3d& t_est, const Vector3d& t_gt);
// Endpoint-anchored distance between an observed segment (u1, u2) and an
// image line (homogeneous 3-vector): sqrt(d1^2 + d2^2) * exp(angle), with
// the acute angle between the two line directions in radians.
double line_reprojection_distance(const Vector2d& u1, const Vector2d& u2,
                                  const Vector3d& line);

// Minimal problems from the leading scene features (first line / first two
// points, or first point / first two lines).
P2L1Problem p2l1_problem_from_scene(const SyntheticScene& scene);
P1L2Problem p1l2_problem_from_scene(const SyntheticScene& scene);

// Stateless seed mixing for independent per-trial streams.
std::uint64_t splitmix64(std::uint64_t x);
inline std::uint64_t stream_seed(std::uint64_t base, std::uint64_t stream) {
  return splitmix64(base ^ splitmix64(stream + 0x632be59bd9b4e019ULL));
}

Matrix3d random_rotation(std::mt19937_64& rng);
Vector3d random_in_ball(std::mt19937_64& rng, double radius);

}  // namespace mppose
