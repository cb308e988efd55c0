#include "mppose/scene.hpp"

#include <cmath>
#include <numbers>

namespace mppose {

namespace {

constexpr int kImageWidth = 1280;
constexpr int kImageHeight = 1024;
constexpr double kMargin = 60.0;
constexpr double kMinSegmentPixels = 100.0;
constexpr int kMaxResample = 100;

Matrix3d default_intrinsics() {
  Matrix3d K;
  K << 800.0, 0.0, 640.0,
       0.0, 800.0, 512.0,
       0.0, 0.0, 1.0;
  return K;
}

void validate(const SceneConfig& c) {
  if (c.n_cameras < 1) throw GenerationError("generate_scene: need at least one camera");
  if (c.n_points < 0 || c.n_lines < 0)
    throw GenerationError("generate_scene: negative feature count");
  if (!(c.depth_min > 0.0) || !(c.depth_max >= c.depth_min))
    throw GenerationError("generate_scene: bad depth range");
  if (c.noise_pixels < 0.0) throw GenerationError("generate_scene: negative noise");
}

Vector2d uniform_pixel(std::mt19937_64& rng) {
  std::uniform_real_distribution<double> du(kMargin, kImageWidth - kMargin);
  std::uniform_real_distribution<double> dv(kMargin, kImageHeight - kMargin);
  double u = du(rng);
  double v = dv(rng);
  return {u, v};
}

}  // namespace

std::uint64_t splitmix64(std::uint64_t x) {
  x += 0x9e3779b97f4a7c15ULL;
  x = (x ^ (x >> 30)) * 0xbf58476d1ce4e5b9ULL;
  x = (x ^ (x >> 27)) * 0x94d049bb133111ebULL;
  return x ^ (x >> 31);
}

Matrix3d random_rotation(std::mt19937_64& rng) {
  std::normal_distribution<double> gauss(0.0, 1.0);
  for (;;) {
    double w = gauss(rng);
    double x = gauss(rng);
    double y = gauss(rng);
    double z = gauss(rng);
    double n = std::sqrt(w * w + x * x + y * y + z * z);
    if (n < 1e-6) continue;
    return Eigen::Quaterniond(w / n, x / n, y / n, z / n).toRotationMatrix();
  }
}

Vector3d random_in_ball(std::mt19937_64& rng, double radius) {
  std::uniform_real_distribution<double> u(-radius, radius);
  for (;;) {
    Vector3d v(u(rng), u(rng), u(rng));
    if (v.norm() <= radius) return v;
  }
}

SyntheticScene generate_scene(const SceneConfig& config) {
  validate(config);
  std::mt19937_64 rng(config.seed);
  std::normal_distribution<double> gauss(0.0, 1.0);
  std::uniform_real_distribution<double> depth_dist(config.depth_min,
                                                    config.depth_max);

  SyntheticScene scene;
  scene.noise_pixels = config.noise_pixels;
  scene.rng_seed = config.seed;

  scene.ground_truth_pose.R = random_rotation(rng);
  scene.ground_truth_pose.t = random_in_ball(rng, 3.0);
  scene.ground_truth_pose.from_frame = frames::camera;
  scene.ground_truth_pose.to_frame = frames::world;

  Matrix3d K = default_intrinsics();
  auto make_camera = [&](const Matrix3d& R, const Vector3d& c) {
    Camera cam;
    cam.extrinsic.R = R;
    cam.extrinsic.t = c;
    cam.extrinsic.to_frame = frames::camera;
    cam.K = K;
    cam.width = kImageWidth;
    cam.height = kImageHeight;
    return cam;
  };
  if (config.central) {
    Matrix3d R = random_rotation(rng);
    Vector3d c = random_in_ball(rng, 1.0);
    for (int i = 0; i < config.n_cameras; ++i)
      scene.rig.cameras.push_back(make_camera(R, c));
  } else {
    for (int i = 0; i < config.n_cameras; ++i)
      scene.rig.cameras.push_back(
          make_camera(random_rotation(rng), random_in_ball(rng, 1.0)));
  }

  RigidTransform world_from_camera = scene.ground_truth_pose;

  for (int j = 0; j < config.n_points; ++j) {
    int cam_idx = (1 + j) % config.n_cameras;
    const Camera& cam = scene.rig.cameras[static_cast<std::size_t>(cam_idx)];
    RigidTransform world_from_local = compose(world_from_camera, cam.extrinsic);

    ScenePoint sp;
    sp.true_pixel = uniform_pixel(rng);
    sp.depth = depth_dist(rng);
    Vector3d bearing_true = bearing_from_pixel(cam, sp.true_pixel);
    Vector3d p_world =
        transform_point(world_from_local, sp.depth * bearing_true);

    // Noise normals are always drawn so streams line up across noise levels.
    Vector2d jitter(gauss(rng), gauss(rng));
    sp.pixel = sp.true_pixel + config.noise_pixels * jitter;

    sp.corr.camera_index = cam_idx;
    sp.corr.world_point = p_world;
    sp.corr.bearing = bearing_from_pixel(cam, sp.pixel);
    scene.points.push_back(sp);
  }

  for (int j = 0; j < config.n_lines; ++j) {
    int cam_idx = (2 * j) % config.n_cameras;
    const Camera& cam = scene.rig.cameras[static_cast<std::size_t>(cam_idx)];
    RigidTransform world_from_local = compose(world_from_camera, cam.extrinsic);

    SceneLine sl;
    bool placed = false;
    for (int attempt = 0; attempt < kMaxResample; ++attempt) {
      sl.true_pixels[0] = uniform_pixel(rng);
      sl.true_pixels[1] = uniform_pixel(rng);
      if ((sl.true_pixels[0] - sl.true_pixels[1]).norm() >= kMinSegmentPixels) {
        placed = true;
        break;
      }
    }
    if (!placed)
      throw GenerationError("generate_scene: could not place a line segment");

    double r0 = depth_dist(rng);
    double r1 = depth_dist(rng);
    sl.endpoints_world[0] = transform_point(
        world_from_local, r0 * bearing_from_pixel(cam, sl.true_pixels[0]));
    sl.endpoints_world[1] = transform_point(
        world_from_local, r1 * bearing_from_pixel(cam, sl.true_pixels[1]));

    sl.corr.camera_index = cam_idx;
    sl.corr.world_line =
        plucker_from_points(sl.endpoints_world[0], sl.endpoints_world[1]);

    bool observed = false;
    for (int attempt = 0; attempt < kMaxResample && !observed; ++attempt) {
      Vector2d e0 = sl.true_pixels[0] +
                    config.noise_pixels * Vector2d(gauss(rng), gauss(rng));
      Vector2d e1 = sl.true_pixels[1] +
                    config.noise_pixels * Vector2d(gauss(rng), gauss(rng));
      try {
        sl.corr.plane = interpretation_plane_from_bearings(
            bearing_from_pixel(cam, e0), bearing_from_pixel(cam, e1));
        sl.corr.pixel_endpoints = {e0, e1};
        observed = true;
      } catch (const DegenerateInput&) {
        // noisy endpoints collapsed; redraw the jitter
      }
    }
    if (!observed)
      throw GenerationError("generate_scene: could not observe a line segment");
    scene.lines.push_back(sl);
  }
  return scene;
}

double rotation_error_deg(const Matrix3d& R_est, const Matrix3d& R_gt) {
  if (!is_rotation(R_est, 1e-6))
    throw InvalidRotation("rotation_error_deg: estimate is not a rotation");
  if (!is_rotation(R_gt, 1e-6))
    throw InvalidRotation("rotation_error_deg: reference is not a rotation");
  // atan2 of (sin, cos) keeps full precision near zero, where acos of the
  // trace alone cannot resolve below ~1e-6 degrees.
  Matrix3d D = R_est * R_gt.transpose();
  Vector3d off(D(2, 1) - D(1, 2), D(0, 2) - D(2, 0), D(1, 0) - D(0, 1));
  double s = 0.5 * off.norm();
  double c = 0.5 * (D.trace() - 1.0);
  return std::atan2(s, c) * 180.0 / std::numbers::pi;
}

double translation_error(const Vector3d& t_est, const Vector3d& t_gt) {
  return (t_est - t_gt).norm();
}

double line_reprojection_distance(const Vector2d& u1, const Vector2d& u2,
                                  const Vector3d& line) {
  double nn = std::hypot(line.x(), line.y());
  if (nn < 1e-12)
    throw DegenerateInput("line_reprojection_distance: line has no image direction");
  Vector2d seg = u2 - u1;
  double sn = seg.norm();
  if (sn < 1e-12)
    throw DegenerateInput("line_reprojection_distance: segment endpoints coincide");

  double d1 = std::abs(line.x() * u1.x() + line.y() * u1.y() + line.z()) / nn;
  double d2 = std::abs(line.x() * u2.x() + line.y() * u2.y() + line.z()) / nn;
  // Direction of the image line is the normal rotated a quarter turn.
  Vector2d dir(-line.y() / nn, line.x() / nn);
  double c = std::abs(seg.dot(dir)) / sn;
  double angle = std::acos(std::clamp(c, 0.0, 1.0));
  return std::hypot(d1, d2) * std::exp(angle);
}

P2L1Problem p2l1_problem_from_scene(const SyntheticScene& scene) {
  if (scene.lines.size() < 1 || scene.points.size() < 2)
    throw InsufficientData("p2l1_problem_from_scene: need one line and two points");
  P2L1Problem p;
  p.line = scene.lines[0].corr;
  p.point2 = scene.points[0].corr;
  p.point3 = scene.points[1].corr;
  p.rig = scene.rig;
  return p;
}

P1L2Problem p1l2_problem_from_scene(const SyntheticScene& scene) {
  if (scene.lines.size() < 2 || scene.points.size() < 1)
    throw InsufficientData("p1l2_problem_from_scene: need two lines and one point");
  P1L2Problem p;
  p.line1 = scene.lines[0].corr;
  p.point2 = scene.points[0].corr;
  p.line3 = scene.lines[1].corr;
  p.rig = scene.rig;
  return p;
}

}  // namespace mppose
