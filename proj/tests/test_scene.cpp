#include <cmath>
#include <random>
#include <set>

#include "doctest.h"
#include "mppose/io.hpp"
#include "mppose/scene.hpp"

using namespace mppose;

TEST_CASE("splitmix64 matches the reference sequence") {
  CHECK(splitmix64(0) == 0xE220A8397B1DCDAFULL);
  // Distinct consecutive inputs stay distinct after mixing.
  std::set<std::uint64_t> seen;
  for (std::uint64_t i = 0; i < 10000; ++i) seen.insert(splitmix64(i));
  CHECK(seen.size() == 10000);
  CHECK(stream_seed(7, 0) != stream_seed(7, 1));
  CHECK(stream_seed(7, 0) != stream_seed(8, 0));
}

TEST_CASE("generate_scene is deterministic per seed") {
  SceneConfig cfg;
  cfg.n_cameras = 4;
  cfg.n_points = 3;
  cfg.n_lines = 2;
  cfg.noise_pixels = 1.5;
  cfg.seed = 77;
  std::string a = instance_to_json_text(instance_from_scene(generate_scene(cfg)));
  std::string b = instance_to_json_text(instance_from_scene(generate_scene(cfg)));
  CHECK(a == b);
  cfg.seed = 78;
  std::string c = instance_to_json_text(instance_from_scene(generate_scene(cfg)));
  CHECK(a != c);
}

TEST_CASE("generate_scene validates its config") {
  SceneConfig cfg;
  cfg.n_cameras = 0;
  CHECK_THROWS_AS(generate_scene(cfg), GenerationError);
  cfg = SceneConfig{};
  cfg.depth_min = 5.0;
  cfg.depth_max = 2.0;
  CHECK_THROWS_AS(generate_scene(cfg), GenerationError);
  cfg = SceneConfig{};
  cfg.noise_pixels = -1.0;
  CHECK_THROWS_AS(generate_scene(cfg), GenerationError);
  cfg = SceneConfig{};
  cfg.n_points = -1;
  CHECK_THROWS_AS(generate_scene(cfg), GenerationError);
}

TEST_CASE("noise-free scenes are exactly consistent") {
  for (int t = 0; t < 50; ++t) {
    SceneConfig cfg;
    cfg.n_cameras = 3;
    cfg.n_points = 4;
    cfg.n_lines = 3;
    cfg.seed = stream_seed(920, static_cast<std::uint64_t>(t));
    SyntheticScene scene = generate_scene(cfg);
    const RigidTransform& gt = scene.ground_truth_pose;
    CHECK(gt.from_frame == frames::camera);
    CHECK(gt.to_frame == frames::world);
    CHECK(is_rotation(gt.R, 1e-9));

    for (size_t j = 0; j < scene.points.size(); ++j) {
      const ScenePoint& sp = scene.points[j];
      CHECK(sp.corr.camera_index ==
            static_cast<int>(1 + j) % cfg.n_cameras);
      CHECK(sp.depth >= cfg.depth_min);
      CHECK(sp.depth <= cfg.depth_max);
      CHECK((sp.pixel - sp.true_pixel).norm() == 0.0);
      CHECK(point_residual(gt, scene.rig, sp.corr, sp.depth).norm() < 1e-9);

      const Camera& cam = scene.rig.cameras[static_cast<size_t>(sp.corr.camera_index)];
      auto proj = project_world_point(cam, gt, sp.corr.world_point);
      REQUIRE(proj.has_value());
      CHECK((*proj - sp.true_pixel).norm() < 1e-8);
      CHECK(sp.true_pixel.x() >= 60.0);
      CHECK(sp.true_pixel.x() <= 1280.0 - 60.0);
      CHECK(sp.true_pixel.y() >= 60.0);
      CHECK(sp.true_pixel.y() <= 1024.0 - 60.0);
    }

    for (size_t j = 0; j < scene.lines.size(); ++j) {
      const SceneLine& sl = scene.lines[j];
      CHECK(sl.corr.camera_index ==
            static_cast<int>(2 * j) % cfg.n_cameras);
      CHECK(line_residual(gt, scene.rig, sl.corr).norm() < 1e-9);
      REQUIRE(sl.corr.pixel_endpoints.has_value());
      auto ends = *sl.corr.pixel_endpoints;
      CHECK((ends[0] - sl.true_pixels[0]).norm() == 0.0);
      CHECK((ends[1] - sl.true_pixels[1]).norm() == 0.0);
      CHECK((ends[0] - ends[1]).norm() >= 100.0);

      const Camera& cam = scene.rig.cameras[static_cast<size_t>(sl.corr.camera_index)];
      for (int e = 0; e < 2; ++e) {
        auto proj = project_world_point(cam, gt, sl.endpoints_world[static_cast<size_t>(e)]);
        REQUIRE(proj.has_value());
        CHECK((*proj - sl.true_pixels[static_cast<size_t>(e)]).norm() < 1e-8);
      }
    }
  }
}

TEST_CASE("central scenes share one extrinsic") {
  SceneConfig cfg;
  cfg.n_cameras = 4;
  cfg.central = true;
  cfg.seed = 5;
  SyntheticScene scene = generate_scene(cfg);
  REQUIRE(scene.rig.cameras.size() == 4);
  for (const Camera& cam : scene.rig.cameras) {
    CHECK((cam.extrinsic.R - scene.rig.cameras[0].extrinsic.R).cwiseAbs().maxCoeff() == 0.0);
    CHECK((cam.extrinsic.t - scene.rig.cameras[0].extrinsic.t).norm() == 0.0);
  }
}

TEST_CASE("pixel noise has the configured scale") {
  double total = 0.0;
  int count = 0;
  for (int t = 0; t < 40; ++t) {
    SceneConfig cfg;
    cfg.n_points = 8;
    cfg.n_lines = 0;
    cfg.noise_pixels = 2.0;
    cfg.seed = stream_seed(921, static_cast<std::uint64_t>(t));
    SyntheticScene scene = generate_scene(cfg);
    for (const ScenePoint& sp : scene.points) {
      total += (sp.pixel - sp.true_pixel).norm();
      ++count;
      // The stored bearing follows the noisy pixel.
      const Camera& cam = scene.rig.cameras[static_cast<size_t>(sp.corr.camera_index)];
      CHECK((sp.corr.bearing - bearing_from_pixel(cam, sp.pixel)).norm() < 1e-12);
    }
  }
  double mean = total / count;  // E||N(0, s^2 I_2)|| = s sqrt(pi/2) ~ 2.5
  CHECK(mean > 1.0);
  CHECK(mean < 4.0);
}

TEST_CASE("rotation_error_deg against a quaternion reference") {
  Matrix3d Rz10 =
      Eigen::AngleAxisd(10.0 * M_PI / 180.0, Vector3d::UnitZ()).toRotationMatrix();
  CHECK(rotation_error_deg(Rz10, Matrix3d::Identity()) ==
        doctest::Approx(10.0).epsilon(1e-10));
  CHECK(rotation_error_deg(Rz10, Rz10) == doctest::Approx(0.0).epsilon(1e-10));

  std::mt19937_64 rng(922);
  for (int t = 0; t < 200; ++t) {
    Matrix3d A = random_rotation(rng);
    Matrix3d B = random_rotation(rng);
    Eigen::Quaterniond qa(A), qb(B);
    double dot = std::abs(qa.dot(qb));
    double ref = 2.0 * std::acos(std::min(1.0, dot)) * 180.0 / M_PI;
    CHECK(rotation_error_deg(A, B) == doctest::Approx(ref).epsilon(1e-7));
  }

  Matrix3d bad = Matrix3d::Identity();
  bad(0, 0) = 2.0;
  CHECK_THROWS_AS(rotation_error_deg(bad, Matrix3d::Identity()), InvalidRotation);
}

TEST_CASE("translation_error is the euclidean gap") {
  CHECK(translation_error({1, 2, 3}, {1, 2, 3}) == 0.0);
  CHECK(translation_error({1, 0, 0}, {0, 0, 0}) == doctest::Approx(1.0));
  CHECK(translation_error({1, 2, 2}, {1, 2, 0}) == doctest::Approx(2.0));
}

TEST_CASE("line_reprojection_distance frozen values") {
  Vector2d u1(0, 0), u2(1, 0);
  // Line y = x at 45 degrees to the segment.
  double d45 = line_reprojection_distance(u1, u2, Vector3d(1, -1, 0));
  CHECK(d45 * d45 == doctest::Approx(0.5 * std::exp(M_PI / 2.0)).epsilon(1e-12));
  // Parallel line y = 1 one pixel away at both ends.
  double dpar = line_reprojection_distance(u1, u2, Vector3d(0, 1, -1));
  CHECK(dpar == doctest::Approx(std::sqrt(2.0)).epsilon(1e-12));
  // On the line itself: zero.
  CHECK(line_reprojection_distance(u1, u2, Vector3d(0, 1, 0)) ==
        doctest::Approx(0.0));

  CHECK_THROWS_AS(line_reprojection_distance(u1, u1, Vector3d(0, 1, -1)),
                  DegenerateInput);
  CHECK_THROWS_AS(line_reprojection_distance(u1, u2, Vector3d(0, 0, 1)),
                  DegenerateInput);
}

TEST_CASE("problem extraction uses the leading features") {
  SceneConfig cfg;
  cfg.n_points = 2;
  cfg.n_lines = 2;
  cfg.seed = 9;
  SyntheticScene scene = generate_scene(cfg);
  P2L1Problem a = p2l1_problem_from_scene(scene);
  CHECK((a.point2.world_point - scene.points[0].corr.world_point).norm() == 0.0);
  CHECK((a.point3.world_point - scene.points[1].corr.world_point).norm() == 0.0);
  CHECK((a.line.world_line.direction - scene.lines[0].corr.world_line.direction).norm() == 0.0);
  P1L2Problem b = p1l2_problem_from_scene(scene);
  CHECK((b.point2.world_point - scene.points[0].corr.world_point).norm() == 0.0);
  CHECK((b.line3.world_line.direction - scene.lines[1].corr.world_line.direction).norm() == 0.0);

  SceneConfig small;
  small.n_points = 1;
  small.n_lines = 1;
  small.seed = 10;
  SyntheticScene tiny = generate_scene(small);
  CHECK_THROWS_AS(p2l1_problem_from_scene(tiny), InsufficientData);
  CHECK_THROWS_AS(p1l2_problem_from_scene(tiny), InsufficientData);
}
