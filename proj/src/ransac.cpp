#include "mppose/ransac.hpp"

#include <algorithm>
#include <cmath>
#include <random>

#include "mppose/parallel.hpp"
#include "mppose/scene.hpp"

namespace mppose {

namespace {

struct Sample {
  std::array<int, 2> points{{-1, -1}};
  std::array<int, 2> lines{{-1, -1}};
};

struct Scored {
  bool valid = false;
  int count = -1;
  RigidTransform pose;
  std::vector<int> point_inliers;
  std::vector<int> line_inliers;
};

// Two most separated crossings of the homogeneous line with the image border.
std::array<Vector2d, 2> clip_line_to_image(const Vector3d& l, double w, double h) {
  std::vector<Vector2d> pts;
  if (std::abs(l.y()) > 1e-15) {
    double y0 = -l.z() / l.y();
    if (y0 >= 0.0 && y0 <= h) pts.emplace_back(0.0, y0);
    double yw = -(l.z() + l.x() * w) / l.y();
    if (yw >= 0.0 && yw <= h) pts.emplace_back(w, yw);
  }
  if (std::abs(l.x()) > 1e-15) {
    double x0 = -l.z() / l.x();
    if (x0 >= 0.0 && x0 <= w) pts.emplace_back(x0, 0.0);
    double xh = -(l.z() + l.y() * h) / l.x();
    if (xh >= 0.0 && xh <= w) pts.emplace_back(xh, h);
  }
  double best = 0.0;
  std::array<Vector2d, 2> out{Vector2d::Zero(), Vector2d::Zero()};
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      double d = (pts[i] - pts[j]).norm();
      if (d > best) {
        best = d;
        out = {pts[i], pts[j]};
      }
    }
  if (best < 1e-6)
    throw DegenerateInput("ransac_pose: line observation does not cross the image");
  return out;
}

int draw_index(std::mt19937_64& rng, int n) {
  return static_cast<int>(std::uniform_int_distribution<int>(0, n - 1)(rng));
}

// Second index distinct from the first with a single draw.
int draw_other_index(std::mt19937_64& rng, int n, int first) {
  int r = static_cast<int>(std::uniform_int_distribution<int>(0, n - 2)(rng));
  return r >= first ? r + 1 : r;
}

}  // namespace

RansacResult ransac_pose(const std::vector<PointCorrespondence>& points,
                         const std::vector<LineCorrespondence>& lines,
                         const CameraRig& rig, const RansacConfig& config) {
  if (rig.cameras.empty()) throw DegenerateInput("ransac_pose: empty rig");
  if (!(config.point_threshold_px > 0.0) || !(config.line_threshold > 0.0))
    throw DegenerateInput("ransac_pose: thresholds must be positive");
  if (!(config.required_inlier_fraction > 0.0) ||
      config.required_inlier_fraction > 1.0)
    throw DegenerateInput("ransac_pose: required_inlier_fraction outside (0, 1]");
  if (config.max_iterations < 1)
    throw DegenerateInput("ransac_pose: max_iterations must be positive");

  SamplingMode mode = config.sampling_mode;
  if (mode == SamplingMode::automatic) {
    if (points.size() >= 2 && lines.size() >= 1)
      mode = SamplingMode::p2l1;
    else if (points.size() >= 1 && lines.size() >= 2)
      mode = SamplingMode::p1l2;
    else
      throw InsufficientData("ransac_pose: no minimal sample fits the feature pool");
  }
  if (mode == SamplingMode::p2l1 && (points.size() < 2 || lines.size() < 1))
    throw InsufficientData("ransac_pose: two points and one line required");
  if (mode == SamplingMode::p1l2 && (points.size() < 1 || lines.size() < 2))
    throw InsufficientData("ransac_pose: one point and two lines required");

  const int np = static_cast<int>(points.size());
  const int nl = static_cast<int>(lines.size());
  const int total_features = np + nl;

  // Observed pixels, fixed up front.  Points reproject their bearings; lines
  // use stored endpoints or the border clip of the interpretation plane.
  std::vector<Vector2d> point_obs(points.size());
  for (std::size_t i = 0; i < points.size(); ++i) {
    const auto& pc = points[i];
    if (pc.camera_index < 0 || pc.camera_index >= static_cast<int>(rig.cameras.size()))
      throw DegenerateInput("ransac_pose: point camera_index out of range");
    if (pc.bearing.z() <= 0.0)
      throw DegenerateInput("ransac_pose: point bearing looks backward");
    const Camera& cam = rig.cameras[static_cast<std::size_t>(pc.camera_index)];
    Vector3d h = cam.K * pc.bearing;
    point_obs[i] = Vector2d(h.x() / h.z(), h.y() / h.z());
  }
  std::vector<std::array<Vector2d, 2>> line_obs(lines.size());
  for (std::size_t i = 0; i < lines.size(); ++i) {
    const auto& lc = lines[i];
    if (lc.camera_index < 0 || lc.camera_index >= static_cast<int>(rig.cameras.size()))
      throw DegenerateInput("ransac_pose: line camera_index out of range");
    const Camera& cam = rig.cameras[static_cast<std::size_t>(lc.camera_index)];
    if (lc.pixel_endpoints) {
      line_obs[i] = *lc.pixel_endpoints;
    } else {
      Vector3d image_line = cam.K.inverse().transpose() * lc.plane.normal;
      line_obs[i] = clip_line_to_image(image_line, cam.width, cam.height);
    }
  }

  auto score_pose = [&](const RigidTransform& pose, Scored* s) {
    s->point_inliers.clear();
    s->line_inliers.clear();
    for (int i = 0; i < np; ++i) {
      const auto& pc = points[static_cast<std::size_t>(i)];
      const Camera& cam = rig.cameras[static_cast<std::size_t>(pc.camera_index)];
      auto pix = project_world_point(cam, pose, pc.world_point);
      if (!pix) continue;
      if ((*pix - point_obs[static_cast<std::size_t>(i)]).norm() <=
          config.point_threshold_px)
        s->point_inliers.push_back(i);
    }
    for (int i = 0; i < nl; ++i) {
      const auto& lc = lines[static_cast<std::size_t>(i)];
      const Camera& cam = rig.cameras[static_cast<std::size_t>(lc.camera_index)];
      PluckerLine local = transform_line(invert(compose(pose, cam.extrinsic)),
                                         lc.world_line);
      Vector3d image_line = image_line_from_local(cam, local);
      const auto& obs = line_obs[static_cast<std::size_t>(i)];
      try {
        if (line_reprojection_distance(obs[0], obs[1], image_line) <=
            config.line_threshold)
          s->line_inliers.push_back(i);
      } catch (const DegenerateInput&) {
        // projected line has no image direction; not an inlier
      }
    }
    s->count = static_cast<int>(s->point_inliers.size() + s->line_inliers.size());
  };

  // All minimal samples are drawn serially up front, so the hypothesis
  // sequence depends only on the seed.
  std::mt19937_64 rng(config.rng_seed);
  std::vector<Sample> samples(static_cast<std::size_t>(config.max_iterations));
  for (auto& s : samples) {
    if (mode == SamplingMode::p2l1) {
      s.points[0] = draw_index(rng, np);
      s.points[1] = draw_other_index(rng, np, s.points[0]);
      s.lines[0] = draw_index(rng, nl);
    } else {
      s.points[0] = draw_index(rng, np);
      s.lines[0] = draw_index(rng, nl);
      s.lines[1] = draw_other_index(rng, nl, s.lines[0]);
    }
  }

  std::vector<Scored> scored(samples.size());
  auto evaluate = [&](std::int64_t idx) {
    const Sample& smp = samples[static_cast<std::size_t>(idx)];
    std::vector<PoseSolution> sols;
    try {
      if (mode == SamplingMode::p2l1) {
        P2L1Problem prob;
        prob.line = lines[static_cast<std::size_t>(smp.lines[0])];
        prob.point2 = points[static_cast<std::size_t>(smp.points[0])];
        prob.point3 = points[static_cast<std::size_t>(smp.points[1])];
        prob.rig = rig;
        sols = solve_p2l1(prob);
      } else {
        P1L2Problem prob;
        prob.line1 = lines[static_cast<std::size_t>(smp.lines[0])];
        prob.point2 = points[static_cast<std::size_t>(smp.points[0])];
        prob.line3 = lines[static_cast<std::size_t>(smp.lines[1])];
        prob.rig = rig;
        sols = solve_p1l2(prob);
      }
    } catch (const Error&) {
      return;  // unscorable hypothesis
    }
    Scored best;
    Scored cur;
    for (const auto& sol : sols) {
      score_pose(sol.pose, &cur);
      cur.valid = true;
      cur.pose = sol.pose;
      if (!best.valid || cur.count > best.count) best = cur;
    }
    if (best.valid) scored[static_cast<std::size_t>(idx)] = std::move(best);
  };

  const double required = config.required_inlier_fraction;
  auto fraction_of = [&](int count) {
    return static_cast<double>(count) / static_cast<double>(total_features);
  };

  const int total = config.max_iterations;
  const int batch = std::max(32, 8 * worker_count());
  int processed = 0;
  int stop_index = -1;
  while (processed < total && stop_index < 0) {
    int end = std::min(total, processed + batch);
    parallel_for(end - processed,
                 [&](std::int64_t k) { evaluate(processed + k); });
    for (int i = processed; i < end; ++i) {
      const Scored& s = scored[static_cast<std::size_t>(i)];
      if (s.valid && fraction_of(s.count) >= required) {
        stop_index = i;
        break;
      }
    }
    processed = end;
  }

  int prefix_end = stop_index >= 0 ? stop_index : total - 1;
  int best_idx = -1;
  for (int i = 0; i <= prefix_end; ++i) {
    const Scored& s = scored[static_cast<std::size_t>(i)];
    if (!s.valid) continue;
    if (best_idx < 0 || s.count > scored[static_cast<std::size_t>(best_idx)].count)
      best_idx = i;
  }

  RansacResult result;
  result.iterations_used = prefix_end + 1;
  if (config.keep_trial_log) {
    result.log.reserve(static_cast<std::size_t>(prefix_end) + 1);
    for (int i = 0; i <= prefix_end; ++i) {
      RansacTrialLog log;
      log.point_sample = samples[static_cast<std::size_t>(i)].points;
      log.line_sample = samples[static_cast<std::size_t>(i)].lines;
      const Scored& s = scored[static_cast<std::size_t>(i)];
      log.inlier_count = s.valid ? s.count : -1;
      result.log.push_back(log);
    }
  }
  if (best_idx >= 0) {
    Scored& s = scored[static_cast<std::size_t>(best_idx)];
    result.pose_valid = true;
    result.best_pose = s.pose;
    result.point_inliers = std::move(s.point_inliers);
    result.line_inliers = std::move(s.line_inliers);
    result.achieved_inlier_fraction = fraction_of(s.count);
    result.status = stop_index >= 0 ? RansacStatus::success
                                    : RansacStatus::no_consensus;
  }
  return result;
}

}  // namespace mppose
