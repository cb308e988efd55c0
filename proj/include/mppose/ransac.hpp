#pragma once

#include <cstdint>
#include <vector>

#include "mppose/geometry.hpp"
#include "mppose/solver_p1l2.hpp"
#include "mppose/solver_p2l1.hpp"

namespace mppose {

enum class SamplingMode { p2l1, p1l2, automatic };

struct RansacConfig {
  double point_threshold_px = 2.0;
  double line_threshold = 2.0;  // endpoint-anchored line distance units
  double required_inlier_fraction = 0.4;  // of the combined feature pool
  int max_iterations = 1000;
  SamplingMode sampling_mode = SamplingMode::automatic;
  std::uint64_t rng_seed = 0;
  bool keep_trial_log = false;
};

enum class RansacStatus { success, no_consensus };

struct RansacTrialLog {
  std::array<int, 2> point_sample{{-1, -1}};
  std::array<int, 2> line_sample{{-1, -1}};
  int inlier_count = -1;  // -1: hypothesis produced no scorable pose
};

struct RansacResult {
  RansacStatus status = RansacStatus::no_consensus;
  bool pose_valid = false;  // at least one hypothesis was scored
  RigidTransform best_pose;
  std::vector<int> point_inliers;
  std::vector<int> line_inliers;
  int iterations_used = 0;
  double achieved_inlier_fraction = 0.0;
  std::vector<RansacTrialLog> log;  // filled when keep_trial_log
};

// Hybrid consensus over mixed point/line features.  Minimal samples are drawn
// serially from the seeded RNG, hypotheses are solved and scored in batches
// (parallel across worker threads), and the sequential stop rule is
// preserved: stop at the first hypothesis whose combined inlier fraction
// meets the requirement, return the best-scoring hypothesis up to that index
// (ties broken toward the lower sample index).  Deterministic for a fixed
// seed regardless of thread count.
RansacResult ransac_pose(const std::vector<PointCorrespondence>& points,
                         const std::vector<LineCorrespondence>& lines,
                         const CameraRig& rig, const RansacConfig& config);

}  // namespace mppose
