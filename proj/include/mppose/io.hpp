#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "mppose/geometry.hpp"
#include "mppose/scene.hpp"
#include "mppose/solver_p1l2.hpp"
#include "mppose/solver_p2l1.hpp"

namespace mppose {

// One problem instance as stored in the JSON file format (see README for the
// schema).  Bearings/planes hold the derived observation regardless of
// whether the file supplied pixels or direct vectors.
struct Instance {
  CameraRig rig;
  std::vector<PointCorrespondence> points;
  std::vector<LineCorrespondence> lines;
  std::optional<RigidTransform> ground_truth;  // camera -> world
  std::uint64_t seed = 0;
  double noise_px = 0.0;
};

// Parsing validates shapes and rotation orthonormality (reject above 1e-6,
// snap below via polar projection) and names the offending field in the
// thrown IoError.  When both pixel and direct forms are present, pixels win
// and a warning goes to stderr.
Instance instance_from_json_text(const std::string& text);
Instance load_instance(const std::string& path);
std::string instance_to_json_text(const Instance& instance);
void save_instance(const Instance& instance, const std::string& path);

Instance instance_from_scene(const SyntheticScene& scene);

// Throws InsufficientData naming the first missing field.
P2L1Problem p2l1_problem_from_instance(const Instance& instance);
P1L2Problem p1l2_problem_from_instance(const Instance& instance);

inline constexpr const char* kReportHeader =
    "solver,noise_px,trial,n_solutions,n_solutions_cheiral,rot_err_deg,"
    "trans_err,solve_time_us,status";

struct ReportRow {
  std::string solver;  // p2l1 | p1l2
  double noise_px = 0.0;
  int trial = 0;
  int n_solutions = 0;
  int n_solutions_cheiral = 0;
  double rot_err_deg = 0.0;  // best over candidates; NaN when none
  double trans_err = 0.0;
  double solve_time_us = 0.0;
  std::string status;  // ok | no_solutions | degenerate
};

std::string report_row_to_csv(const ReportRow& row);
void write_report_csv(const std::string& path,
                      const std::vector<ReportRow>& rows);
std::vector<ReportRow> read_report_csv(const std::string& path);

}  // namespace mppose
