#include <chrono>
#include <cmath>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iostream>
#include <limits>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "json.hpp"

#include "mppose/io.hpp"
#include "mppose/ransac.hpp"
#include "mppose/scene.hpp"

namespace {

using namespace mppose;
using nlohmann::json;

json pose_json(const RigidTransform& T) {
  json j;
  json rot = json::array();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) rot.push_back(T.R(r, c));
  j["rotation"] = rot;
  j["translation"] = json::array({T.t.x(), T.t.y(), T.t.z()});
  return j;
}

json solution_json(const PoseSolution& sol) {
  json j = pose_json(sol.pose);
  j["depths"] = sol.depths;
  j["residual_norm"] = sol.residual_norm;
  j["cheirality_ok"] = sol.cheirality_ok;
  return j;
}

int cmd_solve(const std::string& input, const std::string& solver,
              bool cheirality) {
  Instance instance = load_instance(input);
  std::vector<PoseSolution> sols;
  if (solver == "p2l1") {
    sols = solve_p2l1(p2l1_problem_from_instance(instance));
  } else {
    sols = solve_p1l2(p1l2_problem_from_instance(instance));
  }
  if (cheirality) sols = cheirality_filter(sols);
  json out = json::array();
  for (const auto& s : sols) out.push_back(solution_json(s));
  std::cout << out.dump(2) << "\n";
  return 0;
}

struct TrialOutcome {
  int n_solutions = 0;
  int n_cheiral = 0;
  double rot_err = std::numeric_limits<double>::quiet_NaN();
  double trans_err = std::numeric_limits<double>::quiet_NaN();
  double time_us = 0.0;
  std::string status = "ok";
};

// Best rotation/translation error over the unfiltered candidates; nan rows
// mean the solver returned nothing.
template <typename Solve>
TrialOutcome run_trial(const SyntheticScene& scene, Solve&& solve) {
  TrialOutcome out;
  std::vector<PoseSolution> sols;
  auto t0 = std::chrono::steady_clock::now();
  try {
    sols = solve();
  } catch (const Error&) {
    out.status = "degenerate";
    out.time_us = std::chrono::duration<double, std::micro>(
                      std::chrono::steady_clock::now() - t0)
                      .count();
    return out;
  }
  out.time_us = std::chrono::duration<double, std::micro>(
                    std::chrono::steady_clock::now() - t0)
                    .count();
  out.n_solutions = static_cast<int>(sols.size());
  out.n_cheiral = static_cast<int>(cheirality_filter(sols).size());
  if (sols.empty()) {
    out.status = "no_solutions";
    return out;
  }
  for (const auto& s : sols) {
    double re = rotation_error_deg(s.pose.R, scene.ground_truth_pose.R);
    double te = translation_error(s.pose.t, scene.ground_truth_pose.t);
    if (std::isnan(out.rot_err) || re < out.rot_err) out.rot_err = re;
    if (std::isnan(out.trans_err) || te < out.trans_err) out.trans_err = te;
  }
  return out;
}

void append_rows(std::vector<ReportRow>* rows, double noise, int trial,
                 std::uint64_t scene_seed) {
  SceneConfig cfg;
  cfg.n_cameras = 3;
  cfg.n_points = 2;
  cfg.n_lines = 2;
  cfg.noise_pixels = noise;
  cfg.seed = scene_seed;
  SyntheticScene scene = generate_scene(cfg);

  auto to_row = [&](const char* solver, const TrialOutcome& o) {
    ReportRow row;
    row.solver = solver;
    row.noise_px = noise;
    row.trial = trial;
    row.n_solutions = o.n_solutions;
    row.n_solutions_cheiral = o.n_cheiral;
    row.rot_err_deg = o.rot_err;
    row.trans_err = o.trans_err;
    row.solve_time_us = o.time_us;
    row.status = o.status;
    return row;
  };
  P2L1Problem p21 = p2l1_problem_from_scene(scene);
  rows->push_back(to_row("p2l1", run_trial(scene, [&] { return solve_p2l1(p21); })));
  P1L2Problem p12 = p1l2_problem_from_scene(scene);
  rows->push_back(to_row("p1l2", run_trial(scene, [&] { return solve_p1l2(p12); })));
}

int cmd_bench_numeric(int trials, std::uint64_t seed, const std::string& out) {
  std::vector<ReportRow> rows;
  rows.reserve(static_cast<std::size_t>(trials) * 2);
  for (int t = 0; t < trials; ++t)
    append_rows(&rows, 0.0, t, stream_seed(seed, static_cast<std::uint64_t>(t)));
  write_report_csv(out, rows);
  return 0;
}

int cmd_bench_noise(int trials, const std::string& levels, std::uint64_t seed,
                    const std::string& out) {
  std::vector<double> noise_levels;
  std::stringstream ss(levels);
  std::string tok;
  while (std::getline(ss, tok, ',')) {
    try {
      noise_levels.push_back(std::stod(tok));
    } catch (const std::exception&) {
      throw IoError("bench-noise: bad noise level '" + tok + "'");
    }
  }
  if (noise_levels.empty()) throw IoError("bench-noise: no noise levels");

  std::vector<ReportRow> rows;
  for (std::size_t li = 0; li < noise_levels.size(); ++li) {
    for (int t = 0; t < trials; ++t) {
      std::uint64_t scene_seed =
          stream_seed(seed, (static_cast<std::uint64_t>(li) << 32) |
                                static_cast<std::uint64_t>(t));
      append_rows(&rows, noise_levels[li], t, scene_seed);
    }
  }
  write_report_csv(out, rows);
  return 0;
}

int cmd_ransac(const std::string& input, double point_thresh, double line_thresh,
               double inlier_frac, int max_iter, std::uint64_t seed,
               const std::string& out_path) {
  Instance instance = load_instance(input);
  RansacConfig cfg;
  cfg.point_threshold_px = point_thresh;
  cfg.line_threshold = line_thresh;
  cfg.required_inlier_fraction = inlier_frac;
  cfg.max_iterations = max_iter;
  cfg.rng_seed = seed;
  RansacResult result =
      ransac_pose(instance.points, instance.lines, instance.rig, cfg);

  json j;
  j["status"] = result.status == RansacStatus::success ? "success" : "no_consensus";
  j["pose_valid"] = result.pose_valid;
  if (result.pose_valid) {
    j["pose"] = pose_json(result.best_pose);
    j["point_inliers"] = result.point_inliers;
    j["line_inliers"] = result.line_inliers;
  }
  j["iterations_used"] = result.iterations_used;
  j["achieved_inlier_fraction"] = result.achieved_inlier_fraction;
  std::string text = j.dump(2) + "\n";
  if (out_path.empty()) {
    std::cout << text;
  } else {
    std::ofstream f(out_path, std::ios::binary);
    if (!f) throw IoError(out_path + ": cannot open for writing");
    f << text;
  }
  return result.status == RansacStatus::success ? 0 : 3;
}

int cmd_synth(const std::string& config_path, const std::string& out_dir) {
  std::ifstream in(config_path, std::ios::binary);
  if (!in) throw IoError(config_path + ": cannot open for reading");
  json cj;
  try {
    cj = json::parse(in);
  } catch (const json::parse_error& e) {
    throw IoError(config_path + ": " + e.what());
  }

  int n_instances = cj.value("n_instances", 1);
  if (n_instances < 1) throw IoError("synth: n_instances must be positive");
  SceneConfig cfg;
  cfg.n_cameras = cj.value("n_cameras", 3);
  cfg.n_points = cj.value("n_points", 2);
  cfg.n_lines = cj.value("n_lines", 2);
  cfg.noise_pixels = cj.value("noise_px", 0.0);
  cfg.depth_min = cj.value("depth_min", 2.0);
  cfg.depth_max = cj.value("depth_max", 10.0);
  cfg.central = cj.value("central", false);
  std::uint64_t base_seed = cj.value("seed", std::uint64_t{0});

  std::filesystem::create_directories(out_dir);
  json manifest;
  manifest["base_seed"] = base_seed;
  json files = json::array();
  for (int i = 0; i < n_instances; ++i) {
    cfg.seed = stream_seed(base_seed, static_cast<std::uint64_t>(i));
    SyntheticScene scene = generate_scene(cfg);
    std::string name = "instance_" + std::to_string(i) + ".json";
    save_instance(instance_from_scene(scene),
                  (std::filesystem::path(out_dir) / name).string());
    json entry;
    entry["file"] = name;
    entry["seed"] = cfg.seed;
    files.push_back(entry);
  }
  manifest["instances"] = files;
  std::ofstream mf(std::filesystem::path(out_dir) / "manifest.json",
                   std::ios::binary);
  if (!mf) throw IoError(out_dir + "/manifest.json: cannot open for writing");
  mf << manifest.dump(2) << "\n";
  return 0;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Minimal pose solvers for multi-perspective camera rigs"};
  app.require_subcommand(1);

  auto* solve = app.add_subcommand("solve", "Solve one instance file");
  std::string solve_input;
  std::string solve_solver;
  std::string solve_cheirality = "off";
  solve->add_option("--input", solve_input, "Instance JSON file")->required();
  solve->add_option("--solver", solve_solver, "p2l1 or p1l2")
      ->required()
      ->check(CLI::IsMember({"p2l1", "p1l2"}));
  solve->add_option("--cheirality", solve_cheirality,
                    "Drop negative-depth solutions (on/off)")
      ->check(CLI::IsMember({"on", "off"}));

  auto* bench_numeric =
      app.add_subcommand("bench-numeric", "Noiseless accuracy and timing sweep");
  int bn_trials = 1000;
  std::uint64_t bn_seed = 0;
  std::string bn_out = "bench_numeric.csv";
  bench_numeric->add_option("--trials", bn_trials, "Trials per solver")
      ->check(CLI::PositiveNumber);
  bench_numeric->add_option("--seed", bn_seed, "Base RNG seed");
  bench_numeric->add_option("--out", bn_out, "Output CSV path");

  auto* bench_noise = app.add_subcommand("bench-noise", "Pixel noise sweep");
  int nz_trials = 1000;
  std::string nz_levels = "0,1,2,3,4,5";
  std::uint64_t nz_seed = 0;
  std::string nz_out = "bench_noise.csv";
  bench_noise->add_option("--trials-per-level", nz_trials, "Trials per level")
      ->check(CLI::PositiveNumber);
  bench_noise->add_option("--levels", nz_levels, "Comma-separated noise sigmas");
  bench_noise->add_option("--seed", nz_seed, "Base RNG seed");
  bench_noise->add_option("--out", nz_out, "Output CSV path");

  auto* ransac = app.add_subcommand("ransac", "Robust pose from a dataset file");
  std::string rs_input;
  double rs_point_thresh = 2.0;
  double rs_line_thresh = 2.0;
  double rs_inlier_frac = 0.4;
  int rs_max_iter = 1000;
  std::uint64_t rs_seed = 0;
  std::string rs_out;
  ransac->add_option("--input", rs_input, "Dataset instance JSON")->required();
  ransac->add_option("--point-thresh", rs_point_thresh, "Pixel threshold");
  ransac->add_option("--line-thresh", rs_line_thresh, "Line distance threshold");
  ransac->add_option("--inlier-frac", rs_inlier_frac, "Required inlier fraction");
  ransac->add_option("--max-iter", rs_max_iter, "Maximum hypotheses");
  ransac->add_option("--seed", rs_seed, "RNG seed");
  ransac->add_option("--out", rs_out, "Result JSON path (default stdout)");

  auto* synth = app.add_subcommand("synth", "Generate instance files");
  std::string sy_config;
  std::string sy_out = ".";
  synth->add_option("--config", sy_config, "Generator config JSON")->required();
  synth->add_option("--out", sy_out, "Output directory");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    int code = app.exit(e);
    return code == 0 ? 0 : 1;
  }

  try {
    if (solve->parsed())
      return cmd_solve(solve_input, solve_solver, solve_cheirality == "on");
    if (bench_numeric->parsed())
      return cmd_bench_numeric(bn_trials, bn_seed, bn_out);
    if (bench_noise->parsed())
      return cmd_bench_noise(nz_trials, nz_levels, nz_seed, nz_out);
    if (ransac->parsed())
      return cmd_ransac(rs_input, rs_point_thresh, rs_line_thresh,
                        rs_inlier_frac, rs_max_iter, rs_seed, rs_out);
    if (synth->parsed()) return cmd_synth(sy_config, sy_out);
  } catch (const IoError& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const InsufficientData& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 1;
  } catch (const Error& e) {
    std::cerr << "error: " << e.what() << "\n";
    return 2;
  }
  return 0;
}
