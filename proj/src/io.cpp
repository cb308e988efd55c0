#include "mppose/io.hpp"

#include <cstdio>
#include <fstream>
#include <iostream>
#include <sstream>

#include "json.hpp"

namespace mppose {

namespace {

using nlohmann::json;

const json& member(const json& j, const char* key, const std::string& prefix) {
  auto it = j.find(key);
  if (it == j.end()) throw IoError(prefix + "." + key + ": missing");
  return *it;
}

double number_field(const json& j, const char* key, const std::string& prefix) {
  const json& v = member(j, key, prefix);
  if (!v.is_number()) throw IoError(prefix + "." + key + ": expected a number");
  return v.get<double>();
}

int int_field(const json& j, const char* key, const std::string& prefix) {
  const json& v = member(j, key, prefix);
  if (!v.is_number_integer())
    throw IoError(prefix + "." + key + ": expected an integer");
  return v.get<int>();
}

std::vector<double> numbers_field(const json& j, const char* key,
                                  std::size_t count, const std::string& prefix) {
  const json& v = member(j, key, prefix);
  if (!v.is_array() || v.size() != count)
    throw IoError(prefix + "." + key + ": expected " + std::to_string(count) +
                  " numbers");
  std::vector<double> out;
  out.reserve(count);
  for (const auto& e : v) {
    if (!e.is_number())
      throw IoError(prefix + "." + key + ": expected " + std::to_string(count) +
                    " numbers");
    out.push_back(e.get<double>());
  }
  return out;
}

Vector3d vec3_field(const json& j, const char* key, const std::string& prefix) {
  auto v = numbers_field(j, key, 3, prefix);
  return {v[0], v[1], v[2]};
}

// Row-major nine reals.  Rejected above 1e-6 orthonormality error, snapped to
// the nearest rotation above 1e-9; exact inputs pass through untouched so
// rewriting a file we produced is byte-stable.
Matrix3d rotation_field(const json& j, const char* key,
                        const std::string& prefix) {
  auto v = numbers_field(j, key, 9, prefix);
  Matrix3d R;
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) R(r, c) = v[static_cast<std::size_t>(3 * r + c)];
  double err = (R.transpose() * R - Matrix3d::Identity()).cwiseAbs().maxCoeff();
  if (err > 1e-6 || R.determinant() < 0.0)
    throw IoError(prefix + "." + key + ": not a rotation (orthonormality error " +
                  std::to_string(err) + ")");
  if (err > 1e-9) R = project_to_rotation(R);
  return R;
}

json vec_json(const Vector3d& v) { return json::array({v.x(), v.y(), v.z()}); }

json rotation_json(const Matrix3d& R) {
  json a = json::array();
  for (int r = 0; r < 3; ++r)
    for (int c = 0; c < 3; ++c) a.push_back(R(r, c));
  return a;
}

int cam_field(const json& j, const CameraRig& rig, const std::string& prefix) {
  int cam = int_field(j, "cam", prefix);
  if (cam < 0 || cam >= static_cast<int>(rig.cameras.size()))
    throw IoError(prefix + ".cam: camera index out of range");
  return cam;
}

}  // namespace

Instance instance_from_json_text(const std::string& text) {
  json j;
  try {
    j = json::parse(text);
  } catch (const json::parse_error& e) {
    throw IoError(std::string("instance: ") + e.what());
  }
  if (!j.is_object()) throw IoError("instance: top level must be an object");

  Instance out;

  const json& rig = member(j, "rig", "instance");
  if (!rig.is_array() || rig.empty())
    throw IoError("instance.rig: expected a non-empty array");
  for (std::size_t i = 0; i < rig.size(); ++i) {
    std::string prefix = "rig[" + std::to_string(i) + "]";
    const json& c = rig[i];
    if (!c.is_object()) throw IoError(prefix + ": expected an object");
    Camera cam;
    cam.extrinsic.R = rotation_field(c, "rotation", prefix);
    cam.extrinsic.t = vec3_field(c, "translation", prefix);
    cam.extrinsic.to_frame = frames::camera;
    double fx = number_field(c, "fx", prefix);
    double fy = number_field(c, "fy", prefix);
    double cx = number_field(c, "cx", prefix);
    double cy = number_field(c, "cy", prefix);
    if (!(fx > 0.0) || !(fy > 0.0))
      throw IoError(prefix + ".fx: focal lengths must be positive");
    cam.K << fx, 0.0, cx, 0.0, fy, cy, 0.0, 0.0, 1.0;
    cam.width = int_field(c, "width", prefix);
    cam.height = int_field(c, "height", prefix);
    if (cam.width < 1 || cam.height < 1)
      throw IoError(prefix + ".width: image size must be positive");
    out.rig.cameras.push_back(cam);
  }

  if (auto it = j.find("points"); it != j.end()) {
    if (!it->is_array()) throw IoError("instance.points: expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      std::string prefix = "points[" + std::to_string(i) + "]";
      const json& p = (*it)[i];
      if (!p.is_object()) throw IoError(prefix + ": expected an object");
      PointCorrespondence pc;
      pc.camera_index = cam_field(p, out.rig, prefix);
      pc.world_point = vec3_field(p, "world", prefix);
      const Camera& cam = out.rig.cameras[static_cast<std::size_t>(pc.camera_index)];
      bool has_bearing = p.contains("bearing");
      bool has_pixel = p.contains("pixel");
      if (has_bearing && has_pixel)
        std::cerr << "warning: " << prefix
                  << " has both bearing and pixel; using pixel\n";
      if (has_pixel) {
        auto v = numbers_field(p, "pixel", 2, prefix);
        pc.bearing = bearing_from_pixel(cam, {v[0], v[1]});
      } else if (has_bearing) {
        Vector3d b = vec3_field(p, "bearing", prefix);
        double n = b.norm();
        if (n < 1e-12) throw IoError(prefix + ".bearing: zero vector");
        if (std::abs(n - 1.0) > 1e-9) b /= n;
        pc.bearing = b;
      } else {
        throw IoError(prefix + ": needs bearing or pixel");
      }
      out.points.push_back(pc);
    }
  }

  if (auto it = j.find("lines"); it != j.end()) {
    if (!it->is_array()) throw IoError("instance.lines: expected an array");
    for (std::size_t i = 0; i < it->size(); ++i) {
      std::string prefix = "lines[" + std::to_string(i) + "]";
      const json& l = (*it)[i];
      if (!l.is_object()) throw IoError(prefix + ": expected an object");
      LineCorrespondence lc;
      lc.camera_index = cam_field(l, out.rig, prefix);
      Vector3d d = vec3_field(l, "world_direction", prefix);
      Vector3d m = vec3_field(l, "world_moment", prefix);
      double dn = d.norm();
      if (dn < 1e-12) throw IoError(prefix + ".world_direction: zero vector");
      if (std::abs(dn - 1.0) > 1e-6)
        throw IoError(prefix + ".world_direction: not unit length");
      if (std::abs(dn - 1.0) > 1e-9) {
        d /= dn;
        m /= dn;
      }
      double ortho = std::abs(d.dot(m));
      if (ortho > 1e-6 * std::max(1.0, m.norm()))
        throw IoError(prefix + ".world_moment: not orthogonal to the direction");
      if (ortho > 1e-12) m -= d.dot(m) * d;
      lc.world_line.direction = d;
      lc.world_line.moment = m;

      const Camera& cam = out.rig.cameras[static_cast<std::size_t>(lc.camera_index)];
      bool has_plane = l.contains("plane_normal");
      bool has_pixels = l.contains("pixel_endpoints");
      if (has_plane && has_pixels)
        std::cerr << "warning: " << prefix
                  << " has both plane_normal and pixel_endpoints; using"
                     " pixel_endpoints\n";
      if (has_pixels) {
        auto v = numbers_field(l, "pixel_endpoints", 4, prefix);
        Vector2d e0(v[0], v[1]);
        Vector2d e1(v[2], v[3]);
        try {
          lc.plane = interpretation_plane_from_bearings(
              bearing_from_pixel(cam, e0), bearing_from_pixel(cam, e1));
        } catch (const DegenerateInput&) {
          throw IoError(prefix +
                        ".pixel_endpoints: endpoints back-project to parallel"
                        " bearings");
        }
        lc.pixel_endpoints = {e0, e1};
      } else if (has_plane) {
        Vector3d n = vec3_field(l, "plane_normal", prefix);
        double nn = n.norm();
        if (nn < 1e-12) throw IoError(prefix + ".plane_normal: zero vector");
        if (std::abs(nn - 1.0) > 1e-9) n /= nn;
        lc.plane.normal = n;
        lc.plane.offset = 0.0;
      } else {
        throw IoError(prefix + ": needs plane_normal or pixel_endpoints");
      }
      out.lines.push_back(lc);
    }
  }

  if (auto it = j.find("ground_truth"); it != j.end()) {
    if (!it->is_object()) throw IoError("instance.ground_truth: expected an object");
    RigidTransform gt;
    gt.R = rotation_field(*it, "rotation", "ground_truth");
    gt.t = vec3_field(*it, "translation", "ground_truth");
    gt.from_frame = frames::camera;
    gt.to_frame = frames::world;
    out.ground_truth = gt;
  }

  if (auto it = j.find("seed"); it != j.end()) {
    if (!it->is_number_integer() && !it->is_number_unsigned())
      throw IoError("instance.seed: expected an integer");
    out.seed = it->get<std::uint64_t>();
  }
  if (auto it = j.find("noise_px"); it != j.end()) {
    if (!it->is_number()) throw IoError("instance.noise_px: expected a number");
    out.noise_px = it->get<double>();
    if (out.noise_px < 0.0) throw IoError("instance.noise_px: negative");
  }
  return out;
}

std::string instance_to_json_text(const Instance& instance) {
  json j;
  json rig = json::array();
  for (const Camera& cam : instance.rig.cameras) {
    json c;
    c["rotation"] = rotation_json(cam.extrinsic.R);
    c["translation"] = vec_json(cam.extrinsic.t);
    c["fx"] = cam.K(0, 0);
    c["fy"] = cam.K(1, 1);
    c["cx"] = cam.K(0, 2);
    c["cy"] = cam.K(1, 2);
    c["width"] = cam.width;
    c["height"] = cam.height;
    rig.push_back(c);
  }
  j["rig"] = rig;

  json points = json::array();
  for (const auto& pc : instance.points) {
    json p;
    p["cam"] = pc.camera_index;
    p["world"] = vec_json(pc.world_point);
    p["bearing"] = vec_json(pc.bearing);
    points.push_back(p);
  }
  j["points"] = points;

  json lines = json::array();
  for (const auto& lc : instance.lines) {
    json l;
    l["cam"] = lc.camera_index;
    l["world_direction"] = vec_json(lc.world_line.direction);
    l["world_moment"] = vec_json(lc.world_line.moment);
    if (lc.pixel_endpoints) {
      const auto& e = *lc.pixel_endpoints;
      l["pixel_endpoints"] =
          json::array({e[0].x(), e[0].y(), e[1].x(), e[1].y()});
    } else {
      l["plane_normal"] = vec_json(lc.plane.normal);
    }
    lines.push_back(l);
  }
  j["lines"] = lines;

  if (instance.ground_truth) {
    json gt;
    gt["rotation"] = rotation_json(instance.ground_truth->R);
    gt["translation"] = vec_json(instance.ground_truth->t);
    j["ground_truth"] = gt;
  }
  j["seed"] = instance.seed;
  j["noise_px"] = instance.noise_px;
  return j.dump(2) + "\n";
}

Instance load_instance(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open for reading");
  std::ostringstream buf;
  buf << in.rdbuf();
  try {
    return instance_from_json_text(buf.str());
  } catch (const IoError& e) {
    throw IoError(path + ": " + e.what());
  }
}

void save_instance(const Instance& instance, const std::string& path) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path + ": cannot open for writing");
  out << instance_to_json_text(instance);
  if (!out) throw IoError(path + ": write failed");
}

Instance instance_from_scene(const SyntheticScene& scene) {
  Instance out;
  out.rig = scene.rig;
  for (const auto& sp : scene.points) out.points.push_back(sp.corr);
  for (const auto& sl : scene.lines) out.lines.push_back(sl.corr);
  out.ground_truth = scene.ground_truth_pose;
  out.seed = scene.rng_seed;
  out.noise_px = scene.noise_pixels;
  return out;
}

P2L1Problem p2l1_problem_from_instance(const Instance& instance) {
  if (instance.lines.empty()) throw InsufficientData("instance: missing lines[0]");
  if (instance.points.size() < 2)
    throw InsufficientData("instance: missing points[" +
                           std::to_string(instance.points.size()) + "]");
  P2L1Problem p;
  p.line = instance.lines[0];
  p.point2 = instance.points[0];
  p.point3 = instance.points[1];
  p.rig = instance.rig;
  return p;
}

P1L2Problem p1l2_problem_from_instance(const Instance& instance) {
  if (instance.points.empty()) throw InsufficientData("instance: missing points[0]");
  if (instance.lines.size() < 2)
    throw InsufficientData("instance: missing lines[" +
                           std::to_string(instance.lines.size()) + "]");
  P1L2Problem p;
  p.line1 = instance.lines[0];
  p.point2 = instance.points[0];
  p.line3 = instance.lines[1];
  p.rig = instance.rig;
  return p;
}

std::string report_row_to_csv(const ReportRow& row) {
  char buf[320];
  std::snprintf(buf, sizeof buf, "%s,%.17g,%d,%d,%d,%.17g,%.17g,%.17g,%s",
                row.solver.c_str(), row.noise_px, row.trial, row.n_solutions,
                row.n_solutions_cheiral, row.rot_err_deg, row.trans_err,
                row.solve_time_us, row.status.c_str());
  return buf;
}

void write_report_csv(const std::string& path,
                      const std::vector<ReportRow>& rows) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw IoError(path + ": cannot open for writing");
  out << kReportHeader << "\n";
  for (const auto& row : rows) out << report_row_to_csv(row) << "\n";
  if (!out) throw IoError(path + ": write failed");
}

std::vector<ReportRow> read_report_csv(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  if (!in) throw IoError(path + ": cannot open for reading");
  std::string line;
  if (!std::getline(in, line)) throw IoError(path + ": empty file");
  if (!line.empty() && line.back() == '\r') line.pop_back();
  if (line != kReportHeader) throw IoError(path + ": unexpected CSV header");

  std::vector<ReportRow> rows;
  int lineno = 1;
  while (std::getline(in, line)) {
    ++lineno;
    if (!line.empty() && line.back() == '\r') line.pop_back();
    if (line.empty()) continue;
    std::vector<std::string> fields;
    std::stringstream ss(line);
    std::string field;
    while (std::getline(ss, field, ',')) fields.push_back(field);
    if (fields.size() != 9)
      throw IoError(path + ":" + std::to_string(lineno) + ": expected 9 columns");
    ReportRow row;
    try {
      row.solver = fields[0];
      row.noise_px = std::stod(fields[1]);
      row.trial = std::stoi(fields[2]);
      row.n_solutions = std::stoi(fields[3]);
      row.n_solutions_cheiral = std::stoi(fields[4]);
      row.rot_err_deg = std::stod(fields[5]);
      row.trans_err = std::stod(fields[6]);
      row.solve_time_us = std::stod(fields[7]);
      row.status = fields[8];
    } catch (const std::exception&) {
      throw IoError(path + ":" + std::to_string(lineno) + ": bad number");
    }
    rows.push_back(row);
  }
  return rows;
}

}  // namespace mppose
