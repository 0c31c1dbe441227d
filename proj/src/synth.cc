#include "shapepose/synth.h"

#include <charconv>
#include <cmath>
#include <exception>
#include <fstream>
#include <random>
#include <sstream>
#include <stdexcept>

#include "json.hpp"
#include "shapepose/error.h"
#include "shapepose/render.h"

namespace shapepose {

Calibration DefaultRig() {
  CameraIntrinsics intr;
  intr.focal_length = 1000.0;
  intr.width = 1024;
  intr.height = 736;
  intr.principal_point = Vec2(512.0, 368.0);
  Calibration calib;
  calib.cameras["camera1"] = Camera{
      intr, LookAt(Point3(-8.95, -9.10, 10.35), Point3::Zero(), Point3::UnitZ())};
  calib.cameras["camera2"] = Camera{
      intr, LookAt(Point3(0.0, 0.0, 10.1), Point3::Zero(), Point3::UnitY())};
  return calib;
}

RigidTransform WorldPose(const Point3& position, const Point3& euler_deg) {
  const Rotation3 r = Rotation3::AxisAngle(Point3::UnitZ(), DegToRad(euler_deg.z())) *
                      Rotation3::AxisAngle(Point3::UnitY(), DegToRad(euler_deg.y())) *
                      Rotation3::AxisAngle(Point3::UnitX(), DegToRad(euler_deg.x()));
  return RigidTransform(r, position);
}

bool InsideFrustum(const PointCloud& model, const RigidTransform& model_to_camera,
                   const CameraIntrinsics& intr, int margin_px) {
  const double lo_x = margin_px, hi_x = intr.width - 1.0 - margin_px;
  const double lo_y = margin_px, hi_y = intr.height - 1.0 - margin_px;
  for (const Point3& q : model.points()) {
    const Point3 p = model_to_camera * q;
    if (!(p.z() > 0.0)) return false;
    const Vec2 px = ProjectPoint(intr, p);
    if (px.x() < lo_x || px.x() > hi_x || px.y() < lo_y || px.y() > hi_y) return false;
  }
  return true;
}

std::uint64_t SceneSeed(std::uint64_t dataset_seed, std::uint64_t index) {
  // splitmix64 finaliser over the pair.
  std::uint64_t z = dataset_seed * 0x9E3779B97F4A7C15ULL + index + 0x632BE59BD9B4E019ULL;
  z = (z ^ (z >> 30)) * 0xBF58476D1CE4E5B9ULL;
  z = (z ^ (z >> 27)) * 0x94D049BB133111EBULL;
  return z ^ (z >> 31);
}

namespace {

double Sample(std::mt19937_64& rng, double lo, double hi) {
  if (lo == hi) return lo;
  return std::uniform_real_distribution<double>(lo, hi)(rng);
}

LabelMap ToLabels(const BinaryMask& mask, int class_id) {
  LabelMap map(mask.width(), mask.height());
  for (std::size_t i = 0; i < mask.data().size(); ++i) {
    map.data()[i] = mask.data()[i] ? static_cast<std::uint8_t>(class_id) : 0;
  }
  return map;
}

}  // namespace

Scene GenerateScene(const PointCloud& model, int class_id, const Calibration& cameras,
                    std::uint64_t seed, const PoseRanges& ranges,
                    const SceneOptions& options) {
  if (class_id < 1 || class_id > 255) {
    throw std::invalid_argument("class id must fit a label map (1..255)");
  }
  const Camera& cam1 = cameras.at("camera1");
  const Camera& cam2 = cameras.at("camera2");
  const RigidTransform cam1_to_cam2 = CameraToCamera(cam1.extrinsics, cam2.extrinsics);
  std::mt19937_64 rng(seed);
  for (int attempt = 0; attempt < options.max_retries; ++attempt) {
    Point3 pos, euler;
    for (int i = 0; i < 3; ++i) {
      pos[i] = Sample(rng, ranges.position_min[i], ranges.position_max[i]);
    }
    for (int i = 0; i < 3; ++i) {
      euler[i] = Sample(rng, ranges.euler_min_deg[i], ranges.euler_max_deg[i]);
    }
    const RigidTransform world = WorldPose(pos, euler);
    const RigidTransform pose1 = cam1.extrinsics.world_to_camera * world;
    const RigidTransform pose2 = cam1_to_cam2 * pose1;
    if (!InsideFrustum(model, pose1, cam1.intrinsics, options.margin_px) ||
        !InsideFrustum(model, pose2, cam2.intrinsics, options.margin_px)) {
      continue;
    }
    // Camera 2 sees the camera-1 cloud mapped through E2 · E1⁻¹.
    const PointCloud in_cam1 = TransformCloud(pose1, model);
    const PointCloud in_cam2 = ChangeCamera(cam1.extrinsics, cam2.extrinsics, in_cam1);
    const BinaryMask m1 = RenderPoints(
        in_cam1.points(), cam1.intrinsics,
        SplatRadiusPixels(cam1.intrinsics, options.splat_radius, pose1.translation().z()));
    const BinaryMask m2 = RenderPoints(
        in_cam2.points(), cam2.intrinsics,
        SplatRadiusPixels(cam2.intrinsics, options.splat_radius, pose2.translation().z()));
    Scene scene{ToLabels(m1, class_id), ToLabels(m2, class_id),
                SceneSpec{class_id, world, pose1, cameras, seed}};
    return scene;
  }
  throw FrustumError("no pose inside both cameras after " +
                     std::to_string(options.max_retries) + " attempts");
}

void WritePoseFile(const std::filesystem::path& path, const RigidTransform& pose) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  const Eigen::Matrix4d m = pose.Matrix();
  char buf[32];
  for (int r = 0; r < 4; ++r) {
    for (int c = 0; c < 4; ++c) {
      const auto res = std::to_chars(buf, buf + sizeof(buf), m(r, c));
      out.write(buf, res.ptr - buf);
      out.put(c < 3 ? ' ' : '\n');
    }
  }
  if (!out) throw FormatError("failed writing " + path.string());
}

RigidTransform ReadPoseFile(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path.string());
  Eigen::Matrix4d m;
  for (int i = 0; i < 16; ++i) {
    std::string tok;
    if (!(in >> tok)) throw FormatError("pose file needs 16 numbers: " + path.string());
    double v = 0.0;
    const auto res = std::from_chars(tok.data(), tok.data() + tok.size(), v);
    if (res.ec != std::errc() || res.ptr != tok.data() + tok.size()) {
      throw FormatError("bad number '" + tok + "' in " + path.string());
    }
    m(i / 4, i % 4) = v;
  }
  std::string extra;
  if (in >> extra) throw FormatError("trailing data in " + path.string());
  try {
    return RigidTransform::FromMatrix(m);
  } catch (const std::invalid_argument& e) {
    throw FormatError(path.string() + ": " + e.what());
  }
}

namespace {

using nlohmann::json;

std::string SceneId(std::size_t index) {
  char buf[32];
  std::snprintf(buf, sizeof(buf), "scene_%04zu", index);
  return buf;
}

}  // namespace

Dataset GenerateDataset(const std::vector<DatasetClass>& classes, int per_class,
                        const Calibration& cameras, std::uint64_t seed,
                        const std::filesystem::path& out_dir, const PoseRanges& ranges,
                        const SceneOptions& options) {
  if (per_class < 1) throw std::invalid_argument("per_class must be >= 1");
  if (classes.empty()) throw std::invalid_argument("dataset needs at least one class");
  for (const DatasetClass& c : classes) {
    if (c.model == nullptr) throw std::invalid_argument("dataset class without model");
  }
  std::error_code ec;
  std::filesystem::create_directories(out_dir / "scenes", ec);
  if (ec) throw FormatError("cannot create " + out_dir.string() + ": " + ec.message());

  Dataset ds;
  ds.root = out_dir;
  ds.seed = seed;
  ds.per_class = per_class;
  ds.calibration = cameras;
  for (const DatasetClass& c : classes) {
    ds.classes.push_back(DatasetClassInfo{c.class_id, c.name, c.model->diameter()});
    for (int j = 0; j < per_class; ++j) {
      const std::string id = SceneId(ds.scenes.size());
      const std::filesystem::path dir = std::filesystem::path("scenes") / id;
      ds.scenes.push_back(DatasetScene{id, c.class_id, dir / "cam1.pgm",
                                       dir / "cam2.pgm", dir / "pose.txt"});
    }
  }

  const long n = static_cast<long>(ds.scenes.size());
  std::vector<std::exception_ptr> errors(n);
#pragma omp parallel for schedule(dynamic)
  for (long i = 0; i < n; ++i) {
    try {
      const DatasetScene& s = ds.scenes[i];
      const DatasetClass& c = classes[i / per_class];
      const Scene scene = GenerateScene(*c.model, c.class_id, cameras,
                                        SceneSeed(seed, static_cast<std::uint64_t>(i)),
                                        ranges, options);
      std::filesystem::create_directories(out_dir / s.camera1.parent_path());
      WritePgm(out_dir / s.camera1, scene.camera1);
      WritePgm(out_dir / s.camera2, scene.camera2);
      WritePoseFile(out_dir / s.pose, scene.spec.pose);
    } catch (...) {
      errors[i] = std::current_exception();
    }
  }
  for (long i = 0; i < n; ++i) {
    if (!errors[i]) continue;
    try {
      std::rethrow_exception(errors[i]);
    } catch (const std::exception& e) {
      throw Error("scene " + std::to_string(i) + ": " + e.what());
    }
  }

  WriteCalibration(out_dir / "calibration.json", cameras);
  json cls = json::array();
  for (const DatasetClassInfo& c : ds.classes) {
    cls.push_back({{"id", c.class_id}, {"name", c.name}, {"diameter", c.diameter}});
  }
  json scenes = json::array();
  for (const DatasetScene& s : ds.scenes) {
    scenes.push_back({{"id", s.id},
                      {"class_id", s.class_id},
                      {"cam1", s.camera1.generic_string()},
                      {"cam2", s.camera2.generic_string()},
                      {"pose", s.pose.generic_string()}});
  }
  const json doc{{"version", 1},         {"seed", seed},     {"per_class", per_class},
                 {"calibration", "calibration.json"}, {"classes", cls}, {"scenes", scenes}};
  std::ofstream out(out_dir / "dataset.json", std::ios::binary);
  if (!out) throw FormatError("cannot write dataset manifest in " + out_dir.string());
  out << doc.dump(2) << '\n';
  if (!out) throw FormatError("failed writing dataset manifest");
  return ds;
}

Dataset LoadDataset(const std::filesystem::path& dir) {
  std::ifstream in(dir / "dataset.json");
  if (!in) throw FormatError("no dataset.json in " + dir.string());
  Dataset ds;
  ds.root = dir;
  try {
    const json doc = json::parse(in);
    if (doc.at("version").get<int>() != 1) throw FormatError("unsupported dataset version");
    ds.seed = doc.at("seed").get<std::uint64_t>();
    ds.per_class = doc.at("per_class").get<int>();
    for (const json& c : doc.at("classes")) {
      ds.classes.push_back(DatasetClassInfo{c.at("id").get<int>(),
                                            c.at("name").get<std::string>(),
                                            c.at("diameter").get<double>()});
    }
    for (const json& s : doc.at("scenes")) {
      ds.scenes.push_back(DatasetScene{s.at("id").get<std::string>(),
                                       s.at("class_id").get<int>(),
                                       s.at("cam1").get<std::string>(),
                                       s.at("cam2").get<std::string>(),
                                       s.at("pose").get<std::string>()});
    }
    ds.calibration = ReadCalibration(dir / doc.at("calibration").get<std::string>());
  } catch (const nlohmann::json::exception& e) {
    throw FormatError("malformed dataset.json: " + std::string(e.what()));
  }
  return ds;
}

}  // namespace shapepose
