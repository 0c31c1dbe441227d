#include "cli.h"

#include <algorithm>
#include <cstdint>
#include <filesystem>
#include <fstream>
#include <iomanip>
#include <limits>
#include <map>
#include <ostream>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "shapepose/calibration.h"
#include "shapepose/cloud_io.h"
#include "shapepose/error.h"
#include "shapepose/evaluation.h"
#include "shapepose/image.h"
#include "shapepose/manifest.h"
#include "shapepose/models.h"
#include "shapepose/parallel.h"
#include "shapepose/pipeline.h"
#include "shapepose/shape_library.h"
#include "shapepose/synth.h"

namespace shapepose {
namespace {

namespace fs = std::filesystem;

struct Flags {
  std::string manifest;
  std::string model;
  int class_id = 0;
  int views = 200;
  double zm = 8.0;
  std::string mask1;
  std::string mask2;
  std::string out;
  std::uint64_t seed = 0;
  int per_class = 20;
  int top_k = -1;  // manifest default
  int threads = 0;
  std::string emit_cloud;
  bool verbose = false;
  std::string dataset;
  std::string estimates;
  bool run_estimation = false;
};

// Writes through a sibling temporary so that a failure leaves no partial
// file behind.
template <typename WriteFn>
void WriteAtomically(const fs::path& path, WriteFn write) {
  const fs::path tmp = fs::path(path).concat(".partial");
  try {
    write(tmp);
    fs::rename(tmp, path);
  } catch (...) {
    std::error_code ec;
    fs::remove(tmp, ec);
    throw;
  }
}

void EnsureParent(const fs::path& path) {
  const fs::path parent = path.parent_path();
  if (parent.empty()) return;
  std::error_code ec;
  fs::create_directories(parent, ec);
  if (ec) throw FormatError("cannot create " + parent.string() + ": " + ec.message());
}

void PrintAreaStats(const ShapeLibrary& lib, std::ostream& out) {
  double lo = std::numeric_limits<double>::infinity(), hi = 0.0, sum = 0.0;
  for (const ShapeLibraryEntry& e : lib.entries) {
    lo = std::min(lo, e.area);
    hi = std::max(hi, e.area);
    sum += e.area;
  }
  out << "class " << lib.class_id << ": " << lib.size() << " views at z_m = " << lib.view_distance
      << ", area min " << lo << " mean " << sum / lib.size() << " max " << hi << " px\n";
}

int CmdInit(const Flags& f, std::ostream& out) {
  const fs::path root(f.out);
  fs::create_directories(root / "models");
  Manifest m;
  m.calibration = fs::absolute(root / "calibration.json");
  WriteCalibration(m.calibration, DefaultRig());
  for (const ProceduralClass& c : ProceduralClasses()) {
    const fs::path model = fs::absolute(root / "models" / (c.name + ".xyz"));
    WriteXyz(model, MakeProceduralModel(c.name));
    m.classes[c.class_id] = ManifestClass{
        c.class_id, c.name, model, fs::absolute(root / "libraries" / (c.name + ".splb"))};
  }
  SaveManifest(root / "manifest.json", m);
  out << "wrote " << m.classes.size() << " models, calibration and "
      << (root / "manifest.json").string() << '\n';
  return 0;
}

ShapeLibrary BuildOne(const PointCloud& model, int class_id, const Flags& f,
                      double splat_radius, int signature_length) {
  LibraryOptions opt;
  opt.n_views = f.views;
  opt.view_distance = f.zm;
  opt.splat_radius = splat_radius;
  opt.signature_length = signature_length;
  return BuildShapeLibrary(model, class_id, opt);
}

int CmdBuildShapelib(const Flags& f, std::ostream& out) {
  if (!f.model.empty()) {
    if (f.out.empty() || f.class_id < 1) {
      throw CLI::ValidationError("build-shapelib", "--model needs --class-id and --out");
    }
    double splat = LibraryOptions{}.splat_radius;
    int sig = kDefaultSignatureLength;
    if (!f.manifest.empty()) {
      const Manifest m = LoadManifest(f.manifest);
      splat = m.defaults.splat_radius;
      sig = m.signature_length;
    }
    const PointCloud model = ReadPointCloud(f.model);
    const ShapeLibrary lib = BuildOne(model, f.class_id, f, splat, sig);
    EnsureParent(f.out);
    WriteAtomically(f.out, [&](const fs::path& p) { SaveShapeLibrary(p, lib); });
    PrintAreaStats(lib, out);
    return 0;
  }
  if (f.manifest.empty()) {
    throw CLI::ValidationError("build-shapelib", "give --model or --manifest");
  }
  const Manifest m = LoadManifest(f.manifest);
  for (const auto& [id, c] : m.classes) {
    if (f.class_id != 0 && id != f.class_id) continue;
    const PointCloud model = ReadPointCloud(c.model);
    const ShapeLibrary lib = BuildOne(model, id, f, m.defaults.splat_radius, m.signature_length);
    EnsureParent(c.library);
    WriteAtomically(c.library, [&](const fs::path& p) { SaveShapeLibrary(p, lib); });
    out << c.name << " -> " << c.library.string() << '\n';
    PrintAreaStats(lib, out);
  }
  return 0;
}

EstimateOptions OptionsFrom(const Flags& f, const Manifest& m) {
  EstimateOptions opt;
  opt.top_k = f.top_k >= 0 ? f.top_k : m.defaults.top_k;
  opt.min_area = m.defaults.min_area;
  return opt;
}

int CmdEstimate(const Flags& f, std::ostream& out, std::ostream& err) {
  ResourceCache cache(LoadManifest(f.manifest));
  const LabelMap map1 = ReadLabelMap(f.mask1);
  std::optional<LabelMap> map2;
  if (!f.mask2.empty()) map2 = ReadLabelMap(f.mask2);
  const PoseEstimate est =
      EstimateFromLabelMaps(map1, map2 ? &*map2 : nullptr, cache.calibration(), cache.Lookup(),
                            OptionsFrom(f, cache.manifest()));
  EnsureParent(f.out);
  WriteEstimate(f.out, est);
  if (!f.emit_cloud.empty()) {
    EnsureParent(f.emit_cloud);
    WriteXyz(f.emit_cloud, TransformCloud(est.best.pose, *cache.Get(est.class_id).model));
  }
  if (f.verbose) err << CostDump(est);
  const Point3& t = est.best.translation;
  out << cache.manifest().at(est.class_id).name << ": view " << est.best.view_index
      << " theta3 " << est.best.theta3 << " t (" << t.x() << ", " << t.y() << ", " << t.z()
      << ") cost " << est.best.cost;
  if (est.best.second_view_cost) out << " second-view cost " << *est.best.second_view_cost;
  out << '\n';
  return 0;
}

int CmdSynth(const Flags& f, std::ostream& out) {
  const Manifest m = LoadManifest(f.manifest);
  const Calibration calib = ReadCalibration(m.calibration);
  std::vector<PointCloud> models;
  models.reserve(m.classes.size());
  std::vector<DatasetClass> classes;
  for (const auto& [id, c] : m.classes) models.push_back(ReadPointCloud(c.model));
  std::size_t i = 0;
  for (const auto& [id, c] : m.classes) classes.push_back({id, c.name, &models[i++]});
  SceneOptions so;
  so.splat_radius = m.defaults.splat_radius;
  const Dataset ds = GenerateDataset(classes, f.per_class, calib, f.seed, f.out, {}, so);
  out << "wrote " << ds.scenes.size() << " scenes (" << ds.classes.size() << " classes x "
      << f.per_class << ", seed " << f.seed << ") to " << f.out << '\n';
  return 0;
}

std::string SceneEstimatePath(const fs::path& dir, const DatasetScene& s) {
  return (dir / (s.id + ".txt")).string();
}

int CmdEvaluate(const Flags& f, std::ostream& out, std::ostream& err) {
  ResourceCache cache(LoadManifest(f.manifest));
  const Dataset ds = LoadDataset(f.dataset);
  const fs::path results(f.out);
  const fs::path est_dir = f.estimates.empty() ? results / "estimates" : fs::path(f.estimates);
  fs::create_directories(results);
  if (f.run_estimation) fs::create_directories(est_dir);
  const EstimateOptions opt = OptionsFrom(f, cache.manifest());

  std::vector<EvalRecord> records;
  std::vector<std::string> missing;
  for (const DatasetScene& s : ds.scenes) {
    try {
      const fs::path est_path = SceneEstimatePath(est_dir, s);
      if (f.run_estimation) {
        const LabelMap m1 = ReadLabelMap(ds.root / s.camera1);
        const LabelMap m2 = ReadLabelMap(ds.root / s.camera2);
        const PoseEstimate est =
            EstimateFromLabelMaps(m1, &m2, ds.calibration, cache.Lookup(), opt);
        WriteEstimate(est_path, est);
        if (f.verbose) err << s.id << '\n' << CostDump(est);
      } else if (!fs::exists(est_path)) {
        missing.push_back(s.id);
        continue;
      }
      const StoredEstimate est = ReadEstimate(est_path);
      if (est.class_id != s.class_id) {
        err << "warning: " << s.id << " estimated as class " << est.class_id << ", expected "
            << s.class_id << '\n';
      }
      const PointCloud& model = *cache.Get(s.class_id).model;
      EvalRecord r;
      r.scene_id = s.id;
      r.class_id = s.class_id;
      r.estimate = est.pose;
      r.ground_truth = ReadPoseFile(ds.root / s.pose);
      r.adds = AddsError(r.estimate, r.ground_truth, model);
      r.diameter = model.diameter();
      records.push_back(r);
    } catch (const Error& e) {
      err << "warning: " << s.id << ": " << e.what() << '\n';
      missing.push_back(s.id);
    }
  }
  if (!missing.empty()) {
    err << "warning: " << missing.size() << " scene(s) not evaluated:";
    for (const std::string& id : missing) err << ' ' << id;
    err << '\n';
  }
  if (records.empty()) throw Error("no scene could be evaluated");
  const BenchmarkTable table = Benchmark(records);
  const std::map<int, std::string> names = cache.manifest().Names();
  WriteResults(results, records, table, names);
  out << SummaryText(table, names);
  return 0;
}

}  // namespace

int RunCli(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Silhouette-based 6D pose estimation from segmentation masks", "shapepose"};
  app.require_subcommand(1);
  Flags f;
  app.add_option("--threads", f.threads, "Worker thread cap (0 = all cores)")
      ->check(CLI::NonNegativeNumber);

  CLI::App* init = app.add_subcommand(
      "init", "Write the procedural models, a two-camera calibration and a manifest");
  init->add_option("--out", f.out, "Project directory")->required();

  CLI::App* build = app.add_subcommand("build-shapelib", "Render a model's shape library");
  build->add_option("--manifest", f.manifest, "Manifest; builds every listed class");
  build->add_option("--model", f.model, "Point cloud (.xyz or .ply)")->check(CLI::ExistingFile);
  build->add_option("--class-id", f.class_id, "Class id")->check(CLI::Range(1, 255));
  build->add_option("--views", f.views, "Number of sphere views")->check(CLI::PositiveNumber);
  build->add_option("--zm", f.zm, "Library view distance")->check(CLI::PositiveNumber);
  build->add_option("--out", f.out, "Output library file");

  CLI::App* est = app.add_subcommand("estimate", "Estimate a pose from label maps");
  est->add_option("--manifest", f.manifest, "Manifest")->required();
  est->add_option("--mask1", f.mask1, "Camera-1 label map (PGM)")->required();
  est->add_option("--mask2", f.mask2, "Camera-2 label map (PGM)");
  est->add_option("--out", f.out, "Result file")->required();
  est->add_option("--top-k", f.top_k, "Hypotheses re-scored in camera 2")
      ->check(CLI::NonNegativeNumber);
  est->add_option("--emit-cloud", f.emit_cloud, "Write the posed model as XYZ");
  est->add_flag("--verbose", f.verbose, "Dump every view's cost to stderr");

  CLI::App* synth = app.add_subcommand("synth", "Generate a synthetic two-camera dataset");
  synth->add_option("--manifest", f.manifest, "Manifest")->required();
  synth->add_option("--per-class", f.per_class, "Scenes per class")
      ->check(CLI::PositiveNumber);
  synth->add_option("--seed", f.seed, "Dataset seed");
  synth->add_option("--out", f.out, "Dataset directory")->required();

  CLI::App* eval = app.add_subcommand("evaluate", "Score estimates against ground truth");
  eval->add_option("--manifest", f.manifest, "Manifest")->required();
  eval->add_option("--dataset", f.dataset, "Dataset directory")->required();
  eval->add_option("--out", f.out, "Results directory")->required();
  eval->add_option("--estimates", f.estimates, "Estimate files (default <out>/estimates)");
  eval->add_flag("--run-estimation", f.run_estimation, "Estimate every scene first");
  eval->add_option("--top-k", f.top_k, "Hypotheses re-scored in camera 2")
      ->check(CLI::NonNegativeNumber);
  eval->add_flag("--verbose", f.verbose, "Dump every view's cost to stderr");

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e, out, err);
    return code == 0 ? 0 : 2;
  }

  try {
    SetThreadCount(f.threads);
    if (init->parsed()) return CmdInit(f, out);
    if (build->parsed()) return CmdBuildShapelib(f, out);
    if (est->parsed()) return CmdEstimate(f, out, err);
    if (synth->parsed()) return CmdSynth(f, out);
    if (eval->parsed()) return CmdEvaluate(f, out, err);
  } catch (const CLI::ValidationError& e) {
    err << "usage error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    err << "error: " << e.what() << '\n';
    return 1;
  }
  return 2;
}

}  // namespace shapepose
