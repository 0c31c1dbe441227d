#include "shapepose/pipeline.h"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <fstream>
#include <sstream>

#include "shapepose/cloud_io.h"
#include "shapepose/error.h"
#include "shapepose/mask_analysis.h"

namespace shapepose {

namespace {

// Largest segment, earliest on ties; with `want_class` only segments voting
// for it count.
std::optional<Segment> LargestSegment(const LabelMap& map, int min_area, int want_class) {
  std::vector<Segment> segments = ConnectedComponents(map, min_area);
  std::optional<Segment> best;
  for (Segment& s : segments) {
    s.class_id = VoteClass(s, map);
    if (want_class != 0 && s.class_id != want_class) continue;
    if (!best || s.area() > best->area()) best = std::move(s);
  }
  return best;
}

std::string Num(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

}  // namespace

PoseEstimate EstimateFromLabelMaps(const LabelMap& camera1, const LabelMap* camera2,
                                   const Calibration& calibration,
                                   const ResourceLookup& lookup,
                                   const EstimateOptions& options) {
  const Camera& cam1 = calibration.at("camera1");
  std::optional<Segment> seg1 = LargestSegment(camera1, options.min_area, 0);
  if (!seg1) {
    throw NoSegmentError("no segment with at least " + std::to_string(options.min_area) +
                         " pixels in the camera-1 label map");
  }
  const ClassResources res = lookup(seg1->class_id);
  const ShapeLibrary& lib = *res.library;
  AnalyzeSegment(*seg1, cam1.intrinsics.principal_point, lib.signature_length());

  PoseEstimate out;
  out.class_id = seg1->class_id;
  out.hypotheses = EstimatePoseSingle(*seg1, lib, cam1.intrinsics);
  out.best = out.hypotheses.front();
  if (camera2 == nullptr || options.top_k <= 1) return out;

  const Camera& cam2 = calibration.at("camera2");
  std::optional<Segment> seg2 = LargestSegment(*camera2, options.min_area, out.class_id);
  if (!seg2) return out;
  AnalyzeSegment(*seg2, cam2.intrinsics.principal_point, lib.signature_length());
  const SecondView view{cam1.extrinsics, cam2.extrinsics, cam2.intrinsics, res.splat_radius};
  out.best = RefineWithSecondView(out.hypotheses, *res.model, view, *seg2, options.top_k);
  out.used_second_view = true;
  return out;
}

ResourceCache::ResourceCache(Manifest manifest)
    : manifest_(std::move(manifest)), calibration_(ReadCalibration(manifest_.calibration)) {}

ClassResources ResourceCache::Get(int class_id) {
  const ManifestClass& mc = manifest_.at(class_id);
  std::lock_guard<std::mutex> lock(mu_);
  Entry& e = loaded_[class_id];
  if (!e.model) e.model = std::make_unique<PointCloud>(ReadPointCloud(mc.model));
  if (!e.library) {
    if (!std::filesystem::exists(mc.library)) {
      throw FormatError("shape library for class " + std::to_string(class_id) +
                        " not found: " + mc.library.string());
    }
    e.library = std::make_unique<ShapeLibrary>(LoadShapeLibrary(mc.library));
  }
  return ClassResources{e.model.get(), e.library.get(), manifest_.defaults.splat_radius};
}

ResourceLookup ResourceCache::Lookup() {
  return [this](int class_id) { return Get(class_id); };
}

void WriteEstimate(const std::filesystem::path& path, const PoseEstimate& e) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  const PoseHypothesis& h = e.best;
  out << "class " << e.class_id << "\npose\n";
  const Eigen::Matrix4d m = h.pose.Matrix();
  for (int r = 0; r < 4; ++r) {
    out << Num(m(r, 0)) << ' ' << Num(m(r, 1)) << ' ' << Num(m(r, 2)) << ' ' << Num(m(r, 3))
        << '\n';
  }
  out << "translation " << Num(h.translation.x()) << ' ' << Num(h.translation.y()) << ' '
      << Num(h.translation.z()) << '\n';
  out << "angles " << Num(h.view.theta1) << ' ' << Num(h.view.theta2) << ' '
      << Num(h.theta3) << '\n';
  out << "view_index " << h.view_index << '\n';
  out << "cost " << Num(h.cost) << '\n';
  out << "second_view_cost "
      << (h.second_view_cost ? Num(*h.second_view_cost) : std::string("none")) << '\n';
  if (!out) throw FormatError("failed writing " + path.string());
}

StoredEstimate ReadEstimate(const std::filesystem::path& path) {
  std::ifstream in(path);
  if (!in) throw FormatError("cannot read " + path.string());
  StoredEstimate s;
  bool have_class = false, have_pose = false;
  std::string key;
  while (in >> key) {
    if (key == "class") {
      if (!(in >> s.class_id)) break;
      have_class = true;
    } else if (key == "pose") {
      Eigen::Matrix4d m;
      for (int i = 0; i < 16; ++i) {
        std::string tok;
        double v = 0.0;
        if (!(in >> tok)) throw FormatError("truncated pose in " + path.string());
        const auto r = std::from_chars(tok.data(), tok.data() + tok.size(), v);
        if (r.ec != std::errc() || r.ptr != tok.data() + tok.size()) {
          throw FormatError("bad number '" + tok + "' in " + path.string());
        }
        m(i / 4, i % 4) = v;
      }
      try {
        s.pose = RigidTransform::FromMatrix(m);
      } catch (const std::invalid_argument& err) {
        throw FormatError(path.string() + ": " + err.what());
      }
      have_pose = true;
    } else {
      std::string rest;
      std::getline(in, rest);
    }
  }
  if (!have_class || !have_pose) throw FormatError("incomplete estimate file " + path.string());
  return s;
}

std::string CostDump(const PoseEstimate& e) {
  std::vector<const PoseHypothesis*> by_view;
  for (const PoseHypothesis& h : e.hypotheses) by_view.push_back(&h);
  std::sort(by_view.begin(), by_view.end(),
            [](const PoseHypothesis* a, const PoseHypothesis* b) {
              return a->view_index < b->view_index;
            });
  std::ostringstream out;
  out << "view,theta1,theta2,theta3,z,cost\n";
  for (const PoseHypothesis* h : by_view) {
    out << h->view_index << ',' << Num(h->view.theta1) << ',' << Num(h->view.theta2) << ','
        << Num(h->theta3) << ',' << Num(h->translation.z()) << ',' << Num(h->cost) << '\n';
  }
  return out.str();
}

}  // namespace shapepose
