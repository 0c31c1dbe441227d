#include "shapepose/evaluation.h"

#include <algorithm>
#include <cmath>
#include <cstdio>
#include <fstream>
#include <limits>
#include <sstream>
#include <stdexcept>

#include "shapepose/error.h"
#include "shapepose/kdtree.h"
#include "shapepose/reference.h"

namespace shapepose {

double AddsError(const RigidTransform& pose, const RigidTransform& pose_gt,
                 const PointCloud& model) {
  const PointCloud est = TransformCloud(pose, model);
  const PointCloud gt = TransformCloud(pose_gt, model);
  const KdTree tree(gt.points());
  const long n = static_cast<long>(est.size());
  std::vector<double> dist(n);
#pragma omp parallel for schedule(static)
  for (long i = 0; i < n; ++i) {
    dist[i] = std::sqrt(tree.NearestSquaredDistance(est[i]));
  }
  // Serial sum keeps the result independent of the thread count.
  double sum = 0.0;
  for (double d : dist) sum += d;
  return sum / n;
}

double reference::AddsError(const RigidTransform& pose, const RigidTransform& pose_gt,
                            const PointCloud& model) {
  const PointCloud est = TransformCloud(pose, model);
  const PointCloud gt = TransformCloud(pose_gt, model);
  double sum = 0.0;
  for (const Point3& a : est.points()) {
    double best = std::numeric_limits<double>::infinity();
    for (const Point3& b : gt.points()) best = std::min(best, (a - b).squaredNorm());
    sum += std::sqrt(best);
  }
  return sum / static_cast<double>(est.size());
}

bool Success(double adds, double diameter, double threshold_fraction) {
  if (!(diameter > 0.0)) throw std::invalid_argument("diameter must be positive");
  if (!(threshold_fraction > 0.0 && threshold_fraction < 1.0)) {
    throw std::invalid_argument("threshold fraction must lie in (0, 1)");
  }
  return adds < threshold_fraction * diameter;
}

BenchmarkTable Benchmark(const std::vector<EvalRecord>& records,
                         const std::vector<double>& thresholds) {
  if (records.empty()) throw std::invalid_argument("no records to benchmark");
  std::map<int, std::vector<const EvalRecord*>> by_class;
  for (const EvalRecord& r : records) by_class[r.class_id].push_back(&r);

  BenchmarkTable table;
  table.thresholds = thresholds;
  for (const auto& [class_id, recs] : by_class) {
    ClassSummary s;
    s.class_id = class_id;
    s.count = recs.size();
    const double n = static_cast<double>(recs.size());
    double sum = 0.0;
    for (const EvalRecord* r : recs) sum += r->adds;
    s.mean_adds = sum / n;
    if (recs.size() > 1) {
      double ss = 0.0;
      for (const EvalRecord* r : recs) ss += (r->adds - s.mean_adds) * (r->adds - s.mean_adds);
      s.stderr_adds = std::sqrt(ss / (n - 1.0)) / std::sqrt(n);
    }
    for (double t : thresholds) {
      std::size_t ok = 0;
      for (const EvalRecord* r : recs) ok += Success(r->adds, r->diameter, t) ? 1 : 0;
      s.success_rates.push_back(100.0 * static_cast<double>(ok) / n);
    }
    table.classes.push_back(std::move(s));
  }
  return table;
}

std::string ThresholdColumn(double threshold) {
  return "sr" + std::to_string(static_cast<int>(std::lround(threshold * 100.0)));
}

namespace {

std::string Fmt(const char* spec, double v) {
  char buf[64];
  std::snprintf(buf, sizeof(buf), spec, v);
  return buf;
}

std::string NameOf(int class_id, const std::map<int, std::string>& names) {
  const auto it = names.find(class_id);
  return it == names.end() ? std::to_string(class_id) : it->second;
}

void WriteFile(const std::filesystem::path& path, const std::string& text) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw FormatError("cannot write " + path.string());
  out << text;
  if (!out) throw FormatError("failed writing " + path.string());
}

}  // namespace

std::string SummaryCsv(const BenchmarkTable& table,
                       const std::map<int, std::string>& names) {
  std::ostringstream out;
  out << "class,mean_adds,stderr";
  for (double t : table.thresholds) out << ',' << ThresholdColumn(t);
  out << '\n';
  for (const ClassSummary& c : table.classes) {
    out << NameOf(c.class_id, names) << ',' << Fmt("%.6f", c.mean_adds) << ','
        << Fmt("%.6f", c.stderr_adds);
    for (double r : c.success_rates) out << ',' << Fmt("%.1f", r);
    out << '\n';
  }
  return out.str();
}

std::string ScenesCsv(const std::vector<EvalRecord>& records,
                      const std::vector<double>& thresholds,
                      const std::map<int, std::string>& names) {
  std::ostringstream out;
  out << "scene,class,adds,diameter";
  for (double t : thresholds) {
    out << ",s" << static_cast<int>(std::lround(t * 100.0));
  }
  out << '\n';
  for (const EvalRecord& r : records) {
    out << r.scene_id << ',' << NameOf(r.class_id, names) << ','
        << Fmt("%.6f", r.adds) << ',' << Fmt("%.6f", r.diameter);
    for (double t : thresholds) out << ',' << (Success(r.adds, r.diameter, t) ? 1 : 0);
    out << '\n';
  }
  return out.str();
}

std::string SummaryText(const BenchmarkTable& table,
                        const std::map<int, std::string>& names) {
  std::ostringstream out;
  out << "class        n   mean ADD-S ± stderr ";
  for (double t : table.thresholds) {
    out << Fmt("  %3.0f%%", t * 100.0);
  }
  out << '\n';
  for (const ClassSummary& c : table.classes) {
    char head[96];
    std::snprintf(head, sizeof(head), "%-10s %3zu   %8.4f ± %-8.4f ",
                  NameOf(c.class_id, names).c_str(), c.count, c.mean_adds,
                  c.stderr_adds);
    out << head;
    for (double r : c.success_rates) out << Fmt(" %5.1f", r);
    out << '\n';
  }
  return out.str();
}

void WriteResults(const std::filesystem::path& dir, const std::vector<EvalRecord>& records,
                  const BenchmarkTable& table, const std::map<int, std::string>& names) {
  std::filesystem::create_directories(dir);
  WriteFile(dir / "scenes.csv", ScenesCsv(records, table.thresholds, names));
  WriteFile(dir / "summary.csv", SummaryCsv(table, names));
  WriteFile(dir / "summary.txt", SummaryText(table, names));
}

}  // namespace shapepose
