#ifndef SHAPEPOSE_EVALUATION_H_
#define SHAPEPOSE_EVALUATION_H_

#include <filesystem>
#include <map>
#include <string>
#include <vector>

#include "shapepose/geometry.h"

namespace shapepose {

// ADD-S: mean over model points x1 of min over x2 of |P·x1 - P_gt·x2|.
// Directed, so in general AddsError(a, b, M) != AddsError(b, a, M).
double AddsError(const RigidTransform& pose, const RigidTransform& pose_gt,
                 const PointCloud& model);

// adds < threshold_fraction · diameter. Throws std::invalid_argument unless
// diameter > 0 and threshold_fraction lies in (0, 1).
bool Success(double adds, double diameter, double threshold_fraction);

inline const std::vector<double> kDefaultThresholds = {0.10, 0.15, 0.20};

struct EvalRecord {
  std::string scene_id;
  int class_id = 0;
  RigidTransform estimate;
  RigidTransform ground_truth;
  double adds = 0.0;
  double diameter = 0.0;
};

struct ClassSummary {
  int class_id = 0;
  std::size_t count = 0;
  double mean_adds = 0.0;
  // Standard error of the mean: sample std (n - 1) / sqrt(n); 0 when n = 1.
  double stderr_adds = 0.0;
  std::vector<double> success_rates;  // percent, one per threshold
};

struct BenchmarkTable {
  std::vector<double> thresholds;
  std::vector<ClassSummary> classes;  // ascending class id
};

// Throws std::invalid_argument for an empty record list.
BenchmarkTable Benchmark(const std::vector<EvalRecord>& records,
                         const std::vector<double>& thresholds = kDefaultThresholds);

// Column name of a threshold, e.g. 0.15 -> "sr15".
std::string ThresholdColumn(double threshold);

// Machine-readable summary: header "class,mean_adds,stderr,sr10,sr15,sr20"
// and one row per class. `names` maps class ids to printed names.
std::string SummaryCsv(const BenchmarkTable& table, const std::map<int, std::string>& names);
// Per-scene rows: scene,class,adds,diameter,s10,s15,s20 (1/0 flags).
std::string ScenesCsv(const std::vector<EvalRecord>& records,
                      const std::vector<double>& thresholds,
                      const std::map<int, std::string>& names);
// Aligned plain-text table for humans.
std::string SummaryText(const BenchmarkTable& table, const std::map<int, std::string>& names);

// Writes scenes.csv, summary.csv and summary.txt into `dir`.
void WriteResults(const std::filesystem::path& dir, const std::vector<EvalRecord>& records,
                  const BenchmarkTable& table, const std::map<int, std::string>& names);

}  // namespace shapepose

#endif  // SHAPEPOSE_EVALUATION_H_
