#include "shapepose/evaluation.h"

#include <cmath>
#include <random>
#include <sstream>

#include <gtest/gtest.h>

#include "shapepose/reference.h"
#include "test_util.h"

namespace shapepose {
namespace {

using testing::RandomPose;

PointCloud RandomCloud(std::mt19937_64& rng, int n) {
  std::normal_distribution<double> g(0.0, 1.0);
  std::vector<Point3> pts;
  for (int i = 0; i < n; ++i) pts.emplace_back(g(rng), 0.5 * g(rng), 2.0 * g(rng));
  return PointCloud(pts);
}

// Mean over x1 of min over x2, written out directly.
double BruteForceAdds(const RigidTransform& p, const RigidTransform& q, const PointCloud& m) {
  double sum = 0.0;
  for (const Point3& a : m.points()) {
    double best = INFINITY;
    for (const Point3& b : m.points()) best = std::min(best, ((p * a) - (q * b)).norm());
    sum += best;
  }
  return sum / m.size();
}

TEST(AddsErrorTest, ZeroForIdenticalPoses) {
  std::mt19937_64 rng(1);
  const PointCloud m = RandomCloud(rng, 200);
  for (int i = 0; i < 5; ++i) {
    const RigidTransform p = RandomPose(rng);
    EXPECT_EQ(AddsError(p, p, m), 0.0);
  }
}

TEST(AddsErrorTest, SinglePointTranslation) {
  const PointCloud m({Point3(0.3, -0.2, 1.0)});
  std::mt19937_64 rng(2);
  const RigidTransform gt = RandomPose(rng);
  const Point3 d(0.3, 0.4, 1.2);
  const RigidTransform p = gt * RigidTransform::Translation(d);
  EXPECT_NEAR(AddsError(p, gt, m), d.norm(), 1e-12);
}

TEST(AddsErrorTest, MatchesBruteForce) {
  std::mt19937_64 rng(3);
  for (int trial = 0; trial < 50; ++trial) {
    const PointCloud m = RandomCloud(rng, 100);
    const RigidTransform p = RandomPose(rng), q = RandomPose(rng);
    const double oracle = BruteForceAdds(p, q, m);
    EXPECT_NEAR(AddsError(p, q, m), oracle, 1e-9);
    EXPECT_NEAR(reference::AddsError(p, q, m), oracle, 1e-9);
  }
}

TEST(AddsErrorTest, DirectedNotSymmetric) {
  // Ten scattered points under two generic poses: the directed mean-min
  // differs once the roles of estimate and ground truth are swapped.
  std::mt19937_64 rng(12);
  const PointCloud m = RandomCloud(rng, 10);
  const RigidTransform p = RandomPose(rng, 0.5), q = RandomPose(rng, 0.5);
  const double forward = AddsError(p, q, m), backward = AddsError(q, p, m);
  EXPECT_NEAR(forward, BruteForceAdds(p, q, m), 1e-12);
  EXPECT_NEAR(backward, BruteForceAdds(q, p, m), 1e-12);
  EXPECT_GT(std::abs(forward - backward), 1e-3);
}

TEST(AddsErrorTest, RigidInvariance) {
  std::mt19937_64 rng(4);
  for (int trial = 0; trial < 10; ++trial) {
    const PointCloud m = RandomCloud(rng, 150);
    const RigidTransform p = RandomPose(rng), q = RandomPose(rng), g = RandomPose(rng);
    EXPECT_NEAR(AddsError(g * p, g * q, m), AddsError(p, q, m), 1e-9);
  }
}

TEST(SuccessTest, StrictThreshold) {
  EXPECT_TRUE(Success(0.0, 2.0, 0.10));
  EXPECT_FALSE(Success(0.15 * 2.0, 2.0, 0.15));
  EXPECT_FALSE(Success(0.12 * 2.0, 2.0, 0.10));
  EXPECT_TRUE(Success(0.12 * 2.0, 2.0, 0.15));
  EXPECT_THROW(Success(0.1, 0.0, 0.1), std::invalid_argument);
  EXPECT_THROW(Success(0.1, 1.0, 1.0), std::invalid_argument);
  EXPECT_THROW(Success(0.1, 1.0, 0.0), std::invalid_argument);
}

EvalRecord Rec(int cls, double adds, double d = 1.0) {
  EvalRecord r;
  r.class_id = cls;
  r.adds = adds;
  r.diameter = d;
  r.scene_id = "s" + std::to_string(cls);
  return r;
}

TEST(BenchmarkTest, PerfectRecords) {
  std::vector<EvalRecord> recs(20, Rec(1, 0.0));
  const BenchmarkTable t = Benchmark(recs);
  ASSERT_EQ(t.classes.size(), 1u);
  EXPECT_EQ(t.classes[0].count, 20u);
  EXPECT_EQ(t.classes[0].success_rates, (std::vector<double>{100.0, 100.0, 100.0}));
  EXPECT_EQ(t.classes[0].mean_adds, 0.0);
  EXPECT_EQ(t.classes[0].stderr_adds, 0.0);
}

TEST(BenchmarkTest, CountsAndStatistics) {
  std::vector<EvalRecord> recs;
  for (int i = 0; i < 10; ++i) recs.push_back(Rec(2, 0.05));   // success at all
  for (int i = 0; i < 10; ++i) recs.push_back(Rec(2, 0.5));    // failure at all
  recs.push_back(Rec(1, 0.12));
  const BenchmarkTable t = Benchmark(recs);
  ASSERT_EQ(t.classes.size(), 2u);
  EXPECT_EQ(t.classes[0].class_id, 1);
  EXPECT_EQ(t.classes[0].success_rates, (std::vector<double>{0.0, 100.0, 100.0}));
  EXPECT_EQ(t.classes[0].stderr_adds, 0.0);
  const ClassSummary& c = t.classes[1];
  EXPECT_EQ(c.success_rates, (std::vector<double>{50.0, 50.0, 50.0}));
  EXPECT_NEAR(c.mean_adds, 0.275, 1e-12);
  // Sample std of ten 0.05 and ten 0.5: sqrt(20 · 0.225² / 19).
  EXPECT_NEAR(c.stderr_adds, std::sqrt(20 * 0.225 * 0.225 / 19) / std::sqrt(20.0), 1e-12);
  EXPECT_THROW(Benchmark({}), std::invalid_argument);
}

TEST(BenchmarkTest, RatesMonotoneInThreshold) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 0.3);
  std::vector<EvalRecord> recs;
  for (int i = 0; i < 200; ++i) recs.push_back(Rec(1 + i % 4, u(rng)));
  for (const ClassSummary& c : Benchmark(recs).classes) {
    EXPECT_LE(c.success_rates[0], c.success_rates[1]);
    EXPECT_LE(c.success_rates[1], c.success_rates[2]);
  }
}

TEST(ReportTest, SummaryCsvColumns) {
  const BenchmarkTable t = Benchmark({Rec(1, 0.0), Rec(3, 0.5)});
  const std::string csv = SummaryCsv(t, {{1, "box"}, {3, "cup"}});
  std::istringstream in(csv);
  std::string header, row1, row2;
  std::getline(in, header);
  std::getline(in, row1);
  std::getline(in, row2);
  EXPECT_EQ(header, "class,mean_adds,stderr,sr10,sr15,sr20");
  EXPECT_EQ(row1.substr(0, 4), "box,");
  EXPECT_EQ(row2.substr(0, 4), "cup,");
  EXPECT_EQ(ThresholdColumn(0.15), "sr15");
  EXPECT_EQ(ThresholdColumn(0.1), "sr10");
}

TEST(ReportTest, ScenesCsvColumns) {
  const std::vector<EvalRecord> recs = {Rec(1, 0.12)};
  const std::string csv = ScenesCsv(recs, kDefaultThresholds, {{1, "box"}});
  EXPECT_EQ(csv.substr(0, csv.find('\n')), "scene,class,adds,diameter,s10,s15,s20");
  EXPECT_NE(csv.find(",0,1,1\n"), std::string::npos);
}

}  // namespace
}  // namespace shapepose
