#ifndef SHAPEPOSE_KDTREE_H_
#define SHAPEPOSE_KDTREE_H_

#include <span>
#include <vector>

#include "shapepose/geometry.h"

namespace shapepose {

// Static 3-d tree for exact nearest-neighbour queries.
class KdTree {
 public:
  explicit KdTree(std::span<const Point3> points);

  // Squared distance to the nearest stored point. The distance is computed
  // with the same expression as a brute-force scan, so results agree
  // bit-for-bit with one.
  double NearestSquaredDistance(const Point3& query) const;

 private:
  struct Node {
    int begin, end;     // range in order_
    int left, right;    // children, -1 for leaves
    int axis;
    double split;
  };

  int Build(int begin, int end, int depth);
  void Search(int node, const Point3& q, double& best) const;

  std::vector<Point3> points_;
  std::vector<int> order_;
  std::vector<Node> nodes_;
};

}  // namespace shapepose

#endif  // SHAPEPOSE_KDTREE_H_
