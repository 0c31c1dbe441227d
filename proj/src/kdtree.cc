#include "shapepose/kdtree.h"

#include <algorithm>
#include <limits>
#include <numeric>
#include <stdexcept>

namespace shapepose {

namespace {
constexpr int kLeafSize = 8;
}  // namespace

KdTree::KdTree(std::span<const Point3> points)
    : points_(points.begin(), points.end()), order_(points.size()) {
  if (points_.empty()) throw std::invalid_argument("kd-tree needs points");
  std::iota(order_.begin(), order_.end(), 0);
  nodes_.reserve(2 * points_.size() / kLeafSize + 2);
  Build(0, static_cast<int>(order_.size()), 0);
}

int KdTree::Build(int begin, int end, int depth) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back(Node{begin, end, -1, -1, 0, 0.0});
  if (end - begin <= kLeafSize) return id;

  Point3 lo = points_[order_[begin]], hi = lo;
  for (int i = begin; i < end; ++i) {
    lo = lo.cwiseMin(points_[order_[i]]);
    hi = hi.cwiseMax(points_[order_[i]]);
  }
  int axis = 0;
  (hi - lo).maxCoeff(&axis);
  const int mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](int a, int b) { return points_[a][axis] < points_[b][axis]; });
  const double split = points_[order_[mid]][axis];
  const int left = Build(begin, mid, depth + 1);
  const int right = Build(mid, end, depth + 1);
  nodes_[id].axis = axis;
  nodes_[id].split = split;
  nodes_[id].left = left;
  nodes_[id].right = right;
  return id;
}

void KdTree::Search(int node_id, const Point3& q, double& best) const {
  const Node& node = nodes_[node_id];
  if (node.left < 0) {
    for (int i = node.begin; i < node.end; ++i) {
      best = std::min(best, (q - points_[order_[i]]).squaredNorm());
    }
    return;
  }
  // Left holds coordinates <= split, right holds >= split.
  const double diff = q[node.axis] - node.split;
  const int near = diff <= 0.0 ? node.left : node.right;
  const int far = diff <= 0.0 ? node.right : node.left;
  Search(near, q, best);
  if (diff * diff <= best) Search(far, q, best);
}

double KdTree::NearestSquaredDistance(const Point3& query) const {
  double best = std::numeric_limits<double>::infinity();
  Search(0, query, best);
  return best;
}

}  // namespace shapepose
