#pragma once

#include <algorithm>
#include <array>
#include <cstddef>
#include <cstdint>
#include <numeric>
#include <queue>
#include <span>
#include <utility>
#include <vector>

namespace locomanip {

// Static KD-tree over K-dimensional points with exact nearest-neighbour
// queries. Ties in distance resolve to the lowest insertion index, so the
// answer always equals a linear scan under the same metric.
template <std::size_t K>
class KdTree {
 public:
  using Point = std::array<double, K>;

  struct Hit {
    std::size_t index = 0;
    double dist2 = 0.0;
  };

  KdTree() = default;
  explicit KdTree(std::vector<Point> points) : points_(std::move(points)) {
    order_.resize(points_.size());
    std::iota(order_.begin(), order_.end(), std::size_t{0});
    nodes_.reserve(points_.size());
    if (!points_.empty()) root_ = build(0, points_.size());
  }

  std::size_t size() const { return points_.size(); }
  bool empty() const { return points_.empty(); }
  const Point& point(std::size_t i) const { return points_[i]; }

  static double distance2(const Point& a, const Point& b) {
    double s = 0.0;
    for (std::size_t d = 0; d < K; ++d) {
      const double diff = a[d] - b[d];
      s += diff * diff;
    }
    return s;
  }

  // Precondition: !empty().
  Hit nearest(const Point& q) const {
    Hit best{points_.size(), 0.0};
    bool have = false;
    search1(root_, q, best, have);
    return best;
  }

  // Up to k nearest points ordered by (distance, index).
  std::vector<Hit> k_nearest(const Point& q, std::size_t k) const {
    std::priority_queue<Hit, std::vector<Hit>, Worse> heap;
    if (k > 0 && !empty()) searchk(root_, q, k, heap);
    std::vector<Hit> out;
    out.reserve(heap.size());
    while (!heap.empty()) {
      out.push_back(heap.top());
      heap.pop();
    }
    std::reverse(out.begin(), out.end());
    return out;
  }

  Hit linear_scan(const Point& q) const {
    Hit best{0, distance2(points_[0], q)};
    for (std::size_t i = 1; i < points_.size(); ++i) {
      const double d = distance2(points_[i], q);
      if (d < best.dist2) best = {i, d};
    }
    return best;
  }

 private:
  struct Node {
    std::size_t point;  // index into points_
    std::uint32_t axis;
    std::int64_t left = -1;
    std::int64_t right = -1;
  };

  static bool better(const Hit& a, const Hit& b) {
    return a.dist2 < b.dist2 || (a.dist2 == b.dist2 && a.index < b.index);
  }
  struct Worse {
    bool operator()(const Hit& a, const Hit& b) const { return better(a, b); }
  };

  std::int64_t build(std::size_t lo, std::size_t hi) {
    if (lo >= hi) return -1;
    // Split on the axis of largest spread.
    std::uint32_t axis = 0;
    double spread = -1.0;
    for (std::size_t d = 0; d < K; ++d) {
      double mn = points_[order_[lo]][d], mx = mn;
      for (std::size_t i = lo + 1; i < hi; ++i) {
        mn = std::min(mn, points_[order_[i]][d]);
        mx = std::max(mx, points_[order_[i]][d]);
      }
      if (mx - mn > spread) {
        spread = mx - mn;
        axis = static_cast<std::uint32_t>(d);
      }
    }
    const std::size_t mid = lo + (hi - lo) / 2;
    std::nth_element(order_.begin() + lo, order_.begin() + mid, order_.begin() + hi,
                     [&](std::size_t a, std::size_t b) {
                       const double pa = points_[a][axis], pb = points_[b][axis];
                       return pa < pb || (pa == pb && a < b);
                     });
    const auto id = static_cast<std::int64_t>(nodes_.size());
    nodes_.push_back({order_[mid], axis});
    const auto left = build(lo, mid);
    const auto right = build(mid + 1, hi);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }

  void search1(std::int64_t id, const Point& q, Hit& best, bool& have) const {
    if (id < 0) return;
    const Node& n = nodes_[id];
    const Hit here{n.point, distance2(points_[n.point], q)};
    if (!have || better(here, best)) {
      best = here;
      have = true;
    }
    const double diff = q[n.axis] - points_[n.point][n.axis];
    const auto near = diff <= 0.0 ? n.left : n.right;
    const auto far = diff <= 0.0 ? n.right : n.left;
    search1(near, q, best, have);
    // Keep equal-distance candidates reachable for the index tie-break.
    if (diff * diff <= best.dist2) search1(far, q, best, have);
  }

  template <typename Heap>
  void searchk(std::int64_t id, const Point& q, std::size_t k, Heap& heap) const {
    if (id < 0) return;
    const Node& n = nodes_[id];
    const Hit here{n.point, distance2(points_[n.point], q)};
    if (heap.size() < k) {
      heap.push(here);
    } else if (better(here, heap.top())) {
      heap.pop();
      heap.push(here);
    }
    const double diff = q[n.axis] - points_[n.point][n.axis];
    const auto near = diff <= 0.0 ? n.left : n.right;
    const auto far = diff <= 0.0 ? n.right : n.left;
    searchk(near, q, k, heap);
    if (heap.size() < k || diff * diff <= heap.top().dist2) searchk(far, q, k, heap);
  }

  std::vector<Point> points_;
  std::vector<std::size_t> order_;
  std::vector<Node> nodes_;
  std::int64_t root_ = -1;
};

}  // namespace locomanip
