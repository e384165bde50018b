#pragma once

#include <algorithm>
#include <cmath>
#include <cstdint>
#include <limits>
#include <span>
#include <string>
#include <vector>

#include "behent/dataset.hpp"
#include "behent/error.hpp"

namespace behent {

enum class NeighborBackend { BruteForce, SpatialTree };

// Euclidean k-nearest-neighbor queries over an immutable snapshot of a
// dataset's points. Both backends evaluate squared distances with the same
// accumulation order, so their results agree bit for bit; the tree is a
// bulk-built kd-tree with no incremental insertion.
class NeighborIndex {
public:
  static NeighborIndex build(const Dataset& data, NeighborBackend backend = NeighborBackend::SpatialTree) {
    data.validate();
    if (data.n < 2) throw_validation("neighbors", "index requires at least 2 points");
    NeighborIndex idx;
    idx.n_ = data.n;
    idx.d_ = data.d;
    idx.backend_ = backend;
    idx.points_ = data.points;
    if (backend == NeighborBackend::SpatialTree) idx.build_tree();
    return idx;
  }

  std::int64_t size() const { return n_; }
  int dim() const { return d_; }
  NeighborBackend backend() const { return backend_; }

  // Distance to the k-th nearest dataset point from an arbitrary query point.
  double knn_distance(std::span<const double> query, int k) const {
    check_query(query, k, /*exclude=*/-1);
    return std::sqrt(kth_sq(query.data(), k, -1));
  }

  // Distance to the k-th nearest neighbor of dataset row `row`, the row itself
  // excluded (duplicates of the row still count, at distance 0).
  double knn_distance(std::int64_t row, int k) const {
    check_row(row, k);
    return std::sqrt(kth_sq(points_.data() + row * d_, k, row));
  }

  // The k nearest distances in ascending order.
  std::vector<double> knn_distances(std::span<const double> query, int k) const {
    check_query(query, k, -1);
    return all_sq(query.data(), k, -1);
  }

  std::vector<double> knn_distances(std::int64_t row, int k) const {
    check_row(row, k);
    return all_sq(points_.data() + row * d_, k, row);
  }

private:
  std::int64_t n_ = 0;
  int d_ = 0;
  NeighborBackend backend_ = NeighborBackend::SpatialTree;
  std::vector<double> points_;

  struct Node {
    double split = 0.0;
    std::int32_t axis = -1; // -1 marks a leaf
    std::int32_t left = -1, right = -1;
    std::int32_t begin = 0, end = 0; // leaf range into order_
  };
  std::vector<Node> nodes_;
  std::vector<std::int32_t> order_;
  static constexpr std::int32_t kLeafSize = 8;

  void check_query(std::span<const double> q, int k, std::int64_t) const {
    if (static_cast<int>(q.size()) != d_)
      throw_validation("neighbors", "query dimension mismatch");
    if (k < 1 || k > n_)
      throw_validation("neighbors", "k out of range: k=" + std::to_string(k) + ", n=" + std::to_string(n_));
  }

  void check_row(std::int64_t row, int k) const {
    if (row < 0 || row >= n_) throw_validation("neighbors", "row index out of range");
    if (k < 1 || k > n_ - 1)
      throw_validation("neighbors", "k out of range with self excluded: k=" + std::to_string(k) +
                                        ", n=" + std::to_string(n_));
  }

  double dist_sq(const double* a, const double* b) const {
    double s = 0.0;
    for (int j = 0; j < d_; ++j) {
      const double t = a[j] - b[j];
      s += t * t;
    }
    return s;
  }

  // Max-heap of the k smallest squared distances seen so far.
  struct Best {
    std::vector<double>& heap;
    std::size_t k;
    void offer(double d2) {
      if (heap.size() < k) {
        heap.push_back(d2);
        std::push_heap(heap.begin(), heap.end());
      } else if (d2 < heap.front()) {
        std::pop_heap(heap.begin(), heap.end());
        heap.back() = d2;
        std::push_heap(heap.begin(), heap.end());
      }
    }
    double worst() const { return heap.size() < k ? std::numeric_limits<double>::infinity() : heap.front(); }
  };

  void scan_range(const double* q, std::int64_t exclude, std::int32_t begin, std::int32_t end, Best& best) const {
    for (std::int32_t i = begin; i < end; ++i) {
      const std::int32_t p = order_[i];
      if (p == exclude) continue;
      best.offer(dist_sq(points_.data() + static_cast<std::int64_t>(p) * d_, q));
    }
  }

  void search(const double* q, std::int64_t exclude, std::int32_t node, Best& best) const {
    const Node& nd = nodes_[node];
    if (nd.axis < 0) {
      scan_range(q, exclude, nd.begin, nd.end, best);
      return;
    }
    const double diff = q[nd.axis] - nd.split;
    const std::int32_t near = diff <= 0.0 ? nd.left : nd.right;
    const std::int32_t far = diff <= 0.0 ? nd.right : nd.left;
    search(q, exclude, near, best);
    if (diff * diff <= best.worst()) search(q, exclude, far, best);
  }

  std::vector<double> k_smallest_sq(const double* q, int k, std::int64_t exclude) const {
    std::vector<double> heap;
    heap.reserve(static_cast<std::size_t>(k));
    Best best{heap, static_cast<std::size_t>(k)};
    if (backend_ == NeighborBackend::BruteForce) {
      for (std::int64_t i = 0; i < n_; ++i) {
        if (i == exclude) continue;
        best.offer(dist_sq(points_.data() + i * d_, q));
      }
    } else {
      search(q, exclude, 0, best);
    }
    return heap;
  }

  double kth_sq(const double* q, int k, std::int64_t exclude) const {
    const std::vector<double> heap = k_smallest_sq(q, k, exclude);
    return heap.front(); // heap top = largest of the k smallest
  }

  std::vector<double> all_sq(const double* q, int k, std::int64_t exclude) const {
    std::vector<double> heap = k_smallest_sq(q, k, exclude);
    std::sort(heap.begin(), heap.end());
    for (double& v : heap) v = std::sqrt(v);
    return heap;
  }

  void build_tree() {
    order_.resize(static_cast<std::size_t>(n_));
    for (std::int64_t i = 0; i < n_; ++i) order_[static_cast<std::size_t>(i)] = static_cast<std::int32_t>(i);
    nodes_.reserve(static_cast<std::size_t>(2 * n_ / kLeafSize + 2));
    build_node(0, static_cast<std::int32_t>(n_));
  }

  std::int32_t build_node(std::int32_t begin, std::int32_t end) {
    const std::int32_t id = static_cast<std::int32_t>(nodes_.size());
    nodes_.emplace_back();
    if (end - begin <= kLeafSize) {
      nodes_[id].begin = begin;
      nodes_[id].end = end;
      return id;
    }
    // Split along the axis of largest spread; ties resolve to the lowest axis.
    int axis = 0;
    double best_spread = -1.0;
    for (int j = 0; j < d_; ++j) {
      double lo = points_[static_cast<std::int64_t>(order_[begin]) * d_ + j];
      double hi = lo;
      for (std::int32_t i = begin + 1; i < end; ++i) {
        const double v = points_[static_cast<std::int64_t>(order_[i]) * d_ + j];
        lo = std::min(lo, v);
        hi = std::max(hi, v);
      }
      if (hi - lo > best_spread) {
        best_spread = hi - lo;
        axis = j;
      }
    }
    const std::int32_t mid = begin + (end - begin) / 2;
    // Tie-break on index so the build is a pure function of the input.
    std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                     [this, axis](std::int32_t a, std::int32_t b) {
                       const double va = points_[static_cast<std::int64_t>(a) * d_ + axis];
                       const double vb = points_[static_cast<std::int64_t>(b) * d_ + axis];
                       if (va != vb) return va < vb;
                       return a < b;
                     });
    nodes_[id].axis = static_cast<std::int32_t>(axis);
    nodes_[id].split = points_[static_cast<std::int64_t>(order_[mid]) * d_ + axis];
    const std::int32_t left = build_node(begin, mid);
    const std::int32_t right = build_node(mid, end);
    nodes_[id].left = left;
    nodes_[id].right = right;
    return id;
  }
};

inline NeighborIndex build_index(const Dataset& data, NeighborBackend backend = NeighborBackend::SpatialTree) {
  return NeighborIndex::build(data, backend);
}

} // namespace behent
