#include "rectiscope/measure.hpp"

#include <algorithm>
#include <cmath>
#include <cstring>
#include <limits>
#include <numeric>
#include <string>

#include "rectiscope/error.hpp"
#include "rectiscope/numerics.hpp"

namespace rectiscope {

double squared_distance(VectorRef a, VectorRef b) {
  double s = 0.0;
  for (Index d = 0; d < a.size(); ++d) {
    const double diff = a[d] - b[d];
    s += diff * diff;
  }
  return s;
}

Ball::Ball(Vector c, double r) : center(std::move(c)), radius(r) {
  if (!(radius > 0.0) || !std::isfinite(radius)) {
    throw InputError("ball radius must be positive and finite, got " + std::to_string(radius));
  }
}

DiscreteMeasure::DiscreteMeasure(Matrix points, Vector weights, int intrinsic_dim)
    : points_(std::move(points)), weights_(std::move(weights)), intrinsic_dim_(intrinsic_dim) {
  if (points_.rows() < 1) throw InputError("ambient dimension must be at least 1");
  if (points_.cols() < 1) throw InputError("a measure needs at least one atom");
  if (weights_.size() != points_.cols()) {
    throw InputError("weight count " + std::to_string(weights_.size()) + " does not match point count " +
                     std::to_string(points_.cols()));
  }
  if (intrinsic_dim_ < 0 || intrinsic_dim_ > points_.rows()) {
    throw InputError("intrinsic dimension " + std::to_string(intrinsic_dim_) + " outside [0, " +
                     std::to_string(points_.rows()) + "]");
  }
  for (Index i = 0; i < points_.cols(); ++i) {
    if (!(weights_(i) > 0.0) || !std::isfinite(weights_(i))) {
      throw InputError("weight of atom " + std::to_string(i) + " must be positive and finite");
    }
    if (!points_.col(i).allFinite()) {
      throw InputError("coordinates of atom " + std::to_string(i) + " are not finite");
    }
  }
  ExactSum mass;
  for (Index i = 0; i < weights_.size(); ++i) mass.add(weights_(i));
  total_mass_ = mass.value();
  index_ = std::make_shared<const SpatialIndex>(points_);
}

std::vector<Index> DiscreteMeasure::ball_indices(VectorRef center, double radius) const {
  if (center.size() != points_.rows()) throw InputError("ball center has wrong dimension");
  return index_->range_query(center, radius);
}

double DiscreteMeasure::ball_mass(VectorRef center, double radius) const {
  const auto idx = ball_indices(center, radius);
  return mass_of(idx);
}

double DiscreteMeasure::mass_of(std::span<const Index> indices) const {
  ExactSum s;
  for (Index i : indices) s.add(weights_(i));
  return s.value();
}

DiscreteMeasure DiscreteMeasure::with_intrinsic_dim(int n) const {
  DiscreteMeasure copy = *this;
  if (n < 0 || n > ambient_dim()) throw InputError("intrinsic dimension out of range");
  copy.intrinsic_dim_ = n;
  return copy;
}

DiscreteMeasure DiscreteMeasure::subset(std::span<const Index> indices) const {
  Matrix pts(points_.rows(), static_cast<Index>(indices.size()));
  Vector w(static_cast<Index>(indices.size()));
  for (std::size_t k = 0; k < indices.size(); ++k) {
    pts.col(static_cast<Index>(k)) = points_.col(indices[k]);
    w(static_cast<Index>(k)) = weights_(indices[k]);
  }
  return DiscreteMeasure(std::move(pts), std::move(w), intrinsic_dim_);
}

double DiscreteMeasure::min_pairwise_distance() const {
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < size(); ++i) best = std::min(best, index_->nearest_other_distance(i));
  return best;
}

std::uint64_t DiscreteMeasure::content_hash() const {
  auto feed = [](std::uint64_t state, const void* data, std::size_t len) {
    return fnv1a64({static_cast<const unsigned char*>(data), len}, state);
  };
  const std::uint32_t m = static_cast<std::uint32_t>(ambient_dim());
  const std::uint32_t n = static_cast<std::uint32_t>(size());
  std::uint64_t h = 0xcbf29ce484222325ULL;
  h = feed(h, &m, sizeof m);
  h = feed(h, &n, sizeof n);
  for (Index i = 0; i < size(); ++i) {
    for (Index d = 0; d < points_.rows(); ++d) {
      const double v = points_(d, i);
      h = feed(h, &v, sizeof v);
    }
    const double w = weights_(i);
    h = feed(h, &w, sizeof w);
  }
  return h;
}

namespace {
constexpr Index kLeafSize = 12;
}

SpatialIndex::SpatialIndex(const Matrix& points) : points_(points), order_(points.cols()) {
  std::iota(order_.begin(), order_.end(), Index{0});
  nodes_.reserve(static_cast<std::size_t>(2 * (points.cols() / kLeafSize + 1)));
  box_lo_.resize(points.rows(), 0);
  box_hi_.resize(points.rows(), 0);
  build(0, points.cols());
}

int SpatialIndex::build(Index begin, Index end) {
  const int id = static_cast<int>(nodes_.size());
  nodes_.push_back({begin, end});
  const Index m = points_.rows();
  Vector lo = Vector::Constant(m, std::numeric_limits<double>::infinity());
  Vector hi = Vector::Constant(m, -std::numeric_limits<double>::infinity());
  for (Index k = begin; k < end; ++k) {
    lo = lo.cwiseMin(points_.col(order_[k]));
    hi = hi.cwiseMax(points_.col(order_[k]));
  }
  if (box_lo_.cols() <= id) {
    box_lo_.conservativeResize(m, std::max<Index>(2 * (id + 1), 16));
    box_hi_.conservativeResize(m, box_lo_.cols());
  }
  box_lo_.col(id) = lo;
  box_hi_.col(id) = hi;
  if (end - begin <= kLeafSize) return id;

  Index axis = 0;
  (hi - lo).maxCoeff(&axis);
  const Index mid = begin + (end - begin) / 2;
  std::nth_element(order_.begin() + begin, order_.begin() + mid, order_.begin() + end,
                   [&](Index a, Index b) {
                     const double va = points_(axis, a);
                     const double vb = points_(axis, b);
                     return va < vb || (va == vb && a < b);
                   });
  const int left = build(begin, mid);
  const int right = build(mid, end);
  nodes_[static_cast<std::size_t>(id)].left = left;
  nodes_[static_cast<std::size_t>(id)].right = right;
  return id;
}

double SpatialIndex::box_squared_distance(int node, VectorRef q) const {
  double s = 0.0;
  for (Index d = 0; d < q.size(); ++d) {
    const double lo = box_lo_(d, node);
    const double hi = box_hi_(d, node);
    double diff = 0.0;
    if (q[d] < lo) diff = lo - q[d];
    else if (q[d] > hi) diff = q[d] - hi;
    s += diff * diff;
  }
  return s;
}

std::vector<Index> SpatialIndex::range_query(const Ball& ball) const {
  return range_query(ball.center, ball.radius);
}

std::vector<Index> SpatialIndex::range_query(VectorRef center, double radius) const {
  std::vector<Index> out;
  if (!(radius >= 0.0)) return out;
  const double r2 = radius * radius;
  // Pruning is conservative; the exact predicate decides membership at the leaves.
  const double prune = r2 * (1.0 + 1e-12) + 1e-300;
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    if (box_squared_distance(id, center) > prune) continue;
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    if (node.left < 0) {
      for (Index k = node.begin; k < node.end; ++k) {
        const Index i = order_[k];
        if (squared_distance(points_.col(i), center) <= r2) out.push_back(i);
      }
    } else {
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
  std::sort(out.begin(), out.end());
  return out;
}

double SpatialIndex::nearest_other_distance(Index i) const {
  double best2 = std::numeric_limits<double>::infinity();
  const auto q = points_.col(i);
  std::vector<int> stack{0};
  while (!stack.empty()) {
    const int id = stack.back();
    stack.pop_back();
    if (box_squared_distance(id, q) > best2) continue;
    const Node& node = nodes_[static_cast<std::size_t>(id)];
    if (node.left < 0) {
      for (Index k = node.begin; k < node.end; ++k) {
        const Index j = order_[k];
        if (j == i) continue;
        best2 = std::min(best2, squared_distance(points_.col(j), q));
      }
    } else {
      stack.push_back(node.left);
      stack.push_back(node.right);
    }
  }
  return std::sqrt(best2);
}

std::vector<Index> linear_scan(const Matrix& points, VectorRef center, double radius) {
  std::vector<Index> out;
  for (Index i = 0; i < points.cols(); ++i) {
    if (in_closed_ball(points.col(i), center, radius)) out.push_back(i);
  }
  return out;
}

}  // namespace rectiscope
