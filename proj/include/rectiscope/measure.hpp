#pragma once

#include <cstdint>
#include <memory>
#include <span>
#include <vector>

#include <Eigen/Core>

namespace rectiscope {

using Index = Eigen::Index;
using Vector = Eigen::VectorXd;
using Matrix = Eigen::MatrixXd;
using VectorRef = Eigen::Ref<const Eigen::VectorXd>;

/// Plain left-to-right squared Euclidean distance. Every ball-membership
/// decision in the library goes through this; index queries and linear scans
/// agree bit for bit.
double squared_distance(VectorRef a, VectorRef b);

inline bool in_closed_ball(VectorRef y, VectorRef center, double radius) {
  return squared_distance(y, center) <= radius * radius;
}

/// Closed ball {y : |y - center| <= radius}.
struct Ball {
  Ball(Vector center, double radius);

  Vector center;
  double radius;
};

class SpatialIndex;

/// Weighted point cloud mu = sum_i w_i delta_{x_i} in R^m with intrinsic
/// dimension n. Points are stored column-wise (m x N). Immutable; the spatial
/// index is built once at construction and shared by copies.
class DiscreteMeasure {
 public:
  DiscreteMeasure(Matrix points, Vector weights, int intrinsic_dim);

  int ambient_dim() const { return static_cast<int>(points_.rows()); }
  int intrinsic_dim() const { return intrinsic_dim_; }
  Index size() const { return points_.cols(); }

  const Matrix& points() const { return points_; }
  const Vector& weights() const { return weights_; }
  auto point(Index i) const { return points_.col(i); }
  double weight(Index i) const { return weights_(i); }
  double total_mass() const { return total_mass_; }

  const SpatialIndex& index() const { return *index_; }

  /// Indices of atoms in the closed ball, ascending.
  std::vector<Index> ball_indices(VectorRef center, double radius) const;
  double ball_mass(VectorRef center, double radius) const;
  double mass_of(std::span<const Index> indices) const;

  DiscreteMeasure with_intrinsic_dim(int n) const;
  DiscreteMeasure subset(std::span<const Index> indices) const;

  /// Smallest distance between two distinct atoms (0 if two atoms coincide,
  /// +inf for a single atom).
  double min_pairwise_distance() const;

  /// FNV-1a hash over the binary serialization (m, N, coordinates, weights).
  std::uint64_t content_hash() const;

 private:
  Matrix points_;
  Vector weights_;
  int intrinsic_dim_;
  double total_mass_;
  std::shared_ptr<const SpatialIndex> index_;
};

/// k-d tree over a point set supporting exact closed-ball range queries.
class SpatialIndex {
 public:
  explicit SpatialIndex(const Matrix& points);

  std::vector<Index> range_query(const Ball& ball) const;
  std::vector<Index> range_query(VectorRef center, double radius) const;

  /// Distance from atom i to its nearest other atom (+inf when N == 1).
  double nearest_other_distance(Index i) const;

 private:
  struct Node {
    Index begin;
    Index end;
    int left = -1;
    int right = -1;
  };

  int build(Index begin, Index end);
  double box_squared_distance(int node, VectorRef q) const;

  Matrix points_;
  std::vector<Index> order_;
  std::vector<Node> nodes_;
  Matrix box_lo_;
  Matrix box_hi_;
};

std::vector<Index> linear_scan(const Matrix& points, VectorRef center, double radius);

}  // namespace rectiscope
