#include "rectiscope/geometry.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include <Eigen/SVD>

#include "rectiscope/error.hpp"

namespace rectiscope {

AffineSubspace::AffineSubspace(Vector base, Matrix frame) : base_(std::move(base)), frame_(std::move(frame)) {
  if (frame_.cols() > 0 && frame_.rows() != base_.size()) {
    throw InputError("affine frame dimension does not match base point");
  }
  if (frame_.cols() == 0) frame_.resize(base_.size(), 0);
  const Matrix gram = frame_.transpose() * frame_;
  if (!gram.isIdentity(1e-12) && frame_.cols() > 0) {
    // Re-orthonormalise; callers hand in frames that are orthonormal up to rounding.
    Eigen::HouseholderQR<Matrix> qr(frame_);
    frame_ = qr.householderQ() * Matrix::Identity(frame_.rows(), frame_.cols());
  }
}

AffineSubspace AffineSubspace::point(Vector base) {
  const Index m = base.size();
  return AffineSubspace(std::move(base), Matrix(m, 0));
}

Vector AffineSubspace::project(VectorRef z) const {
  const Vector rel = z - base_;
  return base_ + frame_ * (frame_.transpose() * rel);
}

double dist_to_affine(VectorRef z, const AffineSubspace& plane) {
  if (z.size() != plane.ambient_dim()) {
    throw InputError("dist_to_affine: point has dimension " + std::to_string(z.size()) + ", subspace lives in " +
                     std::to_string(plane.ambient_dim()));
  }
  const Vector rel = z - plane.base();
  const Vector residual = rel - plane.frame() * (plane.frame().transpose() * rel);
  return residual.norm();
}

namespace {

Matrix edge_matrix(const Matrix& vertices) {
  const Index k = vertices.cols() - 1;
  Matrix edges(vertices.rows(), std::max<Index>(k, 0));
  for (Index j = 0; j < k; ++j) edges.col(j) = vertices.col(j + 1) - vertices.col(0);
  return edges;
}

int numerical_rank(const Eigen::VectorXd& singular) {
  if (singular.size() == 0 || !(singular(0) > 0.0)) return 0;
  const double cutoff = kRankTolerance * singular(0);
  int rank = 0;
  for (Index i = 0; i < singular.size(); ++i) {
    if (singular(i) > cutoff) ++rank;
  }
  return rank;
}

}  // namespace

AffineSubspace affine_hull(const Matrix& vertices) {
  if (vertices.cols() < 1) throw InputError("affine_hull needs at least one point");
  Vector base = vertices.col(0);
  if (vertices.cols() == 1) return AffineSubspace::point(std::move(base));
  const Matrix edges = edge_matrix(vertices);
  Eigen::JacobiSVD<Matrix> svd(edges, Eigen::ComputeThinU);
  const int rank = numerical_rank(svd.singularValues());
  return AffineSubspace(std::move(base), svd.matrixU().leftCols(rank));
}

int affine_rank(const Matrix& vertices) {
  if (vertices.cols() <= 1) return 0;
  Eigen::JacobiSVD<Matrix> svd(edge_matrix(vertices));
  return numerical_rank(svd.singularValues());
}

double diameter(const Matrix& vertices) {
  double d2 = 0.0;
  for (Index i = 0; i < vertices.cols(); ++i) {
    for (Index j = i + 1; j < vertices.cols(); ++j) {
      d2 = std::max(d2, squared_distance(vertices.col(i), vertices.col(j)));
    }
  }
  return std::sqrt(d2);
}

double triangle_area(double a, double b, double c) {
  // Sort descending: a >= b >= c.
  if (a < b) std::swap(a, b);
  if (b < c) std::swap(b, c);
  if (a < b) std::swap(a, b);
  const double t = (a + (b + c)) * (c - (a - b)) * (c + (a - b)) * (a + (b - c));
  return t > 0.0 ? 0.25 * std::sqrt(t) : 0.0;
}

namespace {

// Triangle heights: 2A / side, with the doubled area from the 2x2 minors of
// the edge vectors. Collinear coordinates give an exact zero.
// Degenerate when the smallest height is below the rank tolerance relative
// to the longest side.
double triangle_h_min(VectorRef x, VectorRef y, VectorRef z) {
  const double a = std::sqrt(squared_distance(x, y));
  const double b = std::sqrt(squared_distance(y, z));
  const double c = std::sqrt(squared_distance(z, x));
  const double longest = std::max({a, b, c});
  if (!(longest > 0.0)) return 0.0;
  double minors = 0.0;
  for (Index i = 0; i < x.size(); ++i) {
    const double ui = y[i] - x[i];
    const double vi = z[i] - x[i];
    for (Index j = i + 1; j < x.size(); ++j) {
      const double det = ui * (z[j] - x[j]) - (y[j] - x[j]) * vi;
      minors += det * det;
    }
  }
  const double h = std::sqrt(minors) / longest;
  return h > kRankTolerance * longest ? h : 0.0;
}

}  // namespace

double h_min(const Matrix& vertices) {
  const Index count = vertices.cols();
  if (count < 2) return 0.0;
  if (count == 2) return std::sqrt(squared_distance(vertices.col(0), vertices.col(1)));
  if (count == 3) return triangle_h_min(vertices.col(0), vertices.col(1), vertices.col(2));
  const Index k = count - 1;
  if (affine_rank(vertices) < k) return 0.0;
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < count; ++i) {
    const AffineSubspace opposite = affine_hull(remove_column(vertices, i));
    best = std::min(best, dist_to_affine(vertices.col(i), opposite));
  }
  return best;
}

double simplex_volume(const Matrix& vertices) {
  const Index k = vertices.cols() - 1;
  if (k <= 0) return k == 0 ? 1.0 : 0.0;
  if (k > vertices.rows()) return 0.0;
  Eigen::JacobiSVD<Matrix> svd(edge_matrix(vertices));
  const auto& s = svd.singularValues();
  if (numerical_rank(s) < k) return 0.0;
  // prod(sigma_i) = sqrt(det(E^T E)).
  double vol = 1.0;
  for (Index i = 0; i < k; ++i) vol *= s(i) / static_cast<double>(i + 1);
  return vol;
}

double menger_curvature(VectorRef x, VectorRef y, VectorRef z) {
  const double a = std::sqrt(squared_distance(x, y));
  const double b = std::sqrt(squared_distance(y, z));
  const double c = std::sqrt(squared_distance(z, x));
  if (a == 0.0 || b == 0.0 || c == 0.0) return 0.0;
  if (triangle_h_min(x, y, z) == 0.0) return 0.0;
  return 4.0 * triangle_area(a, b, c) / (a * b * c);
}

Simplex::Simplex(Matrix vertices) : vertices_(std::move(vertices)) {
  const Index k = vertices_.cols() - 1;
  if (k < 1 || k > vertices_.rows()) {
    throw InputError("simplex needs between 2 and m+1 vertices, got " + std::to_string(vertices_.cols()));
  }
}

Matrix Simplex::face(int i) const { return remove_column(vertices_, i); }

Matrix remove_column(const Matrix& m, Index col) {
  Matrix out(m.rows(), m.cols() - 1);
  Index o = 0;
  for (Index j = 0; j < m.cols(); ++j) {
    if (j != col) out.col(o++) = m.col(j);
  }
  return out;
}

}  // namespace rectiscope
