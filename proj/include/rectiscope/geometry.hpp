#pragma once

#include <vector>

#include "rectiscope/measure.hpp"

namespace rectiscope {

/// Relative singular-value threshold below which an edge matrix is treated
/// as rank deficient.
inline constexpr double kRankTolerance = 1e-10;

/// n-dimensional affine plane: base point plus an orthonormal frame (m x n).
class AffineSubspace {
 public:
  AffineSubspace() = default;
  AffineSubspace(Vector base, Matrix frame);

  /// Frame-less subspace {base}.
  static AffineSubspace point(Vector base);

  int dim() const { return static_cast<int>(frame_.cols()); }
  int ambient_dim() const { return static_cast<int>(base_.size()); }
  const Vector& base() const { return base_; }
  const Matrix& frame() const { return frame_; }

  Vector project(VectorRef z) const;

 private:
  Vector base_;
  Matrix frame_;
};

double dist_to_affine(VectorRef z, const AffineSubspace& plane);

/// aff{v_0, ..., v_k} for vertices stored column-wise. The frame rank equals
/// the numerical affine rank of the input.
AffineSubspace affine_hull(const Matrix& vertices);

/// Numerical affine rank of the columns (rank of the edge matrix v_j - v_0).
int affine_rank(const Matrix& vertices);

double diameter(const Matrix& vertices);

/// Minimum over vertices of the distance to the affine hull of the opposite
/// face. Zero for affinely dependent vertex sets.
double h_min(const Matrix& vertices);

/// k-dimensional volume of the simplex spanned by k+1 columns: square root of
/// the Gram determinant of the edge vectors over k!. Zero when degenerate.
double simplex_volume(const Matrix& vertices);

/// Reciprocal circumradius of a triangle; 0 for collinear or coincident points.
double menger_curvature(VectorRef x, VectorRef y, VectorRef z);

/// Triangle area from side lengths (Kahan's cancellation-free form).
double triangle_area(double a, double b, double c);

/// Ordered vertex list with derived quantities.
class Simplex {
 public:
  explicit Simplex(Matrix vertices);

  int dim() const { return static_cast<int>(vertices_.cols()) - 1; }
  const Matrix& vertices() const { return vertices_; }
  /// Vertices with column i removed.
  Matrix face(int i) const;

  double h_min() const { return rectiscope::h_min(vertices_); }
  double diameter() const { return rectiscope::diameter(vertices_); }
  double volume() const { return rectiscope::simplex_volume(vertices_); }

 private:
  Matrix vertices_;
};

Matrix remove_column(const Matrix& m, Index col);

}  // namespace rectiscope
