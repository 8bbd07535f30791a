#pragma once

#include <algorithm>
#include <cmath>
#include <numbers>
#include <random>
#include <vector>

#include "rectiscope/measure.hpp"

namespace testing_support {

using rectiscope::DiscreteMeasure;
using rectiscope::Matrix;
using rectiscope::Index;
using rectiscope::Vector;

inline DiscreteMeasure cloud(const std::vector<std::vector<double>>& pts, const std::vector<double>& w, int n) {
  const auto m = static_cast<rectiscope::Index>(pts.front().size());
  Matrix p(m, static_cast<rectiscope::Index>(pts.size()));
  Vector wv(static_cast<rectiscope::Index>(pts.size()));
  for (std::size_t i = 0; i < pts.size(); ++i) {
    for (rectiscope::Index d = 0; d < m; ++d) p(d, static_cast<rectiscope::Index>(i)) = pts[i][d];
    wv(static_cast<rectiscope::Index>(i)) = w[i];
  }
  return DiscreteMeasure(p, wv, n);
}

// Random cloud from std::mt19937_64: coordinates in [-1,1]^m, weights in [0.5, 1.5].
inline DiscreteMeasure random_cloud(std::mt19937_64& gen, int count, int m, int n) {
  std::uniform_real_distribution<double> coord(-1.0, 1.0);
  std::uniform_real_distribution<double> weight(0.5, 1.5);
  Matrix p(m, count);
  Vector w(count);
  for (int i = 0; i < count; ++i) {
    for (int d = 0; d < m; ++d) p(d, i) = coord(gen);
    w(i) = weight(gen);
  }
  return DiscreteMeasure(p, w, n);
}

// count equispaced points on the unit circle, weight 2 pi / count each.
inline DiscreteMeasure unit_circle(int count) {
  Matrix p(2, count);
  Vector w(count);
  for (int i = 0; i < count; ++i) {
    const double t = 2.0 * std::numbers::pi * i / count;
    p(0, i) = std::cos(t);
    p(1, i) = std::sin(t);
    w(i) = 2.0 * std::numbers::pi / count;
  }
  return DiscreteMeasure(p, w, 1);
}

// Points k*h on the first axis of R^m, k = 0..count-1, weight h.
inline DiscreteMeasure segment(int count, double h, int m = 2) {
  Matrix p = Matrix::Zero(m, count);
  Vector w = Vector::Constant(count, h);
  for (int i = 0; i < count; ++i) p(0, i) = i * h;
  return DiscreteMeasure(p, w, 1);
}

inline double sq(const Vector& u, const Vector& v) {
  double s = 0;
  for (Index d = 0; d < u.size(); ++d) s += (u(d) - v(d)) * (u(d) - v(d));
  return s;
}

// curv^alpha_{mu;p}(x, r) for n = 1 and planar points by a plain double loop,
// accumulated in binary128.
inline double reference_curv_n1(const DiscreteMeasure& mu, const Vector& x, double r, double p, double alpha) {
  std::vector<Index> ball;
  for (Index i = 0; i < mu.size(); ++i)
    if (sq(mu.point(i), x) <= r * r) ball.push_back(i);
  const double expo = p * (1 + alpha) + 2;
  __float128 acc = 0;
  for (Index i : ball) {
    for (Index j : ball) {
      const Vector y = mu.point(i), z = mu.point(j);
      const double a = std::sqrt(sq(x, y)), b = std::sqrt(sq(y, z)), c = std::sqrt(sq(z, x));
      const double longest = std::max({a, b, c});
      if (longest == 0) continue;
      // Twice the triangle area is the planar cross product of the edges.
      const double cross = (y(0) - x(0)) * (z(1) - x(1)) - (y(1) - x(1)) * (z(0) - x(0));
      const double h = std::abs(cross) / longest;
      if (!(h > 1e-10 * longest)) continue;
      const double diam = std::sqrt(std::max({sq(x, y), sq(y, z), sq(z, x)}));
      acc += (mu.weight(i) * mu.weight(j)) * (std::pow(h, p) / std::pow(diam, expo));
    }
  }
  return static_cast<double>(acc);
}

}  // namespace testing_support
