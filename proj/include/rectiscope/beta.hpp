#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <vector>

#include "rectiscope/geometry.hpp"
#include "rectiscope/measure.hpp"

namespace rectiscope {

/// Geometric radii r_j = r0 * ratio^j, j = 0..count-1.
struct ScaleConfig {
  double r0 = 1.0;
  double ratio = 0.5;
  int count = 12;

  std::vector<double> radii() const;
  void validate() const;
};

/// Per-scale scalar quantity; radii strictly decreasing.
struct ScaleProfile {
  std::vector<double> radii;
  std::vector<double> values;
  double alpha = 0.0;
  double ratio = 0.5;

  void validate() const;
};

struct BetaResult {
  double value = 0.0;      // objective^(1/p)
  double objective = 0.0;  // (1/r^n) sum w (dist/r)^p
  AffineSubspace plane;
  double p = 2.0;
  bool centered = false;
  bool empty_ball = false;
  bool converged = true;
  Index atoms = 0;
  double mass = 0.0;
};

/// (1/r^n) * sum_i w_i (dist(x_i, L)/r)^p over the given atoms.
double beta_objective(const DiscreteMeasure& mu, std::span<const Index> atoms, double r,
                      const AffineSubspace& plane, double p);

/// Exact beta_2 over all n-planes (weighted PCA about the in-ball centroid).
BetaResult beta2(const DiscreteMeasure& mu, VectorRef x, double r);

/// Exact beta_2 over n-planes through x (PCA of the second moment about x).
BetaResult beta2_centered(const DiscreteMeasure& mu, VectorRef x, double r);

struct BetaPOptions {
  int restarts = 8;
  int max_iterations = 200;
  double tolerance = 1e-9;
  std::uint64_t seed = 0x5eedULL;
  bool centered = false;
};

/// beta_p by iteratively reweighted least squares (p < 2) or Riemannian gradient
/// descent over (base, frame) (p > 2), seeded at the p = 2 plane
/// plus deterministic random restarts. The result is an upper bound on the
/// true infimum (it is the objective of an actual plane).
BetaResult beta_p(const DiscreteMeasure& mu, VectorRef x, double r, double p, const BetaPOptions& options = {});

enum class JonesVariant { kUncentered, kCentered };

struct JonesResult {
  double value = 0.0;
  ScaleProfile betas;                 // beta_2(x, r_j)
  std::vector<double> terms;          // beta^2 / r^(2 alpha) (or the Dini-weighted form)
  std::vector<double> partial_sums;   // running sums of terms
  std::vector<bool> empty;            // scale had an empty ball
};

/// Sum over scales of beta_2(x, r_j)^2 / r_j^(2 alpha). With dini_gamma set
/// (alpha must be 1) the denominator uses r * eta(r), eta(r) = log(1/r)^(-gamma).
JonesResult jones_function(const DiscreteMeasure& mu, VectorRef x, double alpha, const ScaleConfig& scales,
                           JonesVariant variant = JonesVariant::kUncentered,
                           std::optional<double> dini_gamma = std::nullopt);

}  // namespace rectiscope
