#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <vector>

#include "rectiscope/measure.hpp"

namespace rectiscope {

/// Density constants for the secant-plane construction: mu(B(x,r)) >= lambda r^n
/// at the scales of interest, mu(B(y,r)) <= c0 r^n everywhere.
struct SecantConfig {
  double lambda = 1.0;
  double c0 = 2.0;
  int k_exponent = 2;  // exponent k in delta = lambda / (2^(k+2) 5^(n-1) c0)
  int n = 1;
  int m = 2;

  void validate() const;
};

struct SecantConstants {
  double delta;
  double eta;
  double c2;
};

/// delta = lambda / (2^(k+2) 5^(n-1) c0), eta = delta / (10 n), c2 = lambda eta^m / 2^(m+1).
SecantConstants theoretical_constants(const SecantConfig& cfg);

enum class SecantMode { kTheoretical, kEmpirical };
std::string to_string(SecantMode mode);

struct SecantFrame {
  Vector x;
  double r = 0.0;
  SecantMode mode = SecantMode::kEmpirical;
  std::vector<Index> atoms;       // indices of the chosen x_{i,r}
  Matrix points;                  // m x n, the x_{i,r}
  double delta = 0.0;             // achieved h_min(x, x_1..x_n) / r
  double delta_bound = 0.0;       // delta the conclusions are stated with
  double eta = 0.0;               // ball radius is 5 eta r
  std::vector<double> masses;     // (mu restricted to B(x,r))(B_{i,r})
  SecantConstants theory{};

  double ball_radius() const { return 5.0 * eta * r; }
};

enum class SecantFailure { kNoCandidate, kHeightBound, kBallMass };
std::string to_string(SecantFailure failure);

struct SecantResult {
  SecantFrame frame;
  bool success = true;
  std::vector<SecantFailure> failures;
};

/// Greedy farthest-point construction of x_{1,r}, ..., x_{n,r} among the
/// atoms of mu in B(x,r). Ties go to the lowest atom index.
///  - theoretical: candidates must carry mass >= c2 r^n in their 5 eta r ball;
///    succeeds iff h_min >= delta r and every ball mass >= c2 r^n.
///  - empirical: maximise distance * (mass of the 5 eta r ball) and report the
///    achieved delta; conclusions then use eta = delta / (10 n).
/// Throws PreconditionError when mu(B(x,r)) < lambda r^n.
SecantResult find_secant_frame(const DiscreteMeasure& mu, VectorRef x, double r, const SecantConfig& cfg,
                               SecantMode mode);

/// Same frame with a different eta (ball radii and masses recomputed).
SecantFrame with_eta(const SecantFrame& frame, const DiscreteMeasure& mu, double eta);

struct FrameReport {
  std::int64_t tuples_checked = 0;
  std::int64_t height_violations = 0;
  double min_height_ratio = 0.0;        // min sampled h_min / (delta_bound r / 2)
  std::vector<Matrix> counterexamples;  // up to 5 violating tuples (m x n)
  std::optional<bool> disjoint;         // product balls at r and delta r / 3
  std::string disjoint_note;
  int disjoint_components = 0;
  bool pass = false;
};

/// (a) samples tuples uniformly from B_{1,r} x ... x B_{n,r} and checks
/// h_min(x, y_1..y_n) >= delta r / 2; (b) checks that the product of balls at
/// scale r misses the product at scale delta r / 3, both built with the frame's eta.
FrameReport verify_frame_conclusions(const SecantFrame& frame, const DiscreteMeasure& mu, const SecantConfig& cfg,
                                     std::int64_t samples = 10'000, std::uint64_t seed = 1);

struct HeightBoundCheck {
  double lhs = 0.0;          // dist(z, aff{x, y_1..y_n})
  double rhs = 0.0;          // (2/delta)^n h_min(x, z, y_1..y_n)
  bool pass = false;
  double volume_ratio = 0.0;  // Vol(face opposite w0) / Vol(face opposite z)
  double ratio_bound = 0.0;   // (2/delta)^n
  bool ratio_pass = false;
  double sharp_rhs = 0.0;     // (4/delta)^n h_min
  bool sharp_pass = false;
};

/// Distance of z to the secant plane against the simplex height bound, with
/// the stated constant (2/delta)^n and the sharp constant (4/delta)^n.
HeightBoundCheck dist_vs_hmin_bound(VectorRef x, VectorRef z, const Matrix& ys, double delta);

}  // namespace rectiscope
