#pragma once

#include <cstdint>
#include <optional>
#include <string>
#include <utility>
#include <vector>

#include "rectiscope/beta.hpp"
#include "rectiscope/measure.hpp"
#include "rectiscope/secant.hpp"

namespace rectiscope {

using NamedValues = std::vector<std::pair<std::string, double>>;

struct InequalityCase {
  std::string label;
  double lhs = 0.0;
  double rhs = 0.0;
  double constant = 0.0;
  double margin = 0.0;  // rhs / lhs, +inf when lhs = 0
  bool pass = false;
  bool skipped = false;
  std::string note;
  NamedValues extras;
};

/// lhs <= rhs compared exactly; margin = rhs / lhs.
InequalityCase make_case(std::string label, double lhs, double rhs, double constant);
InequalityCase skipped_case(std::string label, std::string reason);
/// A case whose lhs is exactly 0 and so holds without evaluating the right side.
InequalityCase trivial_case(std::string label, std::string reason);

struct InequalityReport {
  std::string name;
  std::vector<InequalityCase> cases;
  int passed = 0;
  int failed = 0;
  int skipped = 0;
  std::optional<std::size_t> worst;  // evaluated case with the smallest margin
  std::uint64_t measure_hash = 0;
  std::uint64_t seed = 0;
  NamedValues constants;
  std::vector<std::string> notes;

  void add(InequalityCase c);
  /// No failed case and at least one evaluated case.
  bool pass() const { return failed == 0 && passed > 0; }
};

struct ChainOptions {
  SecantMode mode = SecantMode::kEmpirical;
  std::int64_t audit_samples = 1000;  // sampled (y, z) for the pointwise height claim
  std::uint64_t seed = 1;
  std::int64_t budget = 100'000'000;
  bool full_ball = true;  // also evaluate rhs over the whole ball
};

/// Per scale: beta-hat_2(x,r)^2 <= C * sum over B_1 x ... x B_n x B(x,r) of
/// w h_min^2 / diam^(n^2+n+2), with
///   empirical:   C = (2/delta)^(2n) 2^(n^2+n+2) r^(n^2) / prod_i mass(B_i)
///   theoretical: C = (2/delta)^(2n) 2^(n^2+n+2) / C2^n.
/// The y_i range over atoms of B_i inside B(x,r).
InequalityReport check_beta_vs_curv(const DiscreteMeasure& mu, VectorRef x, const SecantConfig& cfg,
                                    const std::vector<double>& radii, const ChainOptions& options = {});

struct JonesChainOptions : ChainOptions {
  int scale_count = 12;
};

/// sum_j beta-hat_2(x,r_j)^2 / r_j^(2 alpha) <= max_j C_j 2^(2 alpha) curv^alpha_{mu;2}(x,1),
/// r_j = (delta/3)^j with delta the reference ratio at r = 1. One case per scale
/// plus the summed case.
InequalityReport check_jones_vs_curv(const DiscreteMeasure& mu, VectorRef x, double alpha, const SecantConfig& cfg,
                                     const JonesChainOptions& options = {});

/// Discrete Hoelder step over a geometric profile with ratio rho, Delta = ln(1/rho):
///   sum b_j^2 Delta <= (sum (b_j / r_j^alpha)^p Delta)^(2/p) (sum r_j^(2 p alpha/(p-2)) Delta)^((p-2)/p).
InequalityCase holder_sum_check(const ScaleProfile& betas, double p, double alpha);

/// Hoelder sum form on the beta_2 profile of mu at x, plus the moment bound
/// beta_2 <= (mu(B)/r^n)^(1/2 - 1/p) beta_p at every scale.
InequalityReport check_holder_chain(const DiscreteMeasure& mu, VectorRef x, double p, double alpha,
                                    const ScaleConfig& scales);

/// beta_2 <= beta-hat_2; beta_2^2 <= beta_p^p for p in low_ps (p <= 2);
/// beta_2 <= (mu(B)/r^n)^(1/2-1/p) beta_p for p in high_ps (p > 2).
/// Extras of each low-p case carry the bound with the factor 2^(2-p).
InequalityReport check_beta_ordering(const DiscreteMeasure& mu, std::span<const Index> centers,
                                     const std::vector<double>& radii, const std::vector<double>& low_ps,
                                     const std::vector<double>& high_ps);

/// Random (k+1)-simplices in R^m for k = 1..max_dim: every vertex w satisfies
/// dist(w, aff(face_w)) Vol_k(face_w) = (k+1) Vol_{k+1}, and h_min Vol_k(face_{w0})
/// equals the same product. Case lhs is the max relative deviation, rhs the tolerance.
InequalityReport check_volume_identity(int trials, int max_dim, int m, std::uint64_t seed,
                                       double tolerance = 1e-9);

}  // namespace rectiscope
