#pragma once

#include <cstdint>
#include <span>
#include <string>
#include <vector>

#include "rectiscope/beta.hpp"
#include "rectiscope/measure.hpp"

namespace rectiscope {

enum class CurvMethod { kExhaustive, kMonteCarlo };
enum class SamplingStrategy { kUniform, kAnnulusStratified };

std::string to_string(CurvMethod method);
std::string to_string(SamplingStrategy strategy);

inline constexpr std::int64_t kDefaultTupleBudget = 100'000'000;

struct CurvatureEstimate {
  double value = 0.0;
  double std_error = 0.0;  // 0 for exhaustive
  CurvMethod method = CurvMethod::kExhaustive;
  std::int64_t tuples_evaluated = 0;
  double p = 2.0;
  double alpha = 0.0;
  bool empty_ball = false;
  int strata = 0;
};

/// Exponent of the diameter in the curvature integrand: p(1+alpha) + n(n+1).
double curvature_exponent(int n, double p, double alpha);

/// h_min(vertices)^p / diam(vertices)^exponent, 0 whenever h_min is 0.
/// vertices holds x in column 0 followed by the tuple.
double simplex_integrand(const Matrix& vertices, double p, double exponent);

/// Integrand at (x, x_1, ..., x_{n+1}); n is inferred as tuple.cols() - 1.
double curv_integrand(VectorRef x, const Matrix& tuple, double p, double alpha);

struct TupleSum {
  double value = 0.0;
  std::int64_t tuples = 0;
};

/// sum over (i_1 in slots[0], ..., i_k in slots[k-1]) of
///   w_{i_1} ... w_{i_k} * simplex_integrand([x, x_{i_1}, ..., x_{i_k}], p, exponent).
/// Correctly rounded and independent of the worker count.
TupleSum weighted_tuple_sum(const DiscreteMeasure& mu, VectorRef x, const std::vector<std::vector<Index>>& slots,
                            double p, double exponent, std::int64_t budget = kDefaultTupleBudget);

/// Exact (n+1)-fold weighted sum over ordered tuples from the closed ball.
CurvatureEstimate curv_exhaustive(const DiscreteMeasure& mu, VectorRef x, double r, double p, double alpha,
                                  std::int64_t budget = kDefaultTupleBudget);

/// Unbiased Monte Carlo estimate of curv_exhaustive's value.
CurvatureEstimate curv_monte_carlo(const DiscreteMeasure& mu, VectorRef x, double r, double p, double alpha,
                                   std::int64_t samples, std::uint64_t seed,
                                   SamplingStrategy strategy = SamplingStrategy::kAnnulusStratified);

enum class CurvMethodChoice { kAuto, kExhaustive, kMonteCarlo };

struct CurvOptions {
  CurvMethodChoice method = CurvMethodChoice::kAuto;
  std::int64_t budget = kDefaultTupleBudget;
  std::int64_t samples = 100'000;
  std::uint64_t seed = 42;
  SamplingStrategy strategy = SamplingStrategy::kAnnulusStratified;
};

/// Dispatches on options.method; kAuto picks exhaustive when the tuple count fits the budget.
CurvatureEstimate curv_estimate(const DiscreteMeasure& mu, VectorRef x, double r, double p, double alpha,
                                const CurvOptions& options = {});

struct CurvatureProfile {
  ScaleProfile profile;
  std::vector<CurvatureEstimate> estimates;
};

CurvatureProfile curv_profile(const DiscreteMeasure& mu, VectorRef x, double p, double alpha,
                              const ScaleConfig& scales, const CurvOptions& options = {});

}  // namespace rectiscope
