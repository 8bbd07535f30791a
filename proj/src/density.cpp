#include "rectiscope/density.hpp"

#include <algorithm>
#include <cmath>
#include <limits>

#include "rectiscope/error.hpp"
#include "rectiscope/numerics.hpp"

namespace rectiscope {

DensityProfile density_profile(const DiscreteMeasure& mu, VectorRef x, const ScaleConfig& scales) {
  scales.validate();
  if (x.size() != mu.ambient_dim()) throw InputError("density: center has the wrong dimension");
  DensityProfile out;
  out.center = x;
  out.radii = scales.radii();
  const double n = mu.intrinsic_dim();
  out.upper_est = 0.0;
  out.lower_est = std::numeric_limits<double>::infinity();
  for (double r : out.radii) {
    const double mass = mu.ball_mass(x, r);
    const double ratio = mass / std::pow(r, n);
    out.masses.push_back(mass);
    out.ratios.push_back(ratio);
    out.upper_est = std::max(out.upper_est, ratio);
    out.lower_est = std::min(out.lower_est, ratio);
  }
  return out;
}

double upper_regularity_constant(const DiscreteMeasure& mu, const ScaleConfig& scales,
                                 std::span<const Index> centers) {
  std::vector<double> best(centers.size(), 0.0);
  parallel_for(centers.size(), [&](std::size_t c) {
    if (centers[c] < 0 || centers[c] >= mu.size()) throw InputError("density: center index out of range");
    best[c] = density_profile(mu, mu.point(centers[c]), scales).upper_est;
  });
  double out = 0.0;
  for (double b : best) out = std::max(out, b);
  return out;
}

std::vector<double> chop_radii(const DiscreteMeasure& mu, int k, const ChopOptions& options) {
  if (k < 1) throw InputError("chop: k must be a positive integer");
  if (options.levels < 1) throw InputError("chop: level count must be positive");
  const double floor = mu.min_pairwise_distance() / 4.0;
  std::vector<double> radii;
  for (int t = 1; t <= options.levels; ++t) {
    const double r = std::ldexp(1.0, -k - t);
    if (std::isfinite(floor) && floor > 0.0 && r < floor) break;
    radii.push_back(r);
  }
  return radii;
}

std::vector<Index> chop_indices(const DiscreteMeasure& mu, int k, const ChopOptions& options) {
  const auto radii = chop_radii(mu, k, options);
  const double n = mu.intrinsic_dim();
  std::vector<char> keep(static_cast<std::size_t>(mu.size()), 1);
  parallel_for(keep.size(), [&](std::size_t i) {
    for (double r : radii) {
      if (mu.ball_mass(mu.point(static_cast<Index>(i)), r) > k * std::pow(r, n)) {
        keep[i] = 0;
        return;
      }
    }
  });
  std::vector<Index> out;
  for (std::size_t i = 0; i < keep.size(); ++i) {
    if (keep[i]) out.push_back(static_cast<Index>(i));
  }
  return out;
}

DiscreteMeasure chop(const DiscreteMeasure& mu, int k, const ChopOptions& options) {
  const auto kept = chop_indices(mu, k, options);
  if (kept.empty()) throw InputError("chop: no atom satisfies the density bound at k = " + std::to_string(k));
  return mu.subset(kept);
}

}  // namespace rectiscope
