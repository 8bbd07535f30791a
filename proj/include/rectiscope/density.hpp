#pragma once

#include <vector>

#include "rectiscope/beta.hpp"
#include "rectiscope/measure.hpp"

namespace rectiscope {

/// Finite-scale proxy for the upper and lower n-densities at x.
struct DensityProfile {
  Vector center;
  std::vector<double> radii;
  std::vector<double> masses;
  std::vector<double> ratios;  // mu(B(x,r)) / r^n
  double upper_est = 0.0;
  double lower_est = 0.0;
};

DensityProfile density_profile(const DiscreteMeasure& mu, VectorRef x, const ScaleConfig& scales);

/// Max over centers and scales of mu(B(x,r)) / r^n. A lower bound for any valid C0.
double upper_regularity_constant(const DiscreteMeasure& mu, const ScaleConfig& scales,
                                 std::span<const Index> centers);

struct ChopOptions {
  int levels = 20;  // T: radii 2^(-k-1) ... 2^(-k-T)
};

/// Dyadic radii tested by chop at level k, after the minimal-distance cap.
std::vector<double> chop_radii(const DiscreteMeasure& mu, int k, const ChopOptions& options = {});

/// Indices of atoms x_i with mu(B(x_i,r)) <= k r^n at every radius of chop_radii.
std::vector<Index> chop_indices(const DiscreteMeasure& mu, int k, const ChopOptions& options = {});

/// mu restricted to the discrete E_k; weights are preserved. Throws InputError
/// when nothing survives (an empty measure is not representable).
DiscreteMeasure chop(const DiscreteMeasure& mu, int k, const ChopOptions& options = {});

}  // namespace rectiscope
