#pragma once

#include <cstdint>
#include <string>

#include "rectiscope/measure.hpp"

namespace rectiscope {

enum class GeneratorKind { kPlane, kLipschitzGraph, kHolderGraph, kCircle, kCantor4, kPerturbedPlane };
enum class WeightScheme { kUniform, kArea };

std::string to_string(GeneratorKind kind);
std::string to_string(WeightScheme scheme);
GeneratorKind parse_generator_kind(const std::string& name);
WeightScheme parse_weight_scheme(const std::string& name);

struct GeneratorSpec {
  GeneratorKind kind = GeneratorKind::kPlane;
  int n = 1;
  int m = 2;
  Index count = 1024;
  int level = 3;        // cantor4 only
  double alpha = 0.5;   // holder_graph only
  double noise = 0.01;  // perturbed_plane only
  std::uint64_t seed = 7;
  WeightScheme weights = WeightScheme::kArea;

  void validate() const;
};

/// Weierstrass-type profile sum_{j=1..12} 2^(-j(1+alpha)) cos(2^j t).
double weierstrass(double t, double alpha);
double weierstrass_derivative(double t, double alpha);

/// Halton point i (0-based) in [0,1]^dim, bases the first dim primes.
Vector halton(std::uint64_t i, int dim);

/// Deterministic synthetic measure:
///  - plane: Halton samples of [0,1]^n (Cranley-Patterson shifted by seed), other coordinates 0
///  - lipschitz_graph / holder_graph: (t, sum_k weierstrass(t_k)) for t the same samples scaled
///    to [0, 2 pi]^n, the graph value in coordinate n; lipschitz_graph uses alpha = 0
///  - circle: N equispaced points on the unit circle in the first two coordinates
///  - cantor4: the 4^L level-L cell centers of the 4-corner Cantor set, weights 4^(-L)
///  - perturbed_plane: plane samples plus uniform noise in [-noise, noise] off the plane
/// Area weights are the local n-area element times patch measure / N; uniform weights are 1/N.
DiscreteMeasure generate(const GeneratorSpec& spec);

}  // namespace rectiscope
