#include "rectiscope/generators.hpp"

#include <cmath>
#include <numbers>

#include "rectiscope/error.hpp"
#include "rectiscope/numerics.hpp"

namespace rectiscope {

namespace {

constexpr int kTerms = 12;
constexpr int kPrimes[] = {2, 3, 5, 7, 11, 13, 17, 19, 23, 29, 31, 37, 41, 43, 47, 53};

double radical_inverse(std::uint64_t i, int base) {
  double inv = 1.0 / base;
  double f = inv;
  double out = 0.0;
  while (i > 0) {
    out += f * static_cast<double>(i % static_cast<std::uint64_t>(base));
    i /= static_cast<std::uint64_t>(base);
    f *= inv;
  }
  return out;
}

Matrix shifted_halton(Index count, int dim, std::uint64_t seed) {
  RngStream rng(seed, 0, 1);
  Vector shift(dim);
  for (int d = 0; d < dim; ++d) shift(d) = rng.uniform();
  Matrix out(dim, count);
  for (Index i = 0; i < count; ++i) {
    const Vector h = halton(static_cast<std::uint64_t>(i), dim);
    for (int d = 0; d < dim; ++d) {
      double v = h(d) + shift(d);
      if (v >= 1.0) v -= 1.0;
      out(d, i) = v;
    }
  }
  return out;
}

}  // namespace

std::string to_string(GeneratorKind kind) {
  switch (kind) {
    case GeneratorKind::kPlane:
      return "plane";
    case GeneratorKind::kLipschitzGraph:
      return "lipschitz_graph";
    case GeneratorKind::kHolderGraph:
      return "holder_graph";
    case GeneratorKind::kCircle:
      return "circle";
    case GeneratorKind::kCantor4:
      return "cantor4";
    case GeneratorKind::kPerturbedPlane:
      return "perturbed_plane";
  }
  return "unknown";
}

std::string to_string(WeightScheme scheme) { return scheme == WeightScheme::kUniform ? "uniform" : "area"; }

GeneratorKind parse_generator_kind(const std::string& name) {
  for (auto k : {GeneratorKind::kPlane, GeneratorKind::kLipschitzGraph, GeneratorKind::kHolderGraph,
                 GeneratorKind::kCircle, GeneratorKind::kCantor4, GeneratorKind::kPerturbedPlane}) {
    if (to_string(k) == name) return k;
  }
  throw InputError("unknown generator kind '" + name + "'");
}

WeightScheme parse_weight_scheme(const std::string& name) {
  if (name == "uniform") return WeightScheme::kUniform;
  if (name == "area") return WeightScheme::kArea;
  throw InputError("unknown weight scheme '" + name + "'");
}

void GeneratorSpec::validate() const {
  if (m < 1) throw InputError("generator: ambient dimension must be positive");
  if (n < 0 || n > m) throw InputError("generator: need 0 <= n <= m");
  const bool counted = kind != GeneratorKind::kCantor4;
  if (counted && count < 1) throw InputError("generator: point count must be positive");
  switch (kind) {
    case GeneratorKind::kPlane:
    case GeneratorKind::kPerturbedPlane:
      if (n < 1) throw InputError("generator: plane needs n >= 1");
      if (n > static_cast<int>(std::size(kPrimes))) throw InputError("generator: n too large for Halton bases");
      if (kind == GeneratorKind::kPerturbedPlane && (!(noise >= 0.0) || !std::isfinite(noise))) {
        throw InputError("generator: noise must be finite and nonnegative");
      }
      break;
    case GeneratorKind::kHolderGraph:
      if (!(alpha > 0.0 && alpha < 1.0)) throw InputError("generator: holder_graph needs alpha in (0, 1)");
      [[fallthrough]];
    case GeneratorKind::kLipschitzGraph:
      if (n < 1 || m < n + 1) throw InputError("generator: graphs need n >= 1 and m >= n + 1");
      if (n > static_cast<int>(std::size(kPrimes))) throw InputError("generator: n too large for Halton bases");
      break;
    case GeneratorKind::kCircle:
      if (n != 1 || m < 2) throw InputError("generator: circle needs n = 1 and m >= 2");
      break;
    case GeneratorKind::kCantor4:
      if (n != 1 || m < 2) throw InputError("generator: cantor4 needs n = 1 and m >= 2");
      if (level < 0 || level > 12) throw InputError("generator: cantor4 level must lie in [0, 12]");
      break;
  }
}

double weierstrass(double t, double alpha) {
  double out = 0.0;
  for (int j = 1; j <= kTerms; ++j) out += std::ldexp(1.0, -j) * std::pow(2.0, -j * alpha) * std::cos(std::ldexp(t, j));
  return out;
}

double weierstrass_derivative(double t, double alpha) {
  double out = 0.0;
  for (int j = 1; j <= kTerms; ++j) out -= std::pow(2.0, -j * alpha) * std::sin(std::ldexp(t, j));
  return out;
}

Vector halton(std::uint64_t i, int dim) {
  if (dim < 0 || dim > static_cast<int>(std::size(kPrimes))) throw InputError("halton: unsupported dimension");
  Vector out(dim);
  for (int d = 0; d < dim; ++d) out(d) = radical_inverse(i, kPrimes[d]);
  return out;
}

DiscreteMeasure generate(const GeneratorSpec& spec) {
  spec.validate();
  const int m = spec.m;
  const int n = spec.n;

  if (spec.kind == GeneratorKind::kCantor4) {
    const Index count = Index{1} << (2 * spec.level);
    Matrix pts = Matrix::Zero(m, count);
    const double side = std::ldexp(1.0, -2 * spec.level);
    for (Index c = 0; c < count; ++c) {
      double px = 0.5 * side;
      double py = 0.5 * side;
      for (int l = 1; l <= spec.level; ++l) {
        const int digit = static_cast<int>((c >> (2 * (spec.level - l))) & 3);
        const double step = 0.75 * std::ldexp(1.0, -2 * (l - 1));
        px += step * (digit & 1);
        py += step * (digit >> 1);
      }
      pts(0, c) = px;
      pts(1, c) = py;
    }
    return DiscreteMeasure(std::move(pts), Vector::Constant(count, side), 1);
  }

  const Index count = spec.count;
  const double inv = 1.0 / static_cast<double>(count);
  Matrix pts = Matrix::Zero(m, count);
  Vector w = Vector::Constant(count, inv);

  if (spec.kind == GeneratorKind::kCircle) {
    for (Index i = 0; i < count; ++i) {
      const double theta = 2.0 * std::numbers::pi * static_cast<double>(i) * inv;
      pts(0, i) = std::cos(theta);
      pts(1, i) = std::sin(theta);
    }
    if (spec.weights == WeightScheme::kArea) w.setConstant(2.0 * std::numbers::pi * inv);
    return DiscreteMeasure(std::move(pts), std::move(w), 1);
  }

  const Matrix t = shifted_halton(count, n, spec.seed);
  pts.topRows(n) = t;
  if (spec.kind == GeneratorKind::kLipschitzGraph || spec.kind == GeneratorKind::kHolderGraph) {
    const double alpha = spec.kind == GeneratorKind::kHolderGraph ? spec.alpha : 0.0;
    const double period = 2.0 * std::numbers::pi;
    pts.topRows(n) *= period;
    const double cell = std::pow(period, n) * inv;
    for (Index i = 0; i < count; ++i) {
      double value = 0.0;
      double grad2 = 0.0;
      for (int d = 0; d < n; ++d) {
        value += weierstrass(pts(d, i), alpha);
        const double g = weierstrass_derivative(pts(d, i), alpha);
        grad2 += g * g;
      }
      pts(n, i) = value;
      w(i) = spec.weights == WeightScheme::kArea ? std::sqrt(1.0 + grad2) * cell : inv;
    }
  } else if (spec.kind == GeneratorKind::kPerturbedPlane) {
    for (Index i = 0; i < count; ++i) {
      RngStream rng(spec.seed, static_cast<std::uint64_t>(i), 2);
      for (int d = n; d < m; ++d) pts(d, i) = spec.noise * (2.0 * rng.uniform() - 1.0);
    }
  }
  return DiscreteMeasure(std::move(pts), std::move(w), n);
}

}  // namespace rectiscope
