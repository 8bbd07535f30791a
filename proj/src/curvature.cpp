#include "rectiscope/curvature.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>

#include "rectiscope/error.hpp"
#include "rectiscope/geometry.hpp"
#include "rectiscope/numerics.hpp"

namespace rectiscope {

std::string to_string(CurvMethod method) {
  return method == CurvMethod::kExhaustive ? "exhaustive" : "monte_carlo";
}

std::string to_string(SamplingStrategy strategy) {
  return strategy == SamplingStrategy::kUniform ? "uniform" : "annulus_stratified";
}

double curvature_exponent(int n, double p, double alpha) { return p * (1.0 + alpha) + n * (n + 1.0); }

double simplex_integrand(const Matrix& vertices, double p, double exponent) {
  const double h = h_min(vertices);
  if (h == 0.0) return 0.0;
  const double diam = diameter(vertices);
  return std::pow(h, p) / std::pow(diam, exponent);
}

double curv_integrand(VectorRef x, const Matrix& tuple, double p, double alpha) {
  if (tuple.rows() != x.size()) throw InputError("curv_integrand: tuple and base point differ in dimension");
  const int n = static_cast<int>(tuple.cols()) - 1;
  if (n < 0) throw InputError("curv_integrand: empty tuple");
  Matrix vertices(x.size(), tuple.cols() + 1);
  vertices.col(0) = x;
  vertices.rightCols(tuple.cols()) = tuple;
  return simplex_integrand(vertices, p, curvature_exponent(n, p, alpha));
}

namespace {

void check_params(const DiscreteMeasure& mu, VectorRef x, double r, double p, double alpha) {
  if (x.size() != mu.ambient_dim()) throw InputError("curvature center has the wrong dimension");
  if (!(r > 0.0) || !std::isfinite(r)) throw InputError("curvature radius must be positive and finite");
  if (!(p >= 1.0)) throw InputError("curvature exponent p must be >= 1");
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InputError("curvature alpha must lie in [0, 1)");
}

// Tuple counts overflow quickly; saturate instead.
std::int64_t saturating_product(const std::vector<std::vector<Index>>& slots) {
  long double total = 1.0L;
  for (const auto& s : slots) total *= static_cast<long double>(s.size());
  if (total > static_cast<long double>(std::numeric_limits<std::int64_t>::max())) {
    return std::numeric_limits<std::int64_t>::max();
  }
  return static_cast<std::int64_t>(total);
}

}  // namespace

TupleSum weighted_tuple_sum(const DiscreteMeasure& mu, VectorRef x, const std::vector<std::vector<Index>>& slots,
                            double p, double exponent, std::int64_t budget) {
  if (slots.empty()) throw InputError("tuple sum needs at least one slot");
  const std::int64_t total = saturating_product(slots);
  if (total > budget) {
    throw BudgetError("exhaustive curvature needs " + std::to_string(total) + " tuples, budget is " +
                      std::to_string(budget) + "; use the Monte Carlo method");
  }
  if (total == 0) return {0.0, 0};

  const std::size_t k = slots.size();
  const std::size_t first = slots[0].size();
  std::vector<ExactSum> partial(first);
  parallel_chunks(first, 1, [&](std::size_t begin, std::size_t end, std::size_t) {
    Matrix vertices(mu.ambient_dim(), static_cast<Index>(k + 1));
    vertices.col(0) = x;
    std::vector<std::size_t> pos(k, 0);
    for (std::size_t a = begin; a < end; ++a) {
      ExactSum& acc = partial[a];
      const Index i0 = slots[0][a];
      vertices.col(1) = mu.point(i0);
      std::fill(pos.begin(), pos.end(), 0);
      while (true) {
        double weight = mu.weight(i0);
        for (std::size_t s = 1; s < k; ++s) {
          const Index idx = slots[s][pos[s]];
          vertices.col(static_cast<Index>(s + 1)) = mu.point(idx);
          weight *= mu.weight(idx);
        }
        acc.add(weight * simplex_integrand(vertices, p, exponent));
        // Odometer over slots 1..k-1 (last slot fastest).
        std::size_t s = k;
        while (s > 1) {
          --s;
          if (++pos[s] < slots[s].size()) break;
          pos[s] = 0;
          if (s == 1) {
            s = 0;
            break;
          }
        }
        if (s == 0 || k == 1) break;
      }
    }
  });
  ExactSum sum;
  for (const auto& part : partial) sum.merge(part);
  return {sum.value(), total};
}

CurvatureEstimate curv_exhaustive(const DiscreteMeasure& mu, VectorRef x, double r, double p, double alpha,
                                  std::int64_t budget) {
  check_params(mu, x, r, p, alpha);
  const int n = mu.intrinsic_dim();
  const auto atoms = mu.ball_indices(x, r);
  CurvatureEstimate est;
  est.method = CurvMethod::kExhaustive;
  est.p = p;
  est.alpha = alpha;
  est.empty_ball = atoms.empty();
  if (atoms.empty()) return est;
  const std::vector<std::vector<Index>> slots(static_cast<std::size_t>(n + 1), atoms);
  const TupleSum sum = weighted_tuple_sum(mu, x, slots, p, curvature_exponent(n, p, alpha), budget);
  est.value = sum.value;
  est.tuples_evaluated = sum.tuples;
  return est;
}

namespace {

// In-ball atoms sorted by distance to the center, with inclusive prefix weights.
struct RadialOrder {
  std::vector<Index> atoms;
  std::vector<double> dist;
  std::vector<double> cumulative;

  // Index into atoms in [lo, hi), drawn proportionally to weight.
  std::size_t draw(std::size_t lo, std::size_t hi, double u) const {
    const double before = lo == 0 ? 0.0 : cumulative[lo - 1];
    const double target = before + u * (cumulative[hi - 1] - before);
    auto it = std::upper_bound(cumulative.begin() + static_cast<std::ptrdiff_t>(lo),
                               cumulative.begin() + static_cast<std::ptrdiff_t>(hi), target);
    const auto k = static_cast<std::size_t>(it - cumulative.begin());
    return std::min(k, hi - 1);
  }

  double mass(std::size_t lo, std::size_t hi) const {
    if (hi <= lo) return 0.0;
    return cumulative[hi - 1] - (lo == 0 ? 0.0 : cumulative[lo - 1]);
  }
};

// Tuples whose farthest atom (from x) lies in the annulus [inner, outer)
// of the radial order. inner == outer marks the innermost ball stratum.
struct Stratum {
  std::size_t inner = 0;
  std::size_t outer = 0;
  bool innermost = false;
  double mass = 0.0;                // product-measure mass of the stratum
  std::vector<double> position_cdf;  // first-annulus-coordinate position
  std::int64_t samples = 0;
};

}  // namespace

CurvatureEstimate curv_monte_carlo(const DiscreteMeasure& mu, VectorRef x, double r, double p, double alpha,
                                   std::int64_t samples, std::uint64_t seed, SamplingStrategy strategy) {
  check_params(mu, x, r, p, alpha);
  if (samples < 2) throw InputError("Monte Carlo needs at least 2 samples");
  const int n = mu.intrinsic_dim();
  const int slots = n + 1;
  const double exponent = curvature_exponent(n, p, alpha);

  CurvatureEstimate est;
  est.method = CurvMethod::kMonteCarlo;
  est.p = p;
  est.alpha = alpha;

  RadialOrder order;
  {
    auto atoms = mu.ball_indices(x, r);
    std::vector<std::pair<double, Index>> keyed;
    keyed.reserve(atoms.size());
    for (Index i : atoms) keyed.emplace_back(std::sqrt(squared_distance(mu.point(i), x)), i);
    std::sort(keyed.begin(), keyed.end());
    double running = 0.0;
    for (const auto& [d, i] : keyed) {
      order.atoms.push_back(i);
      order.dist.push_back(d);
      running += mu.weight(i);
      order.cumulative.push_back(running);
    }
  }
  if (order.atoms.empty()) {
    est.empty_ball = true;
    return est;
  }
  const std::size_t count = order.atoms.size();

  std::vector<Stratum> strata;
  auto prefix_end = [&](double radius) {
    return static_cast<std::size_t>(std::upper_bound(order.dist.begin(), order.dist.end(), radius) -
                                    order.dist.begin());
  };
  if (strategy == SamplingStrategy::kUniform) {
    Stratum s;
    s.inner = s.outer = count;
    s.innermost = true;
    s.mass = std::pow(order.mass(0, count), slots);
    strata.push_back(s);
  } else {
    double smallest_positive = std::numeric_limits<double>::infinity();
    for (double d : order.dist)
      if (d > 0.0) smallest_positive = std::min(smallest_positive, d);
    double outer_radius = r;
    for (int level = 0; level < 64; ++level) {
      const double inner_radius = 0.5 * outer_radius;
      const std::size_t outer = prefix_end(outer_radius);
      const bool last = level == 63 || inner_radius < smallest_positive;
      if (last) {
        Stratum s;
        s.inner = s.outer = outer;
        s.innermost = true;
        s.mass = std::pow(order.mass(0, outer), slots);
        if (outer > 0) strata.push_back(s);
        break;
      }
      const std::size_t inner = prefix_end(inner_radius);
      if (outer > inner) {
        Stratum s;
        s.inner = inner;
        s.outer = outer;
        const double wi = order.mass(0, inner);
        const double wa = order.mass(inner, outer);
        const double wo = order.mass(0, outer);
        // P(first annulus coordinate at position j) ~ wi^j * wa * wo^(n-j).
        ExactSum total;
        std::vector<double> terms(static_cast<std::size_t>(slots));
        for (int j = 0; j < slots; ++j) {
          terms[static_cast<std::size_t>(j)] = std::pow(wi, j) * wa * std::pow(wo, slots - 1 - j);
          total.add(terms[static_cast<std::size_t>(j)]);
        }
        s.mass = total.value();
        double acc = 0.0;
        for (double t : terms) {
          acc += t;
          s.position_cdf.push_back(acc / s.mass);
        }
        strata.push_back(s);
      }
      outer_radius = inner_radius;
    }
  }

  ExactSum mass_total;
  for (const auto& s : strata) mass_total.add(s.mass);
  const double total_mass = mass_total.value();
  std::vector<Stratum*> live;
  for (auto& s : strata)
    if (s.mass > 0.0) live.push_back(&s);
  if (live.empty() || !(total_mass > 0.0)) {
    est.empty_ball = true;
    return est;
  }

  // Proportional allocation, largest remainder, at least 2 per stratum when possible.
  {
    const std::int64_t floor_each = samples >= 2 * static_cast<std::int64_t>(live.size()) ? 2 : 0;
    const std::int64_t spread = samples - floor_each * static_cast<std::int64_t>(live.size());
    std::vector<std::pair<double, std::size_t>> remainders;
    std::int64_t assigned = 0;
    for (std::size_t k = 0; k < live.size(); ++k) {
      const double share = static_cast<double>(spread) * (live[k]->mass / total_mass);
      const auto whole = static_cast<std::int64_t>(std::floor(share));
      live[k]->samples = floor_each + whole;
      assigned += whole;
      remainders.emplace_back(share - static_cast<double>(whole), k);
    }
    std::stable_sort(remainders.begin(), remainders.end(),
                     [](const auto& a, const auto& b) { return a.first > b.first; });
    for (std::size_t k = 0; assigned < spread; ++k, ++assigned) live[remainders[k % remainders.size()].second]->samples++;
  }

  const Index m = mu.ambient_dim();
  ExactSum estimate;
  ExactSum variance;
  std::int64_t evaluated = 0;
  for (std::size_t sk = 0; sk < live.size(); ++sk) {
    const Stratum& s = *live[sk];
    const auto ns = static_cast<std::size_t>(s.samples);
    if (ns == 0) continue;
    std::vector<double> values(ns);
    constexpr std::size_t kChunk = 2048;
    parallel_chunks(ns, kChunk, [&](std::size_t begin, std::size_t end, std::size_t) {
      Matrix vertices(m, slots + 1);
      vertices.col(0) = x;
      for (std::size_t i = begin; i < end; ++i) {
        RngStream rng(seed, static_cast<std::uint64_t>(i), static_cast<std::uint32_t>(sk));
        int first_annulus = -1;
        if (!s.innermost) {
          const double u = rng.uniform();
          first_annulus = static_cast<int>(
              std::upper_bound(s.position_cdf.begin(), s.position_cdf.end() - 1, u) - s.position_cdf.begin());
        }
        for (int j = 0; j < slots; ++j) {
          std::size_t lo = 0, hi = s.outer;
          if (first_annulus >= 0) {
            if (j < first_annulus) hi = s.inner;
            else if (j == first_annulus) lo = s.inner;
          }
          const std::size_t pick = order.draw(lo, hi, rng.uniform());
          vertices.col(j + 1) = mu.point(order.atoms[pick]);
        }
        values[i] = simplex_integrand(vertices, p, exponent);
      }
    });
    const double mean = exact_sum(values) / static_cast<double>(ns);
    ExactSum sq;
    for (double v : values) sq.add((v - mean) * (v - mean));
    const double var = ns > 1 ? sq.value() / static_cast<double>(ns - 1) : 0.0;
    estimate.add(s.mass * mean);
    variance.add(s.mass * s.mass * var / static_cast<double>(ns));
    evaluated += s.samples;
  }
  est.value = estimate.value();
  est.std_error = std::sqrt(std::max(variance.value(), 0.0));
  est.tuples_evaluated = evaluated;
  est.strata = static_cast<int>(live.size());
  return est;
}

CurvatureEstimate curv_estimate(const DiscreteMeasure& mu, VectorRef x, double r, double p, double alpha,
                                const CurvOptions& options) {
  switch (options.method) {
    case CurvMethodChoice::kExhaustive:
      return curv_exhaustive(mu, x, r, p, alpha, options.budget);
    case CurvMethodChoice::kMonteCarlo:
      return curv_monte_carlo(mu, x, r, p, alpha, options.samples, options.seed, options.strategy);
    case CurvMethodChoice::kAuto:
      break;
  }
  check_params(mu, x, r, p, alpha);
  const auto in_ball = static_cast<long double>(mu.ball_indices(x, r).size());
  const long double tuples = std::pow(in_ball, mu.intrinsic_dim() + 1);
  if (tuples <= static_cast<long double>(options.budget)) return curv_exhaustive(mu, x, r, p, alpha, options.budget);
  return curv_monte_carlo(mu, x, r, p, alpha, options.samples, options.seed, options.strategy);
}

CurvatureProfile curv_profile(const DiscreteMeasure& mu, VectorRef x, double p, double alpha,
                              const ScaleConfig& scales, const CurvOptions& options) {
  CurvatureProfile out;
  out.profile.radii = scales.radii();
  out.profile.alpha = alpha;
  out.profile.ratio = scales.ratio;
  for (double r : out.profile.radii) {
    out.estimates.push_back(curv_estimate(mu, x, r, p, alpha, options));
    out.profile.values.push_back(out.estimates.back().value);
  }
  return out;
}

}  // namespace rectiscope
