#include "rectiscope/secant.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rectiscope/error.hpp"
#include "rectiscope/geometry.hpp"
#include "rectiscope/numerics.hpp"

namespace rectiscope {

void SecantConfig::validate() const {
  if (!(lambda > 0.0) || !std::isfinite(lambda)) throw InputError("secant: lambda must be positive");
  if (!(c0 > 0.0) || !std::isfinite(c0)) throw InputError("secant: C0 must be positive");
  if (lambda > c0) throw InputError("secant: lambda cannot exceed the upper-regularity constant C0");
  if (k_exponent < 1) throw InputError("secant: k exponent must be a positive integer");
  if (n < 1 || m < n) throw InputError("secant: need 1 <= n <= m");
}

SecantConstants theoretical_constants(const SecantConfig& cfg) {
  cfg.validate();
  const double delta = cfg.lambda / (std::ldexp(1.0, cfg.k_exponent + 2) * std::pow(5.0, cfg.n - 1) * cfg.c0);
  const double eta = delta / (10.0 * cfg.n);
  const double c2 = cfg.lambda * std::pow(eta, cfg.m) / std::ldexp(1.0, cfg.m + 1);
  return {delta, eta, c2};
}

std::string to_string(SecantMode mode) { return mode == SecantMode::kTheoretical ? "theoretical" : "empirical"; }

std::string to_string(SecantFailure failure) {
  switch (failure) {
    case SecantFailure::kNoCandidate:
      return "no_candidate";
    case SecantFailure::kHeightBound:
      return "height_bound";
    case SecantFailure::kBallMass:
      return "ball_mass";
  }
  return "unknown";
}

namespace {

// (mu restricted to B(x, r))(B(center, radius)).
double restricted_mass(const DiscreteMeasure& mu, VectorRef x, double r, VectorRef center, double radius) {
  ExactSum s;
  for (Index i : mu.ball_indices(center, radius)) {
    if (in_closed_ball(mu.point(i), x, r)) s.add(mu.weight(i));
  }
  return s.value();
}

Matrix frame_vertices(VectorRef x, const Matrix& points) {
  Matrix v(x.size(), points.cols() + 1);
  v.col(0) = x;
  v.rightCols(points.cols()) = points;
  return v;
}

void fill_masses(SecantFrame& frame, const DiscreteMeasure& mu) {
  frame.masses.clear();
  for (Index i = 0; i < frame.points.cols(); ++i) {
    frame.masses.push_back(restricted_mass(mu, frame.x, frame.r, frame.points.col(i), frame.ball_radius()));
  }
}

}  // namespace

SecantResult find_secant_frame(const DiscreteMeasure& mu, VectorRef x, double r, const SecantConfig& cfg_in,
                               SecantMode mode) {
  SecantConfig cfg = cfg_in;
  cfg.n = mu.intrinsic_dim();
  cfg.m = mu.ambient_dim();
  cfg.validate();
  if (x.size() != cfg.m) throw InputError("secant: center has the wrong dimension");
  if (!(r > 0.0)) throw InputError("secant: radius must be positive");
  const int n = cfg.n;
  const double rn = std::pow(r, n);
  const double ball = mu.ball_mass(x, r);
  if (ball < cfg.lambda * rn) {
    throw PreconditionError("secant: mu(B(x,r)) = " + std::to_string(ball) + " is below lambda r^n = " +
                            std::to_string(cfg.lambda * rn));
  }

  SecantResult result;
  SecantFrame& frame = result.frame;
  frame.x = x;
  frame.r = r;
  frame.mode = mode;
  frame.theory = theoretical_constants(cfg);
  frame.points.resize(cfg.m, n);

  const auto atoms = mu.ball_indices(x, r);
  const double probe_radius = 5.0 * frame.theory.eta * r;
  std::vector<double> probe_mass(atoms.size(), -1.0);
  auto mass_at = [&](std::size_t k) {
    if (probe_mass[k] < 0.0) probe_mass[k] = restricted_mass(mu, x, r, mu.point(atoms[k]), probe_radius);
    return probe_mass[k];
  };
  const double mass_floor = frame.theory.c2 * rn;

  Matrix chosen(cfg.m, 1);
  chosen.col(0) = x;
  for (int i = 0; i < n; ++i) {
    const AffineSubspace hull = affine_hull(chosen);
    double best_score = -1.0;
    std::ptrdiff_t best = -1;
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      const double d = dist_to_affine(mu.point(atoms[k]), hull);
      double score = 0.0;
      if (mode == SecantMode::kTheoretical) {
        if (mass_at(k) < mass_floor) continue;
        score = d;
      } else {
        score = d * mass_at(k);
      }
      if (score > best_score) {
        best_score = score;
        best = static_cast<std::ptrdiff_t>(k);
      }
    }
    Vector pick = x;
    if (best < 0 || !(best_score > 0.0)) {
      if (std::find(result.failures.begin(), result.failures.end(), SecantFailure::kNoCandidate) ==
          result.failures.end()) {
        result.failures.push_back(SecantFailure::kNoCandidate);
      }
    }
    if (best >= 0) {
      pick = mu.point(atoms[static_cast<std::size_t>(best)]);
      frame.atoms.push_back(atoms[static_cast<std::size_t>(best)]);
    } else {
      frame.atoms.push_back(-1);
    }
    frame.points.col(i) = pick;
    chosen.conservativeResize(Eigen::NoChange, chosen.cols() + 1);
    chosen.col(chosen.cols() - 1) = pick;
  }

  frame.delta = h_min(frame_vertices(x, frame.points)) / r;
  if (mode == SecantMode::kTheoretical) {
    frame.delta_bound = frame.theory.delta;
    frame.eta = frame.theory.eta;
  } else {
    frame.delta_bound = frame.delta;
    frame.eta = frame.delta / (10.0 * n);
  }
  fill_masses(frame, mu);

  if (mode == SecantMode::kTheoretical) {
    if (frame.delta < frame.theory.delta) result.failures.push_back(SecantFailure::kHeightBound);
    for (double mass : frame.masses) {
      if (mass < mass_floor) {
        result.failures.push_back(SecantFailure::kBallMass);
        break;
      }
    }
    result.success = result.failures.empty();
  } else {
    // Empirical mode always returns its best frame; a degenerate one is flagged.
    result.success = frame.delta > 0.0;
    if (!result.success && result.failures.empty()) result.failures.push_back(SecantFailure::kHeightBound);
  }
  return result;
}

SecantFrame with_eta(const SecantFrame& frame, const DiscreteMeasure& mu, double eta) {
  SecantFrame out = frame;
  out.eta = eta;
  fill_masses(out, mu);
  return out;
}

namespace {

Vector uniform_in_ball(RngStream& rng, VectorRef center, double radius) {
  const Index m = center.size();
  Vector dir(m);
  double norm = 0.0;
  do {
    for (Index d = 0; d < m; ++d) dir(d) = rng.normal();
    norm = dir.norm();
  } while (norm == 0.0);
  const double rho = radius * std::pow(rng.uniform(), 1.0 / static_cast<double>(m));
  return center + (rho / norm) * dir;
}

}  // namespace

FrameReport verify_frame_conclusions(const SecantFrame& frame, const DiscreteMeasure& mu, const SecantConfig& cfg,
                                     std::int64_t samples, std::uint64_t seed) {
  FrameReport report;
  const Index n = frame.points.cols();
  const double target = 0.5 * frame.delta_bound * frame.r;
  const double radius = frame.ball_radius();

  std::vector<double> heights(static_cast<std::size_t>(samples));
  std::vector<Matrix> tuples(static_cast<std::size_t>(samples));
  parallel_chunks(static_cast<std::size_t>(samples), 1024, [&](std::size_t begin, std::size_t end, std::size_t) {
    Matrix vertices(frame.x.size(), n + 1);
    vertices.col(0) = frame.x;
    for (std::size_t s = begin; s < end; ++s) {
      RngStream rng(seed, static_cast<std::uint64_t>(s));
      for (Index i = 0; i < n; ++i) vertices.col(i + 1) = uniform_in_ball(rng, frame.points.col(i), radius);
      heights[s] = h_min(vertices);
      tuples[s] = vertices.rightCols(n);
    }
  });
  report.tuples_checked = samples;
  report.min_height_ratio = std::numeric_limits<double>::infinity();
  for (std::size_t s = 0; s < heights.size(); ++s) {
    report.min_height_ratio = std::min(report.min_height_ratio, target > 0.0 ? heights[s] / target : 0.0);
    if (heights[s] < target || !(target > 0.0)) {
      ++report.height_violations;
      if (report.counterexamples.size() < 5) report.counterexamples.push_back(tuples[s]);
    }
  }

  const double inner_r = frame.delta_bound * frame.r / 3.0;
  if (!(inner_r > 0.0)) {
    report.disjoint_note = "delta is zero; no inner scale";
  } else {
    try {
      const SecantResult inner = find_secant_frame(mu, frame.x, inner_r, cfg, frame.mode);
      // delta and eta are shared by both scales.
      const SecantFrame f2 = with_eta(inner.frame, mu, frame.eta);
      const double r1 = frame.ball_radius();
      const double r2 = f2.ball_radius();
      for (Index i = 0; i < n; ++i) {
        const double sep = std::sqrt(squared_distance(frame.points.col(i), f2.points.col(i)));
        if (sep > r1 + r2) ++report.disjoint_components;
      }
      report.disjoint = report.disjoint_components > 0;
      if (!inner.success) report.disjoint_note = "inner-scale frame did not meet its own conclusions";
    } catch (const PreconditionError& e) {
      report.disjoint_note = std::string("inner scale not evaluable: ") + e.what();
    }
  }
  report.pass = report.height_violations == 0 && report.disjoint.value_or(true);
  return report;
}

HeightBoundCheck dist_vs_hmin_bound(VectorRef x, VectorRef z, const Matrix& ys, double delta) {
  if (!(delta > 0.0)) throw InputError("dist_vs_hmin_bound: delta must be positive");
  const Index n = ys.cols();
  Matrix simplex(x.size(), n + 2);
  simplex.col(0) = x;
  simplex.col(1) = z;
  simplex.rightCols(n) = ys;
  const Matrix secant = remove_column(simplex, 1);

  HeightBoundCheck out;
  const double factor = std::pow(2.0 / delta, static_cast<double>(n));
  out.ratio_bound = factor;
  out.lhs = dist_to_affine(z, affine_hull(secant));
  out.rhs = factor * h_min(simplex);
  // Below the rank tolerance z counts as lying on the secant plane.
  const double slack = factor * kRankTolerance * diameter(simplex);
  out.pass = out.lhs <= out.rhs + slack;
  const double sharp = std::pow(4.0 / delta, static_cast<double>(n));
  out.sharp_rhs = sharp * h_min(simplex);
  out.sharp_pass = out.lhs <= out.sharp_rhs + sharp * kRankTolerance * diameter(simplex);

  Index w0 = 0;
  double best = std::numeric_limits<double>::infinity();
  for (Index i = 0; i < simplex.cols(); ++i) {
    const double h = dist_to_affine(simplex.col(i), affine_hull(remove_column(simplex, i)));
    if (h < best) {
      best = h;
      w0 = i;
    }
  }
  const double vol_z = simplex_volume(secant);
  const double vol_w0 = simplex_volume(remove_column(simplex, w0));
  out.volume_ratio = vol_z > 0.0 ? vol_w0 / vol_z : std::numeric_limits<double>::infinity();
  out.ratio_pass = out.volume_ratio <= factor;
  return out;
}

}  // namespace rectiscope
