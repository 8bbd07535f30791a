#include "rectiscope/beta.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <numeric>
#include <string>

#include <Eigen/Eigenvalues>
#include <Eigen/QR>

#include "rectiscope/error.hpp"
#include "rectiscope/numerics.hpp"

namespace rectiscope {

std::vector<double> ScaleConfig::radii() const {
  validate();
  std::vector<double> out(static_cast<std::size_t>(count));
  for (int j = 0; j < count; ++j) out[static_cast<std::size_t>(j)] = r0 * std::pow(ratio, j);
  return out;
}

void ScaleConfig::validate() const {
  if (!(r0 > 0.0) || !std::isfinite(r0)) throw InputError("scale r0 must be positive");
  if (!(ratio > 0.0 && ratio < 1.0)) throw InputError("scale ratio must lie in (0, 1)");
  if (count < 1) throw InputError("scale count must be at least 1");
}

void ScaleProfile::validate() const {
  if (radii.size() != values.size()) throw InputError("scale profile: radii and values differ in length");
  for (std::size_t j = 1; j < radii.size(); ++j) {
    if (!(radii[j] < radii[j - 1])) throw InputError("scale profile: radii must be strictly decreasing");
  }
}

double beta_objective(const DiscreteMeasure& mu, std::span<const Index> atoms, double r,
                      const AffineSubspace& plane, double p) {
  const int n = mu.intrinsic_dim();
  ExactSum s;
  for (Index i : atoms) s.add(mu.weight(i) * std::pow(dist_to_affine(mu.point(i), plane) / r, p));
  return s.value() / std::pow(r, n);
}

namespace {

void check_query(const DiscreteMeasure& mu, VectorRef x, double r) {
  if (x.size() != mu.ambient_dim()) {
    throw InputError("center has dimension " + std::to_string(x.size()) + ", measure lives in R^" +
                     std::to_string(mu.ambient_dim()));
  }
  if (!(r > 0.0) || !std::isfinite(r)) throw InputError("radius must be positive and finite");
}

struct PlaneFit {
  AffineSubspace plane;
  double residual = 0.0;  // sum of the m - n smallest eigenvalues
};

// Weighted PCA: plane through `anchor` (or the weighted centroid when no
// anchor is given) spanned by the top-n eigenvectors of the second moment.
PlaneFit fit_plane(const DiscreteMeasure& mu, std::span<const Index> atoms, std::span<const double> weights,
                   const Vector* anchor) {
  const int m = mu.ambient_dim();
  const int n = mu.intrinsic_dim();
  Vector base = Vector::Zero(m);
  if (anchor != nullptr) {
    base = *anchor;
  } else {
    ExactSum total;
    std::vector<ExactSum> first(static_cast<std::size_t>(m));
    for (std::size_t k = 0; k < atoms.size(); ++k) {
      total.add(weights[k]);
      for (int d = 0; d < m; ++d) first[static_cast<std::size_t>(d)].add(weights[k] * mu.points()(d, atoms[k]));
    }
    const double mass = total.value();
    for (int d = 0; d < m; ++d) base(d) = first[static_cast<std::size_t>(d)].value() / mass;
  }
  Matrix moment = Matrix::Zero(m, m);
  for (std::size_t k = 0; k < atoms.size(); ++k) {
    const Vector rel = mu.point(atoms[k]) - base;
    moment.noalias() += weights[k] * rel * rel.transpose();
  }
  Eigen::SelfAdjointEigenSolver<Matrix> eig(moment);
  Vector values = eig.eigenvalues();  // ascending
  const double top = std::max(values(m - 1), 0.0);
  // Eigenvalues at rounding level of the largest one carry no information.
  const double floor = 8.0 * m * std::numeric_limits<double>::epsilon() * top;
  ExactSum residual;
  for (int d = 0; d < m - n; ++d) {
    if (values(d) > floor) residual.add(values(d));
  }
  Matrix frame = eig.eigenvectors().rightCols(n);
  return {AffineSubspace(std::move(base), std::move(frame)), residual.value()};
}

BetaResult empty_result(const DiscreteMeasure& mu, VectorRef x, double p, bool centered) {
  BetaResult out;
  Matrix frame = Matrix::Identity(mu.ambient_dim(), mu.intrinsic_dim());
  out.plane = AffineSubspace(Vector(x), std::move(frame));
  out.p = p;
  out.centered = centered;
  out.empty_ball = true;
  return out;
}

BetaResult exact_beta2(const DiscreteMeasure& mu, VectorRef x, double r, bool centered) {
  check_query(mu, x, r);
  const auto atoms = mu.ball_indices(x, r);
  if (atoms.empty()) return empty_result(mu, x, 2.0, centered);
  std::vector<double> w(atoms.size());
  for (std::size_t k = 0; k < atoms.size(); ++k) w[k] = mu.weight(atoms[k]);
  const Vector anchor = x;
  PlaneFit fit = fit_plane(mu, atoms, w, centered ? &anchor : nullptr);
  BetaResult out;
  out.objective = fit.residual / std::pow(r, mu.intrinsic_dim() + 2);
  out.value = std::sqrt(out.objective);
  out.plane = std::move(fit.plane);
  out.p = 2.0;
  out.centered = centered;
  out.atoms = static_cast<Index>(atoms.size());
  out.mass = mu.mass_of(atoms);
  return out;
}

AffineSubspace random_plane(const DiscreteMeasure& mu, std::span<const Index> atoms, RngStream& rng,
                            const Vector* anchor) {
  const int m = mu.ambient_dim();
  const int n = mu.intrinsic_dim();
  Vector base = anchor != nullptr ? *anchor : Vector(mu.point(atoms[rng.below(atoms.size())]));
  Matrix g(m, std::max(n, 1));
  for (Index c = 0; c < g.cols(); ++c)
    for (Index d = 0; d < m; ++d) g(d, c) = rng.normal();
  Eigen::HouseholderQR<Matrix> qr(g);
  Matrix q = qr.householderQ() * Matrix::Identity(m, g.cols());
  return AffineSubspace(std::move(base), q.leftCols(n));
}

}  // namespace

BetaResult beta2(const DiscreteMeasure& mu, VectorRef x, double r) { return exact_beta2(mu, x, r, false); }

BetaResult beta2_centered(const DiscreteMeasure& mu, VectorRef x, double r) { return exact_beta2(mu, x, r, true); }

BetaResult beta_p(const DiscreteMeasure& mu, VectorRef x, double r, double p, const BetaPOptions& options) {
  check_query(mu, x, r);
  if (!(p >= 1.0) || !std::isfinite(p)) throw InputError("beta_p requires p in [1, inf)");
  const auto atoms = mu.ball_indices(x, r);
  if (atoms.empty()) return empty_result(mu, x, p, options.centered);

  const Vector anchor = x;
  const Vector* anchor_ptr = options.centered ? &anchor : nullptr;
  std::vector<double> w(atoms.size());
  for (std::size_t k = 0; k < atoms.size(); ++k) w[k] = mu.weight(atoms[k]);

  const double dist_floor = 1e-9 * r;
  std::vector<double> reweighted(atoms.size());

  struct Run {
    AffineSubspace plane;
    double objective;
    bool converged;
  };
  auto irls = [&](AffineSubspace plane) -> Run {
    double objective = beta_objective(mu, atoms, r, plane, p);
    Run best{plane, objective, false};
    if (objective == 0.0) return {plane, 0.0, true};
    for (int it = 0; it < options.max_iterations; ++it) {
      for (std::size_t k = 0; k < atoms.size(); ++k) {
        const double d = std::max(dist_to_affine(mu.point(atoms[k]), plane), dist_floor);
        reweighted[k] = w[k] * std::pow(d, p - 2.0);
      }
      PlaneFit fit = fit_plane(mu, atoms, reweighted, anchor_ptr);
      const double next = beta_objective(mu, atoms, r, fit.plane, p);
      if (next < best.objective) best = {fit.plane, next, best.converged};
      const bool done = std::fabs(objective - next) <= options.tolerance * std::max(objective, 1e-300);
      plane = std::move(fit.plane);
      objective = next;
      if (done || next == 0.0) {
        best.converged = true;
        break;
      }
    }
    return best;
  };

  Matrix coords(mu.ambient_dim(), static_cast<Index>(atoms.size()));
  for (std::size_t k = 0; k < atoms.size(); ++k) coords.col(static_cast<Index>(k)) = mu.point(atoms[k]);

  // Riemannian gradient descent with Armijo backtracking on F = sum w d^p.
  auto descend = [&](AffineSubspace plane) -> Run {
    const Index n = plane.dim();
    Vector c = plane.base();
    Matrix u = plane.frame();
    auto eval = [&](const Vector& cc, const Matrix& uu) {
      const Matrix rel = coords.colwise() - cc;
      const Matrix res = rel - uu * (uu.transpose() * rel);
      double f = 0.0;
      for (Index k = 0; k < res.cols(); ++k) f += w[static_cast<std::size_t>(k)] * std::pow(res.col(k).norm(), p);
      return f;
    };
    double f = eval(c, u);
    double step = -1.0;
    bool converged = f == 0.0;
    for (int it = 0; it < options.max_iterations && !converged; ++it) {
      const Matrix rel = coords.colwise() - c;
      const Matrix proj = u.transpose() * rel;
      const Matrix res = rel - u * proj;
      Vector gc = Vector::Zero(c.size());
      Matrix gu = Matrix::Zero(u.rows(), n);
      for (Index k = 0; k < res.cols(); ++k) {
        const double d = res.col(k).norm();
        if (d == 0.0) continue;
        const double coef = p * w[static_cast<std::size_t>(k)] * std::pow(d, p - 2.0);
        gc.noalias() -= coef * res.col(k);
        gu.noalias() -= coef * rel.col(k) * proj.col(k).transpose();
      }
      if (options.centered) gc.setZero();
      gu -= u * (u.transpose() * gu);
      const double g2 = gc.squaredNorm() + gu.squaredNorm();
      if (!(g2 > 0.0)) {
        converged = true;
        break;
      }
      if (step < 0.0) step = f / g2;
      bool accepted = false;
      for (int ls = 0; ls < 60; ++ls) {
        const Vector c2 = c - step * gc;
        Eigen::HouseholderQR<Matrix> qr(u - step * gu);
        const Matrix u2 = qr.householderQ() * Matrix::Identity(u.rows(), n);
        const double f2 = eval(c2, u2);
        if (f2 <= f - 1e-4 * step * g2) {
          converged = f - f2 <= options.tolerance * f;
          c = c2;
          u = u2;
          f = f2;
          accepted = true;
          step *= 2.0;
          break;
        }
        step *= 0.5;
      }
      if (!accepted) {
        converged = true;
        break;
      }
    }
    AffineSubspace out(std::move(c), std::move(u));
    const double objective = beta_objective(mu, atoms, r, out, p);
    return {std::move(out), objective, converged};
  };
  auto improve = [&](AffineSubspace plane) { return p > 2.0 ? descend(std::move(plane)) : irls(std::move(plane)); };

  BetaResult seed = exact_beta2(mu, x, r, options.centered);
  Run best = improve(seed.plane);
  if (p != 2.0) {
    for (int k = 0; k < options.restarts; ++k) {
      RngStream rng(options.seed, static_cast<std::uint64_t>(k));
      Run run = improve(random_plane(mu, atoms, rng, anchor_ptr));
      if (run.objective < best.objective) best = std::move(run);
    }
  }

  BetaResult out;
  out.objective = best.objective;
  out.value = std::pow(best.objective, 1.0 / p);
  out.plane = std::move(best.plane);
  out.p = p;
  out.centered = options.centered;
  out.converged = best.converged;
  out.atoms = static_cast<Index>(atoms.size());
  out.mass = mu.mass_of(atoms);
  return out;
}

JonesResult jones_function(const DiscreteMeasure& mu, VectorRef x, double alpha, const ScaleConfig& scales,
                           JonesVariant variant, std::optional<double> dini_gamma) {
  if (!(alpha >= 0.0 && alpha <= 1.0)) throw InputError("alpha must lie in [0, 1]");
  if (dini_gamma) {
    if (alpha != 1.0) throw InputError("the Dini-weighted Jones function is defined for alpha = 1 only");
    if (!(*dini_gamma > 0.0)) throw InputError("Dini exponent gamma must be positive");
  }
  const auto radii = scales.radii();
  if (dini_gamma && radii.front() > 1.0) throw InputError("Dini weighting needs every radius <= 1");

  JonesResult out;
  out.betas.radii = radii;
  out.betas.alpha = alpha;
  out.betas.ratio = scales.ratio;
  ExactSum running;
  for (double r : radii) {
    const BetaResult b = variant == JonesVariant::kCentered ? beta2_centered(mu, x, r) : beta2(mu, x, r);
    double denom = std::pow(r, 2.0 * alpha);
    if (dini_gamma) {
      // eta(1) = inf, so the r = 1 term vanishes.
      const double eta = std::pow(std::log(1.0 / r), -*dini_gamma);
      denom = (r * eta) * (r * eta);
    }
    const double term = b.objective == 0.0 ? 0.0 : b.objective / denom;
    running.add(term);
    out.betas.values.push_back(b.value);
    out.terms.push_back(term);
    out.partial_sums.push_back(running.value());
    out.empty.push_back(b.empty_ball);
  }
  out.value = running.value();
  return out;
}

}  // namespace rectiscope
