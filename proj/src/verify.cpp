#include "rectiscope/verify.hpp"

#include <algorithm>
#include <cmath>
#include <limits>
#include <string>

#include "rectiscope/curvature.hpp"
#include "rectiscope/error.hpp"
#include "rectiscope/geometry.hpp"
#include "rectiscope/io.hpp"
#include "rectiscope/numerics.hpp"

namespace rectiscope {

InequalityCase make_case(std::string label, double lhs, double rhs, double constant) {
  InequalityCase c;
  c.label = std::move(label);
  c.lhs = lhs;
  c.rhs = rhs;
  c.constant = constant;
  c.pass = lhs <= rhs;
  c.margin = lhs == 0.0 ? (rhs >= 0.0 ? std::numeric_limits<double>::infinity() : 0.0) : rhs / lhs;
  return c;
}

InequalityCase skipped_case(std::string label, std::string reason) {
  InequalityCase c;
  c.label = std::move(label);
  c.skipped = true;
  c.note = std::move(reason);
  c.lhs = c.rhs = c.constant = c.margin = std::numeric_limits<double>::quiet_NaN();
  return c;
}

InequalityCase trivial_case(std::string label, std::string reason) {
  InequalityCase c = make_case(std::move(label), 0.0, 0.0, std::numeric_limits<double>::quiet_NaN());
  c.note = "lhs is 0; " + reason;
  return c;
}

void InequalityReport::add(InequalityCase c) {
  if (c.skipped) {
    ++skipped;
  } else {
    c.pass ? ++passed : ++failed;
    const bool worse = !worst || !(cases[*worst].margin <= c.margin);
    if (worse) worst = cases.size();
  }
  cases.push_back(std::move(c));
}

namespace {

std::string scale_label(const char* prefix, double r) { return std::string(prefix) + " r=" + format_double(r); }

struct ScaleSetup {
  SecantFrame frame;
  std::vector<std::vector<Index>> slots;  // y_1..y_n slots, then z
  double delta = 0.0;
  double constant = 0.0;
  double constant_theory = 0.0;
  std::string skip_reason;
  bool frame_failed = false;  // precondition held but no admissible frame
};

double theory_constant(const SecantConstants& t, int n) {
  const int e = n * n + n + 2;
  return std::pow(2.0 / t.delta, 2.0 * n) * std::ldexp(1.0, e) / std::pow(t.c2, n);
}

ScaleSetup prepare_scale(const DiscreteMeasure& mu, VectorRef x, double r, const SecantConfig& cfg, SecantMode mode) {
  ScaleSetup s;
  const int n = mu.intrinsic_dim();
  SecantResult res;
  try {
    res = find_secant_frame(mu, x, r, cfg, mode);
  } catch (const PreconditionError& e) {
    s.skip_reason = e.what();
    return s;
  }
  if (!res.success) {
    s.frame_failed = true;
    s.skip_reason = "secant frame failed:";
    for (auto f : res.failures) s.skip_reason += " " + to_string(f);
    return s;
  }
  s.frame = res.frame;
  const int e = n * n + n + 2;
  s.constant_theory = theory_constant(s.frame.theory, n);
  if (mode == SecantMode::kEmpirical) {
    s.delta = s.frame.delta;
    double prod = 1.0;
    for (double mass : s.frame.masses) prod *= mass;
    s.constant = std::pow(2.0 / s.delta, 2.0 * n) * std::ldexp(1.0, e) * std::pow(r, n * n) / prod;
  } else {
    s.delta = s.frame.theory.delta;
    s.constant = s.constant_theory;
  }
  for (Index i = 0; i < n; ++i) {
    std::vector<Index> slot;
    for (Index a : mu.ball_indices(s.frame.points.col(i), s.frame.ball_radius())) {
      if (in_closed_ball(mu.point(a), x, r)) slot.push_back(a);
    }
    s.slots.push_back(std::move(slot));
  }
  s.slots.push_back(mu.ball_indices(x, r));
  return s;
}

// Pointwise audit of dist(z, aff{x, y}) <= (2/delta)^n h_min on sampled (y, z).
std::pair<std::int64_t, std::int64_t> audit_height_claim(const DiscreteMeasure& mu, VectorRef x, const ScaleSetup& s,
                                                          std::int64_t samples, std::uint64_t seed,
                                                          std::uint32_t scale_index) {
  const Index n = static_cast<Index>(s.slots.size()) - 1;
  std::int64_t stated = 0;
  std::int64_t sharp = 0;
  Matrix ys(mu.ambient_dim(), n);
  for (std::int64_t k = 0; k < samples; ++k) {
    RngStream rng(seed, static_cast<std::uint64_t>(k), scale_index);
    for (Index i = 0; i < n; ++i) {
      const auto& slot = s.slots[static_cast<std::size_t>(i)];
      ys.col(i) = mu.point(slot[rng.below(slot.size())]);
    }
    const auto& ball = s.slots.back();
    const Vector z = mu.point(ball[rng.below(ball.size())]);
    const HeightBoundCheck h = dist_vs_hmin_bound(x, z, ys, s.delta);
    if (!h.pass) ++stated;
    if (!h.sharp_pass) ++sharp;
  }
  return {stated, sharp};
}

}  // namespace

InequalityReport check_beta_vs_curv(const DiscreteMeasure& mu, VectorRef x, const SecantConfig& cfg,
                                    const std::vector<double>& radii, const ChainOptions& options) {
  InequalityReport report;
  report.name = "beta-curv";
  report.measure_hash = mu.content_hash();
  report.seed = options.seed;
  const int n = mu.intrinsic_dim();
  const int e = n * n + n + 2;
  report.constants = {{"n", n}, {"exponent", e}, {"lambda", cfg.lambda}, {"c0", cfg.c0},
                      {"k_exponent", cfg.k_exponent}};
  report.notes.push_back("mode " + to_string(options.mode));

  std::uint32_t scale_index = 0;
  for (double r : radii) {
    const std::string label = scale_label("scale", r);
    const ScaleSetup s = prepare_scale(mu, x, r, cfg, options.mode);
    const double lhs = s.frame_failed ? beta2_centered(mu, x, r).objective : 0.0;
    if (!s.skip_reason.empty()) {
      report.add(s.frame_failed && lhs == 0.0 ? trivial_case(label, s.skip_reason)
                                              : skipped_case(label, s.skip_reason));
      ++scale_index;
      continue;
    }
    const TupleSum local = weighted_tuple_sum(mu, x, s.slots, 2.0, e, options.budget);
    InequalityCase c = make_case(label, beta2_centered(mu, x, r).objective, s.constant * local.value, s.constant);
    c.extras = {{"r", r},
                {"delta", s.delta},
                {"eta", s.frame.eta},
                {"localized_sum", local.value},
                {"tuples", static_cast<double>(local.tuples)},
                {"constant_theoretical", s.constant_theory}};
    if (options.full_ball) {
      const double full = curv_exhaustive(mu, x, r, 2.0, 0.0, options.budget).value;
      c.extras.emplace_back("rhs_full_ball", s.constant * full);
      c.extras.emplace_back("full_ball_pass", c.lhs <= s.constant * full ? 1.0 : 0.0);
    }
    if (options.audit_samples > 0) {
      const auto [stated, sharp] = audit_height_claim(mu, x, s, options.audit_samples, options.seed, scale_index);
      c.extras.emplace_back("height_audit_samples", static_cast<double>(options.audit_samples));
      c.extras.emplace_back("height_audit_violations", static_cast<double>(stated));
      c.extras.emplace_back("height_audit_violations_4_over_delta", static_cast<double>(sharp));
    }
    report.add(std::move(c));
    ++scale_index;
  }
  return report;
}

InequalityReport check_jones_vs_curv(const DiscreteMeasure& mu, VectorRef x, double alpha, const SecantConfig& cfg,
                                     const JonesChainOptions& options) {
  if (!(alpha >= 0.0 && alpha < 1.0)) throw InputError("jones-curv: alpha must lie in [0, 1)");
  if (options.scale_count < 1) throw InputError("jones-curv: scale count must be positive");
  InequalityReport report;
  report.name = "jones-curv";
  report.measure_hash = mu.content_hash();
  report.seed = options.seed;
  const int n = mu.intrinsic_dim();
  const int e = n * n + n + 2;
  report.notes.push_back("mode " + to_string(options.mode));
  report.notes.push_back("C_delta = 1 (sums compared with sums)");

  double delta_ref = 0.0;
  try {
    const SecantResult ref = find_secant_frame(mu, x, 1.0, cfg, options.mode);
    delta_ref = options.mode == SecantMode::kEmpirical ? ref.frame.delta : ref.frame.theory.delta;
  } catch (const PreconditionError& err) {
    report.add(skipped_case("reference scale r=1", err.what()));
    return report;
  }
  if (!(delta_ref > 0.0)) {
    report.add(skipped_case("reference scale r=1", "degenerate reference frame"));
    return report;
  }
  const double rho = delta_ref / 3.0;
  const double dyadic = std::pow(2.0, 2.0 * alpha);
  report.constants = {{"n", n},          {"alpha", alpha},         {"delta_ref", delta_ref}, {"ratio", rho},
                      {"lambda", cfg.lambda}, {"c0", cfg.c0}, {"k_exponent", cfg.k_exponent}, {"c_delta", 1.0}};

  ExactSum lhs_total;
  ExactSum union_sum;
  double c_max = 0.0;
  int evaluated = 0;
  std::vector<SecantFrame> frames;
  for (int j = 0; j < options.scale_count; ++j) {
    const double r = std::pow(rho, j);
    const std::string label = scale_label("scale", r);
    const ScaleSetup s = prepare_scale(mu, x, r, cfg, options.mode);
    if (!s.skip_reason.empty()) {
      const bool trivial = s.frame_failed && beta2_centered(mu, x, r).objective == 0.0;
      report.add(trivial ? trivial_case(label, s.skip_reason) : skipped_case(label, s.skip_reason));
      continue;
    }
    const double term = beta2_centered(mu, x, r).objective / std::pow(r, 2.0 * alpha);
    const TupleSum local = weighted_tuple_sum(mu, x, s.slots, 2.0, e + 2.0 * alpha, options.budget);
    InequalityCase c = make_case(label, term, s.constant * dyadic * local.value, s.constant * dyadic);
    c.extras = {{"r", r}, {"delta", s.delta}, {"localized_sum", local.value}};
    report.add(std::move(c));
    lhs_total.add(term);
    union_sum.add(local.value);
    c_max = std::max(c_max, s.constant);
    frames.push_back(s.frame);
    ++evaluated;
  }
  if (evaluated == 0) return report;

  int overlapping = 0;
  for (std::size_t a = 0; a < frames.size(); ++a) {
    for (std::size_t b = a + 1; b < frames.size(); ++b) {
      bool disjoint = false;
      const double reach = frames[a].ball_radius() + frames[b].ball_radius();
      for (Index i = 0; i < frames[a].points.cols(); ++i) {
        if (std::sqrt(squared_distance(frames[a].points.col(i), frames[b].points.col(i))) > reach) disjoint = true;
      }
      if (!disjoint) ++overlapping;
    }
  }
  const double curv = curv_exhaustive(mu, x, 1.0, 2.0, alpha, options.budget).value;
  InequalityCase total = make_case("sum over scales", lhs_total.value(), c_max * dyadic * curv, c_max * dyadic);
  total.extras = {{"curv", curv},
                  {"union_sum", union_sum.value()},
                  {"scales_evaluated", evaluated},
                  {"overlapping_frame_pairs", overlapping}};
  if (overlapping > 0) total.note = "some product balls overlap across scales";
  report.add(std::move(total));
  return report;
}

InequalityCase holder_sum_check(const ScaleProfile& betas, double p, double alpha) {
  if (!(p > 2.0) || !std::isfinite(p)) throw InputError("holder: p must exceed 2");
  if (!(alpha > 0.0 && alpha <= 1.0)) throw InputError("holder: alpha must lie in (0, 1]");
  betas.validate();
  const double delta = std::log(1.0 / betas.ratio);
  ExactSum lhs;
  ExactSum weighted;
  ExactSum radial;
  for (std::size_t j = 0; j < betas.radii.size(); ++j) {
    const double b = betas.values[j];
    const double r = betas.radii[j];
    if (!(b >= 0.0)) throw InputError("holder: beta values must be nonnegative");
    lhs.add(b * b * delta);
    weighted.add(std::pow(b / std::pow(r, alpha), p) * delta);
    radial.add(std::pow(r, 2.0 * p * alpha / (p - 2.0)) * delta);
  }
  const double constant = std::pow(radial.value(), (p - 2.0) / p);
  InequalityCase c = make_case("holder sum", lhs.value(), constant * std::pow(weighted.value(), 2.0 / p), constant);
  c.extras = {{"p", p}, {"alpha", alpha}, {"delta_log", delta}};
  return c;
}

InequalityReport check_holder_chain(const DiscreteMeasure& mu, VectorRef x, double p, double alpha,
                                    const ScaleConfig& scales) {
  InequalityReport report;
  report.name = "holder";
  report.measure_hash = mu.content_hash();
  report.constants = {{"p", p}, {"alpha", alpha}, {"ratio", scales.ratio}};
  ScaleProfile profile;
  profile.radii = scales.radii();
  profile.ratio = scales.ratio;
  profile.alpha = alpha;
  const double n = mu.intrinsic_dim();
  std::vector<InequalityCase> moments(profile.radii.size());
  profile.values.resize(profile.radii.size());
  parallel_for(profile.radii.size(), [&](std::size_t j) {
    const double r = profile.radii[j];
    const BetaResult b2 = beta2(mu, x, r);
    const BetaResult bp = beta_p(mu, x, r, p);
    profile.values[j] = b2.value;
    const double factor = std::pow(b2.mass / std::pow(r, n), 0.5 - 1.0 / p);
    moments[j] = make_case(scale_label("moment", r), b2.value, factor * bp.value, factor);
  });
  report.add(holder_sum_check(profile, p, alpha));
  for (auto& c : moments) report.add(std::move(c));
  return report;
}

InequalityReport check_beta_ordering(const DiscreteMeasure& mu, std::span<const Index> centers,
                                     const std::vector<double>& radii, const std::vector<double>& low_ps,
                                     const std::vector<double>& high_ps) {
  for (double p : low_ps) {
    if (!(p >= 1.0 && p <= 2.0)) throw InputError("beta ordering: low exponents must lie in [1, 2]");
  }
  for (double p : high_ps) {
    if (!(p > 2.0) || !std::isfinite(p)) throw InputError("beta ordering: high exponents must exceed 2");
  }
  InequalityReport report;
  report.name = "beta-ordering";
  report.measure_hash = mu.content_hash();
  const double n = mu.intrinsic_dim();
  std::vector<std::vector<InequalityCase>> per_center(centers.size());
  parallel_for(centers.size(), [&](std::size_t ci) {
    const Index c = centers[ci];
    if (c < 0 || c >= mu.size()) throw InputError("beta ordering: center index out of range");
    const auto x = mu.point(c);
    for (double r : radii) {
      const std::string at = " c=" + std::to_string(c) + " r=" + format_double(r);
      const BetaResult b2 = beta2(mu, x, r);
      const BetaResult bh = beta2_centered(mu, x, r);
      per_center[ci].push_back(make_case("centered" + at, b2.value, bh.value, 1.0));
      for (double p : low_ps) {
        const BetaResult bp = beta_p(mu, x, r, p);
        InequalityCase k = make_case("p=" + format_double(p) + at, b2.objective, bp.objective, 1.0);
        k.extras = {{"rhs_with_factor", std::pow(2.0, 2.0 - p) * bp.objective}};
        per_center[ci].push_back(std::move(k));
      }
      for (double p : high_ps) {
        const BetaResult bp = beta_p(mu, x, r, p);
        const double factor = std::pow(b2.mass / std::pow(r, n), 0.5 - 1.0 / p);
        per_center[ci].push_back(make_case("moment p=" + format_double(p) + at, b2.value, factor * bp.value, factor));
      }
    }
  });
  for (auto& list : per_center) {
    for (auto& c : list) report.add(std::move(c));
  }
  return report;
}

InequalityReport check_volume_identity(int trials, int max_dim, int m, std::uint64_t seed, double tolerance) {
  if (trials < 1) throw InputError("volume identity: trials must be positive");
  if (max_dim < 1 || max_dim + 1 > m) throw InputError("volume identity: need 1 <= max_dim < m");
  InequalityReport report;
  report.name = "volume";
  report.seed = seed;
  report.constants = {{"trials", trials}, {"max_dim", max_dim}, {"m", m}, {"tolerance", tolerance}};
  for (int k = 1; k <= max_dim; ++k) {
    std::vector<double> worst(static_cast<std::size_t>(trials), 0.0);
    std::vector<double> worst_hmin(static_cast<std::size_t>(trials), 0.0);
    parallel_chunks(static_cast<std::size_t>(trials), 64, [&](std::size_t begin, std::size_t end, std::size_t) {
      for (std::size_t t = begin; t < end; ++t) {
        RngStream rng(seed, t, static_cast<std::uint32_t>(k));
        Matrix v(m, k + 2);
        for (Index c = 0; c < v.cols(); ++c) {
          for (Index d = 0; d < m; ++d) v(d, c) = rng.normal();
        }
        const double target = (k + 1) * simplex_volume(v);
        double dev = 0.0;
        double best_h = std::numeric_limits<double>::infinity();
        double best_face = 0.0;
        for (Index w = 0; w < v.cols(); ++w) {
          const Matrix face = remove_column(v, w);
          const double h = dist_to_affine(v.col(w), affine_hull(face));
          const double vol = simplex_volume(face);
          dev = std::max(dev, std::abs(h * vol - target) / target);
          if (h < best_h) {
            best_h = h;
            best_face = vol;
          }
        }
        worst[t] = dev;
        worst_hmin[t] = std::abs(h_min(v) * best_face - target) / target;
      }
    });
    const double dev = *std::max_element(worst.begin(), worst.end());
    const double dev_h = *std::max_element(worst_hmin.begin(), worst_hmin.end());
    InequalityCase c = make_case("k=" + std::to_string(k), std::max(dev, dev_h), tolerance, tolerance);
    c.extras = {{"max_rel_dev_vertices", dev}, {"max_rel_dev_hmin", dev_h}};
    report.add(std::move(c));
  }
  return report;
}

}  // namespace rectiscope
