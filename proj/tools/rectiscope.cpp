#include <chrono>
#include <cstdio>
#include <fstream>
#include <functional>
#include <iostream>
#include <memory>
#include <sstream>
#include <string>
#include <vector>

#include <CLI11.hpp>
#include <json.hpp>

#include "rectiscope/beta.hpp"
#include "rectiscope/config.hpp"
#include "rectiscope/curvature.hpp"
#include "rectiscope/density.hpp"
#include "rectiscope/error.hpp"
#include "rectiscope/generators.hpp"
#include "rectiscope/io.hpp"
#include "rectiscope/numerics.hpp"
#include "rectiscope/secant.hpp"
#include "rectiscope/verify.hpp"

namespace rs = rectiscope;
using ojson = nlohmann::ordered_json;

namespace {

constexpr const char* kVersion = "0.1.0";

struct UsageError : std::runtime_error {
  using std::runtime_error::runtime_error;
};
struct VerificationFailure : std::runtime_error {
  using std::runtime_error::runtime_error;
};

ojson num(double v) { return std::isfinite(v) ? ojson(v) : ojson(rs::format_double(v)); }

std::string hex64(std::uint64_t v) {
  char buf[19];
  std::snprintf(buf, sizeof buf, "0x%016llx", static_cast<unsigned long long>(v));
  return buf;
}

ojson named_values(const rs::NamedValues& values) {
  ojson out = ojson::object();
  for (const auto& [k, v] : values) out[k] = num(v);
  return out;
}

ojson measure_json(const rs::DiscreteMeasure& mu) {
  return {{"hash", hex64(mu.content_hash())},
          {"atoms", mu.size()},
          {"ambient_dim", mu.ambient_dim()},
          {"intrinsic_dim", mu.intrinsic_dim()},
          {"total_mass", num(mu.total_mass())}};
}

ojson report_json(const rs::InequalityReport& r) {
  ojson cases = ojson::array();
  for (const auto& c : r.cases) {
    ojson j = {{"label", c.label}, {"skipped", c.skipped}};
    if (!c.skipped) {
      j["lhs"] = num(c.lhs);
      j["rhs"] = num(c.rhs);
      j["constant"] = num(c.constant);
      j["margin"] = num(c.margin);
      j["pass"] = c.pass;
    }
    if (!c.note.empty()) j["note"] = c.note;
    if (!c.extras.empty()) j["extras"] = named_values(c.extras);
    cases.push_back(std::move(j));
  }
  ojson out = {{"name", r.name},       {"pass", r.pass()},        {"passed", r.passed},
               {"failed", r.failed},   {"skipped", r.skipped},    {"measure_hash", hex64(r.measure_hash)},
               {"seed", r.seed},       {"constants", named_values(r.constants)}};
  out["worst_case"] = r.worst ? ojson(r.cases[*r.worst].label) : ojson(nullptr);
  out["notes"] = r.notes;
  out["cases"] = std::move(cases);
  return out;
}

class Output {
 public:
  explicit Output(const std::string& path) {
    if (!path.empty()) {
      file_ = std::make_unique<std::ofstream>(path, std::ios::binary);
      if (!*file_) throw rs::InputError("cannot open output file " + path);
    }
  }
  std::ostream& stream() { return file_ ? *file_ : std::cout; }
  void close() {
    if (file_) {
      file_->close();
      if (!*file_) throw rs::InputError("failed writing output file");
    }
  }

 private:
  std::unique_ptr<std::ofstream> file_;
};

class Runner {
 public:
  explicit Runner(rs::RunConfig cfg) : cfg_(std::move(cfg)) {}

  void run() {
    const auto start = std::chrono::steady_clock::now();
    ojson results;
    const std::string& c = cfg_.command;
    if (c == "generate") results = generate();
    else if (c == "beta") results = beta();
    else if (c == "curv") results = curv();
    else if (c == "jones") results = jones();
    else if (c == "secant") results = secant();
    else if (c == "density") results = density();
    else if (c == "chop") results = chop();
    else if (c == "verify") results = verify();
    else if (c == "report") results = report();
    else throw UsageError("unknown command " + c);

    ojson summary = {{"schema_version", rs::kSchemaVersion},
                     {"tool", "rectiscope"},
                     {"version", kVersion},
                     {"command", c},
                     {"config", rs::to_json(cfg_)}};
    if (mu_) summary["measure"] = measure_json(*mu_);
    summary["results"] = std::move(results);
    if (cfg_.timing) {
      summary["timing"] = {{"seconds", std::chrono::duration<double>(std::chrono::steady_clock::now() - start).count()},
                           {"threads", rs::worker_count()}};
    }
    if (!cfg_.summary.empty()) {
      Output out(cfg_.summary);
      out.stream() << summary.dump(2) << '\n';
      out.close();
    } else if (c == "verify" || c == "secant") {
      std::cout << summary.dump(2) << '\n';
    }
    if (failed_) throw VerificationFailure(failed_message_);
  }

 private:
  const rs::DiscreteMeasure& measure() {
    if (!mu_) {
      if (cfg_.input.empty()) throw UsageError(cfg_.command + ": --input is required");
      mu_ = std::make_unique<rs::DiscreteMeasure>(rs::read_measure(cfg_.input, cfg_.n));
    }
    return *mu_;
  }

  std::vector<rs::Index> centers() { return rs::select_centers(cfg_.centers, measure().size(), cfg_.seed); }

  rs::ScaleConfig scales() const { return {cfg_.r0, cfg_.ratio, cfg_.scales}; }

  rs::SecantMode secant_mode() const {
    if (cfg_.mode == "empirical") return rs::SecantMode::kEmpirical;
    if (cfg_.mode == "theoretical") return rs::SecantMode::kTheoretical;
    throw rs::InputError("mode must be empirical or theoretical");
  }

  ojson generate() {
    rs::GeneratorSpec spec;
    spec.kind = rs::parse_generator_kind(cfg_.kind);
    spec.n = cfg_.n;
    spec.m = cfg_.m;
    spec.count = cfg_.count;
    spec.level = cfg_.level;
    spec.alpha = cfg_.alpha;
    spec.noise = cfg_.noise;
    spec.seed = cfg_.seed;
    spec.weights = rs::parse_weight_scheme(cfg_.weights);
    mu_ = std::make_unique<rs::DiscreteMeasure>(rs::generate(spec));
    if (cfg_.output.empty()) {
      rs::write_csv(std::cout, *mu_);
    } else {
      rs::write_measure(cfg_.output, *mu_);
    }
    return {{"atoms", mu_->size()}};
  }

  ojson beta() {
    const auto& mu = measure();
    const auto idx = centers();
    const auto radii = scales().radii();
    if (!(cfg_.p >= 1.0)) throw rs::InputError("p must be at least 1");
    std::vector<std::string> blocks(idx.size());
    std::vector<int> unconverged(idx.size(), 0);
    rs::parallel_for(idx.size(), [&](std::size_t c) {
      const auto x = mu.point(idx[c]);
      std::ostringstream out;
      rs::ExactSum partial;
      for (double r : radii) {
        rs::BetaResult b;
        if (cfg_.p == 2.0) {
          b = cfg_.centered ? rs::beta2_centered(mu, x, r) : rs::beta2(mu, x, r);
        } else {
          rs::BetaPOptions opt;
          opt.centered = cfg_.centered;
          b = rs::beta_p(mu, x, r, cfg_.p, opt);
          if (!b.converged) ++unconverged[c];
        }
        partial.add(std::pow(b.value / std::pow(r, cfg_.alpha), cfg_.p));
        out << idx[c] << ',' << rs::format_double(r) << ',' << rs::format_double(b.value) << ','
            << rs::format_double(partial.value()) << '\n';
      }
      blocks[c] = out.str();
    });
    Output out(cfg_.output);
    out.stream() << "center_index,r_j,beta,jones_partial\n";
    for (const auto& b : blocks) out.stream() << b;
    out.close();
    int total_unconverged = 0;
    for (int u : unconverged) total_unconverged += u;
    return {{"centers", idx.size()}, {"scales", radii.size()}, {"unconverged_fits", total_unconverged}};
  }

  ojson curv() {
    const auto& mu = measure();
    const auto idx = centers();
    rs::CurvOptions opt;
    if (cfg_.method == "auto") opt.method = rs::CurvMethodChoice::kAuto;
    else if (cfg_.method == "exhaustive") opt.method = rs::CurvMethodChoice::kExhaustive;
    else if (cfg_.method == "mc") opt.method = rs::CurvMethodChoice::kMonteCarlo;
    else throw rs::InputError("method must be auto, exhaustive or mc");
    if (cfg_.strategy == "annulus") opt.strategy = rs::SamplingStrategy::kAnnulusStratified;
    else if (cfg_.strategy == "uniform") opt.strategy = rs::SamplingStrategy::kUniform;
    else throw rs::InputError("strategy must be annulus or uniform");
    opt.budget = cfg_.budget;
    opt.samples = cfg_.samples;
    opt.seed = cfg_.seed;
    Output out(cfg_.output);
    out.stream() << "center_index,r,value,std_error,method,tuples\n";
    for (rs::Index i : idx) {
      const auto e = rs::curv_estimate(mu, mu.point(i), cfg_.r, cfg_.p, cfg_.alpha, opt);
      out.stream() << i << ',' << rs::format_double(cfg_.r) << ',' << rs::format_double(e.value) << ','
                   << rs::format_double(e.std_error) << ',' << rs::to_string(e.method) << ',' << e.tuples_evaluated
                   << '\n';
    }
    out.close();
    return {{"centers", idx.size()}};
  }

  ojson jones() {
    const auto& mu = measure();
    const auto idx = centers();
    const auto sc = scales();
    std::optional<double> gamma;
    if (cfg_.dini_gamma > 0.0) gamma = cfg_.dini_gamma;
    const auto variant = cfg_.centered ? rs::JonesVariant::kCentered : rs::JonesVariant::kUncentered;
    std::vector<double> values(idx.size());
    rs::parallel_for(idx.size(), [&](std::size_t c) {
      values[c] = rs::jones_function(mu, mu.point(idx[c]), cfg_.alpha, sc, variant, gamma).value;
    });
    Output out(cfg_.output);
    out.stream() << "center_index,alpha,scales,value\n";
    for (std::size_t c = 0; c < idx.size(); ++c) {
      out.stream() << idx[c] << ',' << rs::format_double(cfg_.alpha) << ',' << sc.count << ','
                   << rs::format_double(values[c]) << '\n';
    }
    out.close();
    return {{"centers", idx.size()}};
  }

  ojson secant() {
    const auto& mu = measure();
    if (cfg_.x_index < 0 || cfg_.x_index >= mu.size()) throw rs::InputError("x-index out of range");
    const auto x = mu.point(cfg_.x_index);
    const auto res = rs::find_secant_frame(mu, x, cfg_.r, cfg_.secant, secant_mode());
    const auto& f = res.frame;
    ojson points = ojson::array();
    for (rs::Index i = 0; i < f.points.cols(); ++i) {
      ojson p = ojson::array();
      for (rs::Index d = 0; d < f.points.rows(); ++d) p.push_back(num(f.points(d, i)));
      points.push_back(std::move(p));
    }
    ojson masses = ojson::array();
    for (double m : f.masses) masses.push_back(num(m));
    ojson failures = ojson::array();
    for (auto fl : res.failures) failures.push_back(rs::to_string(fl));
    const auto check = rs::verify_frame_conclusions(f, mu, cfg_.secant, cfg_.frame_samples, cfg_.seed);
    ojson verification = {{"tuples_checked", check.tuples_checked},
                          {"height_violations", check.height_violations},
                          {"min_height_ratio", num(check.min_height_ratio)},
                          {"disjoint", check.disjoint ? ojson(*check.disjoint) : ojson(nullptr)},
                          {"disjoint_components", check.disjoint_components},
                          {"pass", check.pass}};
    if (!check.disjoint_note.empty()) verification["disjoint_note"] = check.disjoint_note;
    ojson out = {{"x_index", cfg_.x_index},
                 {"r", num(f.r)},
                 {"mode", rs::to_string(f.mode)},
                 {"success", res.success},
                 {"failures", failures},
                 {"atoms", f.atoms},
                 {"points", points},
                 {"delta", num(f.delta)},
                 {"delta_bound", num(f.delta_bound)},
                 {"eta", num(f.eta)},
                 {"ball_radius", num(f.ball_radius())},
                 {"masses", masses},
                 {"theoretical",
                  {{"delta", num(f.theory.delta)}, {"eta", num(f.theory.eta)}, {"c2", num(f.theory.c2)}}},
                 {"k_exponent", cfg_.secant.k_exponent},
                 {"verification", verification}};
    if (!cfg_.output.empty()) {
      Output o(cfg_.output);
      o.stream() << out.dump(2) << '\n';
      o.close();
    }
    return out;
  }

  ojson density() {
    const auto& mu = measure();
    const auto idx = centers();
    const auto sc = scales();
    std::vector<rs::DensityProfile> profiles(idx.size());
    rs::parallel_for(idx.size(), [&](std::size_t c) { profiles[c] = rs::density_profile(mu, mu.point(idx[c]), sc); });
    Output out(cfg_.output);
    out.stream() << "center_index,r,mass,ratio\n";
    double upper = 0.0;
    double lower = std::numeric_limits<double>::infinity();
    for (std::size_t c = 0; c < idx.size(); ++c) {
      const auto& p = profiles[c];
      for (std::size_t j = 0; j < p.radii.size(); ++j) {
        out.stream() << idx[c] << ',' << rs::format_double(p.radii[j]) << ',' << rs::format_double(p.masses[j])
                     << ',' << rs::format_double(p.ratios[j]) << '\n';
      }
      upper = std::max(upper, p.upper_est);
      lower = std::min(lower, p.lower_est);
    }
    out.close();
    return {{"centers", idx.size()},
            {"upper_regularity_estimate", num(upper)},
            {"lower_density_estimate", num(lower)},
            {"note", "finite-scale estimates, not limits"}};
  }

  ojson chop() {
    const auto& mu = measure();
    if (cfg_.output.empty()) throw UsageError("chop: --output is required");
    rs::ChopOptions opt;
    opt.levels = cfg_.chop_levels;
    const auto kept = rs::chop_indices(mu, cfg_.k, opt);
    const auto radii = rs::chop_radii(mu, cfg_.k, opt);
    const rs::DiscreteMeasure out = rs::chop(mu, cfg_.k, opt);
    rs::write_measure(cfg_.output, out);
    return {{"k", cfg_.k},
            {"kept", kept.size()},
            {"dropped", mu.size() - static_cast<rs::Index>(kept.size())},
            {"kept_mass", num(out.total_mass())},
            {"tested_radii", radii.size()}};
  }

  ojson verify() {
    static const std::vector<std::string> kSuites = {"beta-curv", "holder", "jones-curv", "volume"};
    std::vector<std::string> suites;
    if (cfg_.suite == "all") {
      suites = kSuites;
    } else if (std::find(kSuites.begin(), kSuites.end(), cfg_.suite) != kSuites.end()) {
      suites = {cfg_.suite};
    } else {
      throw rs::InputError("unknown suite " + cfg_.suite);
    }
    ojson reports = ojson::array();
    int failures = 0;
    auto record = [&](const rs::InequalityReport& r, const std::string& label) {
      ojson j = report_json(r);
      j["label"] = label;
      if (!r.pass()) ++failures;
      reports.push_back(std::move(j));
    };
    for (const auto& suite : suites) {
      if (suite == "volume") {
        record(rs::check_volume_identity(cfg_.volume_trials, cfg_.volume_max_dim, cfg_.volume_m, cfg_.seed), suite);
        continue;
      }
      const auto& mu = measure();
      for (rs::Index i : centers()) {
        const auto x = mu.point(i);
        const std::string label = suite + " center=" + std::to_string(i);
        if (suite == "beta-curv") {
          rs::ChainOptions opt;
          opt.mode = secant_mode();
          opt.seed = cfg_.seed;
          opt.budget = cfg_.budget;
          record(rs::check_beta_vs_curv(mu, x, cfg_.secant, scales().radii(), opt), label);
        } else if (suite == "jones-curv") {
          rs::JonesChainOptions opt;
          opt.mode = secant_mode();
          opt.seed = cfg_.seed;
          opt.budget = cfg_.budget;
          opt.scale_count = cfg_.jones_scales;
          record(rs::check_jones_vs_curv(mu, x, cfg_.alpha, cfg_.secant, opt), label);
        } else {
          record(rs::check_holder_chain(mu, x, cfg_.holder_p, cfg_.holder_alpha, scales()), label);
        }
      }
    }
    if (failures > 0) {
      failed_ = true;
      failed_message_ = std::to_string(failures) + " report(s) failed";
    }
    return {{"pass", failures == 0}, {"failed_reports", failures}, {"reports", std::move(reports)}};
  }

  ojson report() {
    const auto& mu = measure();
    const auto idx = centers();
    const auto radii = scales().radii();
    const double n = mu.intrinsic_dim();
    std::vector<std::string> blocks(idx.size());
    rs::parallel_for(idx.size(), [&](std::size_t c) {
      const auto x = mu.point(idx[c]);
      std::ostringstream out;
      rs::ExactSum jones;
      for (double r : radii) {
        const auto b = rs::beta2(mu, x, r);
        const auto bh = rs::beta2_centered(mu, x, r);
        jones.add(b.objective / std::pow(r, 2.0 * cfg_.alpha));
        const double ratio = mu.ball_mass(x, r) / std::pow(r, n);
        const std::pair<const char*, double> rows[] = {
            {"beta2", b.value}, {"beta2_centered", bh.value}, {"density_ratio", ratio}, {"jones_partial", jones.value()}};
        for (const auto& [q, v] : rows) {
          out << idx[c] << ',' << rs::format_double(r) << ',' << q << ',' << rs::format_double(v) << '\n';
        }
      }
      blocks[c] = out.str();
    });
    Output out(cfg_.output);
    out.stream() << "center_index,r,quantity,value\n";
    for (const auto& b : blocks) out.stream() << b;
    out.close();
    return {{"centers", idx.size()}, {"scales", radii.size()}};
  }

  rs::RunConfig cfg_;
  std::unique_ptr<rs::DiscreteMeasure> mu_;
  bool failed_ = false;
  std::string failed_message_;
};

struct Binding {
  CLI::App* sub;
  CLI::Option* option;
  std::function<void(const rs::RunConfig&, rs::RunConfig&)> copy;
};

class Cli {
 public:
  Cli() : app_("rectiscope: multiscale flatness, curvature and density diagnostics for weighted point clouds") {
    app_.require_subcommand(1);
    app_.set_version_flag("--version", kVersion);

    auto* gen = sub("generate", "Write a synthetic measure");
    opt(gen, "--kind", &rs::RunConfig::kind, "plane|lipschitz_graph|holder_graph|circle|cantor4|perturbed_plane");
    opt(gen, "--n", &rs::RunConfig::n, "intrinsic dimension");
    opt(gen, "--m", &rs::RunConfig::m, "ambient dimension");
    opt(gen, "--count", &rs::RunConfig::count, "number of points");
    opt(gen, "--level", &rs::RunConfig::level, "cantor4 level");
    opt(gen, "--alpha", &rs::RunConfig::alpha, "Hoelder exponent of holder_graph");
    opt(gen, "--noise", &rs::RunConfig::noise, "perturbed_plane noise amplitude");
    opt(gen, "--weights", &rs::RunConfig::weights, "uniform|area");
    opt(gen, "--seed", &rs::RunConfig::seed, "seed");
    opt(gen, "--output", &rs::RunConfig::output, "output path (.csv, or .rsc/.bin for binary)");
    opt(gen, "--summary", &rs::RunConfig::summary, "JSON summary path");

    auto* beta = sub("beta", "beta numbers and Jones partial sums per center and scale");
    measure_opts(beta);
    scale_opts(beta);
    opt(beta, "--p", &rs::RunConfig::p, "exponent p >= 1");
    opt(beta, "--alpha", &rs::RunConfig::alpha, "Jones weight exponent");
    flag(beta, "--centered", &rs::RunConfig::centered, "planes through the center");

    auto* curv = sub("curv", "Menger-type curvature curv^alpha_{mu;p}(x, r)");
    measure_opts(curv);
    opt(curv, "--p", &rs::RunConfig::p, "exponent p");
    opt(curv, "--alpha", &rs::RunConfig::alpha, "alpha");
    opt(curv, "--r", &rs::RunConfig::r, "radius");
    opt(curv, "--method", &rs::RunConfig::method, "auto|exhaustive|mc");
    opt(curv, "--strategy", &rs::RunConfig::strategy, "annulus|uniform");
    opt(curv, "--samples", &rs::RunConfig::samples, "Monte Carlo samples");
    opt(curv, "--budget", &rs::RunConfig::budget, "tuple budget for exhaustive evaluation");

    auto* jones = sub("jones", "Jones square function per center");
    measure_opts(jones);
    scale_opts(jones);
    opt(jones, "--alpha", &rs::RunConfig::alpha, "alpha");
    opt(jones, "--dini-gamma", &rs::RunConfig::dini_gamma, "Dini exponent (alpha = 1 only)");
    flag(jones, "--centered", &rs::RunConfig::centered, "use centered beta numbers");

    auto* secant = sub("secant", "Secant frame at one center");
    measure_opts(secant);
    opt(secant, "--x-index", &rs::RunConfig::x_index, "center atom");
    opt(secant, "--r", &rs::RunConfig::r, "radius");
    secant_opts(secant);
    opt(secant, "--frame-samples", &rs::RunConfig::frame_samples, "sampled tuples for the conclusions");

    auto* density = sub("density", "Density ratios mu(B(x,r))/r^n");
    measure_opts(density);
    scale_opts(density);

    auto* chop = sub("chop", "Restrict to the discrete E_k set");
    opt(chop, "--input", &rs::RunConfig::input, "input measure");
    opt(chop, "--n", &rs::RunConfig::n, "intrinsic dimension");
    opt(chop, "--k", &rs::RunConfig::k, "density level k");
    opt(chop, "--levels", &rs::RunConfig::chop_levels, "number of dyadic radii T");
    opt(chop, "--output", &rs::RunConfig::output, "output measure");
    opt(chop, "--summary", &rs::RunConfig::summary, "JSON summary path");

    auto* verify = sub("verify", "Inequality-chain verification");
    measure_opts(verify, "--report");
    scale_opts(verify);
    secant_opts(verify);
    opt(verify, "--suite", &rs::RunConfig::suite, "all|beta-curv|jones-curv|holder|volume");
    opt(verify, "--alpha", &rs::RunConfig::alpha, "alpha for jones-curv");
    opt(verify, "--jones-scales", &rs::RunConfig::jones_scales, "scale count for jones-curv");
    opt(verify, "--holder-p", &rs::RunConfig::holder_p, "p > 2 for the Hoelder suite");
    opt(verify, "--holder-alpha", &rs::RunConfig::holder_alpha, "alpha for the Hoelder suite");
    opt(verify, "--trials", &rs::RunConfig::volume_trials, "volume identity trials per dimension");
    opt(verify, "--max-dim", &rs::RunConfig::volume_max_dim, "largest face dimension for the volume suite");
    opt(verify, "--ambient", &rs::RunConfig::volume_m, "ambient dimension for the volume suite");
    opt(verify, "--budget", &rs::RunConfig::budget, "tuple budget");

    auto* report = sub("report", "Long-format multiscale table (beta, centered beta, density, Jones)");
    measure_opts(report);
    scale_opts(report);
    opt(report, "--alpha", &rs::RunConfig::alpha, "Jones weight exponent");
  }

  int main(int argc, char** argv) {
    try {
      app_.parse(argc, argv);
    } catch (const CLI::ParseError& e) {
      const int code = app_.exit(e);
      return code == 0 ? 0 : 1;
    }
    CLI::App* active = nullptr;
    for (auto* s : app_.get_subcommands()) active = s;
    rs::RunConfig cfg = cli_;
    if (!config_path_.empty()) {
      cfg = rs::load_run_config(config_path_);
      for (const auto& b : bindings_) {
        if (b.sub == active && b.option->count() > 0) b.copy(cli_, cfg);
      }
    }
    cfg.command = active->get_name();
    Runner(cfg).run();
    return 0;
  }

 private:
  CLI::App* sub(const std::string& name, const std::string& desc) {
    auto* s = app_.add_subcommand(name, desc);
    s->add_option("--config", config_path_, "JSON config file; explicit flags win");
    flag(s, "--timing", &rs::RunConfig::timing, "include wall-clock timing in the summary");
    return s;
  }

  template <typename T>
  void opt(CLI::App* s, const std::string& name, T rs::RunConfig::*field, const std::string& desc) {
    CLI::Option* o = s->add_option(name, cli_.*field, desc);
    bindings_.push_back({s, o, [field](const rs::RunConfig& from, rs::RunConfig& to) { to.*field = from.*field; }});
  }

  template <typename T>
  void secant_field(CLI::App* s, const std::string& name, T rs::SecantConfig::*field, const std::string& desc) {
    CLI::Option* o = s->add_option(name, cli_.secant.*field, desc);
    bindings_.push_back(
        {s, o, [field](const rs::RunConfig& from, rs::RunConfig& to) { to.secant.*field = from.secant.*field; }});
  }

  void flag(CLI::App* s, const std::string& name, bool rs::RunConfig::*field, const std::string& desc) {
    CLI::Option* o = s->add_flag(name, cli_.*field, desc);
    bindings_.push_back({s, o, [field](const rs::RunConfig& from, rs::RunConfig& to) { to.*field = from.*field; }});
  }

  void measure_opts(CLI::App* s, const std::string& summary_flag = "--summary") {
    opt(s, "--input", &rs::RunConfig::input, "input measure (CSV or binary)");
    opt(s, "--n", &rs::RunConfig::n, "intrinsic dimension");
    opt(s, "--centers", &rs::RunConfig::centers, "all|sample:K|index:i,j|file:PATH");
    opt(s, "--seed", &rs::RunConfig::seed, "seed");
    opt(s, "--output", &rs::RunConfig::output, "output path (default stdout)");
    opt(s, summary_flag, &rs::RunConfig::summary, "JSON summary path");
  }

  void scale_opts(CLI::App* s) {
    opt(s, "--r0", &rs::RunConfig::r0, "largest radius");
    opt(s, "--ratio", &rs::RunConfig::ratio, "radius ratio between scales");
    opt(s, "--scales", &rs::RunConfig::scales, "number of scales");
  }

  void secant_opts(CLI::App* s) {
    secant_field(s, "--lambda", &rs::SecantConfig::lambda, "lower mass constant");
    secant_field(s, "--c0", &rs::SecantConfig::c0, "upper regularity constant");
    secant_field(s, "--k", &rs::SecantConfig::k_exponent, "exponent k in the delta formula");
    opt(s, "--mode", &rs::RunConfig::mode, "empirical|theoretical");
  }

  CLI::App app_;
  rs::RunConfig cli_;
  std::string config_path_;
  std::vector<Binding> bindings_;
};

}  // namespace

int main(int argc, char** argv) {
  try {
    Cli cli;
    return cli.main(argc, argv);
  } catch (const UsageError& e) {
    std::cerr << "rectiscope: usage error: " << e.what() << '\n';
    return 1;
  } catch (const rs::BudgetError& e) {
    std::cerr << "rectiscope: budget exceeded: " << e.what() << '\n';
    return 3;
  } catch (const VerificationFailure& e) {
    std::cerr << "rectiscope: verification failed: " << e.what() << '\n';
    return 4;
  } catch (const rs::InputError& e) {
    std::cerr << "rectiscope: input error: " << e.what() << '\n';
    return 2;
  } catch (const std::exception& e) {
    std::cerr << "rectiscope: error: " << e.what() << '\n';
    return 2;
  }
}
