#include <cmath>
#include <cstdio>
#include <fstream>
#include <iostream>
#include <memory>
#include <optional>
#include <sstream>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "dno/activation.hpp"
#include "dno/analysis.hpp"
#include "dno/constructor.hpp"
#include "dno/corpus.hpp"
#include "dno/errors.hpp"
#include "dno/kernels.hpp"
#include "dno/rng.hpp"
#include "json.hpp"

namespace {

constexpr const char* kArtifactVersion = "0.1.0";

void write_file(const std::string& path, const std::string& content) {
  std::ofstream out(path, std::ios::binary);
  if (!out) throw dno::DataError("cannot open output file: " + path);
  out << content;
  if (!out) throw dno::DataError("failed writing output file: " + path);
}

struct CommonOptions {
  std::uint64_t seed = 1;
  std::string out;
  int grid_res = 10000;
  int random_points = 1000;
  std::string precision = "auto";  // auto | standard | extended
  std::string kernel = "auto";
};

void add_common(CLI::App* cmd, CommonOptions& opts, bool seed_required) {
  auto* seed_opt = cmd->add_option("--seed", opts.seed, "Random seed");
  if (seed_required) seed_opt->required();
  cmd->add_option("--out", opts.out, "Output file path");
  cmd->add_option("--grid-res", opts.grid_res, "Deterministic grid resolution");
  cmd->add_option("--random-points", opts.random_points,
                  "Seeded random sample count");
  cmd->add_option("--precision", opts.precision,
                  "Evaluation precision: standard|extended (default: by eps)")
      ->check(CLI::IsMember({"auto", "standard", "extended"}));
  cmd->add_option("--kernel", opts.kernel, "Kernel backend: auto|scalar|avx2")
      ->check(CLI::IsMember({"auto", "scalar", "avx2"}));
  cmd->fallthrough();
}

std::optional<dno::PrecisionMode> precision_override(const CommonOptions& opts) {
  if (opts.precision == "standard") return dno::PrecisionMode::standard;
  if (opts.precision == "extended") return dno::PrecisionMode::extended;
  return std::nullopt;
}

struct FunctionOptions {
  std::string fn = "linear-radial";
  int d = 2;
  double alpha = 1.0;
  double tau = 0.0;
  std::string manifest;
  std::string tabulated;
};

void add_function(CLI::App* cmd, FunctionOptions& opts, bool allow_tabulated) {
  cmd->add_option("--fn", opts.fn,
                  "Corpus selector (linear-radial|power-radial|shifted-abs-"
                  "radial|smooth-cos-radial|coordinate|bilinear), or an entry "
                  "id when --manifest is given");
  cmd->add_option("--d", opts.d, "Input dimension");
  cmd->add_option("--alpha", opts.alpha, "Profile exponent (power profiles)");
  cmd->add_option("--tau", opts.tau, "Injected radial defect");
  cmd->add_option("--manifest", opts.manifest,
                  "Manifest file defining named corpus entries");
  if (allow_tabulated) {
    cmd->add_option("--tabulated", opts.tabulated,
                    "Tabulated-values file (coordinates then value per line)");
  }
}

/// Resolves --fn against the manifest when one is given, otherwise against
/// the built-in corpus selectors.
dno::TestFunction resolve_function(const FunctionOptions& fn,
                                   std::uint64_t seed) {
  if (!fn.manifest.empty()) {
    for (auto& entry : dno::load_manifest(fn.manifest)) {
      if (entry.id == fn.fn) return std::move(entry);
    }
    throw dno::ConfigError("manifest has no entry named '" + fn.fn + "'");
  }
  return dno::corpus_by_name(fn.fn, fn.d, fn.alpha, fn.tau, seed);
}

nlohmann::ordered_json config_json(const CommonOptions& common,
                                   const FunctionOptions& fn) {
  nlohmann::ordered_json j;
  j["fn"] = fn.tabulated.empty() ? fn.fn : ("tabulated:" + fn.tabulated);
  j["d"] = fn.d;
  j["alpha"] = fn.alpha;
  j["tau"] = fn.tau;
  j["seed"] = common.seed;
  j["grid_res"] = common.grid_res;
  j["random_points"] = common.random_points;
  j["precision"] = common.precision;
  j["kernel"] = dno::kernels::active().name;
  return j;
}

int cmd_build(const CommonOptions& common, const FunctionOptions& fn, int n,
              double eps) {
  const dno::TestFunction f = resolve_function(fn, common.seed);
  const dno::DnoOperator op = dno::build_dno(f.evaluator, n, eps, f.d);
  const dno::LayeredNetwork flat = op.flatten();

  nlohmann::ordered_json j;
  j["format"] = "dno-operator-file";
  j["version"] = 1;
  j["artifact_version"] = kArtifactVersion;
  j["config"] = config_json(common, fn);
  j["config"]["n"] = n;
  j["config"]["eps"] = eps;
  j["sidecar"] = {{"n", op.n()},
                  {"eps", op.eps()},
                  {"d", op.d()},
                  {"nodes", op.nodes()},
                  {"samples", op.samples()}};
  j["norm_net"] = nlohmann::ordered_json::parse(op.norm_network().to_json());
  j["network"] = nlohmann::ordered_json::parse(flat.to_json());
  const std::string out = common.out.empty() ? "operator.json" : common.out;
  write_file(out, j.dump(2) + "\n");

  std::printf("nodes: %d\n", 4 * n + 1);
  std::printf("parameters: %lld\n",
              static_cast<long long>(flat.parameter_count()));
  std::printf("wrote %s\n", out.c_str());
  return 0;
}

int cmd_sweep(const CommonOptions& common, const FunctionOptions& fn,
              const std::vector<int>& n_values, std::optional<double> fixed_eps) {
  if (n_values.size() < 2)
    throw dno::ConfigError("sweep requires at least 2 n values");
  const dno::TestFunction f = resolve_function(fn, common.seed);

  dno::SweepConfig config;
  config.n_values = n_values;
  config.fixed_eps = fixed_eps;
  config.grid = {common.grid_res, common.random_points, common.seed};
  config.precision = precision_override(common);
  const dno::SweepResult result = dno::run_sweep(f, config);

  std::string csv;
  csv += "# artifact_version=" + std::string(kArtifactVersion) + "\n";
  csv += "# fn=" + f.id + " d=" + std::to_string(f.d) +
         " seed=" + std::to_string(common.seed) +
         " grid_res=" + std::to_string(common.grid_res) +
         " random_points=" + std::to_string(common.random_points) +
         " precision=" + common.precision + " kernel=" +
         dno::kernels::active().name + "\n";
  csv += result.to_csv();
  if (!common.out.empty()) {
    write_file(common.out, csv);
  } else {
    std::fputs(csv.c_str(), stdout);
  }

  if (result.has_bounds()) {
    for (std::size_t i = 0; i < result.n_values.size(); ++i) {
      if (result.sup_errors[i] > result.bounds[i]) {
        std::fprintf(stderr, "bound violated at n=%d: error %.6g > bound %.6g\n",
                     result.n_values[i], result.sup_errors[i], result.bounds[i]);
        return 1;
      }
    }
  }
  return 0;
}

int cmd_qualify(const CommonOptions& common, const FunctionOptions& fn,
                const std::vector<int>& n_values,
                const dno::QualificationThresholds& thresholds,
                int profile_samples) {
  dno::QualifyConfig config;
  config.n_values = n_values;
  config.grid = {common.grid_res, common.random_points, common.seed};
  config.thresholds = thresholds;
  config.seed = common.seed;
  config.profile_samples = profile_samples;
  config.precision = precision_override(common);

  int d = fn.d;
  dno::Sampler sampler;
  if (!fn.tabulated.empty()) {
    auto table = std::make_shared<dno::TabulatedFunction>(
        dno::TabulatedFunction::load(fn.tabulated, fn.d));
    config.interpolation = table->method();
    sampler = [table](std::span<const double> x) { return (*table)(x); };
  } else {
    const dno::TestFunction f = resolve_function(fn, common.seed);
    d = f.d;
    config.interpolation = "exact";
    sampler = f.evaluator;
  }

  const dno::QualificationReport report = dno::qualify(sampler, d, config);

  auto j = nlohmann::ordered_json::parse(report.to_json());
  nlohmann::ordered_json out;
  out["artifact_version"] = kArtifactVersion;
  out["config"] = config_json(common, fn);
  out["config"]["n_list"] = config.n_values;
  out["config"]["profile_samples"] = profile_samples;
  for (auto& [key, value] : j.items()) out[key] = value;
  const std::string text = out.dump(2) + "\n";
  if (!common.out.empty()) {
    write_file(common.out, text);
  } else {
    std::fputs(text.c_str(), stdout);
  }
  std::fprintf(stderr, "verdict_radial=%s verdict_smooth=%s alpha_hat=%.4f tau_hat=%.4f\n",
               report.verdict_radial.c_str(), report.verdict_smooth.c_str(),
               report.alpha_hat, report.tau_hat);
  return 0;
}

struct SuiteOutcome {
  std::string name;
  bool pass;
  std::string detail;
};

int cmd_verify(const CommonOptions& common, const std::string& suites_csv,
               bool sabotage_bell_sign) {
  std::vector<std::string> wanted;
  if (!suites_csv.empty()) {
    std::stringstream ss(suites_csv);
    std::string item;
    while (std::getline(ss, item, ',')) wanted.push_back(item);
  }
  auto selected = [&](const std::string& name) {
    if (wanted.empty()) return true;
    for (const auto& w : wanted)
      if (w == name) return true;
    return false;
  };

  std::vector<SuiteOutcome> outcomes;
  const dno::GridSpec grid{common.grid_res, common.random_points, common.seed};
  char detail[256];

  std::printf("# verify seed=%llu grid_res=%d random_points=%d kernel=%s\n",
              static_cast<unsigned long long>(common.seed), common.grid_res,
              common.random_points, dno::kernels::active().name);

  if (selected("partition")) {
    std::vector<double> weights(121, 1.0);
    if (sabotage_bell_sign) weights[60] = -1.0;
    dno::Rng rng(common.seed);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double t = rng.uniform(-5.0, 5.0);
      const double sum =
          dno::kernels::active().bell_comb(weights.data(), weights.size(), t + 60.0);
      worst = std::fmax(worst, std::fabs(sum - 1.0));
    }
    std::snprintf(detail, sizeof detail, "max |sum-1| = %.3e", worst);
    outcomes.push_back({"partition", worst < 1e-10, detail});
  }

  if (selected("normalization")) {
    const int steps = 48000;
    const double h = 120.0 / steps;
    double integral = dno::bell(-60.0) + dno::bell(60.0);
    for (int i = 1; i < steps; ++i) {
      integral += (i % 2 == 1 ? 4.0 : 2.0) * dno::bell(-60.0 + h * i);
    }
    integral *= h / 3.0;
    std::snprintf(detail, sizeof detail, "quadrature = %.12f", integral);
    outcomes.push_back({"normalization", std::fabs(integral - 1.0) < 1e-8, detail});
  }

  if (selected("decay")) {
    bool ok = true;
    double worst_ratio = 0.0;
    for (int i = 0; i <= 8000; ++i) {
      const double t = -40.0 + i / 100.0;
      const double envelope = dno::kBellEnvelope * std::exp(-std::fabs(t));
      if (dno::bell(t) > envelope * (1.0 + 1e-12) ||
          std::fabs(dno::bell_derivative(t)) > envelope * (1.0 + 1e-12)) {
        ok = false;
      }
      worst_ratio = std::fmax(worst_ratio, dno::bell(t) / envelope);
    }
    std::snprintf(detail, sizeof detail, "max bell/envelope = %.4f", worst_ratio);
    outcomes.push_back({"decay", ok, detail});
  }

  if (selected("square-net")) {
    bool ok = true;
    double worst = 0.0;
    for (double eps : {0.1, 0.02, 0.01}) {
      try {
        const auto net = dno::square_net(eps);
        const auto err = dno::sup_error(
            [](double t) { return t * t; },
            [&net](double t) { return net.evaluate(t); }, -1.0, 1.0, grid);
        worst = std::fmax(worst, err.value / eps);
        if (err.value > eps) ok = false;
      } catch (const std::exception& e) {
        ok = false;
      }
    }
    std::snprintf(detail, sizeof detail, "max error/eps = %.4f", worst);
    outcomes.push_back({"square-net", ok, detail});
  }

  if (selected("norm-net")) {
    bool ok = true;
    double worst = 0.0;
    for (int d : {1, 2, 5}) {
      const double eps = 0.01;
      const auto net = dno::norm_net(d, eps);
      double sup = 0.0;
      for (const auto& x : dno::halton_ball(d, 10000)) {
        double norm2 = 0.0;
        for (double xi : x) norm2 += xi * xi;
        sup = std::fmax(sup, std::fabs(net.evaluate(x) - norm2));
      }
      worst = std::fmax(worst, sup / (d * eps));
      if (sup > d * eps) ok = false;
    }
    std::snprintf(detail, sizeof detail, "max error/(d*eps) = %.4f", worst);
    outcomes.push_back({"norm-net", ok, detail});
  }

  if (selected("product-gate")) {
    const auto gate = dno::product_gate(0.05);
    double sup = 0.0;
    for (int i = 0; i <= 199; ++i) {
      for (int j = 0; j <= 199; ++j) {
        const double t = -1.0 + 2.0 * i / 199.0;
        const double tp = -1.0 + 2.0 * j / 199.0;
        const double x[2] = {t, tp};
        sup = std::fmax(sup, std::fabs(gate.evaluate(std::span<const double>{x, 2}) -
                                       t * tp));
      }
    }
    std::snprintf(detail, sizeof detail, "sup error = %.5f (eps 0.05)", sup);
    outcomes.push_back({"product-gate", sup <= 0.05, detail});
  }

  if (selected("direct")) {
    const auto f = dno::make_radial(dno::RadialProfile::linear, 1.0, 2, 0.0,
                                    common.seed);
    dno::SweepConfig config;
    config.n_values = {8, 16, 32, 64, 128};
    config.grid = grid;
    const auto sweep = dno::run_sweep(f, config);
    bool ok = true;
    double worst = 0.0;
    for (std::size_t i = 0; i < sweep.n_values.size(); ++i) {
      worst = std::fmax(worst, sweep.sup_errors[i] / sweep.bounds[i]);
      if (sweep.sup_errors[i] > sweep.bounds[i]) ok = false;
    }
    std::snprintf(detail, sizeof detail, "max error/bound = %.4f", worst);
    outcomes.push_back({"direct", ok, detail});
  }

  if (selected("rate")) {
    dno::SweepConfig config;
    config.n_values = {8, 16, 32, 64, 128, 256};
    config.grid = grid;
    const auto f1 = dno::make_radial(dno::RadialProfile::linear, 1.0, 2, 0.0,
                                     common.seed);
    const auto sweep1 = dno::run_sweep(f1, config);
    const auto fit1 = dno::rate_fit(sweep1.n_values, sweep1.sup_errors, true);
    const auto f2 =
        dno::make_radial(dno::RadialProfile::power, 0.5, 3, 0.0, common.seed);
    const auto sweep2 = dno::run_sweep(f2, config);
    const auto fit2 = dno::rate_fit(sweep2.n_values, sweep2.sup_errors, true);
    const bool ok = fit1.alpha_hat >= 0.75 && fit1.alpha_hat <= 1.25 &&
                    fit1.r_squared >= 0.9 && fit2.alpha_hat >= 0.35 &&
                    fit2.alpha_hat <= 0.65;
    std::snprintf(detail, sizeof detail,
                  "alpha=1: %.3f (R2 %.3f); alpha=1/2: %.3f (R2 %.3f)",
                  fit1.alpha_hat, fit1.r_squared, fit2.alpha_hat,
                  fit2.r_squared);
    outcomes.push_back({"rate", ok, detail});
  }

  if (selected("bernstein")) {
    bool ok = true;
    double worst_spread = 0.0;
    const std::vector<int> n_values{4, 8, 16, 32, 64, 128};
    for (int vec = 0; vec < 20; ++vec) {
      const auto g = dno::random_step_function(
          dno::hash_combine(common.seed, 0xb000 + vec));
      double lo = 1e300, hi = 0.0;
      for (int n : n_values) {
        const double ratio =
            dno::bernstein_ratio(dno::build_univariate(g, n), grid);
        lo = std::fmin(lo, ratio);
        hi = std::fmax(hi, ratio);
      }
      worst_spread = std::fmax(worst_spread, hi / lo);
      if (hi / lo > 5.0) ok = false;
    }
    double lo = 1e300, hi = 0.0;
    for (int n : n_values) {
      const double ratio = dno::bernstein_smooth_ratio(
          dno::build_univariate([](double t) { return t; }, n), 1.0, 1.0, grid);
      lo = std::fmin(lo, ratio);
      hi = std::fmax(hi, ratio);
    }
    if (hi / lo > 5.0) ok = false;
    std::snprintf(detail, sizeof detail,
                  "worst rough spread %.3f; smooth spread %.3f", worst_spread,
                  hi / lo);
    outcomes.push_back({"bernstein", ok, detail});
  }

  if (selected("inverse")) {
    bool ok = true;
    double worst = 0.0;
    for (const auto& entry : dno::standard_univariate_corpus()) {
      const auto result =
          dno::inverse_check(entry.g, {8, 16, 32, 64, 128}, grid);
      worst = std::fmax(worst, result.spread());
      if (result.spread() > 3.0) ok = false;
    }
    std::snprintf(detail, sizeof detail, "worst C_n spread = %.3f", worst);
    outcomes.push_back({"inverse", ok, detail});
  }

  if (selected("gradient")) {
    const auto op =
        dno::build_univariate([](double t) { return t; }, 16);
    dno::Rng rng(common.seed);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double t = rng.uniform(-1.0, 1.0);
      const double h = 1e-5;
      const double fd = (op.evaluate(t + h) - op.evaluate(t - h)) / (2.0 * h);
      const double an = op.derivative(t);
      worst = std::fmax(worst, std::fabs(an - fd) / std::fmax(std::fabs(an), 1e-8));
    }
    std::snprintf(detail, sizeof detail, "max relative gap = %.3e", worst);
    outcomes.push_back({"gradient", worst < 1e-6, detail});
  }

  if (selected("sequences")) {
    const auto single = dno::sequence_lemma_check(dno::SequenceLemmaKind::single,
                                                  1000, common.seed);
    const auto coupled = dno::sequence_lemma_check(
        dno::SequenceLemmaKind::coupled, 1000, common.seed + 1);
    std::snprintf(detail, sizeof detail, "single %d/%d, coupled %d/%d",
                  single.passes, single.trials, coupled.passes, coupled.trials);
    outcomes.push_back({"sequences",
                        single.passes == single.trials &&
                            coupled.passes == coupled.trials,
                        detail});
  }

  if (selected("lip-transfer")) {
    bool ok = true;
    double worst = 1e300;
    for (const auto& f : dno::standard_radial_corpus(common.seed)) {
      const auto evidence = dno::lip_transfer_check(f, 1000, common.seed);
      if (!evidence.pass) ok = false;
      worst = std::fmin(worst, std::fmin(evidence.worst_slack_f,
                                         evidence.worst_slack_g));
    }
    std::snprintf(detail, sizeof detail, "min margin = %.4f", worst);
    outcomes.push_back({"lip-transfer", ok, detail});
  }

  bool all_pass = true;
  for (const auto& outcome : outcomes) {
    std::printf("[%s] %-14s %s\n", outcome.pass ? "PASS" : "FAIL",
                outcome.name.c_str(), outcome.detail.c_str());
    if (!outcome.pass) all_pass = false;
  }
  if (outcomes.empty()) {
    std::fprintf(stderr, "no suites selected\n");
    return 2;
  }
  return all_pass ? 0 : 1;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Constructive sigmoid-network approximation and qualification"};
  app.require_subcommand(1);
  // Flat key=value file; keys for a subcommand live in its [section].
  app.set_config("--config", "", "Flat key=value config file");

  CommonOptions build_common, sweep_common, qualify_common, verify_common;
  FunctionOptions build_fn, sweep_fn, qualify_fn;

  auto* build = app.add_subcommand("build", "Construct and serialize an operator");
  add_common(build, build_common, true);
  add_function(build, build_fn, false);
  int build_n = 16;
  double build_eps = 1e-3;
  build->add_option("--n", build_n, "Operator parameter n")->required();
  build->add_option("--eps", build_eps, "Norm-net accuracy eps")->required();

  auto* sweep = app.add_subcommand("sweep", "Error sweep over n (CSV)");
  add_common(sweep, sweep_common, true);
  add_function(sweep, sweep_fn, false);
  std::vector<int> sweep_n_list{8, 16, 32, 64, 128};
  double sweep_eps = -1.0;
  sweep->add_option("--n-list", sweep_n_list, "Comma-separated n values")
      ->delimiter(',');
  sweep->add_option("--eps", sweep_eps,
                    "Fixed eps for every n (default: eps_n = n^-2)");

  auto* qualify = app.add_subcommand("qualify", "Qualification report (JSON)");
  add_common(qualify, qualify_common, true);
  add_function(qualify, qualify_fn, true);
  std::vector<int> qualify_n_list{8, 16, 32, 64, 128};
  int profile_samples = 257;
  dno::QualificationThresholds thresholds;
  qualify->add_option("--n-list", qualify_n_list, "Comma-separated n values")
      ->delimiter(',');
  qualify->add_option("--profile-samples", profile_samples,
                      "Recovered-profile sample count");
  qualify->add_option("--radial-tau-max", thresholds.radial_tau_max,
                      "Radial verdict threshold on tau_hat");
  qualify->add_option("--min-r2", thresholds.min_r_squared,
                      "Minimum R^2 for a rate verdict");
  qualify->add_option("--plateau-ratio", thresholds.plateau_ratio,
                      "error(n_max) >= ratio * error(n_min) flags a plateau");
  qualify->add_option("--alpha-band", thresholds.alpha_band,
                      "Reported confidence band around alpha_hat");

  auto* verify = app.add_subcommand("verify", "Run the property suites");
  add_common(verify, verify_common, false);
  std::string suites;
  bool sabotage = false;
  verify->add_option("--suites", suites, "Comma-separated suite filter");
  auto* sab = verify->add_flag("--sabotage-bell-sign", sabotage,
                               "Negative-control hook: flip one bell sign");
  sab->group("");  // hidden test hook

  CLI11_PARSE(app, argc, argv);

  try {
    const CommonOptions& common = build->parsed()    ? build_common
                                  : sweep->parsed()  ? sweep_common
                                  : qualify->parsed() ? qualify_common
                                                      : verify_common;
    if (!dno::kernels::select(common.kernel)) {
      std::fprintf(stderr, "kernel backend '%s' unavailable\n",
                   common.kernel.c_str());
      return 2;
    }
    if (build->parsed())
      return cmd_build(build_common, build_fn, build_n, build_eps);
    if (sweep->parsed()) {
      std::optional<double> fixed;
      if (sweep_eps > 0.0) fixed = sweep_eps;
      return cmd_sweep(sweep_common, sweep_fn, sweep_n_list, fixed);
    }
    if (qualify->parsed())
      return cmd_qualify(qualify_common, qualify_fn, qualify_n_list, thresholds,
                         profile_samples);
    return cmd_verify(verify_common, suites, sabotage);
  } catch (const dno::ConditioningError& e) {
    std::fprintf(stderr, "conditioning error: %s\n", e.what());
    return 2;
  } catch (const dno::ConstructionError& e) {
    std::fprintf(stderr, "construction error: %s (measured %.6g)\n", e.what(),
                 e.measured_error);
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 2;
  }
}
