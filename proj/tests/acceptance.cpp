// Acceptance suite: one pass/fail line per criterion, nonzero exit on any
// failure. Run through ctest or directly from the build tree.

#include <chrono>
#include <cmath>
#include <cstdarg>
#include <cstdio>
#include <cstdlib>
#include <fstream>
#include <sstream>
#include <string>
#include <vector>

#include "dno/activation.hpp"
#include "dno/analysis.hpp"
#include "dno/constructor.hpp"
#include "dno/corpus.hpp"
#include "dno/kernels.hpp"
#include "dno/rng.hpp"

#ifndef DNO_CLI_PATH
#define DNO_CLI_PATH "./dno"
#endif

namespace {

using Clock = std::chrono::steady_clock;

int g_failures = 0;

void report(int index, const char* name, bool pass, const std::string& detail,
            double seconds) {
  std::printf("[%s] %2d. %-22s %s (%.1fs)\n", pass ? "PASS" : "FAIL", index,
              name, detail.c_str(), seconds);
  std::fflush(stdout);
  if (!pass) ++g_failures;
}

template <typename Fn>
void criterion(int index, const char* name, Fn&& fn) {
  const auto start = Clock::now();
  bool pass = false;
  std::string detail;
  try {
    pass = fn(detail);
  } catch (const std::exception& e) {
    detail = std::string("exception: ") + e.what();
  }
  const double seconds =
      std::chrono::duration<double>(Clock::now() - start).count();
  report(index, name, pass, detail, seconds);
}

std::string fmt(const char* format, ...) {
  char buffer[512];
  va_list args;
  va_start(args, format);
  std::vsnprintf(buffer, sizeof buffer, format, args);
  va_end(args);
  return buffer;
}

double norm2(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

int run_cli(const std::string& args) {
  const std::string command =
      std::string(DNO_CLI_PATH) + " " + args + " >/dev/null 2>&1";
  return std::system(command.c_str());
}

std::string slurp(const std::string& path) {
  std::ifstream in(path, std::ios::binary);
  std::ostringstream out;
  out << in.rdbuf();
  return out.str();
}

const dno::GridSpec kAcceptanceGrid{10000, 1000, 2024};

}  // namespace

int main() {
  std::printf("acceptance suite (kernel backend: %s)\n",
              dno::kernels::active().name);

  criterion(1, "partition-of-unity", [](std::string& detail) {
    dno::Rng rng(2024);
    double worst = 0.0;
    for (int trial = 0; trial < 1000; ++trial) {
      const double t = rng.uniform(-5.0, 5.0);
      double sum = 0.0;
      for (int i = -60; i <= 60; ++i) sum += dno::bell(t - i);
      worst = std::fmax(worst, std::fabs(sum - 1.0));
    }
    detail = fmt("max |sum-1| = %.3e (tol 1e-10)", worst);
    return worst < 1e-10;
  });

  criterion(2, "normalization", [](std::string& detail) {
    const int steps = 48000;
    const double h = 120.0 / steps;
    double integral = dno::bell(-60.0) + dno::bell(60.0);
    for (int i = 1; i < steps; ++i) {
      integral += (i % 2 == 1 ? 4.0 : 2.0) * dno::bell(-60.0 + h * i);
    }
    integral *= h / 3.0;
    detail = fmt("|integral-1| = %.3e (tol 1e-8)", std::fabs(integral - 1.0));
    return std::fabs(integral - 1.0) < 1e-8;
  });

  criterion(3, "square-net", [](std::string& detail) {
    double worst_ratio = 0.0;
    for (double eps : {0.1, 0.02, 0.01}) {
      const auto net = dno::square_net(eps);
      if (eps == 0.01 &&
          net.precision_hint() != dno::PrecisionMode::extended) {
        detail = "eps=0.01 did not select extended precision";
        return false;
      }
      const auto err = dno::sup_error(
          [](double t) { return t * t; },
          [&net](double t) { return net.evaluate(t); }, -1.0, 1.0,
          kAcceptanceGrid);
      worst_ratio = std::fmax(worst_ratio, err.value / eps);
      if (err.value > eps) {
        detail = fmt("eps=%.3g: sup error %.3e > eps", eps, err.value);
        return false;
      }
    }
    detail = fmt("max sup-error/eps = %.3f over eps in {0.1,0.02,0.01}",
                 worst_ratio);
    return true;
  });

  criterion(4, "norm-net", [](std::string& detail) {
    double worst_ratio = 0.0;
    for (int d : {1, 2, 5}) {
      const double eps = 0.01;
      const auto net = dno::norm_net(d, eps);
      double sup = 0.0;
      for (const auto& x : dno::halton_ball(d, 10000)) {
        sup = std::fmax(sup, std::fabs(net.evaluate(x) - norm2(x)));
      }
      worst_ratio = std::fmax(worst_ratio, sup / (d * eps));
      if (sup > d * eps) {
        detail = fmt("d=%d: sup error %.3e > d*eps", d, sup);
        return false;
      }
    }
    detail = fmt("max sup-error/(d*eps) = %.3f over d in {1,2,5}", worst_ratio);
    return true;
  });

  criterion(5, "product-gate", [](std::string& detail) {
    const auto gate = dno::product_gate(0.05);
    double sup = 0.0;
    for (int i = 0; i < 200; ++i) {
      for (int j = 0; j < 200; ++j) {
        const double t = -1.0 + 2.0 * i / 199.0;
        const double tp = -1.0 + 2.0 * j / 199.0;
        const double x[2] = {t, tp};
        sup = std::fmax(
            sup, std::fabs(gate.evaluate(std::span<const double>{x, 2}) - t * tp));
      }
    }
    detail = fmt("sup error on 200x200 grid = %.4f (tol 0.05)", sup);
    return sup <= 0.05;
  });

  criterion(6, "direct-theorem", [](std::string& detail) {
    const auto f = dno::make_radial(dno::RadialProfile::linear, 1.0, 2, 0.0, 2024);
    dno::SweepConfig config;
    config.n_values = {8, 16, 32, 64, 128};
    config.grid = kAcceptanceGrid;
    const auto sweep = dno::run_sweep(f, config);
    double worst = 0.0;
    for (std::size_t i = 0; i < sweep.n_values.size(); ++i) {
      worst = std::fmax(worst, sweep.sup_errors[i] / sweep.bounds[i]);
      if (sweep.sup_errors[i] > sweep.bounds[i]) {
        detail = fmt("n=%d: error %.4e > bound %.4e", sweep.n_values[i],
                     sweep.sup_errors[i], sweep.bounds[i]);
        return false;
      }
    }
    detail = fmt("max error/bound = %.3f over n in {8..128}", worst);
    return true;
  });

  criterion(7, "rate-recovery", [](std::string& detail) {
    dno::SweepConfig config;
    config.n_values = {8, 16, 32, 64, 128, 256};
    config.grid = kAcceptanceGrid;
    const auto f1 = dno::make_radial(dno::RadialProfile::linear, 1.0, 2, 0.0, 2024);
    const auto sweep1 = dno::run_sweep(f1, config);
    const auto fit1 = dno::rate_fit(sweep1.n_values, sweep1.sup_errors, true);
    const auto f2 = dno::make_radial(dno::RadialProfile::power, 0.5, 3, 0.0, 2024);
    const auto sweep2 = dno::run_sweep(f2, config);
    const auto fit2 = dno::rate_fit(sweep2.n_values, sweep2.sup_errors, true);
    detail = fmt("alpha=1: %.3f (R2 %.3f), alpha=1/2: %.3f (R2 %.3f)",
                 fit1.alpha_hat, fit1.r_squared, fit2.alpha_hat, fit2.r_squared);
    return fit1.alpha_hat >= 0.75 && fit1.alpha_hat <= 1.25 &&
           fit1.r_squared >= 0.9 && fit2.alpha_hat >= 0.35 &&
           fit2.alpha_hat <= 0.65;
  });

  criterion(8, "bernstein-uniformity", [](std::string& detail) {
    const std::vector<int> n_values{4, 8, 16, 32, 64, 128};
    double worst_spread = 0.0;
    for (int vec = 0; vec < 20; ++vec) {
      const auto g = dno::random_step_function(
          dno::hash_combine(2024, 0xb0 + static_cast<std::uint64_t>(vec)));
      double lo = 1e300, hi = 0.0;
      for (int n : n_values) {
        const double ratio =
            dno::bernstein_ratio(dno::build_univariate(g, n), kAcceptanceGrid);
        lo = std::fmin(lo, ratio);
        hi = std::fmax(hi, ratio);
      }
      worst_spread = std::fmax(worst_spread, hi / lo);
      if (hi / lo > 5.0) {
        detail = fmt("vector %d: spread %.3f > 5", vec, hi / lo);
        return false;
      }
    }
    double lo = 1e300, hi = 0.0;
    for (int n : n_values) {
      const double ratio = dno::bernstein_smooth_ratio(
          dno::build_univariate([](double t) { return t; }, n), 1.0, 1.0,
          kAcceptanceGrid);
      lo = std::fmin(lo, ratio);
      hi = std::fmax(hi, ratio);
    }
    detail = fmt("rough worst spread %.3f, smooth spread %.3f (tol 5)",
                 worst_spread, hi / lo);
    return hi / lo <= 5.0;
  });

  criterion(9, "inverse-inequality", [](std::string& detail) {
    double worst = 0.0;
    std::string worst_id;
    for (const auto& entry : dno::standard_univariate_corpus()) {
      const auto result =
          dno::inverse_check(entry.g, {8, 16, 32, 64, 128}, kAcceptanceGrid);
      if (result.spread() > worst) {
        worst = result.spread();
        worst_id = entry.id;
      }
      if (result.spread() > 3.0) {
        detail = fmt("%s: C_n spread %.3f > 3", entry.id.c_str(), result.spread());
        return false;
      }
    }
    detail = fmt("worst C_n spread %.3f (%s, tol 3)", worst, worst_id.c_str());
    return true;
  });

  criterion(10, "qualification", [](std::string& detail) {
    dno::QualifyConfig config;
    config.n_values = {8, 16, 32, 64, 128, 256};
    config.grid = kAcceptanceGrid;
    config.seed = 2024;
    const auto radial =
        dno::make_radial(dno::RadialProfile::power, 0.5, 3, 0.05, 2024);
    const auto report = dno::qualify(radial.evaluator, 3, config);
    if (report.tau_hat < 0.025 || report.tau_hat > 0.1) {
      detail = fmt("tau_hat %.4f outside [0.025, 0.1]", report.tau_hat);
      return false;
    }
    if (report.alpha_hat < 0.35 || report.alpha_hat > 0.65) {
      detail = fmt("alpha_hat %.3f outside [0.35, 0.65]", report.alpha_hat);
      return false;
    }
    if (report.verdict_radial != "radial-within") {
      detail = "perturbed radial entry not recognized as radial-within";
      return false;
    }

    dno::QualifyConfig control_config = config;
    control_config.n_values = {8, 16, 32, 64, 128};
    const auto control = dno::make_nonradial(dno::NonRadialKind::coordinate, 2);
    const auto control_report =
        dno::qualify(control.evaluator, 2, control_config);
    const bool plateau = control_report.errors.back() >=
                         0.5 * control_report.errors.front();
    if (!plateau || control_report.verdict_radial != "non-radial") {
      detail = fmt("control: plateau=%d verdict=%s", plateau ? 1 : 0,
                   control_report.verdict_radial.c_str());
      return false;
    }
    detail = fmt("tau_hat %.4f, alpha_hat %.3f; control plateaus, non-radial",
                 report.tau_hat, report.alpha_hat);
    return true;
  });

  criterion(11, "gradient-consistency", [](std::string& detail) {
    const auto op = dno::build_univariate([](double t) { return t; }, 16);
    dno::Rng rng(2024);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const double t = rng.uniform(-1.0, 1.0);
      const double h = 1e-5;
      const double fd = (op.evaluate(t + h) - op.evaluate(t - h)) / (2.0 * h);
      const double an = op.derivative(t);
      worst = std::fmax(worst,
                        std::fabs(an - fd) / std::fmax(std::fabs(an), 1e-8));
    }
    detail = fmt("max relative gap = %.3e (tol 1e-6)", worst);
    return worst < 1e-6;
  });

  criterion(12, "sequence-lemmas", [](std::string& detail) {
    const auto single =
        dno::sequence_lemma_check(dno::SequenceLemmaKind::single, 1000, 2024);
    const auto coupled =
        dno::sequence_lemma_check(dno::SequenceLemmaKind::coupled, 1000, 2025);
    detail = fmt("single %d/%d, coupled %d/%d", single.passes, single.trials,
                 coupled.passes, coupled.trials);
    return single.passes == single.trials && coupled.passes == coupled.trials;
  });

  criterion(13, "lip-transfer", [](std::string& detail) {
    double min_margin = 1e300;
    for (const auto& f : dno::standard_radial_corpus(2024)) {
      const auto evidence = dno::lip_transfer_check(f, 1000, 2024);
      min_margin = std::fmin(
          min_margin, std::fmin(evidence.worst_slack_f, evidence.worst_slack_g));
      if (!evidence.pass) {
        detail = fmt("%s: %d/%d violations", f.id.c_str(),
                     evidence.violations_f, evidence.violations_g);
        return false;
      }
    }
    detail = fmt("all corpus entries hold; min margin %.4f", min_margin);
    return true;
  });

  criterion(14, "cli-determinism", [](std::string& detail) {
    const std::string base =
        "qualify --fn power-radial --alpha 0.5 --tau 0.05 --d 2 "
        "--n-list 4,8,16,32 --grid-res 400 --random-points 100 --seed 7 --out ";
    if (run_cli(base + "accept_q1.json") != 0 ||
        run_cli(base + "accept_q2.json") != 0) {
      detail = "cli qualify run failed";
      return false;
    }
    const std::string a = slurp("accept_q1.json");
    const std::string b = slurp("accept_q2.json");
    std::remove("accept_q1.json");
    std::remove("accept_q2.json");
    if (a.empty() || a != b) {
      detail = "reports differ between identical runs";
      return false;
    }
    detail = fmt("byte-identical reports (%zu bytes)", a.size());
    return true;
  });

  // CLI surface beyond the numbered criteria: build/sweep exit behavior and
  // the negative-control hook.
  criterion(15, "extra:cli-surface", [](std::string& detail) {
    if (run_cli("build --fn linear-radial --d 2 --n 16 --eps 1e-3 --seed 1 "
                "--out accept_op.json") != 0) {
      detail = "build failed";
      return false;
    }
    const std::string op_text = slurp("accept_op.json");
    std::remove("accept_op.json");
    if (op_text.find("\"dno-operator-file\"") == std::string::npos) {
      detail = "operator file missing format marker";
      return false;
    }
    if (run_cli("build --fn linear-radial --d 2 --n 16 --eps 1e-5 --seed 1 "
                "--out accept_bad.json") == 0) {
      detail = "eps=1e-5 build unexpectedly succeeded";
      return false;
    }
    if (run_cli("sweep --fn linear-radial --d 2 --n-list 8,16 --grid-res 2000 "
                "--random-points 200 --seed 1 --out accept_sweep.csv") != 0) {
      detail = "sweep failed";
      return false;
    }
    const std::string csv = slurp("accept_sweep.csv");
    std::remove("accept_sweep.csv");
    if (csv.find("n,eps,sup_error,bound") == std::string::npos) {
      detail = "sweep csv missing bound column";
      return false;
    }
    if (run_cli("sweep --fn linear-radial --d 2 --n-list 8,16 --grid-res 2000 "
                "--random-points 200 --seed 1 --out accept_sweep2.csv") != 0) {
      detail = "second sweep failed";
      return false;
    }
    const std::string csv2 = slurp("accept_sweep2.csv");
    std::remove("accept_sweep2.csv");
    if (csv.empty() || csv != csv2) {
      detail = "sweep output not reproducible";
      return false;
    }
    if (run_cli("verify --suites partition --seed 1") != 0) {
      detail = "verify partition suite failed";
      return false;
    }
    if (run_cli("verify --suites partition --seed 1 --sabotage-bell-sign") == 0) {
      detail = "sabotaged partition suite did not fail";
      return false;
    }
    {
      const std::string command = std::string(DNO_CLI_PATH) +
                                  " verify --suites gradient --seed 1 "
                                  "> accept_verify.txt 2>/dev/null";
      if (std::system(command.c_str()) != 0) {
        detail = "verify suite filter run failed";
        return false;
      }
      const std::string lines = slurp("accept_verify.txt");
      std::remove("accept_verify.txt");
      std::size_t suites = 0;
      for (std::size_t pos = 0; (pos = lines.find("[PASS]", pos)) != std::string::npos;
           ++pos) {
        ++suites;
      }
      if (suites != 1) {
        detail = fmt("--suites gradient ran %zu suites, expected 1", suites);
        return false;
      }
    }
    {
      std::ofstream manifest("accept_manifest.txt");
      manifest << "entry profile=power-radial d=2 alpha=0.5 tau=0.0 seed=3\n";
      manifest.close();
      const int rc = run_cli(
          "sweep --manifest accept_manifest.txt --fn entry --n-list 8,16 "
          "--grid-res 800 --random-points 80 --seed 3");
      std::remove("accept_manifest.txt");
      if (rc != 0) {
        detail = "manifest-driven sweep failed";
        return false;
      }
    }
    {
      // Tabulated-function qualification path.
      std::ofstream table("accept_table.txt");
      dno::Rng rng(5);
      for (int i = 0; i < 600; ++i) {
        const auto x = rng.ball_point(2);
        table << x[0] << " " << x[1] << " " << (x[0] * x[0] + x[1] * x[1])
              << "\n";
      }
      table.close();
      if (run_cli("qualify --tabulated accept_table.txt --d 2 "
                  "--n-list 4,8,16,32 --grid-res 300 --random-points 50 "
                  "--seed 3 --out accept_tab.json") != 0) {
        std::remove("accept_table.txt");
        detail = "tabulated qualify failed";
        return false;
      }
      const std::string report = slurp("accept_tab.json");
      std::remove("accept_table.txt");
      std::remove("accept_tab.json");
      if (report.find("nearest-neighbor+local-linear") == std::string::npos) {
        detail = "tabulated report does not record the interpolation method";
        return false;
      }
    }
    detail = "build/sweep/qualify/verify exit behavior as specified";
    return true;
  });

  std::printf("%s: %d criterion failure(s)\n",
              g_failures == 0 ? "ACCEPTANCE PASS" : "ACCEPTANCE FAIL",
              g_failures);
  return g_failures == 0 ? 0 : 1;
}
