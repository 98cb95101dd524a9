#include "dno/analysis.hpp"

#include <algorithm>
#include <charconv>
#include <cmath>
#include <limits>

#include "dno/errors.hpp"
#include "dno/rng.hpp"
#include "json.hpp"

namespace dno {

namespace {

std::string fmt_double(double v) {
  char buf[32];
  const auto res = std::to_chars(buf, buf + sizeof(buf), v);
  return std::string(buf, res.ptr);
}

void check_grid(const GridSpec& grid) {
  if (grid.resolution < 1 && grid.random_points < 1)
    throw ConfigError("grid spec selects no points");
}

double eval_or_data_error(const Sampler& f, std::span<const double> x) {
  double v;
  try {
    v = f(x);
  } catch (const std::exception& e) {
    throw DataError(std::string("sampler failed: ") + e.what());
  }
  if (!std::isfinite(v)) throw DataError("sampler returned non-finite value");
  return v;
}

// Deterministic ball grid: Halton points, a last-coordinate axis fan (which
// sweeps every radius and pins down radially concentrated deviations), then
// the seeded random points.
template <typename Fn>
void for_each_ball_point(int d, const GridSpec& grid, Fn&& fn) {
  std::vector<double> point(static_cast<std::size_t>(d), 0.0);
  for (const auto& x :
       halton_ball(d, static_cast<std::size_t>(std::max(grid.resolution, 0)))) {
    fn(x);
  }
  const int fan = std::min(512, std::max(grid.resolution, 2));
  for (int i = 0; i <= fan; ++i) {
    point.back() = -1.0 + 2.0 * static_cast<double>(i) / fan;
    fn(point);
  }
  Rng rng(grid.seed);
  for (int i = 0; i < grid.random_points; ++i) fn(rng.ball_point(d));
}

}  // namespace

SupErrorResult sup_error(const UnivariateSampler& target,
                         const UnivariateSampler& approx, double a, double b,
                         const GridSpec& grid) {
  check_grid(grid);
  SupErrorResult sup;
  sup.argmax = {a};
  auto consider = [&](double t) {
    const double dev = std::fabs(target(t) - approx(t));
    if (dev > sup.value) {
      sup.value = dev;
      sup.argmax[0] = t;
    }
  };
  for (int i = 0; i <= grid.resolution; ++i) {
    consider(a + (b - a) * static_cast<double>(i) / std::max(grid.resolution, 1));
  }
  Rng rng(grid.seed);
  for (int i = 0; i < grid.random_points; ++i) consider(rng.uniform(a, b));
  return sup;
}

SupErrorResult sup_error(const Sampler& target, const Sampler& approx,
                         const Domain& domain, const GridSpec& grid) {
  check_grid(grid);
  if (domain.kind == Domain::Kind::interval) {
    const auto t = [&](double x) {
      const double v[1] = {x};
      return target(std::span<const double>{v, 1});
    };
    const auto a = [&](double x) {
      const double v[1] = {x};
      return approx(std::span<const double>{v, 1});
    };
    return sup_error(t, a, domain.a, domain.b, grid);
  }
  SupErrorResult sup;
  sup.argmax.assign(static_cast<std::size_t>(domain.d), 0.0);
  for_each_ball_point(domain.d, grid, [&](const std::vector<double>& x) {
    const double dev = std::fabs(target(x) - approx(x));
    if (dev > sup.value) {
      sup.value = dev;
      sup.argmax = x;
    }
  });
  return sup;
}

double modulus(const UnivariateSampler& g, double h, double a, double b,
               int resolution) {
  if (!(b > a)) throw ConfigError("modulus: empty domain");
  if (!(h > 0.0)) throw DomainError("modulus: step bound h must be positive");
  if (h > (b - a) * (1.0 + 1e-12))
    throw DomainError("modulus: h exceeds the domain length");
  if (resolution < 1) throw ConfigError("modulus: resolution must be >= 1");

  const double delta = (b - a) / resolution;
  double sup = 0.0;
  auto scan_step = [&](double s) {
    for (int i = 0; i <= resolution; ++i) {
      const double x = a + delta * i;
      const double y = x + s;
      if (y > b + 1e-15) break;
      sup = std::fmax(sup, std::fabs(g(x) - g(std::fmin(y, b))));
    }
  };
  const int j_max = static_cast<int>(std::floor(h / delta * (1.0 + 1e-12)));
  for (int j = 1; j <= j_max; ++j) scan_step(delta * j);
  scan_step(std::fmin(h, b - a));
  return sup;
}

double direct_bound(double tau, int d, const UnivariateSampler& g_profile,
                    int n, double eps, double f_sup, int modulus_resolution) {
  if (tau < 0.0) throw DomainError("direct_bound: tau must be >= 0");
  if (!(eps > 0.0)) throw DomainError("direct_bound: eps must be positive");
  if (n < 1) throw DomainError("direct_bound: n must be >= 1");
  const double omega_eps =
      modulus(g_profile, std::fmin(eps, 1.0), 0.0, 1.0, modulus_resolution);
  const double omega_n =
      modulus(g_profile, 1.0 / n, 0.0, 1.0, modulus_resolution);
  return 2.0 * tau + 2.0 * d * omega_eps + kDirectBoundModulusFactor * omega_n +
         3.0 * std::exp(-static_cast<double>(n)) * (f_sup + tau);
}

namespace {

double sup_abs_derivative(const UnivariateOperator& op, const GridSpec& grid) {
  double sup = 0.0;
  for (int i = 0; i <= grid.resolution; ++i) {
    const double t = -1.0 + 2.0 * static_cast<double>(i) / std::max(grid.resolution, 1);
    sup = std::fmax(sup, std::fabs(op.derivative(t)));
  }
  Rng rng(grid.seed);
  for (int i = 0; i < grid.random_points; ++i) {
    sup = std::fmax(sup, std::fabs(op.derivative(rng.uniform(-1.0, 1.0))));
  }
  return sup;
}

}  // namespace

double bernstein_ratio(const UnivariateOperator& op, const GridSpec& grid) {
  check_grid(grid);
  double max_beta = 0.0;
  for (double b : op.beta()) max_beta = std::fmax(max_beta, std::fabs(b));
  if (max_beta == 0.0)
    throw DomainError("bernstein_ratio: all-zero coefficients");
  return sup_abs_derivative(op, grid) / (op.n() * max_beta);
}

double bernstein_smooth_ratio(const UnivariateOperator& op, double g_deriv_sup,
                              double g_sup, const GridSpec& grid) {
  check_grid(grid);
  const double denom =
      g_deriv_sup + op.n() * std::exp(-static_cast<double>(op.n())) * g_sup;
  if (!(denom > 0.0))
    throw DomainError("bernstein_smooth_ratio: degenerate denominator");
  return sup_abs_derivative(op, grid) / denom;
}

double InverseCheckResult::spread() const {
  double lo = std::numeric_limits<double>::infinity();
  double hi = 0.0;
  for (std::size_t i = 0; i < c_hat.size(); ++i) {
    if (skipped[i]) continue;
    lo = std::fmin(lo, c_hat[i]);
    hi = std::fmax(hi, c_hat[i]);
  }
  if (!(lo > 0.0) || !std::isfinite(lo)) return std::numeric_limits<double>::infinity();
  return hi / lo;
}

InverseCheckResult inverse_check(const UnivariateSampler& g,
                                 const std::vector<int>& n_list,
                                 const GridSpec& grid) {
  if (n_list.empty()) throw ConfigError("inverse_check: empty n list");
  for (std::size_t i = 1; i < n_list.size(); ++i) {
    if (n_list[i] <= n_list[i - 1])
      throw ConfigError("inverse_check: n list must be increasing");
  }
  const int n_max = n_list.back();

  double g_sup = 0.0;
  for (int i = 0; i <= grid.resolution; ++i) {
    const double t = -1.0 + 2.0 * static_cast<double>(i) / std::max(grid.resolution, 1);
    g_sup = std::fmax(g_sup, std::fabs(g(t)));
  }

  std::vector<double> prefix(static_cast<std::size_t>(n_max) + 1, 0.0);
  for (int k = 1; k <= n_max; ++k) {
    const UnivariateOperator op = build_univariate(g, k);
    const auto err = sup_error(
        g, [&op](double t) { return op.evaluate(t); }, -1.0, 1.0, grid);
    prefix[static_cast<std::size_t>(k)] =
        prefix[static_cast<std::size_t>(k) - 1] + err.value;
  }

  InverseCheckResult result;
  result.n_values = n_list;
  for (int n : n_list) {
    const double numerator = modulus(g, 1.0 / n, -1.0, 1.0) + g_sup / n;
    const double denominator = prefix[static_cast<std::size_t>(n)] / n;
    if (denominator < 1e-13 * std::fmax(1.0, g_sup)) {
      result.c_hat.push_back(0.0);
      result.skipped.push_back(true);
      continue;
    }
    result.c_hat.push_back(numerator / denominator);
    result.skipped.push_back(false);
  }
  return result;
}

std::string SweepResult::to_csv() const {
  std::string out = has_bounds() ? "n,eps,sup_error,bound\n" : "n,eps,sup_error\n";
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    out += std::to_string(n_values[i]);
    out += ',';
    out += fmt_double(eps_values[i]);
    out += ',';
    out += fmt_double(sup_errors[i]);
    if (has_bounds()) {
      out += ',';
      out += fmt_double(bounds[i]);
    }
    out += '\n';
  }
  return out;
}

SweepResult run_sweep(const TestFunction& f, const SweepConfig& config) {
  if (config.n_values.empty()) throw ConfigError("sweep: empty n list");
  SweepResult result;
  result.grid = config.grid;
  for (int n : config.n_values) {
    const double eps =
        config.fixed_eps.value_or(1.0 / (static_cast<double>(n) * n));
    const DnoOperator op = build_dno(f.evaluator, n, eps, f.d);
    const auto err = sup_error(
        f.evaluator,
        [&op, &config](std::span<const double> x) {
          return op.evaluate(x, config.precision);
        },
        Domain::ball(f.d), config.grid);
    result.n_values.push_back(n);
    result.eps_values.push_back(eps);
    result.sup_errors.push_back(err.value);
    if (f.meta.is_radial) {
      result.bounds.push_back(direct_bound(f.meta.tau_injected, f.d, f.profile,
                                           n, eps, f.meta.sup_norm));
    }
  }
  return result;
}

RateReport rate_fit(const std::vector<int>& n_values,
                    const std::vector<double>& errors, bool drop_smallest) {
  if (n_values.size() != errors.size())
    throw ConfigError("rate_fit: length mismatch");
  if (n_values.size() < 4)
    throw ConfigError("rate_fit: need at least 4 sweep points");

  RateReport report;
  const std::size_t begin = drop_smallest ? 1 : 0;
  report.n_min = n_values[begin];
  report.n_max = n_values.back();
  for (std::size_t i = begin; i < errors.size(); ++i) {
    if (!(errors[i] > 0.0)) {
      report.exact_representation = true;
      return report;
    }
  }

  const std::size_t count = errors.size() - begin;
  double sx = 0.0, sy = 0.0;
  for (std::size_t i = begin; i < errors.size(); ++i) {
    sx += std::log(static_cast<double>(n_values[i]));
    sy += std::log(errors[i]);
  }
  const double mx = sx / count;
  const double my = sy / count;
  double sxx = 0.0, sxy = 0.0, syy = 0.0;
  for (std::size_t i = begin; i < errors.size(); ++i) {
    const double dx = std::log(static_cast<double>(n_values[i])) - mx;
    const double dy = std::log(errors[i]) - my;
    sxx += dx * dx;
    sxy += dx * dy;
    syy += dy * dy;
  }
  const double slope = sxy / sxx;
  report.alpha_hat = -slope;
  report.log_constant = my - slope * mx;
  if (syy < 1e-30) {
    report.r_squared = 1.0;
  } else {
    const double ss_res = syy - slope * sxy;
    report.r_squared = 1.0 - std::fmax(ss_res, 0.0) / syy;
  }
  return report;
}

std::string QualificationReport::to_json() const {
  nlohmann::ordered_json j;
  j["seed"] = seed;
  j["alpha_hat"] = alpha_hat;
  j["alpha_band"] = alpha_band;
  j["r2"] = r2;
  j["tau_hat"] = tau_hat;
  j["slice_asymmetry"] = slice_asymmetry;
  j["alpha_guess"] = alpha_guess;
  j["verdict_smooth"] = verdict_smooth;
  j["verdict_radial"] = verdict_radial;
  j["thresholds"] = {{"radial_tau_max", thresholds.radial_tau_max},
                     {"min_r_squared", thresholds.min_r_squared},
                     {"plateau_ratio", thresholds.plateau_ratio},
                     {"alpha_band", thresholds.alpha_band}};
  j["interpolation"] = interpolation;
  nlohmann::ordered_json sweep = nlohmann::ordered_json::array();
  for (std::size_t i = 0; i < n_values.size(); ++i) {
    nlohmann::ordered_json row;
    row["n"] = n_values[i];
    row["eps"] = eps_values[i];
    row["error"] = errors[i];
    row["error_radialized"] = radialized_errors[i];
    row["bound"] = bounds[i];
    sweep.push_back(std::move(row));
  }
  j["sweep"] = std::move(sweep);
  j["profile"] = {{"t", profile_t}, {"g", profile_g}};
  return j.dump(2);
}

QualificationReport qualify(const Sampler& f, int d,
                            const QualifyConfig& config) {
  if (d < 1) throw ConfigError("qualify: d must be >= 1");
  if (config.n_values.size() < 4)
    throw ConfigError("qualify: need at least 4 n values");
  QualificationReport report;
  report.seed = config.seed;
  report.thresholds = config.thresholds;
  report.alpha_band = config.thresholds.alpha_band;
  report.interpolation = config.interpolation;

  // (i) axis-slice profile g_f(t) = f(0,...,0,sqrt(t)).
  auto axis_value = [&](double last) {
    std::vector<double> x(static_cast<std::size_t>(d), 0.0);
    x.back() = last;
    return eval_or_data_error(f, x);
  };
  const UnivariateSampler profile_fn = [axis_value](double t) {
    return axis_value(std::sqrt(std::fmax(t, 0.0)));
  };
  const int samples = std::max(config.profile_samples, 9);
  double f_sup = 0.0;
  for (int i = 0; i < samples; ++i) {
    const double t = static_cast<double>(i) / (samples - 1);
    const double g_pos = profile_fn(t);
    const double g_neg = axis_value(-std::sqrt(t));
    report.profile_t.push_back(t);
    report.profile_g.push_back(g_pos);
    report.slice_asymmetry =
        std::fmax(report.slice_asymmetry, std::fabs(g_pos - g_neg));
    f_sup = std::fmax(f_sup, std::fabs(g_pos));
  }

  // (ii) radial defect against the recovered profile.
  Rng defect_rng(hash_combine(config.seed, 0x746175));
  double defect = report.slice_asymmetry;
  const int defect_points = std::max(config.grid.random_points, 100);
  for (int i = 0; i < defect_points; ++i) {
    const auto x = defect_rng.ball_point(d);
    double norm2 = 0.0;
    for (double xi : x) norm2 += xi * xi;
    const double fx = eval_or_data_error(f, x);
    defect = std::fmax(defect, std::fabs(fx - profile_fn(norm2)));
    f_sup = std::fmax(f_sup, std::fabs(fx));
  }
  report.tau_hat = defect;

  struct Measured {
    double raw;
    double radialized;
  };
  auto measure = [&](double eps, int n) {
    const DnoOperator op = build_dno(f, n, eps, d);
    Measured m{0.0, 0.0};
    for_each_ball_point(d, config.grid, [&](const std::vector<double>& x) {
      double norm2 = 0.0;
      for (double xi : x) norm2 += xi * xi;
      const double approx = op.evaluate(x, config.precision);
      m.raw = std::fmax(m.raw, std::fabs(eval_or_data_error(f, x) - approx));
      m.radialized =
          std::fmax(m.radialized, std::fabs(profile_fn(norm2) - approx));
    });
    return m;
  };

  // (iii) pilot sweep at eps_n = n^{-2} to bootstrap the eps schedule.
  std::vector<double> pilot_errors;
  for (int n : config.n_values) {
    pilot_errors.push_back(
        measure(1.0 / (static_cast<double>(n) * n), n).radialized);
  }
  const RateReport pilot =
      rate_fit(config.n_values, pilot_errors, config.drop_smallest_in_fit);
  double alpha_guess = pilot.exact_representation
                           ? 1.0
                           : std::clamp(pilot.alpha_hat, 0.0, 2.0);
  report.alpha_guess = alpha_guess;

  // (iv) final sweep at eps_n = min(n^{-1-alpha_guess}, n^{-2}).
  for (int n : config.n_values) {
    const double nd = static_cast<double>(n);
    double eps = std::fmin(std::pow(nd, -1.0 - alpha_guess), 1.0 / (nd * nd));
    eps = std::fmax(eps, kEpsFloor * 1.02);
    const Measured m = measure(eps, n);
    report.n_values.push_back(n);
    report.eps_values.push_back(eps);
    report.errors.push_back(m.raw);
    report.radialized_errors.push_back(m.radialized);
    report.bounds.push_back(
        direct_bound(report.tau_hat, d, profile_fn, n, eps, f_sup));
  }

  const RateReport fit = rate_fit(report.n_values, report.radialized_errors,
                                  config.drop_smallest_in_fit);
  if (fit.exact_representation) {
    // The radialization is reproduced exactly; radialness is decided by the
    // measured defect alone.
    report.alpha_hat = 0.0;
    report.r2 = 1.0;
    const bool radial = report.tau_hat <= config.thresholds.radial_tau_max;
    report.verdict_radial = radial ? "radial-within" : "non-radial";
    report.verdict_smooth = radial ? "qualified" : "not-qualified";
    return report;
  }
  report.alpha_hat = fit.alpha_hat;
  report.r2 = fit.r_squared;

  const bool plateau =
      report.radialized_errors.back() >=
      config.thresholds.plateau_ratio * report.radialized_errors.front();
  const bool decays = !plateau && report.r2 >= config.thresholds.min_r_squared;
  if (decays && report.tau_hat <= config.thresholds.radial_tau_max) {
    report.verdict_radial = "radial-within";
    report.verdict_smooth = "qualified";
  } else {
    report.verdict_radial = "non-radial";
    report.verdict_smooth = "not-qualified";
  }
  return report;
}

LipTransferEvidence lip_transfer_check(const TestFunction& f, int pairs,
                                       std::uint64_t seed) {
  if (!f.meta.is_radial || !f.profile)
    throw ConfigError("lip_transfer_check: radial profile metadata required");
  if (pairs < 1) throw ConfigError("lip_transfer_check: pairs must be >= 1");

  const double slack = 2.0 * f.meta.tau_injected + f.meta.nu;
  const double f_coeff =
      std::pow(2.0, f.meta.alpha) * std::pow(static_cast<double>(f.d), f.meta.alpha / 2.0) *
      f.meta.c;

  LipTransferEvidence evidence;
  evidence.pairs = pairs;
  evidence.worst_slack_f = std::numeric_limits<double>::infinity();
  evidence.worst_slack_g = std::numeric_limits<double>::infinity();
  Rng rng(seed);
  for (int i = 0; i < pairs; ++i) {
    const auto x = rng.ball_point(f.d);
    const auto y = rng.ball_point(f.d);
    double dist2 = 0.0;
    for (std::size_t j = 0; j < x.size(); ++j) {
      dist2 += (x[j] - y[j]) * (x[j] - y[j]);
    }
    const double lhs_f = std::fabs(f.evaluator(x) - f.evaluator(y));
    const double rhs_f =
        f_coeff * std::pow(std::sqrt(dist2), f.meta.alpha) + slack;
    evidence.worst_slack_f = std::fmin(evidence.worst_slack_f, rhs_f - lhs_f);
    if (lhs_f > rhs_f + 1e-9) ++evidence.violations_f;

    const double t = rng.uniform();
    const double s = rng.uniform();
    const double lhs_g = std::fabs(f.profile(t) - f.profile(s));
    const double rhs_g =
        f.meta.c * std::pow(std::fabs(t - s), f.meta.alpha) + slack;
    evidence.worst_slack_g = std::fmin(evidence.worst_slack_g, rhs_g - lhs_g);
    if (lhs_g > rhs_g + 1e-9) ++evidence.violations_g;
  }
  evidence.pass = evidence.violations_f == 0 && evidence.violations_g == 0;
  return evidence;
}

namespace {

bool single_sequence_trial(Rng& rng, bool zero_first_term) {
  const double p = rng.uniform(0.1, 3.0);
  const int count = 8 + static_cast<int>(rng.uniform() * 56.0);
  std::vector<double> tau(static_cast<std::size_t>(count) + 1, 0.0);
  for (int k = 1; k <= count; ++k) {
    tau[static_cast<std::size_t>(k)] = rng.uniform() < 0.2 ? 0.0 : rng.uniform();
  }
  std::vector<double> sigma(static_cast<std::size_t>(count) + 1, 0.0);
  sigma[1] = zero_first_term ? 0.0 : rng.uniform(0.0, 2.0);
  for (int n = 2; n <= count; ++n) {
    double best = std::numeric_limits<double>::infinity();
    for (int k = 1; k < n; ++k) {
      best = std::fmin(best, std::pow(static_cast<double>(k) / n, p) *
                                 sigma[static_cast<std::size_t>(k)] +
                             tau[static_cast<std::size_t>(k)]);
    }
    sigma[static_cast<std::size_t>(n)] = best;
  }
  for (int n = 1; n <= count; ++n) {
    double weighted = 0.0;
    for (int k = 1; k <= n; ++k) {
      weighted += std::pow(static_cast<double>(k), p - 1.0) *
                  tau[static_cast<std::size_t>(k)];
    }
    const double majorant =
        std::pow(4.0, p) * std::pow(static_cast<double>(n), -p) * weighted +
        std::pow(static_cast<double>(n), -p) * sigma[1];
    if (sigma[static_cast<std::size_t>(n)] > majorant * (1.0 + 1e-12) + 1e-12)
      return false;
  }
  return true;
}

bool coupled_sequence_trial(Rng& rng, bool canonical_rs) {
  const double r = canonical_rs ? 1.0 : rng.uniform(0.1, 2.0);
  const double s = canonical_rs ? 2.0 : r + rng.uniform(0.25, 2.0);
  const int count = 8 + static_cast<int>(rng.uniform() * 56.0);
  std::vector<double> psi(static_cast<std::size_t>(count) + 1, 0.0);
  for (int k = 1; k <= count; ++k) {
    psi[static_cast<std::size_t>(k)] = rng.uniform() < 0.2 ? 0.0 : rng.uniform();
  }
  std::vector<double> nu(static_cast<std::size_t>(count) + 1, 0.0);
  std::vector<double> mu(static_cast<std::size_t>(count) + 1, 0.0);
  nu[1] = rng.uniform() < 0.5 ? 0.0 : rng.uniform();
  mu[1] = rng.uniform() < 0.5 ? 0.0 : rng.uniform();
  for (int n = 2; n <= count; ++n) {
    double best_nu = std::numeric_limits<double>::infinity();
    double best_mu = std::numeric_limits<double>::infinity();
    for (int k = 1; k < n; ++k) {
      const double ratio = static_cast<double>(k) / n;
      best_nu = std::fmin(best_nu, std::pow(ratio, s) *
                                       nu[static_cast<std::size_t>(k)] +
                                   psi[static_cast<std::size_t>(k)]);
      best_mu = std::fmin(best_mu, std::pow(ratio, r) *
                                       mu[static_cast<std::size_t>(k)] +
                                   nu[static_cast<std::size_t>(k)] +
                                   psi[static_cast<std::size_t>(k)]);
    }
    nu[static_cast<std::size_t>(n)] = best_nu;
    mu[static_cast<std::size_t>(n)] = best_mu;
  }
  const double c_rs = 1.0 + 1.0 / (s - r);
  const double factor = std::pow(4.0, r) + std::pow(4.0, r + s) * c_rs;
  for (int n = 1; n <= count; ++n) {
    double weighted = 0.0;
    for (int k = 1; k <= n; ++k) {
      weighted += std::pow(static_cast<double>(k), r - 1.0) *
                  psi[static_cast<std::size_t>(k)];
    }
    const double majorant =
        std::pow(static_cast<double>(n), -r) *
        (factor * weighted + std::pow(4.0, r) * c_rs * nu[1] + mu[1]);
    if (mu[static_cast<std::size_t>(n)] > majorant * (1.0 + 1e-12) + 1e-12)
      return false;
  }
  return true;
}

}  // namespace

SequenceLemmaResult sequence_lemma_check(SequenceLemmaKind kind, int trials,
                                         std::uint64_t seed) {
  if (trials < 1) throw ConfigError("sequence_lemma_check: trials must be >= 1");
  SequenceLemmaResult result;
  result.trials = trials;
  for (int i = 0; i < trials; ++i) {
    Rng rng(hash_combine(seed, static_cast<std::uint64_t>(i)));
    const bool ok = kind == SequenceLemmaKind::single
                        ? single_sequence_trial(rng, i % 2 == 0)
                        : coupled_sequence_trial(rng, i % 2 == 0);
    if (ok) ++result.passes;
  }
  return result;
}

}  // namespace dno
