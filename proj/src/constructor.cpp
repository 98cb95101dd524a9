#include "dno/constructor.hpp"

#include <algorithm>
#include <cmath>
#include <string>

#include "dno/activation.hpp"
#include "dno/errors.hpp"
#include "dno/kernels.hpp"
#include "dno/rng.hpp"
#include "json.hpp"

namespace dno {

namespace {

double factorial(int n) {
  double f = 1.0;
  for (int i = 2; i <= n; ++i) f *= i;
  return f;
}

double clamp_unit(double t) { return std::clamp(t, -1.0, 1.0); }

double bell_center(int k, int n) {
  return clamp_unit((static_cast<double>(k) - 2.0 * n) / n);
}

PrecisionMode mode_for_eps(double eps) {
  return eps <= kExtendedEpsThreshold ? PrecisionMode::extended
                                      : PrecisionMode::standard;
}

void check_eps(double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw DomainError("accuracy eps must lie in (0,1)");
  if (eps <= kEpsFloor)
    throw ConditioningError(
        "eps <= 1e-5: weights exceed what double-double evaluation resolves");
}

struct GridSup {
  double value = 0.0;
  double argmax = 0.0;
};

GridSup sup_deviation_on_interval(const std::function<double(double)>& target,
                                  const LayeredNetwork& net, double a,
                                  double b, int grid_points, int random_points,
                                  std::uint64_t seed) {
  GridSup sup;
  auto consider = [&](double t) {
    const double dev = std::fabs(target(t) - net.evaluate(t));
    if (dev > sup.value) {
      sup.value = dev;
      sup.argmax = t;
    }
  };
  for (int i = 0; i <= grid_points; ++i) {
    consider(a + (b - a) * static_cast<double>(i) / grid_points);
  }
  Rng rng(seed);
  for (int i = 0; i < random_points; ++i) consider(rng.uniform(a, b));
  return sup;
}

}  // namespace

double default_expansion_point(int degree) {
  const auto& table = SigmoidDerivativeTable::instance();
  double best_t0 = 1.0;
  double best_score = -1.0;
  for (int i = 2; i <= 40; ++i) {
    const double t0 = 0.05 * i;
    double score = std::fabs(table.evaluate(1, t0));
    for (int j = 2; j <= std::max(degree, 1); ++j) {
      score = std::fmin(score, std::fabs(table.evaluate(j, t0)));
    }
    if (score > best_score) {
      best_score = score;
      best_t0 = t0;
    }
  }
  return best_t0;
}

LayeredNetwork construct_poly_net(const PolyNetSpec& spec) {
  const auto& u_in = spec.coefficients;
  if (u_in.empty()) throw DomainError("poly net: empty coefficient list");
  for (double c : u_in)
    if (!std::isfinite(c)) throw DomainError("poly net: non-finite coefficient");
  const int k = static_cast<int>(u_in.size()) - 1;
  if (k > 0 && u_in.back() == 0.0)
    throw DomainError("poly net: leading coefficient must be nonzero");
  check_eps(spec.eps);

  const auto& table = SigmoidDerivativeTable::instance();
  const double t0 = spec.expansion_point.value_or(default_expansion_point(k));
  for (int j = 1; j <= k; ++j) {
    if (std::fabs(table.evaluate(j, t0)) <= 1e-6)
      throw DomainError("poly net: expansion point infeasible (sigma^{(j)}(t0) ~ 0)");
  }

  // The recursion runs in double-double and always against the *stored*
  // (rounded) weights: weights of size 1/eps^3 must cancel against the
  // trailing coefficients to the target accuracy, which plain double cannot
  // carry below eps ~ 1e-3.
  const Dd t0_dd = dd_from(t0);
  std::vector<Dd> sig(static_cast<std::size_t>(k) + 2);
  for (int i = 0; i <= k + 1; ++i) {
    sig[static_cast<std::size_t>(i)] = table.evaluate_dd(i, t0_dd);
  }
  std::vector<Dd> u(u_in.size());
  for (std::size_t i = 0; i < u_in.size(); ++i) u[i] = dd_from(u_in[i]);

  Layer hidden;
  hidden.cols = 1;
  std::vector<double> readout;

  const double eps_step = spec.eps / std::max(k, 1);
  for (int j = k; j >= 1; --j) {
    const double uj = dd_to_double(u[static_cast<std::size_t>(j)]);
    if (uj == 0.0) {
      hidden.weights.push_back(0.0);
      hidden.bias.push_back(0.0);
      readout.push_back(0.0);
      continue;
    }
    const double sj = dd_to_double(sig[static_cast<std::size_t>(j)]);
    const double next_max = table.max_abs(j + 1);
    const double mu = std::fmin(
        1.0, eps_step * (j + 1) * std::fabs(sj) / (std::fabs(uj) * next_max));
    const Dd mu_pow_j = dd_pow_int(dd_from(mu), j);
    const Dd c_dd =
        dd_div(dd_mul(u[static_cast<std::size_t>(j)], factorial(j)),
               dd_mul(mu_pow_j, sig[static_cast<std::size_t>(j)]));
    const double c = dd_to_double(c_dd);
    hidden.weights.push_back(mu);
    hidden.bias.push_back(t0);
    readout.push_back(c);
    for (int i = 0; i < j; ++i) {
      const Dd contamination = dd_div(
          dd_mul(dd_mul(sig[static_cast<std::size_t>(i)],
                        dd_pow_int(dd_from(mu), i)),
                 c),
          dd_from(factorial(i)));
      u[static_cast<std::size_t>(i)] =
          dd_sub(u[static_cast<std::size_t>(i)], contamination);
    }
  }
  // Degree-0 term: the high word through a zero-weight neuron
  // (2 u_0.hi * sigma(0) = u_0.hi exactly), the low word through the
  // readout constant.
  hidden.weights.push_back(0.0);
  hidden.bias.push_back(0.0);
  readout.push_back(2.0 * u[0].hi);
  hidden.rows = static_cast<int>(readout.size());

  LayeredNetwork net(1, {std::move(hidden)}, std::move(readout), u[0].lo,
                     mode_for_eps(spec.eps));

  auto poly = [&u_in](double t) {
    double acc = 0.0;
    for (std::size_t i = u_in.size(); i-- > 0;) acc = acc * t + u_in[i];
    return acc;
  };
  const GridSup sup = sup_deviation_on_interval(poly, net, -1.0, 1.0, 10000,
                                                1000, 0x706f6c79u);
  if (sup.value > spec.eps) {
    throw ConstructionError(
        "poly net verification failed: sup error " + std::to_string(sup.value) +
            " > eps at t=" + std::to_string(sup.argmax),
        sup.value);
  }
  return net;
}

LayeredNetwork square_net(double eps) {
  return construct_poly_net({{0.0, 0.0, 1.0}, eps, std::nullopt});
}

LayeredNetwork norm_net(int d, double eps) {
  if (d < 1) throw DomainError("norm net: dimension must be >= 1");
  const LayeredNetwork square = square_net(eps);
  const Layer& sq_layer = square.layers().front();

  Layer hidden;
  hidden.rows = 3 * d;
  hidden.cols = d;
  hidden.weights.assign(static_cast<std::size_t>(hidden.rows) * d, 0.0);
  hidden.bias.resize(static_cast<std::size_t>(hidden.rows));
  std::vector<double> readout(static_cast<std::size_t>(hidden.rows));
  for (int coord = 0; coord < d; ++coord) {
    for (int i = 0; i < 3; ++i) {
      const int r = 3 * coord + i;
      hidden.weight(r, coord) = sq_layer.weights[static_cast<std::size_t>(i)];
      hidden.bias[static_cast<std::size_t>(r)] =
          sq_layer.bias[static_cast<std::size_t>(i)];
      readout[static_cast<std::size_t>(r)] =
          square.readout()[static_cast<std::size_t>(i)];
    }
  }
  LayeredNetwork net(d, {std::move(hidden)}, std::move(readout),
                     d * square.readout_constant(), mode_for_eps(eps));

  const double tolerance = d * eps;
  double sup = 0.0;
  auto consider = [&](std::span<const double> x) {
    double norm2 = 0.0;
    for (double xi : x) norm2 += xi * xi;
    sup = std::fmax(sup, std::fabs(net.evaluate(x) - norm2));
  };
  for (const auto& x : halton_ball(d, 10000)) consider(x);
  Rng rng(0x6e6f726du);
  for (int i = 0; i < 1000; ++i) {
    const auto x = rng.ball_point(d);
    consider(x);
  }
  std::vector<double> axis(static_cast<std::size_t>(d), 0.0);
  for (int i = 0; i <= 200; ++i) {
    axis.back() = -1.0 + i / 100.0;
    consider(axis);
  }
  if (sup > tolerance) {
    throw ConstructionError("norm net verification failed: sup error " +
                                std::to_string(sup) + " > d*eps",
                            sup);
  }
  return net;
}

LayeredNetwork product_gate(double eps) {
  if (!(eps > 0.0 && eps < 1.0))
    throw DomainError("accuracy eps must lie in (0,1)");
  const LayeredNetwork square = square_net(eps / 3.0);
  const Layer& sq = square.layers().front();
  const auto& sq_readout = square.readout();

  Layer hidden;
  hidden.rows = 9;
  hidden.cols = 2;
  hidden.weights.assign(18, 0.0);
  hidden.bias.resize(9);
  std::vector<double> readout(9);
  for (int i = 0; i < 3; ++i) {
    const double w = sq.weights[static_cast<std::size_t>(i)];
    const double b = sq.bias[static_cast<std::size_t>(i)];
    const double a = sq_readout[static_cast<std::size_t>(i)];
    // (t+t')/2 input, readout scaled by 4/2
    hidden.weight(i, 0) = 0.5 * w;
    hidden.weight(i, 1) = 0.5 * w;
    hidden.bias[static_cast<std::size_t>(i)] = b;
    readout[static_cast<std::size_t>(i)] = 2.0 * a;
    // t input
    hidden.weight(3 + i, 0) = w;
    hidden.bias[static_cast<std::size_t>(3 + i)] = b;
    readout[static_cast<std::size_t>(3 + i)] = -0.5 * a;
    // t' input
    hidden.weight(6 + i, 1) = w;
    hidden.bias[static_cast<std::size_t>(6 + i)] = b;
    readout[static_cast<std::size_t>(6 + i)] = -0.5 * a;
  }
  LayeredNetwork net(2, {std::move(hidden)}, std::move(readout),
                     square.readout_constant(), mode_for_eps(eps / 3.0));

  double sup = 0.0;
  auto consider = [&](double t, double tp) {
    const double x[2] = {t, tp};
    sup = std::fmax(sup,
                    std::fabs(net.evaluate(std::span<const double>{x, 2}) - t * tp));
  };
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      consider(-1.0 + i / 50.0, -1.0 + j / 50.0);
    }
  }
  Rng rng(0x67617465u);
  for (int i = 0; i < 1000; ++i) consider(rng.uniform(-1, 1), rng.uniform(-1, 1));
  if (sup > eps) {
    throw ConstructionError("product gate verification failed: sup error " +
                                std::to_string(sup) + " > eps",
                            sup);
  }
  return net;
}

std::vector<std::vector<double>> make_nodes(int n, int d) {
  if (n < 1 || d < 1) throw DomainError("make_nodes: n and d must be >= 1");
  std::vector<std::vector<double>> nodes;
  nodes.reserve(static_cast<std::size_t>(4 * n + 1));
  for (int k = 0; k <= 4 * n; ++k) {
    std::vector<double> x(static_cast<std::size_t>(d), 0.0);
    x.back() = std::sqrt((bell_center(k, n) + 1.0) / 2.0);
    nodes.push_back(std::move(x));
  }
  return nodes;
}

DnoOperator::DnoOperator(int n, double eps, int d,
                         std::vector<std::vector<double>> nodes,
                         std::vector<double> samples, LayeredNetwork norm)
    : n_(n),
      eps_(eps),
      d_(d),
      nodes_(std::move(nodes)),
      samples_(std::move(samples)),
      norm_(std::move(norm)) {
  if (n_ < 1 || d_ < 1) throw DomainError("operator: n and d must be >= 1");
  const std::size_t count = static_cast<std::size_t>(4 * n_ + 1);
  if (nodes_.size() != count || samples_.size() != count)
    throw ShapeError("operator: expected 4n+1 nodes and samples");
  for (double s : samples_)
    if (!std::isfinite(s)) throw DataError("operator: non-finite sample");
  scaled_row_.reserve(norm_.readout().size());
  for (double a : norm_.readout()) {
    scaled_row_.push_back(2.0 * n_ * a);
  }
  scaled_offset_ = 2.0 * n_ * norm_.readout_constant() + n_;
}

double DnoOperator::norm_value(std::span<const double> x,
                               std::optional<PrecisionMode> mode) const {
  return norm_.evaluate(x, mode);
}

double DnoOperator::evaluate(std::span<const double> x,
                             std::optional<PrecisionMode> mode) const {
  if (x.size() != static_cast<std::size_t>(d_))
    throw ShapeError("operator evaluate: input length mismatch");
  const PrecisionMode m = mode.value_or(norm_.precision_hint());
  const Layer& layer = norm_.layers().front();

  double base;
  if (m == PrecisionMode::standard) {
    std::vector<double> h(static_cast<std::size_t>(layer.rows));
    for (int r = 0; r < layer.rows; ++r) {
      const std::span<const double> row{
          layer.weights.data() + static_cast<std::size_t>(r) * layer.cols,
          static_cast<std::size_t>(layer.cols)};
      h[static_cast<std::size_t>(r)] =
          sigmoid(dot2(row, x) + layer.bias[static_cast<std::size_t>(r)]);
    }
    base = dot2(scaled_row_, h) + scaled_offset_;
  } else {
    std::vector<Dd> h(static_cast<std::size_t>(layer.rows));
    for (int r = 0; r < layer.rows; ++r) {
      Dd acc = dd_from(layer.bias[static_cast<std::size_t>(r)]);
      for (int c = 0; c < layer.cols; ++c) {
        acc = dd_add(acc, dd_mul(dd_from(x[static_cast<std::size_t>(c)]),
                                 layer.weight(r, c)));
      }
      h[static_cast<std::size_t>(r)] = dd_sigmoid(acc);
    }
    Dd acc = dd_from(scaled_offset_);
    for (std::size_t i = 0; i < scaled_row_.size(); ++i) {
      acc = dd_add(acc, dd_mul(h[i], scaled_row_[i]));
    }
    base = dd_to_double(acc);
  }
  return kernels::active().bell_comb(samples_.data(), samples_.size(), base);
}

LayeredNetwork DnoOperator::flatten() const {
  const Layer& first = norm_.layers().front();
  const int m = 4 * n_ + 1;

  Layer second;
  second.rows = 2 * m;
  second.cols = first.rows;
  second.weights.resize(static_cast<std::size_t>(second.rows) * second.cols);
  second.bias.resize(static_cast<std::size_t>(second.rows));
  std::vector<double> readout(static_cast<std::size_t>(second.rows));
  for (int k = 0; k < m; ++k) {
    for (int c = 0; c < second.cols; ++c) {
      second.weight(2 * k, c) = scaled_row_[static_cast<std::size_t>(c)];
      second.weight(2 * k + 1, c) = scaled_row_[static_cast<std::size_t>(c)];
    }
    second.bias[static_cast<std::size_t>(2 * k)] = scaled_offset_ - k + 1.0;
    second.bias[static_cast<std::size_t>(2 * k + 1)] = scaled_offset_ - k - 1.0;
    readout[static_cast<std::size_t>(2 * k)] =
        0.5 * samples_[static_cast<std::size_t>(k)];
    readout[static_cast<std::size_t>(2 * k + 1)] =
        -0.5 * samples_[static_cast<std::size_t>(k)];
  }
  return LayeredNetwork(d_, {first, std::move(second)}, std::move(readout),
                        0.0, norm_.precision_hint());
}

std::string DnoOperator::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = "dno-operator";
  j["version"] = 1;
  j["n"] = n_;
  j["eps"] = eps_;
  j["d"] = d_;
  j["nodes"] = nodes_;
  j["samples"] = samples_;
  j["norm_net"] = nlohmann::ordered_json::parse(norm_.to_json());
  return j.dump(2);
}

DnoOperator DnoOperator::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.at("format") != "dno-operator" || j.at("version") != 1)
    throw ConfigError("unrecognized operator file format/version");
  return DnoOperator(j.at("n").get<int>(), j.at("eps").get<double>(),
                     j.at("d").get<int>(),
                     j.at("nodes").get<std::vector<std::vector<double>>>(),
                     j.at("samples").get<std::vector<double>>(),
                     LayeredNetwork::from_json(j.at("norm_net").dump()));
}

DnoOperator build_dno(const Sampler& f, int n, double eps, int d) {
  if (n < 1 || d < 1) throw DomainError("build_dno: n and d must be >= 1");
  check_eps(eps);
  auto nodes = make_nodes(n, d);
  std::vector<double> samples;
  samples.reserve(nodes.size());
  for (std::size_t k = 0; k < nodes.size(); ++k) {
    double value;
    try {
      value = f(nodes[k]);
    } catch (const std::exception& e) {
      throw DataError("sampler failed at node " + std::to_string(k) + ": " +
                      e.what());
    }
    if (!std::isfinite(value))
      throw DataError("sampler returned non-finite value at node " +
                      std::to_string(k));
    samples.push_back(value);
  }
  DnoOperator op(n, eps, d, std::move(nodes), std::move(samples),
                 norm_net(d, eps));

  const LayeredNetwork flat = op.flatten();
  Rng rng(0x646e6f00u + static_cast<std::uint64_t>(n));
  double worst = 0.0;
  for (int i = 0; i < 64; ++i) {
    const auto x = rng.ball_point(d);
    worst = std::fmax(worst, std::fabs(op.evaluate(x) - flat.evaluate(x)));
  }
  if (worst > 1e-10) {
    throw ConstructionError(
        "operator flattening disagrees with direct evaluation", worst);
  }
  return op;
}

UnivariateOperator::UnivariateOperator(int n, std::vector<double> beta)
    : n_(n), beta_(std::move(beta)) {
  if (n_ < 1) throw DomainError("univariate operator: n must be >= 1");
  if (beta_.size() != static_cast<std::size_t>(4 * n_ + 1))
    throw ShapeError("univariate operator: expected 4n+1 coefficients");
}

double UnivariateOperator::evaluate(double t) const {
  const double base = n_ * t + 2.0 * n_;
  return kernels::active().bell_comb(beta_.data(), beta_.size(), base);
}

double UnivariateOperator::derivative(double t) const {
  const double base = n_ * t + 2.0 * n_;
  return n_ *
         kernels::active().bell_comb_deriv(beta_.data(), beta_.size(), base);
}

LayeredNetwork UnivariateOperator::flatten() const {
  const int m = 4 * n_ + 1;
  Layer hidden;
  hidden.rows = 2 * m;
  hidden.cols = 1;
  hidden.weights.resize(static_cast<std::size_t>(2 * m));
  hidden.bias.resize(static_cast<std::size_t>(2 * m));
  std::vector<double> readout(static_cast<std::size_t>(2 * m));
  for (int k = 0; k < m; ++k) {
    hidden.weights[static_cast<std::size_t>(2 * k)] = n_;
    hidden.weights[static_cast<std::size_t>(2 * k + 1)] = n_;
    hidden.bias[static_cast<std::size_t>(2 * k)] = 2.0 * n_ - k + 1.0;
    hidden.bias[static_cast<std::size_t>(2 * k + 1)] = 2.0 * n_ - k - 1.0;
    readout[static_cast<std::size_t>(2 * k)] =
        0.5 * beta_[static_cast<std::size_t>(k)];
    readout[static_cast<std::size_t>(2 * k + 1)] =
        -0.5 * beta_[static_cast<std::size_t>(k)];
  }
  return LayeredNetwork(1, {std::move(hidden)}, std::move(readout));
}

UnivariateOperator build_univariate(const UnivariateSampler& g, int n) {
  if (n < 1) throw DomainError("build_univariate: n must be >= 1");
  std::vector<double> beta;
  beta.reserve(static_cast<std::size_t>(4 * n + 1));
  for (int k = 0; k <= 4 * n; ++k) {
    double value;
    try {
      value = g(bell_center(k, n));
    } catch (const std::exception& e) {
      throw DataError("sampler failed at node " + std::to_string(k) + ": " +
                      e.what());
    }
    if (!std::isfinite(value))
      throw DataError("sampler returned non-finite value at node " +
                      std::to_string(k));
    beta.push_back(value);
  }
  return UnivariateOperator(n, std::move(beta));
}

}  // namespace dno
