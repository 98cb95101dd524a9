#include "dno/corpus.hpp"

#include <algorithm>
#include <cmath>
#include <fstream>
#include <sstream>

#include "dno/errors.hpp"
#include "dno/rng.hpp"

namespace dno {

namespace {

constexpr double kPi = 3.14159265358979323846;

double norm_squared(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

struct ProfileDef {
  UnivariateSampler g;
  double alpha;
  double c;
  double sup;
  std::string tag;
};

ProfileDef profile_def(RadialProfile profile, double alpha) {
  switch (profile) {
    case RadialProfile::linear:
      return {[](double t) { return t; }, 1.0, 1.0, 1.0, "linear"};
    case RadialProfile::power:
      if (!(alpha > 0.0 && alpha <= 1.0))
        throw DomainError("power profile: alpha must lie in (0,1]");
      return {[alpha](double t) { return std::pow(t, alpha); }, alpha, 1.0, 1.0,
              "power"};
    case RadialProfile::shifted_abs:
      if (!(alpha > 0.0 && alpha <= 1.0))
        throw DomainError("shifted-abs profile: alpha must lie in (0,1]");
      return {[alpha](double t) { return std::pow(std::fabs(t - 0.5), alpha); },
              alpha, 1.0, std::pow(0.5, alpha), "shifted-abs"};
    case RadialProfile::smooth_cos:
      return {[](double t) { return 0.5 * std::cos(kPi * t); }, 1.0, kPi / 2.0,
              0.5, "smooth-cos"};
  }
  throw DomainError("unknown radial profile");
}

void audit_radial(const TestFunction& f, std::uint64_t seed) {
  Rng rng(seed);
  double defect = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto x = rng.ball_point(f.d);
    defect = std::fmax(
        defect, std::fabs(f.evaluator(x) - f.profile(norm_squared(x))));
  }
  if (defect > f.meta.tau_injected + 1e-12)
    throw ConfigError("corpus audit: radial defect " + std::to_string(defect) +
                      " exceeds injected tau");
  double quotient = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const double t = rng.uniform();
    const double s = rng.uniform();
    if (t == s) continue;
    quotient = std::fmax(quotient,
                         std::fabs(f.profile(t) - f.profile(s)) /
                             std::pow(std::fabs(t - s), f.meta.alpha));
  }
  if (quotient > f.meta.c + 1e-9)
    throw ConfigError("corpus audit: profile Lipschitz quotient " +
                      std::to_string(quotient) + " exceeds c");
}

}  // namespace

TestFunction make_radial(RadialProfile profile, double alpha, int d, double tau,
                         std::uint64_t audit_seed) {
  if (d < 1) throw DomainError("make_radial: d must be >= 1");
  if (tau < 0.0) throw DomainError("make_radial: tau must be >= 0");
  ProfileDef def = profile_def(profile, alpha);

  TestFunction f;
  f.id = def.tag + "-radial(alpha=" + std::to_string(def.alpha) +
         ",d=" + std::to_string(d) + ",tau=" + std::to_string(tau) + ")";
  f.d = d;
  f.profile = def.g;
  auto g = def.g;
  f.evaluator = [g, tau](std::span<const double> x) {
    return g(norm_squared(x)) + tau * std::sin(5.0 * x[0]);
  };
  f.meta.is_radial = true;
  f.meta.alpha = def.alpha;
  f.meta.c = def.c;
  f.meta.tau_injected = tau;
  f.meta.nu = 0.0;
  f.meta.sup_norm = def.sup + tau;
  audit_radial(f, audit_seed);
  return f;
}

TestFunction make_nonradial(NonRadialKind kind, int d) {
  if (d < 2) throw DomainError("make_nonradial: d must be >= 2");
  TestFunction f;
  f.d = d;
  f.meta.is_radial = false;
  switch (kind) {
    case NonRadialKind::coordinate:
      f.id = "coordinate(d=" + std::to_string(d) + ")";
      f.evaluator = [](std::span<const double> x) { return x[0]; };
      f.meta.sup_norm = 1.0;
      break;
    case NonRadialKind::bilinear:
      f.id = "bilinear(d=" + std::to_string(d) + ")";
      f.evaluator = [](std::span<const double> x) { return x[0] * x[1]; };
      f.meta.sup_norm = 0.5;
      break;
  }
  return f;
}

TestFunction corpus_by_name(const std::string& name, int d, double alpha,
                            double tau, std::uint64_t seed) {
  if (name == "linear-radial")
    return make_radial(RadialProfile::linear, 1.0, d, tau, seed);
  if (name == "power-radial")
    return make_radial(RadialProfile::power, alpha, d, tau, seed);
  if (name == "shifted-abs-radial")
    return make_radial(RadialProfile::shifted_abs, alpha, d, tau, seed);
  if (name == "smooth-cos-radial")
    return make_radial(RadialProfile::smooth_cos, 1.0, d, tau, seed);
  if (name == "coordinate") return make_nonradial(NonRadialKind::coordinate, d);
  if (name == "bilinear") return make_nonradial(NonRadialKind::bilinear, d);
  throw ConfigError("unknown corpus selector: " + name);
}

std::vector<std::string> corpus_names() {
  return {"linear-radial",     "power-radial", "shifted-abs-radial",
          "smooth-cos-radial", "coordinate",   "bilinear"};
}

std::vector<TestFunction> standard_radial_corpus(std::uint64_t seed) {
  std::vector<TestFunction> corpus;
  corpus.push_back(make_radial(RadialProfile::linear, 1.0, 2, 0.0, seed));
  corpus.push_back(make_radial(RadialProfile::power, 0.5, 3, 0.0, seed + 1));
  corpus.push_back(make_radial(RadialProfile::power, 0.5, 3, 0.05, seed + 2));
  corpus.push_back(make_radial(RadialProfile::shifted_abs, 1.0, 2, 0.0, seed + 3));
  corpus.push_back(make_radial(RadialProfile::smooth_cos, 1.0, 2, 0.0, seed + 4));
  return corpus;
}

std::vector<UnivariateEntry> standard_univariate_corpus() {
  std::vector<UnivariateEntry> entries;
  entries.push_back({"linear", [](double t) { return t; }, 1.0, 1.0});
  entries.push_back(
      {"sqrt-abs", [](double t) { return std::sqrt(std::fabs(t)); }, 0.0, 1.0});
  entries.push_back(
      {"shifted-abs", [](double t) { return std::fabs(t - 0.25); }, 1.0, 1.25});
  entries.push_back(
      {"half-cos", [](double t) { return 0.5 * std::cos(kPi * t); }, kPi / 2.0,
       0.5});
  entries.push_back({"square", [](double t) { return t * t; }, 2.0, 1.0});
  return entries;
}

UnivariateSampler random_step_function(std::uint64_t seed) {
  return [seed](double t) {
    const double u = std::clamp((t + 1.0) / 2.0, 0.0, 1.0);
    const auto bucket =
        std::min<std::uint64_t>(static_cast<std::uint64_t>(u * 1024.0), 1023);
    return (hash_combine(seed, bucket) & 1) ? 1.0 : -1.0;
  };
}

std::vector<TestFunction> load_manifest(const std::string& path) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open manifest: " + path);
  std::vector<TestFunction> out;
  std::string line;
  while (std::getline(in, line)) {
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::string id;
    ss >> id;
    std::string profile;
    int d = 2;
    double alpha = 1.0, tau = 0.0;
    std::uint64_t seed = 1;
    std::string kv;
    while (ss >> kv) {
      const auto pos = kv.find('=');
      if (pos == std::string::npos)
        throw DataError("manifest: malformed token '" + kv + "'");
      const std::string key = kv.substr(0, pos);
      const std::string value = kv.substr(pos + 1);
      if (key == "profile") profile = value;
      else if (key == "d") d = std::stoi(value);
      else if (key == "alpha") alpha = std::stod(value);
      else if (key == "tau") tau = std::stod(value);
      else if (key == "seed") seed = std::stoull(value);
      else throw DataError("manifest: unknown key '" + key + "'");
    }
    if (profile.empty()) throw DataError("manifest: entry without profile");
    TestFunction f = corpus_by_name(profile, d, alpha, tau, seed);
    f.id = id;
    out.push_back(std::move(f));
  }
  return out;
}

TabulatedFunction::TabulatedFunction(int d,
                                     std::vector<std::vector<double>> points,
                                     std::vector<double> values)
    : d_(d), points_(std::move(points)), values_(std::move(values)) {
  if (d_ < 1) throw DataError("tabulated function: d must be >= 1");
  if (points_.size() != values_.size() || points_.empty())
    throw DataError("tabulated function: point/value count mismatch");
  for (const auto& p : points_)
    if (p.size() != static_cast<std::size_t>(d_))
      throw DataError("tabulated function: point dimension mismatch");
}

TabulatedFunction TabulatedFunction::load(const std::string& path, int d) {
  std::ifstream in(path);
  if (!in) throw DataError("cannot open tabulated file: " + path);
  std::vector<std::vector<double>> points;
  std::vector<double> values;
  std::string line;
  std::size_t lineno = 0;
  while (std::getline(in, line)) {
    ++lineno;
    if (line.empty() || line[0] == '#') continue;
    std::istringstream ss(line);
    std::vector<double> p(static_cast<std::size_t>(d));
    double v;
    for (auto& c : p) {
      if (!(ss >> c))
        throw DataError("tabulated file: short line " + std::to_string(lineno));
    }
    if (!(ss >> v))
      throw DataError("tabulated file: missing value on line " +
                      std::to_string(lineno));
    points.push_back(std::move(p));
    values.push_back(v);
  }
  return TabulatedFunction(d, std::move(points), std::move(values));
}

double TabulatedFunction::operator()(std::span<const double> x) const {
  if (x.size() != static_cast<std::size_t>(d_))
    throw ShapeError("tabulated function: query dimension mismatch");
  const std::size_t k = static_cast<std::size_t>(d_) + 1;
  // Indices of the k nearest samples (linear scan; corpora are desk-scale).
  std::vector<std::pair<double, std::size_t>> dist;
  dist.reserve(points_.size());
  for (std::size_t i = 0; i < points_.size(); ++i) {
    double d2 = 0.0;
    for (int j = 0; j < d_; ++j) {
      const double diff = points_[i][static_cast<std::size_t>(j)] -
                          x[static_cast<std::size_t>(j)];
      d2 += diff * diff;
    }
    dist.emplace_back(d2, i);
  }
  const std::size_t take = std::min(k, dist.size());
  std::partial_sort(dist.begin(), dist.begin() + static_cast<std::ptrdiff_t>(take),
                    dist.end());
  if (dist.front().first == 0.0 || take < k) return values_[dist.front().second];

  // Local linear fit value(p) ~ a0 + a . (p - x) via normal equations in
  // (d+1) unknowns; the constant term a0 is the interpolated value at x.
  const int m = d_ + 1;
  std::vector<double> ata(static_cast<std::size_t>(m) * m, 0.0);
  std::vector<double> atb(static_cast<std::size_t>(m), 0.0);
  for (std::size_t row = 0; row < take; ++row) {
    const auto& p = points_[dist[row].second];
    std::vector<double> phi(static_cast<std::size_t>(m));
    phi[0] = 1.0;
    for (int j = 0; j < d_; ++j)
      phi[static_cast<std::size_t>(j) + 1] =
          p[static_cast<std::size_t>(j)] - x[static_cast<std::size_t>(j)];
    for (int a = 0; a < m; ++a) {
      for (int b = 0; b < m; ++b)
        ata[static_cast<std::size_t>(a) * m + b] +=
            phi[static_cast<std::size_t>(a)] * phi[static_cast<std::size_t>(b)];
      atb[static_cast<std::size_t>(a)] +=
          phi[static_cast<std::size_t>(a)] * values_[dist[row].second];
    }
  }
  // Gaussian elimination with partial pivoting; fall back on degeneracy.
  for (int col = 0; col < m; ++col) {
    int pivot = col;
    for (int r = col + 1; r < m; ++r) {
      if (std::fabs(ata[static_cast<std::size_t>(r) * m + col]) >
          std::fabs(ata[static_cast<std::size_t>(pivot) * m + col]))
        pivot = r;
    }
    if (std::fabs(ata[static_cast<std::size_t>(pivot) * m + col]) < 1e-12)
      return values_[dist.front().second];
    if (pivot != col) {
      for (int c = 0; c < m; ++c)
        std::swap(ata[static_cast<std::size_t>(pivot) * m + c],
                  ata[static_cast<std::size_t>(col) * m + c]);
      std::swap(atb[static_cast<std::size_t>(pivot)],
                atb[static_cast<std::size_t>(col)]);
    }
    const double diag = ata[static_cast<std::size_t>(col) * m + col];
    for (int r = col + 1; r < m; ++r) {
      const double factor = ata[static_cast<std::size_t>(r) * m + col] / diag;
      for (int c = col; c < m; ++c)
        ata[static_cast<std::size_t>(r) * m + c] -=
            factor * ata[static_cast<std::size_t>(col) * m + c];
      atb[static_cast<std::size_t>(r)] -= factor * atb[static_cast<std::size_t>(col)];
    }
  }
  std::vector<double> sol(static_cast<std::size_t>(m));
  for (int r = m - 1; r >= 0; --r) {
    double acc = atb[static_cast<std::size_t>(r)];
    for (int c = r + 1; c < m; ++c)
      acc -= ata[static_cast<std::size_t>(r) * m + c] * sol[static_cast<std::size_t>(c)];
    sol[static_cast<std::size_t>(r)] = acc / ata[static_cast<std::size_t>(r) * m + r];
  }
  return sol[0];
}

}  // namespace dno
