#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "dno/constructor.hpp"

namespace dno {

enum class RadialProfile { linear, power, shifted_abs, smooth_cos };
enum class NonRadialKind { coordinate, bilinear };

struct TestFunctionMetadata {
  bool is_radial = false;
  double alpha = 1.0;        // Hoelder exponent of the profile
  double c = 1.0;            // Hoelder coefficient
  double tau_injected = 0.0; // sup of the injected non-radial perturbation
  double nu = 0.0;           // Lipschitz tolerance
  double sup_norm = 1.0;     // upper bound on |f| over the ball
};

/// Corpus entry: an evaluator on the unit ball with ground-truth metadata,
/// audited against that metadata at construction.
struct TestFunction {
  std::string id;
  int d = 1;
  Sampler evaluator;
  UnivariateSampler profile;  // g with f = g(||x||^2) + tau * p(x); radial only
  TestFunctionMetadata meta;
};

/// f(x) = g(||x||^2) + tau * sin(5 x^{(1)}). The perturbation has sup exactly
/// 1 over the ball, is non-radial, and vanishes on the last-coordinate axis
/// for d >= 2. Profiles: linear t, power t^alpha, shifted-abs |t-1/2|^alpha,
/// smooth-cos cos(pi t)/2. Audited on `audit_seed`-seeded samples.
TestFunction make_radial(RadialProfile profile, double alpha, int d, double tau,
                         std::uint64_t audit_seed);

TestFunction make_nonradial(NonRadialKind kind, int d);

/// Named corpus selectors understood by the CLI:
///   linear-radial | power-radial | shifted-abs-radial | smooth-cos-radial |
///   coordinate | bilinear
TestFunction corpus_by_name(const std::string& name, int d, double alpha,
                            double tau, std::uint64_t seed);
std::vector<std::string> corpus_names();

/// Radial entries exercised by the verification suites.
std::vector<TestFunction> standard_radial_corpus(std::uint64_t seed);

/// Univariate functions for the Bernstein / inverse-inequality suites.
struct UnivariateEntry {
  std::string id;
  UnivariateSampler g;
  double deriv_sup;  // ||g'||_inf when g is differentiable, else 0
  double sup;        // ||g||_inf on [-1,1]
};
std::vector<UnivariateEntry> standard_univariate_corpus();

/// Seeded +-1 step function on 1024 buckets of [-1,1]; the same seed yields
/// the same function at every sampling resolution (Bernstein suite data).
UnivariateSampler random_step_function(std::uint64_t seed);

/// Manifest file: one entry per line,
///   <id> profile=<selector> d=<int> [alpha=<v>] [tau=<v>] [seed=<v>]
/// Blank lines and lines starting with '#' are skipped.
std::vector<TestFunction> load_manifest(const std::string& path);

/// Scattered tabulated samples (one line per point: d coordinates then the
/// value). Queries use the value of a local linear fit through the d+1
/// nearest samples, falling back to the nearest value when degenerate.
class TabulatedFunction {
 public:
  TabulatedFunction(int d, std::vector<std::vector<double>> points,
                    std::vector<double> values);
  static TabulatedFunction load(const std::string& path, int d);

  int d() const { return d_; }
  std::size_t size() const { return points_.size(); }
  const char* method() const { return "nearest-neighbor+local-linear"; }

  double operator()(std::span<const double> x) const;

 private:
  int d_;
  std::vector<std::vector<double>> points_;
  std::vector<double> values_;
};

}  // namespace dno
