#pragma once

#include <functional>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dno/netcore.hpp"

namespace dno {

/// Accuracy below which constructed nets evaluate in double-double arithmetic.
inline constexpr double kExtendedEpsThreshold = 1e-2;
/// Accuracies at or below this are rejected: the cancellation exceeds what
/// double-double evaluation can represent reliably.
inline constexpr double kEpsFloor = 1e-5;

using Sampler = std::function<double(std::span<const double>)>;
using UnivariateSampler = std::function<double(double)>;

/// Inputs for the shallow polynomial net construction: approximate
/// p(t) = sum u_i t^i on [-1,1] within eps using at most k+1 sigmoid neurons.
struct PolyNetSpec {
  std::vector<double> coefficients;        // u_0 .. u_k
  double eps = 0.1;                        // in (0,1)
  std::optional<double> expansion_point;   // t0; default: feasibility search
};

/// Expansion point maximizing min_{1<=j<=k} |sigma^{(j)}(t0)| over a coarse
/// grid in [0.1, 2].
double default_expansion_point(int degree);

/// Shallow net from the iterative leading-coefficient elimination. Each step j
/// adds the neuron c_j sigma(mu_j t + t0) with c_j = u_j^{(j)} j!/(mu_j^j
/// sigma^{(j)}(t0)) and subtracts its lower-order Taylor contamination from the
/// remaining coefficients; mu_j budgets the Lagrange remainder. The degree-0
/// term is realized exactly by a zero-weight neuron (readout 2 u_0^{(0)}).
/// Grid-verified to eps before returning.
LayeredNetwork construct_poly_net(const PolyNetSpec& spec);

/// Three-neuron net with sup_{[-1,1]} |t^2 - net(t)| <= eps.
LayeredNetwork square_net(double eps);

/// Coordinate-wise sum of square nets: width 3d, |net(x) - ||x||^2| <= d eps
/// on the unit ball.
LayeredNetwork norm_net(int d, double eps);

/// Nine-neuron net approximating (t,t') -> t t' within eps on [-1,1]^2,
/// via t t' = 2 ((t+t')/2)^2 - t^2/2 - t'^2/2 with square nets of accuracy
/// eps/3.
LayeredNetwork product_gate(double eps);

/// The 4n+1 sample nodes: with t_k = clamp((k-2n)/n, -1, 1), node k is
/// (0,...,0, sqrt((t_k+1)/2)) so that ||xi_k||^2 = (t_k+1)/2 walks the unit
/// interval as the bell centers walk [-1,1].
std::vector<std::vector<double>> make_nodes(int n, int d);

class UnivariateOperator;

/// The constructed operator f -> sum_k f(xi_k) phi(n(2 N(x)-1) - k + 2n),
/// with N the norm net. Linear in the samples; immutable; evaluation pure.
class DnoOperator {
 public:
  DnoOperator(int n, double eps, int d,
              std::vector<std::vector<double>> nodes,
              std::vector<double> samples, LayeredNetwork norm);

  int n() const { return n_; }
  double eps() const { return eps_; }
  int d() const { return d_; }
  const std::vector<std::vector<double>>& nodes() const { return nodes_; }
  const std::vector<double>& samples() const { return samples_; }
  const LayeredNetwork& norm_network() const { return norm_; }
  PrecisionMode precision_hint() const { return norm_.precision_hint(); }

  double evaluate(std::span<const double> x,
                  std::optional<PrecisionMode> mode = std::nullopt) const;

  /// N_{0,t^2,eps}(x), the embedded norm-net value.
  double norm_value(std::span<const double> x,
                    std::optional<PrecisionMode> mode = std::nullopt) const;

  /// Two-hidden-layer network (3d sigmoid neurons, then 2(4n+1) sigmoid
  /// neurons realizing each bell as a sigma pair with readouts +-f(xi_k)/2).
  LayeredNetwork flatten() const;

  std::string to_json() const;
  static DnoOperator from_json(const std::string& text);

 private:
  int n_;
  double eps_;
  int d_;
  std::vector<std::vector<double>> nodes_;
  std::vector<double> samples_;
  LayeredNetwork norm_;
  std::vector<double> scaled_row_;  // 2n * readout of the norm net
  double scaled_offset_ = 0.0;      // 2n * readout constant + n
};

/// Samples f at the nodes, builds the norm net, checks the flattened form
/// against direct evaluation (1e-10) before returning.
DnoOperator build_dno(const Sampler& f, int n, double eps, int d);

/// G*_{n,g*}(t) = sum_k beta_k phi(nt - k + 2n) with beta_k = g*(t_k).
class UnivariateOperator {
 public:
  UnivariateOperator(int n, std::vector<double> beta);

  int n() const { return n_; }
  const std::vector<double>& beta() const { return beta_; }

  double evaluate(double t) const;
  /// Analytic d/dt via the bell derivative.
  double derivative(double t) const;

  LayeredNetwork flatten() const;

 private:
  int n_;
  std::vector<double> beta_;
};

UnivariateOperator build_univariate(const UnivariateSampler& g, int n);

}  // namespace dno
