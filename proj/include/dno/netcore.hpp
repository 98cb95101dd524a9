#pragma once

#include <cstdint>
#include <optional>
#include <span>
#include <string>
#include <vector>

#include "dno/double_double.hpp"

namespace dno {

enum class PrecisionMode { standard, extended };

/// One affine stage: y = W x + b with W stored row-major (rows x cols).
struct Layer {
  int rows = 0;
  int cols = 0;
  std::vector<double> weights;
  std::vector<double> bias;

  double weight(int r, int c) const {
    return weights[static_cast<std::size_t>(r) * cols + c];
  }
  double& weight(int r, int c) {
    return weights[static_cast<std::size_t>(r) * cols + c];
  }
};

/// Compensated dot product (Ogita-Rump-Oishi dot2): result as if accumulated
/// in twice the working precision, then rounded once.
double dot2(std::span<const double> a, std::span<const double> b);

/// Explicit sigmoid network: readout . sigma(J_L(... sigma(J_1(x)))) + constant.
/// Immutable after construction; evaluation is pure.
class LayeredNetwork {
 public:
  LayeredNetwork() = default;
  LayeredNetwork(int input_dim, std::vector<Layer> layers,
                 std::vector<double> readout, double readout_constant = 0.0,
                 PrecisionMode precision_hint = PrecisionMode::standard);

  int input_dim() const { return input_dim_; }
  int depth() const { return static_cast<int>(layers_.size()); }
  const std::vector<Layer>& layers() const { return layers_; }
  const std::vector<double>& readout() const { return readout_; }
  double readout_constant() const { return readout_constant_; }
  PrecisionMode precision_hint() const { return precision_hint_; }

  /// Widths (d_1, ..., d_L).
  std::vector<int> widths() const;

  /// Forward evaluation. Every dot product uses compensated summation; in
  /// extended mode the whole pass runs in double-double arithmetic
  /// (including the sigmoid) and rounds once at the end.
  double evaluate(std::span<const double> x,
                  std::optional<PrecisionMode> mode = std::nullopt) const;

  double evaluate(double t,
                  std::optional<PrecisionMode> mode = std::nullopt) const;

  /// d/dt of the network output for univariate networks (exact chain rule
  /// through sigma'). Throws CapabilityError when input_dim != 1.
  double evaluate_derivative(double t) const;

  /// d_L + sum_k (d_{k-1} d_k + d_k), with d_0 the input dimension.
  std::int64_t parameter_count() const;

  /// Largest |entry| over all weights, biases and the readout.
  double max_abs_weight() const;

  std::string to_json() const;
  static LayeredNetwork from_json(const std::string& text);

 private:
  void validate() const;

  int input_dim_ = 0;
  std::vector<Layer> layers_;
  std::vector<double> readout_;
  double readout_constant_ = 0.0;
  PrecisionMode precision_hint_ = PrecisionMode::standard;
};

}  // namespace dno
