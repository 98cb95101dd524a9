#include "dno/netcore.hpp"

#include <cmath>

#include "dno/activation.hpp"
#include "dno/errors.hpp"
#include "json.hpp"

namespace dno {

double dot2(std::span<const double> a, std::span<const double> b) {
  double s = 0.0;
  double comp = 0.0;
  const std::size_t n = a.size();
  for (std::size_t i = 0; i < n; ++i) {
    const Dd p = two_prod(a[i], b[i]);
    const Dd t = two_sum(s, p.hi);
    s = t.hi;
    comp += t.lo + p.lo;
  }
  return s + comp;
}

LayeredNetwork::LayeredNetwork(int input_dim, std::vector<Layer> layers,
                               std::vector<double> readout,
                               double readout_constant,
                               PrecisionMode precision_hint)
    : input_dim_(input_dim),
      layers_(std::move(layers)),
      readout_(std::move(readout)),
      readout_constant_(readout_constant),
      precision_hint_(precision_hint) {
  validate();
}

void LayeredNetwork::validate() const {
  if (input_dim_ < 1) throw ShapeError("network: input dimension must be >= 1");
  if (layers_.empty()) throw ShapeError("network: empty layer list");
  int prev = input_dim_;
  for (const auto& layer : layers_) {
    if (layer.rows < 1 || layer.cols != prev)
      throw ShapeError("network: layer shapes do not chain");
    if (layer.weights.size() !=
            static_cast<std::size_t>(layer.rows) * layer.cols ||
        layer.bias.size() != static_cast<std::size_t>(layer.rows))
      throw ShapeError("network: weight/bias sizes inconsistent");
    for (double w : layer.weights)
      if (!std::isfinite(w)) throw ShapeError("network: non-finite weight");
    for (double b : layer.bias)
      if (!std::isfinite(b)) throw ShapeError("network: non-finite bias");
    prev = layer.rows;
  }
  if (readout_.size() != static_cast<std::size_t>(prev))
    throw ShapeError("network: readout length mismatch");
  for (double a : readout_)
    if (!std::isfinite(a)) throw ShapeError("network: non-finite readout");
  if (!std::isfinite(readout_constant_))
    throw ShapeError("network: non-finite readout constant");
}

std::vector<int> LayeredNetwork::widths() const {
  std::vector<int> w;
  w.reserve(layers_.size());
  for (const auto& layer : layers_) w.push_back(layer.rows);
  return w;
}

double LayeredNetwork::evaluate(std::span<const double> x,
                                std::optional<PrecisionMode> mode) const {
  if (x.size() != static_cast<std::size_t>(input_dim_))
    throw ShapeError("network evaluate: input length mismatch");
  const PrecisionMode m = mode.value_or(precision_hint_);

  if (m == PrecisionMode::standard) {
    std::vector<double> cur(x.begin(), x.end());
    std::vector<double> next;
    for (const auto& layer : layers_) {
      next.resize(static_cast<std::size_t>(layer.rows));
      for (int r = 0; r < layer.rows; ++r) {
        const std::span<const double> row{
            layer.weights.data() + static_cast<std::size_t>(r) * layer.cols,
            static_cast<std::size_t>(layer.cols)};
        next[static_cast<std::size_t>(r)] =
            sigmoid(dot2(row, cur) + layer.bias[static_cast<std::size_t>(r)]);
      }
      cur.swap(next);
    }
    return dot2(readout_, cur) + readout_constant_;
  }

  std::vector<Dd> cur(x.size());
  for (std::size_t i = 0; i < x.size(); ++i) cur[i] = dd_from(x[i]);
  std::vector<Dd> next;
  for (const auto& layer : layers_) {
    next.assign(static_cast<std::size_t>(layer.rows), Dd{});
    for (int r = 0; r < layer.rows; ++r) {
      Dd acc = dd_from(layer.bias[static_cast<std::size_t>(r)]);
      for (int c = 0; c < layer.cols; ++c) {
        acc = dd_add(acc, dd_mul(cur[static_cast<std::size_t>(c)],
                                 layer.weight(r, c)));
      }
      next[static_cast<std::size_t>(r)] = dd_sigmoid(acc);
    }
    cur.swap(next);
  }
  Dd acc = dd_from(readout_constant_);
  for (std::size_t i = 0; i < readout_.size(); ++i) {
    acc = dd_add(acc, dd_mul(cur[i], readout_[i]));
  }
  return dd_to_double(acc);
}

double LayeredNetwork::evaluate(double t,
                                std::optional<PrecisionMode> mode) const {
  const double x[1] = {t};
  return evaluate(std::span<const double>{x, 1}, mode);
}

double LayeredNetwork::evaluate_derivative(double t) const {
  if (input_dim_ != 1)
    throw CapabilityError("evaluate_derivative requires a univariate network");
  std::vector<double> value{t};
  std::vector<double> deriv{1.0};
  std::vector<double> nv, nd;
  for (const auto& layer : layers_) {
    nv.resize(static_cast<std::size_t>(layer.rows));
    nd.resize(static_cast<std::size_t>(layer.rows));
    for (int r = 0; r < layer.rows; ++r) {
      const std::span<const double> row{
          layer.weights.data() + static_cast<std::size_t>(r) * layer.cols,
          static_cast<std::size_t>(layer.cols)};
      const double pre =
          dot2(row, value) + layer.bias[static_cast<std::size_t>(r)];
      const double dpre = dot2(row, deriv);
      const double s = sigmoid(pre);
      nv[static_cast<std::size_t>(r)] = s;
      nd[static_cast<std::size_t>(r)] = s * (1.0 - s) * dpre;
    }
    value.swap(nv);
    deriv.swap(nd);
  }
  return dot2(readout_, deriv);
}

std::int64_t LayeredNetwork::parameter_count() const {
  std::int64_t count = static_cast<std::int64_t>(readout_.size());
  std::int64_t prev = input_dim_;
  for (const auto& layer : layers_) {
    count += prev * layer.rows + layer.rows;
    prev = layer.rows;
  }
  return count;
}

double LayeredNetwork::max_abs_weight() const {
  double m = std::fabs(readout_constant_);
  for (const auto& layer : layers_) {
    for (double w : layer.weights) m = std::fmax(m, std::fabs(w));
    for (double b : layer.bias) m = std::fmax(m, std::fabs(b));
  }
  for (double a : readout_) m = std::fmax(m, std::fabs(a));
  return m;
}

std::string LayeredNetwork::to_json() const {
  nlohmann::ordered_json j;
  j["format"] = "dno-net";
  j["version"] = 1;
  j["input_dim"] = input_dim_;
  j["precision"] =
      precision_hint_ == PrecisionMode::extended ? "extended" : "standard";
  nlohmann::ordered_json layers = nlohmann::ordered_json::array();
  for (const auto& layer : layers_) {
    nlohmann::ordered_json jl;
    jl["rows"] = layer.rows;
    jl["cols"] = layer.cols;
    jl["weights"] = layer.weights;
    jl["bias"] = layer.bias;
    layers.push_back(std::move(jl));
  }
  j["layers"] = std::move(layers);
  j["readout"] = readout_;
  j["readout_constant"] = readout_constant_;
  return j.dump(2);
}

LayeredNetwork LayeredNetwork::from_json(const std::string& text) {
  const auto j = nlohmann::json::parse(text);
  if (j.at("format") != "dno-net" || j.at("version") != 1)
    throw ConfigError("unrecognized network file format/version");
  std::vector<Layer> layers;
  for (const auto& jl : j.at("layers")) {
    Layer layer;
    layer.rows = jl.at("rows").get<int>();
    layer.cols = jl.at("cols").get<int>();
    layer.weights = jl.at("weights").get<std::vector<double>>();
    layer.bias = jl.at("bias").get<std::vector<double>>();
    layers.push_back(std::move(layer));
  }
  const auto precision = j.value("precision", std::string("standard"));
  return LayeredNetwork(
      j.at("input_dim").get<int>(), std::move(layers),
      j.at("readout").get<std::vector<double>>(),
      j.at("readout_constant").get<double>(),
      precision == "extended" ? PrecisionMode::extended
                              : PrecisionMode::standard);
}

}  // namespace dno
