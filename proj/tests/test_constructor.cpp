#include <cmath>
#include <vector>

#include "dno/activation.hpp"
#include "dno/constructor.hpp"
#include "dno/errors.hpp"
#include "dno/rng.hpp"
#include "doctest.h"

using namespace dno;

namespace {

double sup_on_grid(const LayeredNetwork& net,
                   const std::function<double(double)>& target, int points) {
  double sup = 0.0;
  for (int i = 0; i <= points; ++i) {
    const double t = -1.0 + 2.0 * static_cast<double>(i) / points;
    sup = std::fmax(sup, std::fabs(net.evaluate(t) - target(t)));
  }
  return sup;
}

double norm2(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

}  // namespace

TEST_CASE("constant polynomial is represented exactly") {
  const auto net = construct_poly_net({{0.75}, 0.3, std::nullopt});
  CHECK(net.layers().front().rows == 1);
  for (double t : {-1.0, -0.1, 0.5, 1.0}) CHECK(net.evaluate(t) == 0.75);
}

TEST_CASE("poly net input validation") {
  CHECK_THROWS_AS(construct_poly_net({{}, 0.1, std::nullopt}), DomainError);
  CHECK_THROWS_AS(construct_poly_net({{0.0, 1.0, 0.0}, 0.1, std::nullopt}),
                  DomainError);
  CHECK_THROWS_AS(construct_poly_net({{0.0, 0.0, 1.0}, 1.5, std::nullopt}),
                  DomainError);
  CHECK_THROWS_AS(construct_poly_net({{0.0, 0.0, 1.0}, 1e-6, std::nullopt}),
                  ConditioningError);
  // sigma''(t0) ~ 0 near the origin makes the square construction infeasible.
  CHECK_THROWS_AS(construct_poly_net({{0.0, 0.0, 1.0}, 0.1, 1e-9}), DomainError);
}

TEST_CASE("square nets meet their accuracy") {
  for (double eps : {0.1, 0.02}) {
    const auto net = square_net(eps);
    CHECK(net.layers().front().rows == 3);
    CHECK(net.precision_hint() == PrecisionMode::standard);
    CHECK(sup_on_grid(net, [](double t) { return t * t; }, 2000) <= eps);
    CHECK(std::fabs(net.evaluate(0.0)) <= eps);
    CHECK(std::fabs(net.evaluate(1.0) - 1.0) <= eps);
  }
  const auto net = square_net(0.01);
  CHECK(net.precision_hint() == PrecisionMode::extended);
  CHECK(sup_on_grid(net, [](double t) { return t * t; }, 2000) <= 0.01);
}

TEST_CASE("extended evaluation agrees with a long-double oracle") {
  // Re-evaluate the stored weights of the eps=0.01 net in 80-bit arithmetic;
  // at this accuracy the cancellation leaves ~1e-12 of long-double headroom.
  const auto net = square_net(0.01);
  const auto& layer = net.layers().front();
  auto oracle = [&](double t) {
    long double acc = static_cast<long double>(net.readout_constant());
    for (int r = 0; r < layer.rows; ++r) {
      const long double pre =
          static_cast<long double>(layer.weights[static_cast<std::size_t>(r)]) *
              t +
          static_cast<long double>(layer.bias[static_cast<std::size_t>(r)]);
      const long double s = 1.0L / (1.0L + expl(-pre));
      acc += static_cast<long double>(net.readout()[static_cast<std::size_t>(r)]) * s;
    }
    return static_cast<double>(acc);
  };
  double sup = 0.0;
  for (int i = 0; i <= 10000; ++i) {
    const double t = -1.0 + 2.0 * i / 10000.0;
    CHECK(std::fabs(net.evaluate(t) - oracle(t)) < 1e-9);
    sup = std::fmax(sup, std::fabs(oracle(t) - t * t));
  }
  CHECK(sup <= 0.01);
}

TEST_CASE("square net weight growth stays under the stated bound") {
  const double eps = 0.05;
  const auto net = square_net(eps);
  // (1 + sum |u_i|)^{(k+1)!} eps^{-(k+1)!} with k = 2.
  const double bound = std::pow(2.0, 6) * std::pow(eps, -6.0);
  CHECK(net.max_abs_weight() <= bound);
}

TEST_CASE("cubic polynomial net") {
  const PolyNetSpec spec{{0.25, -0.5, 0.0, 1.0}, 0.1, std::nullopt};
  const auto net = construct_poly_net(spec);
  CHECK(net.layers().front().rows == 4);
  const auto target = [](double t) { return 0.25 - 0.5 * t + t * t * t; };
  CHECK(sup_on_grid(net, target, 2000) <= 0.1);
}

TEST_CASE("norm net width and accuracy") {
  for (int d : {1, 2, 5}) {
    const double eps = 0.01;
    const auto net = norm_net(d, eps);
    CHECK(net.layers().front().rows == 3 * d);
    CHECK(net.layers().front().cols == d);
    std::vector<double> zero(static_cast<std::size_t>(d), 0.0);
    CHECK(std::fabs(net.evaluate(zero)) <= d * eps);
  }
  const auto net = norm_net(2, 0.01);
  const double x[2] = {0.6, 0.8};
  CHECK(std::fabs(net.evaluate(std::span<const double>{x, 2}) - 1.0) <= 0.02);
}

TEST_CASE("product gate") {
  const double eps = 0.05;
  const auto gate = product_gate(eps);
  CHECK(gate.layers().front().rows == 9);
  CHECK(gate.layers().front().cols == 2);
  auto at = [&](double t, double tp) {
    const double x[2] = {t, tp};
    return gate.evaluate(std::span<const double>{x, 2});
  };
  CHECK(std::fabs(at(0.3, 0.0)) <= eps);
  CHECK(std::fabs(at(-0.8, 0.0)) <= eps);
  CHECK(std::fabs(at(1.0, 1.0) - 1.0) <= eps);
  CHECK(std::fabs(at(0.5, -0.5) + 0.25) <= eps);
  double sup = 0.0;
  for (int i = 0; i <= 100; ++i) {
    for (int j = 0; j <= 100; ++j) {
      const double t = -1.0 + i / 50.0;
      const double tp = -1.0 + j / 50.0;
      sup = std::fmax(sup, std::fabs(at(t, tp) - t * tp));
    }
  }
  CHECK(sup <= eps);
}

TEST_CASE("nodes walk the unit interval in squared norm") {
  const int n = 2, d = 3;
  const auto nodes = make_nodes(n, d);
  REQUIRE(nodes.size() == 9);
  CHECK(nodes[0] == std::vector<double>{0.0, 0.0, 0.0});
  CHECK(nodes[4][2] == doctest::Approx(std::sqrt(0.5)).epsilon(1e-15));
  CHECK(nodes[8] == std::vector<double>{0.0, 0.0, 1.0});
  // clamped below k = n and above k = 3n
  CHECK(nodes[1] == nodes[0]);
  CHECK(nodes[7] == nodes[8]);
  for (int k = n; k < 3 * n; ++k) {
    const double gap = norm2(nodes[static_cast<std::size_t>(k) + 1]) -
                       norm2(nodes[static_cast<std::size_t>(k)]);
    CHECK(gap == doctest::Approx(1.0 / (2 * n)).epsilon(1e-12));
  }
  for (const auto& node : nodes) CHECK(norm2(node) <= 1.0 + 1e-15);
  CHECK_THROWS_AS(make_nodes(0, 1), DomainError);
  CHECK_THROWS_AS(make_nodes(1, 0), DomainError);
}

TEST_CASE("univariate coefficients follow the case split") {
  const auto op = build_univariate([](double t) { return t; }, 4);
  const std::vector<double> expected{-1.0,  -1.0, -1.0, -1.0, -1.0, -0.75,
                                     -0.5,  -0.25, 0.0,  0.25, 0.5,  0.75,
                                     1.0,   1.0,  1.0,  1.0,  1.0};
  CHECK(op.beta() == expected);
}

TEST_CASE("univariate operator of zero data is identically zero") {
  const auto op = build_univariate([](double) { return 0.0; }, 6);
  for (double t : {-1.0, -0.3, 0.0, 0.9}) CHECK(op.evaluate(t) == 0.0);
}

TEST_CASE("univariate operator reproduces constants up to the tail") {
  const auto op = build_univariate([](double) { return 1.0; }, 10);
  const double allowance = 3.0 * std::exp(-10.0) + 1e-9;
  for (double t : {-0.95, -0.3, 0.0, 0.3, 0.77}) {
    CHECK(std::fabs(op.evaluate(t) - 1.0) <= allowance);
  }
}

TEST_CASE("univariate operator flattens to an equivalent net") {
  const auto op = build_univariate([](double t) { return std::fabs(t); }, 8);
  const auto net = op.flatten();
  CHECK(net.parameter_count() == 2 * 33 + 2 * (2 * 33));
  Rng rng(51);
  for (int i = 0; i < 200; ++i) {
    const double t = rng.uniform(-1.0, 1.0);
    CHECK(std::fabs(op.evaluate(t) - net.evaluate(t)) < 1e-12);
    CHECK(std::fabs(op.derivative(t) - net.evaluate_derivative(t)) < 1e-9);
  }
}

TEST_CASE("flattened univariate derivative obeys the n-scaling bound") {
  for (int n : {8, 32}) {
    const auto op = build_univariate([](double t) { return t; }, n);
    const auto net = op.flatten();
    double sup = 0.0;
    for (int i = 0; i <= 400; ++i) {
      const double t = -1.0 + i / 200.0;
      sup = std::fmax(sup, std::fabs(net.evaluate_derivative(t)));
    }
    CHECK(sup <= 1.2 * n);
  }
}

TEST_CASE("sampler failures carry the node index") {
  CHECK_THROWS_AS(
      build_univariate([](double) -> double { throw std::runtime_error("io"); },
                       4),
      DataError);
  CHECK_THROWS_AS(build_univariate([](double) { return std::nan(""); }, 4),
                  DataError);
  CHECK_THROWS_AS(
      build_dno([](std::span<const double>) -> double { throw DataError("x"); },
                2, 0.1, 2),
      DataError);
}

TEST_CASE("dno rejects accuracies at the conditioning floor") {
  const auto f = [](std::span<const double> x) { return norm2(x); };
  CHECK_THROWS_AS(build_dno(f, 4, 1e-5, 2), ConditioningError);
  CHECK_THROWS_AS(square_net(1e-5), ConditioningError);
  CHECK_THROWS_AS(build_dno(f, 4, 0.0, 2), DomainError);
}

TEST_CASE("dno reproduces constants up to the tail") {
  const auto op =
      build_dno([](std::span<const double>) { return 1.0; }, 10, 0.01, 2);
  const double allowance = 3.0 * std::exp(-10.0) + 1e-9;
  Rng rng(61);
  double worst = 0.0;
  for (int i = 0; i < 300; ++i) {
    worst = std::fmax(worst, std::fabs(op.evaluate(rng.ball_point(2)) - 1.0));
  }
  CHECK(worst <= allowance);
}

TEST_CASE("dno is linear in the samples") {
  const auto f = [](std::span<const double> x) { return norm2(x); };
  const auto g = [](std::span<const double> x) { return std::sin(3.0 * x[0]); };
  const auto fg = [&](std::span<const double> x) { return f(x) + g(x); };
  const auto op_f = build_dno(f, 8, 1e-2, 2);
  const auto op_g = build_dno(g, 8, 1e-2, 2);
  const auto op_fg = build_dno(fg, 8, 1e-2, 2);
  Rng rng(67);
  for (int i = 0; i < 200; ++i) {
    const auto x = rng.ball_point(2);
    const double lhs = op_fg.evaluate(x);
    const double rhs = op_f.evaluate(x) + op_g.evaluate(x);
    CHECK(std::fabs(lhs - rhs) < 1e-11 * std::fmax(1.0, std::fabs(lhs)));
  }
}

TEST_CASE("dno direct evaluation matches the flattened network") {
  for (const auto& [n, eps] : std::vector<std::pair<int, double>>{
           {16, 1e-3}, {8, 0.02}, {5, 1e-2}}) {
    const auto op =
        build_dno([](std::span<const double> x) { return norm2(x); }, n, eps, 2);
    const auto net = op.flatten();
    CHECK(net.layers().size() == 2);
    CHECK(net.layers()[0].rows == 6);
    CHECK(net.layers()[1].rows == 2 * (4 * n + 1));
    Rng rng(71);
    double worst = 0.0;
    for (int i = 0; i < 1000; ++i) {
      const auto x = rng.ball_point(2);
      worst = std::fmax(worst, std::fabs(op.evaluate(x) - net.evaluate(x)));
    }
    CHECK(worst <= 1e-10);
  }
}

TEST_CASE("dno agrees with the rescaled univariate operator") {
  const auto g = [](double t) { return 0.5 * std::cos(3.14159265358979 * t); };
  const auto f = [&](std::span<const double> x) { return g(norm2(x)); };
  const int n = 16;
  const auto op = build_dno(f, n, 1e-3, 2);
  const auto uni =
      build_univariate([&](double t) { return g((t + 1.0) / 2.0); }, n);
  // samples coincide: beta_k = g((t_k+1)/2) = g(||xi_k||^2) = f(xi_k)
  for (int k = 0; k <= 4 * n; ++k) {
    CHECK(std::fabs(uni.beta()[static_cast<std::size_t>(k)] -
                    op.samples()[static_cast<std::size_t>(k)]) < 1e-14);
  }
  Rng rng(73);
  double worst = 0.0;
  for (int i = 0; i < 500; ++i) {
    const auto x = rng.ball_point(2);
    const double s = 2.0 * op.norm_value(x) - 1.0;
    worst = std::fmax(worst, std::fabs(op.evaluate(x) - uni.evaluate(s)));
  }
  CHECK(worst <= 1e-10);
}

TEST_CASE("dno evaluation equals the bell expansion") {
  const int n = 8;
  const double eps = 1e-2;
  const auto op = build_dno(
      [](std::span<const double> x) { return norm2(x); }, n, eps, 3);
  Rng rng(79);
  for (int i = 0; i < 200; ++i) {
    const auto x = rng.ball_point(3);
    const double s = 2.0 * op.norm_value(x) - 1.0;
    double expansion = 0.0;
    for (int k = 0; k <= 4 * n; ++k) {
      expansion += op.samples()[static_cast<std::size_t>(k)] *
                   bell(n * s - k + 2.0 * n);
    }
    CHECK(std::fabs(op.evaluate(x) - expansion) < 1e-7);
  }
}

TEST_CASE("dno serialization round trip") {
  const auto op = build_dno(
      [](std::span<const double> x) { return norm2(x); }, 8, 1e-3, 2);
  const auto restored = DnoOperator::from_json(op.to_json());
  CHECK(restored.n() == op.n());
  CHECK(restored.eps() == op.eps());
  CHECK(restored.samples() == op.samples());
  Rng rng(83);
  for (int i = 0; i < 100; ++i) {
    const auto x = rng.ball_point(2);
    CHECK(restored.evaluate(x) == op.evaluate(x));
  }
}

TEST_CASE("theorem-style error bound holds for the square profile") {
  // f(x) = ||x||^2, d = 2, n = 64, eps = 1e-3
  const auto f = [](std::span<const double> x) { return norm2(x); };
  const auto op = build_dno(f, 64, 1e-3, 2);
  Rng rng(89);
  double worst = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const auto x = rng.ball_point(2);
    worst = std::fmax(worst, std::fabs(op.evaluate(x) - f(x)));
  }
  // 2 d omega(g,eps) + 9.594 omega(g,1/n) + 3 e^{-n}; g(t) = t.
  const double bound = 2.0 * 2.0 * 1e-3 + 9.593994150290162 / 64.0 +
                       3.0 * std::exp(-64.0);
  CHECK(worst <= bound);
}
