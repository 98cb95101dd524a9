#include <cmath>
#include <cstdio>
#include <fstream>

#include "dno/corpus.hpp"
#include "dno/errors.hpp"
#include "dno/rng.hpp"
#include "doctest.h"

using namespace dno;

namespace {

double norm2(std::span<const double> x) {
  double acc = 0.0;
  for (double v : x) acc += v * v;
  return acc;
}

double measured_defect(const TestFunction& f, int samples, std::uint64_t seed) {
  Rng rng(seed);
  double defect = 0.0;
  for (int i = 0; i < samples; ++i) {
    const auto x = rng.ball_point(f.d);
    defect = std::fmax(defect,
                       std::fabs(f.evaluator(x) - f.profile(norm2(x))));
  }
  return defect;
}

}  // namespace

TEST_CASE("radial profile values") {
  const auto power = make_radial(RadialProfile::power, 0.5, 3, 0.0, 1);
  const double x[3] = {0.0, 0.0, 0.9};
  CHECK(power.evaluator(std::span<const double>{x, 3}) ==
        doctest::Approx(0.9).epsilon(1e-14));
  const auto shifted = make_radial(RadialProfile::shifted_abs, 1.0, 1, 0.0, 1);
  const double one[1] = {1.0};
  CHECK(shifted.evaluator(std::span<const double>{one, 1}) ==
        doctest::Approx(0.5).epsilon(1e-14));
}

TEST_CASE("perturbed entries audit to their injected defect") {
  const auto f = make_radial(RadialProfile::linear, 1.0, 2, 0.05, 2);
  const double defect = measured_defect(f, 4000, 99);
  CHECK(defect >= 0.049);
  CHECK(defect <= 0.051);
  const auto clean = make_radial(RadialProfile::linear, 1.0, 2, 0.0, 2);
  CHECK(measured_defect(clean, 1000, 99) <= 1e-12);
}

TEST_CASE("power profile Lipschitz quotient") {
  const auto f = make_radial(RadialProfile::power, 0.5, 2, 0.0, 3);
  Rng rng(55);
  double quotient = 0.0;
  for (int i = 0; i < 2000; ++i) {
    const double t = rng.uniform();
    const double s = rng.uniform();
    if (t == s) continue;
    quotient = std::fmax(quotient, std::fabs(f.profile(t) - f.profile(s)) /
                                       std::pow(std::fabs(t - s), 0.5));
  }
  CHECK(quotient <= 1.0 + 1e-9);
}

TEST_CASE("profile parameter validation") {
  CHECK_THROWS_AS(make_radial(RadialProfile::power, 0.0, 2, 0.0, 1), DomainError);
  CHECK_THROWS_AS(make_radial(RadialProfile::power, 1.4, 2, 0.0, 1), DomainError);
  CHECK_THROWS_AS(make_radial(RadialProfile::linear, 1.0, 0, 0.0, 1), DomainError);
  CHECK_THROWS_AS(make_radial(RadialProfile::linear, 1.0, 2, -0.1, 1), DomainError);
}

TEST_CASE("non-radial controls") {
  const auto coord = make_nonradial(NonRadialKind::coordinate, 2);
  const double x[2] = {0.3, -0.4};
  CHECK(coord.evaluator(std::span<const double>{x, 2}) == 0.3);
  const auto bilinear = make_nonradial(NonRadialKind::bilinear, 2);
  const double y[2] = {0.5, 0.5};
  CHECK(bilinear.evaluator(std::span<const double>{y, 2}) == 0.25);
  CHECK_FALSE(coord.meta.is_radial);
  CHECK_THROWS_AS(make_nonradial(NonRadialKind::coordinate, 1), DomainError);

  // Defect against its own axis slice: the slice of x -> x^{(1)} vanishes.
  Rng rng(77);
  double defect = 0.0;
  for (int i = 0; i < 1000; ++i) {
    const auto p = rng.ball_point(2);
    defect = std::fmax(defect, std::fabs(coord.evaluator(p) - 0.0));
  }
  CHECK(defect >= 0.3);
}

TEST_CASE("corpus selectors") {
  for (const auto& name : corpus_names()) {
    const int d = (name == "coordinate" || name == "bilinear") ? 2 : 3;
    const auto f = corpus_by_name(name, d, 0.5, 0.0, 1);
    CHECK(f.d == d);
  }
  CHECK_THROWS_AS(corpus_by_name("nope", 2, 1.0, 0.0, 1), ConfigError);
}

TEST_CASE("standard corpora") {
  const auto radial = standard_radial_corpus(1);
  CHECK(radial.size() == 5);
  for (const auto& f : radial) CHECK(f.meta.is_radial);
  const auto univariate = standard_univariate_corpus();
  CHECK(univariate.size() == 5);
}

TEST_CASE("random step functions are resolution consistent") {
  const auto g = random_step_function(42);
  Rng rng(4);
  for (int i = 0; i < 500; ++i) {
    const double t = rng.uniform(-1.0, 1.0);
    const double v = g(t);
    CHECK((v == 1.0 || v == -1.0));
    CHECK(g(t) == v);
  }
  const auto g2 = random_step_function(42);
  CHECK(g2(0.37) == g(0.37));
  CHECK(random_step_function(43)(0.37) * 0.0 == 0.0);  // finite
}

TEST_CASE("manifest parsing") {
  const char* path = "manifest_test.txt";
  {
    std::ofstream out(path);
    out << "# comment\n";
    out << "entry-a profile=power-radial d=3 alpha=0.5 tau=0.05 seed=9\n";
    out << "entry-b profile=coordinate d=2\n";
  }
  const auto entries = load_manifest(path);
  REQUIRE(entries.size() == 2);
  CHECK(entries[0].id == "entry-a");
  CHECK(entries[0].d == 3);
  CHECK(entries[0].meta.alpha == 0.5);
  CHECK(entries[0].meta.tau_injected == 0.05);
  CHECK(entries[1].id == "entry-b");
  CHECK_FALSE(entries[1].meta.is_radial);
  std::remove(path);
  CHECK_THROWS_AS(load_manifest("no-such-file.txt"), DataError);
}

TEST_CASE("tabulated functions reproduce affine data exactly") {
  Rng rng(91);
  std::vector<std::vector<double>> points;
  std::vector<double> values;
  const auto affine = [](std::span<const double> x) {
    return 0.3 + 1.7 * x[0] - 0.6 * x[1];
  };
  for (int i = 0; i < 200; ++i) {
    auto p = rng.ball_point(2);
    values.push_back(affine(p));
    points.push_back(std::move(p));
  }
  const TabulatedFunction table(2, points, values);
  for (int i = 0; i < 100; ++i) {
    const auto q = rng.ball_point(2);
    CHECK(table(q) == doctest::Approx(affine(q)).epsilon(1e-9));
  }
  CHECK(std::string(table.method()) == "nearest-neighbor+local-linear");
}

TEST_CASE("tabulated function input validation") {
  CHECK_THROWS_AS(TabulatedFunction(2, {}, {}), DataError);
  CHECK_THROWS_AS(TabulatedFunction(2, {{0.0}}, {1.0}), DataError);
  const TabulatedFunction single(1, {{0.25}}, {2.0});
  const double x[1] = {0.9};
  CHECK(single(std::span<const double>{x, 1}) == 2.0);  // nearest fallback
  CHECK_THROWS_AS(TabulatedFunction::load("missing.tbl", 2), DataError);
}
