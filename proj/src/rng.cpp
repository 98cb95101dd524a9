#include "dno/rng.hpp"

namespace dno {

namespace {
constexpr std::uint32_t kPrimes[] = {
    2,  3,  5,  7,  11, 13, 17, 19, 23,  29,  31,  37,  41,  43,  47,  53,
    59, 61, 67, 71, 73, 79, 83, 89, 97, 101, 103, 107, 109, 113, 127, 131};
constexpr int kPrimeCount = 32;
}

std::vector<std::vector<double>> halton_ball(int d, std::size_t count) {
  std::vector<std::vector<double>> points;
  points.reserve(count);
  std::uint64_t index = 1;
  while (points.size() < count) {
    std::vector<double> x(static_cast<std::size_t>(d));
    double norm2 = 0.0;
    for (int j = 0; j < d; ++j) {
      x[static_cast<std::size_t>(j)] =
          2.0 * radical_inverse(kPrimes[j % kPrimeCount], index) - 1.0;
      norm2 += x[static_cast<std::size_t>(j)] * x[static_cast<std::size_t>(j)];
    }
    if (norm2 <= 1.0) points.push_back(std::move(x));
    ++index;
  }
  return points;
}

std::vector<double> halton_interval(double a, double b, std::size_t count) {
  std::vector<double> points;
  points.reserve(count);
  for (std::size_t i = 1; i <= count; ++i) {
    points.push_back(a + (b - a) * radical_inverse(2, i));
  }
  return points;
}

}  // namespace dno
