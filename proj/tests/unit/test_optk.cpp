#include <gtest/gtest.h>

#include <cmath>

#include "fppu/reciprocal.hpp"
#include "fppu/tools/optk.hpp"

using namespace fppu;
using namespace fppu::tools;

namespace {

// Composite Simpson rule, independent of the library's quadrature.
double simpson_e2(double k1, double k2) {
  constexpr int n = 20000;
  const double h = 0.5 / n;
  double s = 0.0;
  for (int i = 0; i <= n; ++i) {
    const double x = 0.5 + i * h;
    const double r = x * 4.0 * (k2 - x * (k1 - x)) * (k1 - x) - 1.0;
    s += r * r * (i == 0 || i == n ? 1.0 : (i % 2 ? 4.0 : 2.0));
  }
  return s * h / 3.0;
}

}  // namespace

TEST(Optk, RelativeErrorClosedForm) {
  // Expanded polynomial 4 k1 k2 - 4 (k1^2 + k2) x + 8 k1 x^2 - 4 x^3.
  for (double x : {0.5, 0.6, 0.75, 0.9, 1.0}) {
    const double k1 = 1.45, k2 = 1.002;
    const double poly = 4 * k1 * k2 - 4 * (k1 * k1 + k2) * x + 8 * k1 * x * x - 4 * x * x * x;
    EXPECT_NEAR(seed_relative_error(x, k1, k2), x * poly - 1.0, 1e-14);
  }
}

TEST(Optk, QuadratureMatchesSimpson) {
  for (auto [k1, k2] : {std::pair{1.5, 1.0}, std::pair{1.466, 1.0012}, std::pair{1.4568, 1.0009}})
    EXPECT_NEAR(seed_error_integral(k1, k2), simpson_e2(k1, k2), 1e-14);
}

TEST(Optk, FindsALocalMinimum) {
  const OptkResult r = optimize_k();
  EXPECT_TRUE(r.converged);
  EXPECT_LT(r.e2, seed_error_integral(1.5, 1.0));
  EXPECT_NEAR(r.e2, seed_error_integral(r.k1, r.k2), 1e-18);
  for (double d : {1e-6, -1e-6}) {
    EXPECT_GT(seed_error_integral(r.k1 + d, r.k2), r.e2);
    EXPECT_GT(seed_error_integral(r.k1, r.k2 + d), r.e2);
  }
  EXPECT_LE(r.e2, seed_error_integral(ReciprocalParams::kDefaultK1, ReciprocalParams::kDefaultK2));
  EXPECT_NEAR(r.k1, 1.4568, 1e-3);
  EXPECT_NEAR(r.k2, 1.0009, 1e-3);
}

TEST(Optk, DeterministicFromTheSameStart) {
  const OptkResult a = optimize_k(), b = optimize_k();
  EXPECT_EQ(a.k1, b.k1);
  EXPECT_EQ(a.k2, b.k2);
}

TEST(Optk, ImprovementOverEarlierConstants) {
  const double ours = seed_error_integral(ReciprocalParams::kDefaultK1, ReciprocalParams::kDefaultK2);
  const double earlier = seed_error_integral(1.466, 1.0012);
  EXPECT_NEAR(100.0 * (earlier - ours) / earlier, 36.4, 0.05);
}
