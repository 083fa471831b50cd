#include <gtest/gtest.h>

#include <cmath>
#include <random>

#include "drgoal/distortion.hpp"
#include "drgoal/reference_values.hpp"

using namespace drgoal;

namespace {

const DistortionPricing kSqrt(DistortionFunction::power(0.5), 0.1);
const Distribution kLoss = trunc_pareto(10, 3, 10);

}  // namespace

TEST(Distortion, ValidatesEndpointsAndMonotonicity) {
  EXPECT_THROW(DistortionFunction([](double s) { return 0.5 * s; }, "half", true), DomainError);
  EXPECT_THROW(DistortionFunction([](double s) { return s <= 0 ? 0.0 : (s >= 1 ? 1.0 : 1 - s); },
                                  "decreasing", true),
               DomainError);
  EXPECT_THROW(DistortionFunction::power(0), DomainError);
  EXPECT_THROW(DistortionPricing(DistortionFunction::identity(), -0.1), DomainError);
  const DistortionFunction g = DistortionFunction::power(0.5);
  EXPECT_DOUBLE_EQ(g(0.25), 0.5);
  EXPECT_DOUBLE_EQ(g(0), 0);
  EXPECT_DOUBLE_EQ(g(1), 1);
}

TEST(Premium, ParetoBenchmark) {
  EXPECT_NEAR(premium(kSqrt, kLoss), reference::kFullPremium, 0.01);
}

TEST(Premium, UniformClosedForms) {
  const Distribution u = uniform(0, 1);
  EXPECT_NEAR(premium(DistortionPricing(DistortionFunction::identity(), 0), u), 0.5, 1e-9);
  // int_0^1 sqrt(1 - z) dz = 2/3
  EXPECT_NEAR(premium(DistortionPricing(DistortionFunction::power(0.5), 0), u), 2.0 / 3.0, 1e-8);
}

TEST(Premium, RejectsNegativeOrUnboundedRisks) {
  EXPECT_THROW(premium(kSqrt, uniform(-1, 1)), DomainError);
  EXPECT_THROW(premium(kSqrt, lognormal(0, 1)), DomainError);
}

TEST(Premium, MonotoneInLoadingAndDistortion) {
  double prev = 0;
  for (double loading : {0.0, 0.05, 0.1, 0.2}) {
    const double p = premium(DistortionPricing(DistortionFunction::power(0.5), loading), kLoss);
    EXPECT_GT(p, prev);
    prev = p;
  }
  // s^0.4 >= s^0.5 >= s^0.6 pointwise on [0, 1]
  const double p4 = premium(DistortionPricing(DistortionFunction::power(0.4), 0.1), kLoss);
  const double p5 = premium(DistortionPricing(DistortionFunction::power(0.5), 0.1), kLoss);
  const double p6 = premium(DistortionPricing(DistortionFunction::power(0.6), 0.1), kLoss);
  EXPECT_GT(p4, p5);
  EXPECT_GT(p5, p6);
}

TEST(LayerExpectation, EdgeCases) {
  EXPECT_EQ(layer_g_expectation(kSqrt, kLoss, 2.0, 2.0), 0.0);
  EXPECT_THROW(layer_g_expectation(kSqrt, kLoss, 3.0, 2.0), DomainError);
  EXPECT_NEAR(layer_g_expectation(DistortionPricing(DistortionFunction::identity(), 0),
                                  uniform(0, 1), 0, 1),
              0.5, 1e-9);
}

TEST(LayerExpectation, ReferenceLayerPremium) {
  // Layer (0.5644, 3.6608) priced at 2.4356 including the 10% loading.
  EXPECT_NEAR(kSqrt.factor() * layer_g_expectation(kSqrt, kLoss, 0.5644, 3.6608), 2.4356, 2e-3);
}

TEST(LayerExpectation, Additivity) {
  std::mt19937_64 gen(11);
  std::uniform_real_distribution<double> u(0, 10);
  for (int i = 0; i < 50; ++i) {
    double a = u(gen), b = u(gen), c = u(gen);
    if (a > b) std::swap(a, b);
    if (b > c) std::swap(b, c);
    if (a > b) std::swap(a, b);
    EXPECT_NEAR(layer_g_expectation(kSqrt, kLoss, a, c),
                layer_g_expectation(kSqrt, kLoss, a, b) + layer_g_expectation(kSqrt, kLoss, b, c),
                1e-9);
  }
}

TEST(LayerExpectation, RetainedPartIsDecreasingAndOneLipschitz) {
  // q -> E^g[X] - int_eta^q g(S), the distorted retained loss of the layer [eta, q].
  const double eta = 0.5644;
  const double total = layer_g_expectation(kSqrt, kLoss, 0, 10);
  double prev_q = eta;
  double prev_v = total;
  for (int i = 1; i <= 200; ++i) {
    const double q = eta + (10 - eta) * i / 200.0;
    const double v = total - layer_g_expectation(kSqrt, kLoss, eta, q);
    EXPECT_LE(v, prev_v);
    EXPECT_LE(std::abs(v - prev_v), std::abs(q - prev_q) + 1e-12);
    prev_q = q;
    prev_v = v;
  }
}

TEST(CriticalRetention, ParetoBenchmark) {
  const double z = z0(kSqrt, kLoss);
  EXPECT_NEAR(z, reference::kAttachment, 5e-4);
  // closed form: S(z) = 1/1.21 relative to the truncated law
  EXPECT_NEAR(kLoss.cdf(z), 1 - 1 / 1.21, 1e-9);
}

TEST(CriticalRetention, BoundaryCases) {
  EXPECT_EQ(z0(DistortionPricing(DistortionFunction::identity(), 0), uniform(0, 1)), 0.0);
  // (1 + 1e6) * sqrt(S(M-)) stays >= 1 well below M; huge loading clamps to M
  EXPECT_NEAR(z0(DistortionPricing(DistortionFunction::power(0.5), 1e9), uniform(0, 1)), 1.0,
              1e-9);
  EXPECT_THROW(z0(kSqrt, lognormal(0, 1)), DomainError);
}

TEST(CriticalRetention, ConsistentWithPremium) {
  // z0 marks where the marginal distorted price falls under 1.
  const double z = z0(kSqrt, kLoss);
  EXPECT_GE(kSqrt.factor() * kSqrt.g(kLoss.survival(z - 1e-6)), 1.0);
  EXPECT_LT(kSqrt.factor() * kSqrt.g(kLoss.survival(z + 1e-6)), 1.0);
}
