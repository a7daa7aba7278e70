#include <cmath>
#include <filesystem>
#include <limits>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "hopfcert/jet_table.hpp"
#include "hopfcert/quadrature.hpp"

using namespace hopfcert;

TEST(GaussLegendre, IntegratesPolynomialsExactly) {
  std::vector<double> x, w;
  gauss_legendre(10, x, w);
  ASSERT_EQ(x.size(), 10u);
  for (int deg = 0; deg <= 19; ++deg) {
    double s = 0.0;
    for (std::size_t i = 0; i < x.size(); ++i) s += w[i] * std::pow(x[i], deg);
    const double exact = deg % 2 ? 0.0 : 2.0 / (deg + 1);
    EXPECT_NEAR(s, exact, 1e-14) << "degree " << deg;
  }
}

TEST(GaussRule, WeightsSumToCapVolume) {
  EXPECT_NEAR(pairwise_sum(build_gauss_rule(CapDomain(SpherePoint(), kPi / 2)).weights), kPi * kPi, 1e-12);
  EXPECT_NEAR(pairwise_sum(build_gauss_rule(CapDomain::full_sphere()).weights), 2 * kPi * kPi, 1e-12);
  for (double r : {0.01, 0.3, 1.0, 2.0}) {
    const QuadratureRule rule = build_gauss_rule(CapDomain(SpherePoint::normalize({1, 2, 3, 4}), r), {16, 8, 16});
    EXPECT_NEAR(pairwise_sum(rule.weights), cap_volume(r), 1e-13 * cap_volume(r));
    EXPECT_LE(rule.estimated_error, 1e-13 * cap_volume(r));
    EXPECT_EQ(rule.size(), 16u * 8u * 16u);
  }
  EXPECT_THROW(build_gauss_rule(CapDomain(SpherePoint(), 1.0), {3, 8, 8}), std::invalid_argument);
}

TEST(GaussRule, NodesLieInTheCap) {
  const CapDomain k(SpherePoint::normalize({0, 1, 1, 0}), 0.8);
  for (const auto& p : build_gauss_rule(k, {12, 6, 12}).nodes) EXPECT_TRUE(contains(k, p).inside);
}

TEST(GaussRule, HeightFunctionMatchesOneDimensionalOracle) {
  using boost::math::quadrature::gauss_kronrod;
  const SpherePoint c = SpherePoint::normalize({0.5, -1, 0.3, 2});
  for (double r : {0.2, 1.0, 2.5}) {
    const CapDomain k(c, r);
    const double got = integrate(build_gauss_rule(k), [&](const SpherePoint& x) { return dot(x.vec(), c.vec()); }).value;
    const double oracle = gauss_kronrod<double, 61>::integrate(
        [](double rho) { return 4 * kPi * std::cos(rho) * std::sin(rho) * std::sin(rho); }, 0.0, r, 0, 1e-15);
    EXPECT_NEAR(got, oracle, 1e-9);
    EXPECT_NEAR(oracle, 4 * kPi * std::pow(std::sin(r), 3) / 3, 1e-13);
  }
}

TEST(MonteCarloRule, AgreesWithGaussWithinThreeSigma) {
  const CapDomain k(SpherePoint(), 1.0);
  const QuadratureRule g = build_gauss_rule(k);
  const QuadratureRule m = build_mc_rule(k, 100000, 3);
  auto f = [](const SpherePoint& x) { return std::exp(x[1]) * (1.0 + x[2] * x[3]); };
  const double exact = integrate(g, f).value;
  const IntegrationResult mc = integrate(m, f);
  EXPECT_GT(mc.error, 0.0);
  EXPECT_LT(std::fabs(mc.value - exact), 3.0 * mc.error);
}

TEST(MonteCarloRule, ReproducibleFromSeed) {
  const CapDomain k(SpherePoint(), 0.7);
  const QuadratureRule a = build_mc_rule(k, 2000, 42);
  const QuadratureRule b = build_mc_rule(k, 2000, 42);
  const QuadratureRule c = build_mc_rule(k, 2000, 43);
  for (std::size_t i = 0; i < a.size(); ++i) EXPECT_EQ(a.nodes[i].vec(), b.nodes[i].vec());
  EXPECT_NE(a.nodes[0].vec(), c.nodes[0].vec());
  for (const auto& p : a.nodes) EXPECT_TRUE(contains(k, p).inside);
  EXPECT_THROW(build_mc_rule(k, 999, 1), std::invalid_argument);
}

TEST(MonteCarloRule, RadialDistributionFollowsVolume) {
  const double r = 1.3;
  const CapDomain k(SpherePoint(), r);
  std::mt19937_64 rng(5);
  const int n = 100000;
  int inner = 0;
  for (int i = 0; i < n; ++i) inner += geodesic_distance(sample_cap_point(k, rng), k.center()) < 0.7 ? 1 : 0;
  const double p = cap_volume(0.7) / cap_volume(r);
  EXPECT_NEAR(static_cast<double>(inner) / n, p, 4 * std::sqrt(p * (1 - p) / n));
}

TEST(Integrate, NonFiniteValueNamesTheNode) {
  const QuadratureRule rule = build_gauss_rule(CapDomain(SpherePoint(), 0.5), {4, 4, 4});
  std::vector<double> vals(rule.size(), 1.0);
  vals[7] = std::numeric_limits<double>::quiet_NaN();
  try {
    integrate_values(rule, vals);
    FAIL() << "expected NonFiniteIntegrand";
  } catch (const NonFiniteIntegrand& e) {
    EXPECT_EQ(e.index(), 7u);
    EXPECT_NE(std::string(e.what()).find("node 7"), std::string::npos);
  }
  vals.pop_back();
  EXPECT_THROW(integrate_values(rule, vals), std::invalid_argument);
}

TEST(PairwiseSum, AccurateOnManySmallTerms) {
  std::vector<double> xs(1 << 20, 0.1);
  EXPECT_NEAR(pairwise_sum(xs), 0.1 * (1 << 20), 1e-9);
  EXPECT_EQ(pairwise_sum(std::vector<double>{}), 0.0);
}

TEST(ParallelMap, ResultsIndependentOfWorkerCount) {
  const QuadratureRule rule = build_gauss_rule(CapDomain(SpherePoint(), 1.0), {16, 8, 16});
  const UnitField v = perturbed_field(rule.domain, {0.5, 3});
  ::setenv("HOPFCERT_THREADS", "1", 1);
  const JetTable one = sample_jets(v, rule);
  ::setenv("HOPFCERT_THREADS", "3", 1);
  const JetTable three = sample_jets(v, rule);
  ::unsetenv("HOPFCERT_THREADS");
  EXPECT_EQ(one.sigma2, three.sigma2);
  EXPECT_EQ(one.energy_density, three.energy_density);
}

TEST(RuleSerialization, CborRoundTrip) {
  const QuadratureRule rule = build_gauss_rule(CapDomain(SpherePoint::normalize({1, 0, 1, 0}), 0.9), {6, 4, 6});
  const auto dir = std::filesystem::temp_directory_path() / "hopfcert_rule_test";
  std::filesystem::create_directories(dir);
  const auto path = dir / (rule_cache_key(rule.domain, rule.kind, rule.orders, 0, 0) + ".cbor");
  save_rule(rule, path);
  const QuadratureRule back = load_rule(path);
  EXPECT_EQ(back.kind, rule.kind);
  EXPECT_EQ(back.orders, rule.orders);
  EXPECT_EQ(back.domain.radius(), rule.domain.radius());
  EXPECT_EQ(back.weights, rule.weights);
  ASSERT_EQ(back.size(), rule.size());
  for (std::size_t i = 0; i < rule.size(); ++i) EXPECT_EQ(back.nodes[i].vec(), rule.nodes[i].vec());
  std::filesystem::remove_all(dir);
}

TEST(RuleSerialization, CacheKeysDistinguishRules) {
  const CapDomain a(SpherePoint(), 1.0), b(SpherePoint(), 1.0 + 1e-12);
  EXPECT_NE(rule_cache_key(a, RuleKind::gauss, {}, 0, 0), rule_cache_key(b, RuleKind::gauss, {}, 0, 0));
  EXPECT_NE(rule_cache_key(a, RuleKind::montecarlo, {}, 1000, 1), rule_cache_key(a, RuleKind::montecarlo, {}, 1000, 2));
  EXPECT_EQ(rule_cache_key(a, RuleKind::gauss, {}, 0, 0).find('.'), std::string::npos);
}
