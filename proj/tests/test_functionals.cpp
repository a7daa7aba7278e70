#include <cmath>

#include <gtest/gtest.h>

#include "hopfcert/hopfcert.hpp"

using namespace hopfcert;

namespace {

const CapDomain kCap(SpherePoint(), 1.0);

const QuadratureRule& default_rule() {
  static const QuadratureRule rule = build_gauss_rule(kCap);
  return rule;
}

}  // namespace

TEST(Functionals, HopfValues) {
  for (double r : {0.3, 1.0, kPi / 2, kPi}) {
    const CapDomain k(SpherePoint(), r);
    const QuadratureRule rule = build_gauss_rule(k, {16, 8, 16});
    const FunctionalReport e = energy(hopf_field(), rule);
    const FunctionalReport v = volume(hopf_field(), rule);
    EXPECT_NEAR(e.value, hopf_energy(k), 1e-12 * e.value);
    EXPECT_NEAR(v.value, hopf_volume(k), 1e-12 * v.value);
    EXPECT_NEAR(e.base_term, 1.5 * cap_volume(k), 1e-15);
    EXPECT_NEAR(e.derivative_term, 2.0 * cap_volume(k), 1e-12 * cap_volume(k));
    EXPECT_NEAR(v.base_term + v.derivative_term, v.value, 1e-15 * v.value);
    EXPECT_EQ(e.rule.nodes, rule.size());
  }
}

// Frozen quadrature values on K(1, 1.0) with the default 64x32x64 rule.
TEST(Functionals, RegressionValues) {
  struct Row {
    double amplitude;
    int exponent;
    Twist twist;
    double energy;
    double volume;
  };
  const std::vector<Row> rows{
      {0.5, 3, {}, 8.99770508171892, 7.13805975147623},
      {0.5, 2, {}, 9.11459309018868, 7.2158594041079},
      {1.2, 3, {}, 11.0509172961835, 8.37064657551556},
      {0.3, 2, {TwistKind::angular, 0.0}, 8.74800076982687, 6.98544137811706},
  };
  for (const auto& r : rows) {
    const UnitField v = perturbed_field(kCap, {r.amplitude, r.exponent}, r.twist);
    const JetTable jets = sample_jets(v, default_rule());
    EXPECT_NEAR(energy(default_rule(), jets).value, r.energy, 1e-12 * r.energy) << v.label();
    EXPECT_NEAR(volume(default_rule(), jets).value, r.volume, 1e-12 * r.volume) << v.label();
  }
}

TEST(Functionals, InvariantUnderIsometries) {
  const UnitField v = perturbed_field(kCap, {0.7, 3}, {TwistKind::angular, 0.0});
  const Isometry iso{Quatd::from_vec(normalized(Vec4d{1, 2, -1, 0.5})), Quatd::from_vec(normalized(Vec4d{0.3, 0, 1, 1}))};
  const UnitField w = pushforward(v, iso);
  const QuadratureRule moved = build_gauss_rule(iso.apply(kCap));
  EXPECT_NEAR(energy(w, moved).value, energy(v, default_rule()).value, 1e-10);
  EXPECT_NEAR(volume(w, moved).value, volume(v, default_rule()).value, 1e-10);
}

TEST(Functionals, EnergyGapAndVolumeLowerBound) {
  const UnitField v = perturbed_field(kCap, {0.5, 3});
  const JetTable jets = sample_jets(v, default_rule());
  EXPECT_GT(energy_lower_bound_gap(default_rule(), jets), 0.0);
  EXPECT_GT(volume(default_rule(), jets).value, volume_lower_bound(default_rule(), jets));
  EXPECT_NEAR(energy_lower_bound_gap(hopf_field(), default_rule()), 0.0, 1e-12);
}

TEST(Sweep, EnergyIsEvenInAmplitude) {
  const QuadratureRule rule = build_gauss_rule(kCap, {32, 16, 32});
  for (double a : {0.25, 0.5, 1.0}) {
    EXPECT_NEAR(energy(perturbed_field(kCap, {a, 3}), rule).value, energy(perturbed_field(kCap, {-a, 3}), rule).value,
                1e-9);
    EXPECT_NEAR(volume(perturbed_field(kCap, {a, 3}), rule).value, volume(perturbed_field(kCap, {-a, 3}), rule).value,
                1e-9);
  }
}

TEST(Sweep, MinimumAtZeroAndGridMustContainZero) {
  const QuadratureRule rule = build_gauss_rule(kCap, {32, 16, 32});
  const SweepResult s = sweep_family(kCap, {0.5, -0.5, 0.0, 0.25, -0.25}, rule, {}, {}, false);
  EXPECT_EQ(s.amplitudes, (std::vector<double>{-0.5, -0.25, 0.0, 0.25, 0.5}));
  EXPECT_EQ(s.argmin_energy, 2u);
  EXPECT_EQ(s.argmin_volume, 2u);
  EXPECT_TRUE(s.energy_unimodal);
  EXPECT_TRUE(s.volume_unimodal);
  EXPECT_THROW(sweep_family(kCap, {0.5, -0.5}, rule), std::invalid_argument);
}

TEST(GoldenSection, FindsParabolaMinimum) {
  EXPECT_NEAR(golden_section_minimize([](double x) { return (x - 0.3) * (x - 0.3); }, -1, 1, 1e-8), 0.3, 1e-7);
}

TEST(SmallCap, FrozenStatistics) {
  struct Row {
    double r, mean_density, energy_ratio, volume_ratio;
  };
  for (const Row& row : {Row{0.05, 0.000500101203249628, 1.50025005060162, 1.00025003943845},
                         Row{0.1, 0.00200161986523558, 1.50100080993262, 1.0010006312024},
                         Row{0.2, 0.00802595711921893, 1.50401297855961, 1.00401011123959}}) {
    const SmallCapStats s = small_cap_stats(CapDomain(SpherePoint(), row.r), {});
    EXPECT_NEAR(s.mean_density, row.mean_density, 1e-10 * row.mean_density);
    EXPECT_NEAR(s.energy / cap_volume(row.r), row.energy_ratio, 1e-11);
    EXPECT_NEAR(s.volume / cap_volume(row.r), row.volume_ratio, 1e-11);
  }
}

TEST(SmallCap, ScalingFitAndCounterexampleChecks) {
  std::vector<SmallCapStats> stats;
  for (double r : {0.05, 0.1, 0.2}) stats.push_back(small_cap_stats(CapDomain(SpherePoint(), r), {32, 16, 32}));
  const ScalingFit fit = fit_small_cap_scaling(stats);
  EXPECT_NEAR(fit.slope, 2.0, 0.01);
  EXPECT_NEAR(fit.coefficient, 0.2, 0.01);

  const auto reps = check_small_cap_counterexample(CapDomain(SpherePoint(), 0.1), {32, 16, 32});
  ASSERT_EQ(reps.size(), 4u);
  for (const auto& r : reps) EXPECT_TRUE(r.pass) << r.name;
}

TEST(Checks, PolicySemantics) {
  EXPECT_TRUE(equality_check("a", 1.0 + 1e-9, 1.0, 1e-8, Policy::relative, {}).pass);
  EXPECT_FALSE(equality_check("a", 1.0 + 1e-7, 1.0, 1e-8, Policy::relative, {}).pass);
  EXPECT_TRUE(equality_check("a", 1e-9, 0.0, 1e-8, Policy::absolute, {}).pass);
  EXPECT_TRUE(lower_bound_check("b", 2.0, 1.0, 0.0, 1.0, {}).pass);
  EXPECT_TRUE(lower_bound_check("b", 1.0 - 1e-7, 1.0, 1e-6, 1.0, {}).pass);
  EXPECT_FALSE(lower_bound_check("b", 1.0 - 1e-5, 1.0, 1e-6, 1.0, {}).pass);
  EXPECT_TRUE(strict_upper_check("c", 1.0, 2.0, {}).pass);
  EXPECT_FALSE(strict_upper_check("c", 2.0, 2.0, {}).pass);
}

TEST(Checks, BoundaryIdentityAndBoundsOnPerturbedField) {
  const UnitField v = perturbed_field(kCap, {1.2, 2}, {TwistKind::angular, 0.0});
  const JetTable jets = sample_jets(v, default_rule());
  const Tolerances tol;
  EXPECT_TRUE(check_boundary_identity(v, default_rule(), jets, tol).pass);
  EXPECT_TRUE(check_sigma1_integral(v, default_rule(), jets, tol).pass);
  EXPECT_TRUE(check_energy_bound(v, default_rule(), jets, tol).pass);
  EXPECT_TRUE(check_volume_bound(v, default_rule(), jets, tol).pass);
  for (const auto& r : check_polynomial_fit(v, default_rule(), jets, std::vector<double>{0.05, 0.1, 0.2, 0.3},
                                            kDefaultDetFloor, tol))
    EXPECT_TRUE(r.pass) << r.name << " " << r.lhs << " vs " << r.rhs;
}

TEST(Checks, SigmaTwoFloorIsFlagged) {
  const UnitField v = perturbed_field(kCap, {1.2, 3});
  const JetTable jets = sample_jets(v, default_rule());
  const CheckReport r = check_volume_sigma2_chain(v, default_rule(), jets, Tolerances{});
  EXPECT_TRUE(r.pass);
  EXPECT_TRUE(r.context.at("sigma2_floor_violated").get<bool>());
  EXPECT_LT(r.context.at("min_sigma2").get<double>(), -1.0);
}

TEST(Checks, BoundaryChecksRequireHopfBoundary) {
  const UnitField v = perturbed_field(kCap, {0.5, 3});
  const QuadratureRule small = build_gauss_rule(CapDomain(SpherePoint(), 0.5), {8, 4, 8});
  const JetTable jets = sample_jets(v, small);
  EXPECT_THROW(check_boundary_identity(v, small, jets, Tolerances{}), std::invalid_argument);
  const UnitField sc = small_cap_field(CapDomain(SpherePoint(), 0.1), TangentVector(SpherePoint(), {0, 1, 0, 0}));
  const QuadratureRule tiny = build_gauss_rule(CapDomain(SpherePoint(), 0.1), {8, 4, 8});
  EXPECT_THROW(check_energy_bound(sc, tiny, sample_jets(sc, tiny), Tolerances{}), std::invalid_argument);
}

TEST(Checks, ImageVolumeFailureIsReportedNotThrown) {
  const UnitField v = perturbed_field(kCap, {1.2, 3});
  const QuadratureRule rule = build_gauss_rule(kCap, {24, 12, 24});
  const CheckReport r = check_image_volume(v, rule, sample_jets(v, rule), 0.5, 0.9, Tolerances{});
  EXPECT_FALSE(r.pass);
  EXPECT_TRUE(r.context.contains("error"));
}

TEST(RunAll, EmptyFieldListGivesEmptyReport) {
  VerifyConfig cfg;
  cfg.fields.clear();
  EXPECT_TRUE(run_all(cfg).empty());
}

TEST(RunAll, DefaultHopfConfigPasses) {
  VerifyConfig cfg;
  cfg.orders = {16, 8, 16};
  cfg.hopf_samples = 1000;
  cfg.jacobian_samples = 50;
  const auto reps = run_all(cfg);
  EXPECT_FALSE(reps.empty());
  for (const auto& r : reps) EXPECT_TRUE(r.pass) << r.name;
}

TEST(RunAll, FiniteDifferencesCannotMeetTinyTolerance) {
  VerifyConfig cfg;
  cfg.orders = {8, 4, 8};
  cfg.hopf_samples = 200;
  cfg.jacobian_samples = 10;
  cfg.diff = {DiffMode::fd, 1e-5};
  cfg.tol.override_all = 1e-12;
  const auto reps = run_all(cfg);
  EXPECT_FALSE(all_pass(reps));
  bool sigma_failed = false;
  for (const auto& r : reps)
    if (r.name == "hopf_sigma2_one" && !r.pass) sigma_failed = true;
  EXPECT_TRUE(sigma_failed);
}

TEST(RunAll, PerturbedFieldWithSweep) {
  VerifyConfig cfg;
  cfg.fields = {FieldSpec{FieldKind::perturbed, {0.5, 3}, {}}};
  cfg.orders = {24, 12, 24};
  cfg.jacobian_samples = 50;
  cfg.sweep_amplitudes = {-0.5, 0.0, 0.5};
  const auto reps = run_all(cfg);
  for (const auto& r : reps) EXPECT_TRUE(r.pass) << r.name << " lhs=" << r.lhs << " rhs=" << r.rhs;
  std::size_t sweep = 0;
  for (const auto& r : reps) sweep += r.name.rfind("sweep_", 0) == 0 ? 1 : 0;
  EXPECT_EQ(sweep, 4u);
}
