#include <cmath>
#include <random>

#include <boost/math/quadrature/gauss_kronrod.hpp>
#include <gtest/gtest.h>

#include "hopfcert/geom.hpp"
#include "test_util.hpp"

using namespace hopfcert;
using hopfcert::testing::random_point;
using hopfcert::testing::random_unit_tangent;

TEST(Quaternion, UnitRelations) {
  EXPECT_EQ((kQuatI * kQuatJ).vec(), kQuatK.vec());
  EXPECT_EQ((kQuatJ * kQuatK).vec(), kQuatI.vec());
  EXPECT_EQ((kQuatK * kQuatI).vec(), kQuatJ.vec());
  EXPECT_EQ((kQuatJ * kQuatI).vec(), (-1.0 * kQuatK.vec()));
  for (const Quatd& q : {kQuatI, kQuatJ, kQuatK}) EXPECT_EQ((q * q).vec(), (Vec4d{-1, 0, 0, 0}));
}

TEST(Quaternion, NormIsMultiplicative) {
  std::mt19937_64 rng(1);
  std::normal_distribution<double> g;
  for (int n = 0; n < 200; ++n) {
    const Quatd p{g(rng), g(rng), g(rng), g(rng)};
    const Quatd q{g(rng), g(rng), g(rng), g(rng)};
    EXPECT_NEAR(quat_norm(p * q), quat_norm(p) * quat_norm(q), 1e-12 * quat_norm(p) * quat_norm(q));
    EXPECT_LT(max_abs_diff((p * q).conj().vec(), (q.conj() * p.conj()).vec()), 1e-13);
  }
}

TEST(Quaternion, LeftAndRightMultiplicationAreOrthogonal) {
  const Quatd a = Quatd::from_vec(normalized(Vec4d{0.3, -1, 0.2, 0.7}));
  std::mt19937_64 rng(2);
  for (int n = 0; n < 100; ++n) {
    const Vec4d x = random_point(rng).vec();
    const Vec4d y = random_point(rng).vec();
    EXPECT_NEAR(dot(left_mul(a, x), left_mul(a, y)), dot(x, y), 1e-14);
    EXPECT_NEAR(dot(right_mul(x, a), right_mul(y, a)), dot(x, y), 1e-14);
  }
}

TEST(Quaternion, Det4AndCross3) {
  EXPECT_DOUBLE_EQ(det4({1, 0, 0, 0}, {0, 1, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}), 1.0);
  EXPECT_DOUBLE_EQ(det4({0, 1, 0, 0}, {1, 0, 0, 0}, {0, 0, 1, 0}, {0, 0, 0, 1}), -1.0);
  std::mt19937_64 rng(3);
  std::normal_distribution<double> g;
  for (int n = 0; n < 50; ++n) {
    const Vec4d a{g(rng), g(rng), g(rng), g(rng)}, b{g(rng), g(rng), g(rng), g(rng)}, c{g(rng), g(rng), g(rng), g(rng)},
        y{g(rng), g(rng), g(rng), g(rng)};
    const Vec4d n3 = cross3(a, b, c);
    EXPECT_NEAR(dot(n3, y), det4(a, b, c, y), 1e-11);
    EXPECT_NEAR(dot(n3, a), 0.0, 1e-11);
  }
}

TEST(SpherePoint, RenormalizesSmallDriftAndRejectsLarge) {
  const SpherePoint p(Vec4d{1.0 + 5e-10, 0, 0, 0});
  EXPECT_DOUBLE_EQ(p[0], 1.0);
  EXPECT_THROW(SpherePoint(Vec4d{1.0 + 1e-6, 0, 0, 0}), std::invalid_argument);
  EXPECT_THROW(SpherePoint::normalize(Vec4d{}), std::invalid_argument);
  EXPECT_NEAR(norm(SpherePoint::normalize({3, 4, 0, 0}).vec()), 1.0, 1e-15);
}

TEST(SpherePoint, AdoptKeepsBits) {
  const Vec4d x = SpherePoint::normalize({1, 2, 3, 4}).vec();
  EXPECT_EQ(SpherePoint::adopt(x).vec(), x);
  EXPECT_THROW(SpherePoint::adopt({2, 0, 0, 0}), std::invalid_argument);
}

TEST(TangentVector, RejectsRadialComponent) {
  const SpherePoint p;
  EXPECT_NO_THROW(TangentVector(p, {0, 1, 0, 0}));
  EXPECT_THROW(TangentVector(p, {0.1, 1, 0, 0}), std::invalid_argument);
  const TangentVector q = TangentVector::project(p, {0.1, 1, 0, 0});
  EXPECT_EQ(q.vec(), (Vec4d{0, 1, 0, 0}));
}

TEST(ExpMap, ReferenceCases) {
  const SpherePoint one;
  const TangentVector ti(one, {0, 1, 0, 0});
  EXPECT_LT(max_abs_diff(exp_map(one, ti, kPi / 2).vec(), Vec4d{0, 1, 0, 0}), 1e-15);
  EXPECT_LT(max_abs_diff(exp_map(one, ti, kPi).vec(), Vec4d{-1, 0, 0, 0}), 1e-15);
  EXPECT_LT(max_abs_diff(exp_map(one, ti, 0.0).vec(), one.vec()), 1e-15);
  EXPECT_THROW(exp_map(one, TangentVector(one, {0, 2, 0, 0}), 1.0), std::invalid_argument);
}

TEST(ExpMap, DistanceEqualsTime) {
  std::mt19937_64 rng(4);
  std::uniform_real_distribution<double> u(0.0, kPi);
  for (int n = 0; n < 500; ++n) {
    const SpherePoint p = random_point(rng);
    const TangentVector w = random_unit_tangent(p, rng);
    const double rho = u(rng);
    EXPECT_NEAR(geodesic_distance(p, exp_map(p, w, rho)), rho, 1e-12);
  }
}

TEST(GeodesicDistance, AccurateAtTinyAndAntipodalSeparations) {
  const SpherePoint one;
  const TangentVector ti(one, {0, 1, 0, 0});
  EXPECT_NEAR(geodesic_distance(one, exp_map(one, ti, 1e-9)), 1e-9, 1e-22);
  EXPECT_NEAR(geodesic_distance(one, SpherePoint(-1, 0, 0, 0)), kPi, 1e-15);
}

namespace {

/// RK4 on du/ds = -<u, gamma'> gamma along gamma(s) = cos s p + sin s w.
Vec4d transport_rk4(const Vec4d& p, const Vec4d& w, Vec4d u, double rho, int steps) {
  auto rhs = [&](double s, const Vec4d& v) {
    const Vec4d g = std::cos(s) * p + std::sin(s) * w;
    const Vec4d gd = std::cos(s) * w - std::sin(s) * p;
    return -dot(v, gd) * g;
  };
  const double h = rho / steps;
  double s = 0.0;
  for (int i = 0; i < steps; ++i) {
    const Vec4d k1 = rhs(s, u);
    const Vec4d k2 = rhs(s + h / 2, u + (h / 2) * k1);
    const Vec4d k3 = rhs(s + h / 2, u + (h / 2) * k2);
    const Vec4d k4 = rhs(s + h, u + h * k3);
    u = u + (h / 6) * (k1 + 2.0 * k2 + 2.0 * k3 + k4);
    s += h;
  }
  return u;
}

}  // namespace

TEST(ParallelTransport, MatchesRk4Oracle) {
  std::mt19937_64 rng(5);
  std::uniform_real_distribution<double> u(0.0, 3.0);
  std::normal_distribution<double> g;
  for (int n = 0; n < 100; ++n) {
    const SpherePoint p = random_point(rng);
    const TangentVector w = random_unit_tangent(p, rng);
    const TangentVector u0 = TangentVector::project(p, {g(rng), g(rng), g(rng), g(rng)});
    const double rho = u(rng);
    const Vec4d got = parallel_transport(p, w, u0, rho).vec();
    const Vec4d want = transport_rk4(p.vec(), w.vec(), u0.vec(), rho, 400);
    EXPECT_LT(norm(got - want), 1e-8);
  }
}

TEST(ParallelTransport, PreservesInnerProductsAndComposes) {
  std::mt19937_64 rng(6);
  std::uniform_real_distribution<double> u(0.0, 1.5);
  std::normal_distribution<double> g;
  for (int n = 0; n < 200; ++n) {
    const SpherePoint p = random_point(rng);
    const TangentVector w = random_unit_tangent(p, rng);
    const TangentVector a = TangentVector::project(p, {g(rng), g(rng), g(rng), g(rng)});
    const TangentVector b = TangentVector::project(p, {g(rng), g(rng), g(rng), g(rng)});
    const double s = u(rng), t = u(rng);
    const TangentVector pa = parallel_transport(p, w, a, s);
    const TangentVector pb = parallel_transport(p, w, b, s);
    EXPECT_NEAR(dot(pa.vec(), pb.vec()), dot(a.vec(), b.vec()), 1e-12);

    // Transport for s then t equals transport for s + t.
    const SpherePoint mid = exp_map(p, w, s);
    const TangentVector w_mid = parallel_transport(p, w, w, s);
    const Vec4d two_step = parallel_transport(mid, w_mid, pa, t).vec();
    EXPECT_LT(norm(two_step - parallel_transport(p, w, a, s + t).vec()), 1e-12);
  }
}

TEST(CapVolume, ClosedFormValues) {
  EXPECT_NEAR(cap_volume(kPi / 2), kPi * kPi, 1e-14);
  EXPECT_NEAR(cap_volume(kPi), kSphereVolume, 1e-13);
  const double x = 2e-3;
  const double tiny = kPi * (std::pow(x, 3) / 6 - std::pow(x, 5) / 120 + std::pow(x, 7) / 5040);
  EXPECT_NEAR(cap_volume(1e-3), tiny, 1e-15 * tiny);
  // Series and closed-form branches meet at r = 0.25.
  EXPECT_NEAR(cap_volume(std::nextafter(0.25, 0.0)), cap_volume(0.25), 1e-15 * cap_volume(0.25));
}

TEST(CapVolume, MatchesOneDimensionalQuadrature) {
  using boost::math::quadrature::gauss_kronrod;
  for (double r : {0.01, 0.1, 0.5, 1.0, 1.5, 2.0, 3.0, kPi}) {
    const double oracle = gauss_kronrod<double, 61>::integrate(
        [](double rho) { return 4.0 * kPi * std::sin(rho) * std::sin(rho); }, 0.0, r, 0, 1e-14);
    EXPECT_NEAR(cap_volume(r), oracle, 1e-12 * oracle) << "r = " << r;
  }
}

TEST(CapVolume, MonteCarloFraction) {
  const CapDomain k(SpherePoint::normalize({1, 1, 0, -1}), 1.2);
  std::mt19937_64 rng(7);
  const int n = 200000;
  int hits = 0;
  for (int i = 0; i < n; ++i) hits += contains(k, random_point(rng)).inside ? 1 : 0;
  const double p = cap_volume(k) / kSphereVolume;
  const double est = static_cast<double>(hits) / n;
  EXPECT_NEAR(est, p, 4.0 * std::sqrt(p * (1 - p) / n));
}

TEST(CapDomain, ValidatesRadiusAndContainment) {
  EXPECT_THROW(CapDomain(SpherePoint(), 0.0), std::invalid_argument);
  EXPECT_THROW(CapDomain(SpherePoint(), 3.2), std::invalid_argument);
  EXPECT_NO_THROW(CapDomain(SpherePoint(), kPi));
  EXPECT_TRUE(CapDomain::full_sphere().is_full_sphere());

  const CapDomain k(SpherePoint(), 1.0);
  const TangentVector w(SpherePoint(), {0, 0, 1, 0});
  EXPECT_TRUE(contains(k, exp_map(SpherePoint(), w, 1.0)).inside);
  EXPECT_FALSE(contains(k, exp_map(SpherePoint(), w, 1.0 + 1e-9)).inside);
  EXPECT_NEAR(contains(k, exp_map(SpherePoint(), w, 0.4)).distance, 0.4, 1e-14);
}

TEST(CapDomain, TangentBasisIsOrthonormalAndTangent) {
  const CapDomain k(SpherePoint::normalize({0.2, -0.4, 1, 0.5}), 0.7);
  const auto b = k.tangent_basis();
  for (std::size_t i = 0; i < 3; ++i) {
    EXPECT_NEAR(dot(b[i], k.center().vec()), 0.0, 1e-15);
    for (std::size_t j = 0; j < 3; ++j) EXPECT_NEAR(dot(b[i], b[j]), i == j ? 1.0 : 0.0, 1e-15);
  }
}
