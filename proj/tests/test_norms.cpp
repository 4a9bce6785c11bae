#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "grusslab/norms.hpp"
#include "grusslab/rng.hpp"

using namespace grusslab;

TEST_CASE("gauge values on explicit matrices") {
  CHECK(gauge_norm(GaugeSpec::schatten(2), ComplexMatrix::Identity(4, 4)) ==
        doctest::Approx(2.0).epsilon(1e-14));

  ComplexMatrix d = ComplexMatrix::Zero(3, 3);
  d(0, 0) = 3.0;
  d(1, 1) = 1.0;
  d(2, 2) = 2.0;
  CHECK(gauge_norm(GaugeSpec::ky_fan(2), d) == doctest::Approx(5.0));

  ComplexMatrix m(3, 3);
  m << -2, 0, 0, -2, -4, 0, 2, 2, -2;
  CHECK(gauge_norm(GaugeSpec::operator_norm(), m) ==
        doctest::Approx(2 + 2 * std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("identity gauge values come from the gauge itself") {
  for (int k = 1; k <= 16; ++k) {
    for (double p : {1.0, 2.0, 3.0, 4.0}) {
      CHECK(std::abs(gauge_identity_value(GaugeSpec::schatten(p), k) -
                     std::pow(static_cast<double>(k), 1.0 / p)) < 1e-12);
    }
    CHECK(gauge_identity_value(GaugeSpec::operator_norm(), k) == 1.0);
    CHECK(gauge_identity_value(GaugeSpec::ky_fan(3), k) == static_cast<double>(std::min(k, 3)));
  }
}

TEST_CASE("padding by zero blocks never changes a gauge norm") {
  SplitMix64 rng(31);
  const std::vector<GaugeSpec> gauges = {GaugeSpec::operator_norm(), GaugeSpec::ky_fan(2),
                                         GaugeSpec::ky_fan(7), GaugeSpec::schatten(1),
                                         GaugeSpec::schatten(2.5)};
  for (int t = 0; t < 40; ++t) {
    const ComplexMatrix a = random_complex_matrix(rng, 2 + t % 3, 2 + (t / 2) % 3);
    const ComplexMatrix padded = direct_sum(a, ComplexMatrix::Zero(2, 3));
    for (const auto& g : gauges) CHECK(gauge_norm(g, a) == gauge_norm(g, padded));
  }
}

TEST_CASE("operator gauge equals ky_fan(1) and bounds the schatten limit") {
  SplitMix64 rng(32);
  for (int t = 0; t < 40; ++t) {
    const Index d = 2 + t % 3;
    const ComplexMatrix a = random_complex_matrix(rng, d, d);
    const double op = gauge_norm(GaugeSpec::operator_norm(), a);
    CHECK(gauge_norm(GaugeSpec::ky_fan(1), a) == op);
    const double p100 = gauge_norm(GaugeSpec::schatten(100), a);
    CHECK(p100 >= op * (1.0 - 1e-12));
    CHECK(p100 <= op * std::pow(static_cast<double>(d), 1.0 / 100.0) + 1e-12);
  }
}

TEST_CASE("unitary invariance of every implemented gauge") {
  SplitMix64 rng(33);
  const std::vector<GaugeSpec> gauges = {GaugeSpec::operator_norm(), GaugeSpec::ky_fan(2),
                                         GaugeSpec::schatten(1), GaugeSpec::schatten(3)};
  for (int t = 0; t < 50; ++t) {
    const Index d = 2 + t % 3;
    const ComplexMatrix a = random_complex_matrix(rng, d, d);
    const ComplexMatrix u = random_unitary(d, derive_seed(900, t));
    const ComplexMatrix v = random_unitary(d, derive_seed(901, t));
    for (const auto& g : gauges)
      CHECK(std::abs(gauge_norm(g, (u * a * v).eval()) - gauge_norm(g, a)) < 1e-10);
  }
}

TEST_CASE("contractions never exceed the identity in any gauge") {
  SplitMix64 rng(34);
  for (int t = 0; t < 300; ++t) {
    const Index d = 2 + t % 3;
    ComplexMatrix k = random_complex_matrix(rng, d, d);
    k *= rng.uniform01() / std::max(1.0, operator_norm(k));
    std::vector<GaugeSpec> gauges = {GaugeSpec::operator_norm(), GaugeSpec::schatten(1),
                                     GaugeSpec::schatten(2), GaugeSpec::schatten(3)};
    for (Index kf = 1; kf <= d; ++kf) gauges.push_back(GaugeSpec::ky_fan(static_cast<int>(kf)));
    for (const auto& g : gauges)
      CHECK(gauge_norm(g, k) <= gauge_identity_value(g, d) + 1e-10);
  }
}

TEST_CASE("|||AXB||| <= ||A|| |||X||| ||B||") {
  SplitMix64 rng(35);
  const std::vector<GaugeSpec> gauges = {GaugeSpec::operator_norm(), GaugeSpec::ky_fan(2),
                                         GaugeSpec::schatten(1), GaugeSpec::schatten(2),
                                         GaugeSpec::schatten(3)};
  for (int t = 0; t < 300; ++t) {
    const Index d = 2 + t % 3;
    const ComplexMatrix a = random_complex_matrix(rng, d, d);
    const ComplexMatrix x = random_complex_matrix(rng, d, d);
    const ComplexMatrix b = random_complex_matrix(rng, d, d);
    const double na = operator_norm(a), nb = operator_norm(b);
    for (const auto& g : gauges) {
      const double lhs = gauge_norm(g, (a * x * b).eval());
      const double rhs = na * gauge_norm(g, x) * nb;
      CHECK(lhs <= rhs * (1.0 + 1e-10) + 1e-12);
    }
  }
}

TEST_CASE("ky fan dominance: explicit pairs and Weyl monotonicity") {
  ComplexMatrix a = ComplexMatrix::Identity(2, 2);
  CHECK(ky_fan_dominates(a, a).holds);
  for (double m : ky_fan_dominates(a, a).margins) CHECK(m == 0.0);

  ComplexMatrix b = ComplexMatrix::Zero(2, 2);
  b(0, 0) = 2.0;
  CHECK(ky_fan_dominates(a, b).holds);  // (1, 2) vs (2, 2) partial sums
  const MajorizationVerdict reverse = ky_fan_dominates(b, a);
  CHECK_FALSE(reverse.holds);
  CHECK(reverse.first_violation_index.value() == 1);

  SplitMix64 rng(36);
  for (int t = 0; t < 100; ++t) {
    const Index d = 2 + t % 3;
    const ComplexMatrix base = random_psd(rng, d);
    const ComplexMatrix bigger = base + random_psd(rng, d);
    CHECK(ky_fan_dominates(base, bigger).holds);
  }
}

TEST_CASE("ky fan dominance implies every gauge ordering") {
  SplitMix64 rng(37);
  const std::vector<GaugeSpec> gauges = {GaugeSpec::operator_norm(), GaugeSpec::ky_fan(2),
                                         GaugeSpec::ky_fan(3), GaugeSpec::schatten(1),
                                         GaugeSpec::schatten(2), GaugeSpec::schatten(3)};
  for (int t = 0; t < 300; ++t) {
    const Index d = 2 + t % 3;
    const ComplexMatrix a = random_psd(rng, d);
    const ComplexMatrix b = a + random_psd(rng, d);
    const MajorizationVerdict dom = ky_fan_dominates(a, b, 1e-10);
    REQUIRE(dom.holds);
    double min_margin = 1e300;
    for (double m : dom.margins) min_margin = std::min(min_margin, m);
    if (min_margin <= 1e-8) continue;
    for (const auto& g : gauges)
      CHECK(gauge_norm(g, a) <= gauge_norm(g, b) + 1e-8);
  }
}

TEST_CASE("weak majorization in both modes") {
  const std::vector<double> x = {3.0, 2.0, 1.0};
  CHECK(weak_majorization(x, x, false).holds);
  CHECK(weak_majorization(x, x, true).holds);

  const MajorizationVerdict fail = weak_majorization({4.0, 1.0}, {3.0, 3.0}, true);
  CHECK_FALSE(fail.holds);
  CHECK(fail.first_violation_index.value() == 1);
  CHECK_FALSE(weak_majorization({4.0, 1.0}, {3.0, 3.0}, false).holds);

  // Partial sums can dominate while partial products do not.
  CHECK(weak_majorization({1.0, 1.0}, {2.0, 0.0}, false).holds);
  const MajorizationVerdict log_gap = weak_majorization({1.0, 1.0}, {2.0, 0.0}, true);
  CHECK_FALSE(log_gap.holds);
  CHECK(log_gap.first_violation_index.value() == 2);

  CHECK_THROWS_AS(weak_majorization({-1.0, 0.0}, {1.0, 0.0}, true), DomainError);
}

TEST_CASE("products of singular values: s(AB) log-majorized by s(A) s(B)") {
  SplitMix64 rng(38);
  for (int t = 0; t < 300; ++t) {
    const Index d = 2 + t % 3;
    const ComplexMatrix a = random_complex_matrix(rng, d, d);
    const ComplexMatrix b = random_complex_matrix(rng, d, d);
    const RealVector sab = singular_values((a * b).eval()).values;
    const RealVector sa = singular_values(a).values;
    const RealVector sb = singular_values(b).values;
    std::vector<double> x(sab.data(), sab.data() + sab.size());
    std::vector<double> y(static_cast<std::size_t>(d));
    for (Index i = 0; i < d; ++i) y[static_cast<std::size_t>(i)] = sa(i) * sb(i);
    const MajorizationVerdict log_verdict = weak_majorization(x, y, true, 1e-10);
    CHECK(log_verdict.holds);
    // log-majorization implies the plain weak version
    CHECK(weak_majorization(x, y, false, 1e-10).holds);
  }
}

TEST_CASE("gauge string syntax round-trips and rejects bad tokens") {
  CHECK(to_string(parse_gauge("op")) == "op");
  CHECK(to_string(parse_gauge("kyfan:3")) == "kyfan:3");
  CHECK(to_string(parse_gauge("schatten:2.5")) == "schatten:2.5");
  CHECK(parse_gauge("schatten:1").p == 1.0);

  CHECK_THROWS_WITH_AS(parse_gauge("kyfan:x"), doctest::Contains("kyfan:x"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_gauge("schatten:0.5"), doctest::Contains("0.5"), ConfigError);
  CHECK_THROWS_WITH_AS(parse_gauge("frobenius"), doctest::Contains("frobenius"), ConfigError);
  CHECK_THROWS_AS(GaugeSpec::ky_fan(0), ConfigError);
}

TEST_CASE("custom gauges are padding invariant by construction") {
  register_gauge("top2avg", [](const std::vector<double>& s) {
    double sum = 0.0;
    for (std::size_t i = 0; i < std::min<std::size_t>(2, s.size()); ++i) sum += s[i];
    return 0.5 * sum;
  });
  const GaugeSpec g = parse_gauge("top2avg");
  SplitMix64 rng(39);
  const ComplexMatrix a = random_complex_matrix(rng, 3, 3);
  CHECK(gauge_norm(g, a) ==
        doctest::Approx(0.5 * gauge_norm(GaugeSpec::ky_fan(2), a)).epsilon(1e-14));
  CHECK(gauge_norm(g, direct_sum(a, ComplexMatrix::Zero(2, 2))) == gauge_norm(g, a));
  CHECK(gauge_identity_value(g, 5) == 1.0);
}
