#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>
#include <vector>

#include "grusslab/orbit.hpp"
#include "grusslab/rng.hpp"

using namespace grusslab;

namespace {

// O(n^4) smallest-disk reference: try every pair diameter and every triple
// circumcircle, keep the smallest disk that covers the set.
Disk brute_force_disk(const std::vector<Complex>& pts) {
  auto covers = [&](const Disk& d) {
    for (const Complex& p : pts)
      if (std::abs(p - d.center) > d.radius + 1e-11 * (1.0 + d.radius)) return false;
    return true;
  };
  Disk best{pts[0], 0.0};
  bool found = covers(best);
  auto consider = [&](const Disk& d) {
    if ((d.radius < best.radius || !found) && covers(d)) {
      best = d;
      found = true;
    }
  };
  for (std::size_t i = 0; i < pts.size(); ++i)
    for (std::size_t j = i + 1; j < pts.size(); ++j) {
      consider(detail::disk2(pts[i], pts[j]));
      for (std::size_t k = j + 1; k < pts.size(); ++k)
        consider(detail::circumdisk(pts[i], pts[j], pts[k]));
    }
  return best;
}

ComplexMatrix diag_complex(const std::vector<Complex>& entries) {
  const Index d = static_cast<Index>(entries.size());
  ComplexMatrix m = ComplexMatrix::Zero(d, d);
  for (Index i = 0; i < d; ++i) m(i, i) = entries[static_cast<std::size_t>(i)];
  return m;
}

}  // namespace

TEST_CASE("smallest enclosing disk agrees with the brute-force reference") {
  SplitMix64 rng(61);
  for (int t = 0; t < 100; ++t) {
    const int count = 2 + static_cast<int>(rng.next() % 9);
    std::vector<Complex> pts;
    for (int i = 0; i < count; ++i) pts.push_back(rng.complex_gaussian());
    if (t % 4 == 0) pts.push_back(pts.front());  // duplicates
    const Disk fast = smallest_enclosing_disk(pts, derive_seed(62, t));
    const Disk slow = brute_force_disk(pts);
    CHECK(std::abs(fast.radius - slow.radius) < 1e-9 * (1.0 + slow.radius));
    CHECK(std::abs(fast.center - slow.center) < 1e-8 * (1.0 + slow.radius));
  }
}

TEST_CASE("scalar distance: scalars, hermitian spectra, normal disks") {
  const DiameterResult at_identity = scalar_distance(ComplexMatrix::Identity(3, 3));
  CHECK(at_identity.d == doctest::Approx(0.0));
  CHECK(at_identity.lambda_star.real() == doctest::Approx(1.0));
  CHECK(at_identity.method == DiameterMethod::HermitianExact);

  const DiameterResult spread = scalar_distance(diag_complex({1.0, 0.0, -1.0}));
  CHECK(spread.d == doctest::Approx(1.0));
  CHECK(std::abs(spread.lambda_star) < 1e-12);

  const DiameterResult disk = scalar_distance(diag_complex({{0, 1}, {0, -1}, {1, 0}}));
  CHECK(disk.method == DiameterMethod::NormalDisk);
  CHECK(disk.d == doctest::Approx(1.0).epsilon(1e-10));
  CHECK(std::abs(disk.lambda_star) < 1e-9);

  CHECK_THROWS_AS(scalar_distance(ComplexMatrix::Zero(2, 3)), ShapeError);
}

TEST_CASE("forcing a method onto the wrong matrix class fails loudly") {
  const ComplexMatrix n = diag_complex({{0, 1}, {1, 0}});
  DiameterOptions hermitian_only;
  hermitian_only.method = DiameterMethod::HermitianExact;
  CHECK_THROWS_AS(scalar_distance(n, hermitian_only), DomainError);

  SplitMix64 rng(63);
  const ComplexMatrix g = random_complex_matrix(rng, 3, 3);
  DiameterOptions disk_only;
  disk_only.method = DiameterMethod::NormalDisk;
  CHECK_THROWS_AS(scalar_distance(g, disk_only), DomainError);
}

TEST_CASE("orbit diameter doubles the scalar distance") {
  CHECK(orbit_diameter(ComplexMatrix::Identity(4, 4)).d == doctest::Approx(0.0));

  const DiameterResult h = orbit_diameter(diag_complex({1.0, 0.0, -1.0}));
  CHECK(h.d == doctest::Approx(2.0));

  // Hermitian with spectrum {0, (1 +- sqrt 5)/2}: spread sqrt 5.
  ComplexMatrix b = ComplexMatrix::Zero(3, 3);
  b(0, 2) = 1.0;
  b(2, 0) = 1.0;
  b(2, 2) = 1.0;
  CHECK(orbit_diameter(b).d == doctest::Approx(std::sqrt(5.0)).epsilon(1e-12));
}

TEST_CASE("descent path matches the exact paths") {
  DiameterOptions descent;
  descent.method = DiameterMethod::ConvexDescent;
  SplitMix64 rng(64);
  for (int t = 0; t < 60; ++t) {
    const Index d = 2 + t % 4;
    const ComplexMatrix a = random_hermitian(rng, d);
    const double exact = scalar_distance(a).d;
    const DiameterResult res = scalar_distance(a, descent);
    CHECK(std::abs(res.d - exact) < 1e-6);
    CHECK(res.certificate_gap <= 1e-7 * (1.0 + operator_norm(a)));
  }
  for (int t = 0; t < 60; ++t) {
    const Index d = 2 + t % 4;
    const ComplexMatrix u = random_unitary(d, derive_seed(65, t));
    SplitMix64 eig_rng(derive_seed(66, t));
    std::vector<Complex> eigs;
    for (Index i = 0; i < d; ++i) eigs.push_back(eig_rng.complex_gaussian());
    const ComplexMatrix a = u * diag_complex(eigs) * u.adjoint();
    const double exact = scalar_distance(a).d;
    CHECK(std::abs(scalar_distance(a, descent).d - exact) < 1e-6);
  }
}

TEST_CASE("orbit diameter invariances") {
  SplitMix64 rng(67);
  for (int t = 0; t < 40; ++t) {
    const Index d = 2 + t % 3;
    const ComplexMatrix a = random_complex_matrix(rng, d, d);
    const double base = orbit_diameter(a).d;
    const Complex mu(rng.uniform(-1, 1), rng.uniform(-1, 1));
    CHECK(std::abs(orbit_diameter((a + mu * ComplexMatrix::Identity(d, d)).eval()).d - base) <
          1e-7 * (1.0 + operator_norm(a)));
    const ComplexMatrix u = random_unitary(d, derive_seed(68, t));
    CHECK(std::abs(orbit_diameter((u * a * u.adjoint()).eval()).d - base) <
          1e-7 * (1.0 + operator_norm(a)));
    const double c = rng.uniform(0.25, 2.0);
    CHECK(std::abs(orbit_diameter((c * a).eval()).d - c * base) <
          1e-7 * (1.0 + operator_norm(a)));
  }
}

TEST_CASE("commutator samples: explicit witness and upper bound") {
  const CommutatorBound swap2 = commutator_lower_bound(diag_complex({1.0, -1.0}), 0, 1);
  CHECK(swap2.value == doctest::Approx(2.0));
  // AU - UA for the swap is [[0, 2], [-2, 0]].
  const ComplexMatrix a2 = diag_complex({1.0, -1.0});
  CHECK(operator_norm(a2 * swap2.witness - swap2.witness * a2) == doctest::Approx(2.0));

  CHECK(commutator_lower_bound(ComplexMatrix::Identity(3, 3), 25, 2).value <
        1e-12);

  SplitMix64 rng(69);
  for (int t = 0; t < 25; ++t) {
    const Index d = 2 + t % 3;
    const ComplexMatrix a = random_complex_matrix(rng, d, d);
    const double diameter = orbit_diameter(a).d;
    const CommutatorBound lower = commutator_lower_bound(a, 60, derive_seed(70, t));
    CHECK(lower.value <= diameter + 1e-8);
    CHECK(operator_norm(a * lower.witness - lower.witness * a) ==
          doctest::Approx(lower.value));
  }
}

TEST_CASE("the hermitian swap witness attains the diameter") {
  SplitMix64 rng(71);
  for (int t = 0; t < 60; ++t) {
    const Index d = 2 + t % 4;
    const ComplexMatrix a = random_hermitian(rng, d);
    const double diameter = orbit_diameter(a).d;
    const CommutatorBound bound = commutator_lower_bound(a, 5, derive_seed(72, t));
    CHECK(bound.value >= diameter - 1e-8);
    CHECK(bound.value <= diameter + 1e-8);
  }
}

TEST_CASE("ball membership: norm check, PSD criterion and defects") {
  const BallSpec unit_ball{0.0, 2.0};
  const BallMembership inside = ball_membership(ComplexMatrix::Identity(2, 2), unit_ball);
  CHECK(inside.inside);
  CHECK(inside.defect == 0.0);
  CHECK(inside.reproduct_min_eig >= -1e-12);

  ComplexMatrix three = 3.0 * ComplexMatrix::Identity(1, 1);
  const BallMembership outside = ball_membership(three, unit_ball);
  CHECK_FALSE(outside.inside);
  CHECK(outside.distance == doctest::Approx(2.0));
  CHECK(outside.defect == doctest::Approx(1.0));
  CHECK(outside.reproduct_min_eig < 0.0);

  SplitMix64 rng(73);
  for (int t = 0; t < 60; ++t) {
    const Index d = 2 + t % 3;
    const ComplexMatrix a = random_complex_matrix(rng, d, d);
    const BallMembership m = ball_membership(a, tight_ball(a));
    CHECK(m.inside);
    CHECK(m.defect <= 1e-7);
    // The identity min-eig = radius^2 - distance^2 is asserted inside the
    // call; spot-check it here as well.
    CHECK(m.reproduct_min_eig ==
          doctest::Approx(m.radius * m.radius - m.distance * m.distance)
              .epsilon(1e-6));
  }
}

TEST_CASE("ball membership criteria agree on random pairs") {
  SplitMix64 rng(74);
  int in_count = 0, out_count = 0;
  for (int t = 0; t < 500; ++t) {
    const Index d = 2 + t % 3;
    const ComplexMatrix a = random_complex_matrix(rng, d, d);
    const Complex center(rng.uniform(-1, 1), rng.uniform(-1, 1));
    const double radius = rng.uniform(0.2, 4.0);
    const BallSpec ball{center - radius, center + radius};
    const BallMembership m = ball_membership(a, ball);
    // Consistency of the two criteria away from the boundary.
    if (std::abs(m.distance - m.radius) > 1e-6) {
      CHECK(m.inside == (m.reproduct_min_eig >= 0.0));
      (m.inside ? in_count : out_count) += 1;
    }
  }
  CHECK(in_count > 0);
  CHECK(out_count > 0);
}

TEST_CASE("tight balls") {
  const BallSpec scalar = tight_ball(ComplexMatrix::Identity(2, 2));
  CHECK(std::abs(scalar.m - Complex(1.0, 0.0)) < 1e-12);
  CHECK(std::abs(scalar.M - Complex(1.0, 0.0)) < 1e-12);

  const BallSpec spread = tight_ball(diag_complex({1.0, 0.0, -1.0}));
  CHECK(std::abs(spread.m - Complex(-1.0, 0.0)) < 1e-12);
  CHECK(std::abs(spread.M - Complex(1.0, 0.0)) < 1e-12);

  const BallSpec disk = tight_ball(diag_complex({{0, 1}, {0, -1}, {1, 0}}));
  CHECK(std::abs(disk.m - Complex(-1.0, 0.0)) < 1e-9);
  CHECK(std::abs(disk.M - Complex(1.0, 0.0)) < 1e-9);
}
