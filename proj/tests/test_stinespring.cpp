#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <cmath>

#include "grusslab/gruss.hpp"
#include "grusslab/stinespring.hpp"

using namespace grusslab;

namespace {

KrausMap identity_map(Index d) { return {d, d, {ComplexMatrix::Identity(d, d)}}; }

// Normalized trace map X -> (tr X / m) I_n with Kraus e_i e_j^T / sqrt(m).
KrausMap trace_map(Index m, Index n) {
  KrausMap out{m, n, {}};
  for (Index i = 0; i < n; ++i)
    for (Index j = 0; j < m; ++j) {
      ComplexMatrix k = ComplexMatrix::Zero(n, m);
      k(i, j) = 1.0 / std::sqrt(static_cast<double>(m));
      out.kraus.push_back(std::move(k));
    }
  return out;
}

}  // namespace

TEST_CASE("identity map dilates trivially") {
  const StinespringDilation d = build_stinespring(identity_map(3));
  CHECK(d.multiplicity == 1);
  CHECK(d.space_dim() == 3);
  CHECK(operator_norm(d.v - ComplexMatrix::Identity(3, 3)) == 0.0);
  CHECK(verify_stinespring(d, PositiveMap(identity_map(3)), 10, 1) < 1e-14);

  const StinespringDilation m = minimize_stinespring(d);
  CHECK(m.space_dim() == 3);
  CHECK(m.minimal);
}

TEST_CASE("non-unital maps are rejected") {
  KrausMap half{2, 2, {0.5 * ComplexMatrix::Identity(2, 2)}};
  CHECK_THROWS_AS(build_stinespring(half), DomainError);
}

TEST_CASE("trace map reconstructs through its dilation") {
  const KrausMap phi = trace_map(2, 3);
  const StinespringDilation d = build_stinespring(phi);
  CHECK(verify_stinespring(d, PositiveMap(phi), 20, 2) <= 1e-10);
  // Full-rank choi: the minimal dilation saturates the m^2 n bound.
  const StinespringDilation m = minimize_stinespring(d);
  CHECK(m.space_dim() == 2 * 2 * 3);
  CHECK(verify_stinespring(m, PositiveMap(phi), 20, 3) <= 1e-10);
}

TEST_CASE("random unital cp maps: dilation defects and the dimension bound") {
  for (int t = 0; t < 60; ++t) {
    const Index m = 2 + t % 3, n = 2 + (t / 3) % 3;
    const Index rank = std::max<Index>(1 + t % 5, (n + m - 1) / m);
    const KrausMap phi = random_unital_cp(m, n, rank, derive_seed(1000, t));
    const StinespringDilation d = build_stinespring(phi);
    CHECK(operator_norm(d.v.adjoint() * d.v - ComplexMatrix::Identity(n, n)) <= 1e-10);
    CHECK(verify_stinespring(d, PositiveMap(phi), 6, derive_seed(1001, t)) <= 1e-10);

    const StinespringDilation mini = minimize_stinespring(d);
    CHECK(mini.space_dim() <= d.space_dim());
    CHECK(mini.space_dim() <= m * m * n);
    CHECK(verify_stinespring(mini, PositiveMap(phi), 6, derive_seed(1002, t)) <= 1e-9);
  }
}

TEST_CASE("a padded zero kraus operator is pruned by minimization") {
  KrausMap phi = random_unital_cp(2, 2, 3, 17);
  phi.kraus.push_back(ComplexMatrix::Zero(2, 2));
  const StinespringDilation d = build_stinespring(phi);
  CHECK(d.multiplicity == 4);
  const StinespringDilation m = minimize_stinespring(d);
  CHECK(m.multiplicity < 4);
  CHECK(verify_stinespring(m, PositiveMap(phi), 10, 4) <= 1e-9);
}

TEST_CASE("duplicated kraus operators minimize to the deduplicated dimension") {
  const KrausMap base = random_unital_cp(2, 2, 2, 23);
  KrausMap doubled{2, 2, {}};
  for (const auto& k : base.kraus) {
    doubled.kraus.push_back(k / std::sqrt(2.0));
    doubled.kraus.push_back(k / std::sqrt(2.0));
  }
  CHECK(unitality_defect(PositiveMap(doubled)) <= 1e-12);

  const StinespringDilation dedup = minimize_stinespring(build_stinespring(base));
  const StinespringDilation merged = minimize_stinespring(build_stinespring(doubled));
  CHECK(merged.space_dim() == dedup.space_dim());
  CHECK(verify_stinespring(merged, PositiveMap(base), 10, 5) <= 1e-9);
}

TEST_CASE("verification flags a perturbed isometry") {
  const KrausMap phi = random_unital_cp(2, 2, 2, 31);
  StinespringDilation d = build_stinespring(phi);
  SplitMix64 rng(32);
  ComplexMatrix noise = random_complex_matrix(rng, d.v.rows(), d.v.cols());
  d.v += 1e-3 * noise / operator_norm(noise);
  const double err = verify_stinespring(d, PositiveMap(phi), 20, 6);
  CHECK(err >= 1e-4);
  CHECK(err <= 1e-1);
}

TEST_CASE("dilation-space geometry: V V* is a projection defect away") {
  for (int t = 0; t < 40; ++t) {
    const Index m = 2 + t % 2, n = 2 + t % 3;
    const Index rank = std::max<Index>(1 + t % 4, (n + m - 1) / m);
    const KrausMap phi = random_unital_cp(m, n, rank, derive_seed(1100, t));
    const StinespringDilation d = minimize_stinespring(build_stinespring(phi));
    const ComplexMatrix vv = d.v * d.v.adjoint();
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(vv), Eigen::EigenvaluesOnly);
    CHECK(es.eigenvalues()(es.eigenvalues().size() - 1) <= 1.0 + 1e-10);
    const ComplexMatrix complement = ComplexMatrix::Identity(vv.rows(), vv.cols()) - vv;
    CHECK(operator_norm(complement * complement - complement) <= 1e-9);
  }
}

TEST_CASE("second-moment block built through a dilation stays positive") {
  SplitMix64 rng(51);
  for (int t = 0; t < 500; ++t) {
    const Index m = 2 + t % 3;
    const Index n = 2 + (t / 2) % 3;
    const Index rank = std::max<Index>(1 + t % 3, (n + m - 1) / m);
    const KrausMap phi = random_unital_cp(m, n, rank, derive_seed(1200, t));
    const ComplexMatrix a = random_complex_matrix(rng, m, m);
    const ComplexMatrix b = random_complex_matrix(rng, m, m);
    const BlockGram bg = block_gram(PositiveMap(phi), a, b);
    const double scale = 1.0 + std::max(operator_norm(a), operator_norm(b));
    CHECK(bg.verdict.min_eigenvalue >= -1e-10 * scale * scale);
  }
}
