#pragma once

#include <algorithm>
#include <string>

#include "grusslab/cpmaps.hpp"
#include "grusslab/linalg.hpp"

namespace grusslab {

// ---------------------------------------------------------------------------
// Stinespring form Phi(X) = V^* pi(X) V for unital CP maps M_m -> M_n.
//
// The representation pi(X) = X (x) I_r is stored only through the
// multiplicity r and materialized on demand; that keeps pi a unital
// *-homomorphism exactly, by construction. Tensor legs are ordered
// (system, multiplicity): dilation-space index (a, i) -> a*r + i.
// ---------------------------------------------------------------------------

struct StinespringDilation {
  Index input_dim = 0;   // m
  Index output_dim = 0;  // n
  Index multiplicity = 0;
  ComplexMatrix v;  // (m * multiplicity) x n, isometry when the map is unital
  bool minimal = false;

  Index space_dim() const { return input_dim * multiplicity; }
};

/// pi(X) = X (x) I_r on the dilation space.
inline ComplexMatrix representation(const StinespringDilation& d, const ComplexMatrix& x) {
  if (x.rows() != d.input_dim || x.cols() != d.input_dim)
    throw ShapeError("representation: input must be " + std::to_string(d.input_dim) + "x" +
                     std::to_string(d.input_dim));
  return kron(x, ComplexMatrix::Identity(d.multiplicity, d.multiplicity));
}

inline ComplexMatrix dilation_apply(const StinespringDilation& d, const ComplexMatrix& x) {
  return d.v.adjoint() * representation(d, x) * d.v;
}

/// Dilation with multiplicity = number of Kraus operators:
/// V[(a, i), b] = conj(K_i(b, a)), which gives V^* (X (x) I_r) V = Phi(X)
/// and V^* V = sum_i K_i K_i^*, so V is an isometry exactly when Phi is
/// unital.
inline StinespringDilation build_stinespring(const KrausMap& map, double tol = kHermitianTol) {
  validate(map);
  const double defect = unitality_defect(PositiveMap(map));
  if (defect > tol)
    throw DomainError("build_stinespring: map is not unital (defect " + std::to_string(defect) +
                      ")");
  const Index m = map.input_dim, n = map.output_dim;
  const Index r = static_cast<Index>(map.kraus.size());
  ComplexMatrix v(m * r, n);
  for (Index i = 0; i < r; ++i)
    for (Index a = 0; a < m; ++a)
      for (Index b = 0; b < n; ++b) v(a * r + i, b) = std::conj(map.kraus[i](b, a));
  return {m, n, r, std::move(v), false};
}

/// Accepts any map handle; requires a unital CP map (Choi PSD).
inline StinespringDilation build_stinespring(const PositiveMap& map, double tol = kHermitianTol) {
  return build_stinespring(kraus_form(map), tol);
}

/// Compress onto the span of pi(M_m) V C^n. Because that span is invariant
/// under every X (x) I_r, it has the form C^m (x) S for a subspace S of the
/// multiplicity leg; S is the column span of the multiplicity slices of V.
inline StinespringDilation minimize_stinespring(const StinespringDilation& d,
                                                double rank_tol = kRankTol) {
  const Index m = d.input_dim, n = d.output_dim, r = d.multiplicity;
  ComplexMatrix slices(r, m * n);
  for (Index a = 0; a < m; ++a)
    for (Index b = 0; b < n; ++b)
      for (Index i = 0; i < r; ++i) slices(i, a * n + b) = d.v(a * r + i, b);
  Eigen::JacobiSVD<ComplexMatrix> svd(slices, Eigen::ComputeThinU);
  const RealVector& s = svd.singularValues();
  Index rank = 0;
  for (Index i = 0; i < s.size(); ++i)
    if (s(i) > rank_tol * s(0)) ++rank;
  rank = std::max<Index>(rank, 1);
  const ComplexMatrix w = svd.matrixU().leftCols(rank);  // r x rank isometry onto S

  StinespringDilation out{m, n, rank, ComplexMatrix(m * rank, n), true};
  for (Index a = 0; a < m; ++a)
    out.v.middleRows(a * rank, rank) = w.adjoint() * d.v.middleRows(a * r, r);
  return out;
}

/// Max over random inputs of || V^* pi(X) V - Phi(X) ||, together with the
/// isometry and homomorphism defects. Returns the worst of them.
inline double verify_stinespring(const StinespringDilation& d, const PositiveMap& map,
                                 int trials, std::uint64_t seed) {
  if (map.input_dim() != d.input_dim || map.output_dim() != d.output_dim)
    throw ShapeError("verify_stinespring: dilation and map dimensions disagree");
  const Index m = d.input_dim, n = d.output_dim;
  double worst = operator_norm(d.v.adjoint() * d.v - ComplexMatrix::Identity(n, n));

  SplitMix64 rng(seed);
  for (int t = 0; t < std::max(trials, 1); ++t) {
    const ComplexMatrix x = random_complex_matrix(rng, m, m);
    worst = std::max(worst, operator_norm(dilation_apply(d, x) - map.apply(x)));
  }

  const ComplexMatrix x = random_complex_matrix(rng, m, m);
  const ComplexMatrix y = random_complex_matrix(rng, m, m);
  worst = std::max(worst, operator_norm(representation(d, x) * representation(d, y) -
                                        representation(d, (x * y).eval())));
  worst = std::max(worst, operator_norm(representation(d, x.adjoint().eval()) -
                                        representation(d, x).adjoint()));
  worst = std::max(worst,
                   operator_norm(representation(d, ComplexMatrix::Identity(m, m)) -
                                 ComplexMatrix::Identity(d.space_dim(), d.space_dim())));
  return worst;
}

}  // namespace grusslab
