#pragma once

#include <optional>
#include <string>
#include <utility>
#include <variant>
#include <vector>

#include "grusslab/linalg.hpp"
#include "grusslab/rng.hpp"
#include "grusslab/types.hpp"

namespace grusslab {

// ---------------------------------------------------------------------------
// Linear maps M_m -> M_n in three interchangeable carriers.
//
// Kraus convention: Phi(X) = sum_i K_i X K_i^* with K_i of shape n x m, so a
// unital map has sum_i K_i K_i^* = I_n. The Choi matrix is the (mn) x (mn)
// block matrix [Phi(E_ij)]; it is PSD exactly when the map is completely
// positive. Maps without a Kraus form (the reduction map is not CP) are kept
// in direct functional form.
// ---------------------------------------------------------------------------

struct KrausMap {
  Index input_dim = 0;
  Index output_dim = 0;
  std::vector<ComplexMatrix> kraus;

  ComplexMatrix apply(const ComplexMatrix& x) const {
    if (x.rows() != input_dim || x.cols() != input_dim)
      throw ShapeError("KrausMap apply: input must be " + std::to_string(input_dim) + "x" +
                       std::to_string(input_dim));
    ComplexMatrix out = ComplexMatrix::Zero(output_dim, output_dim);
    for (const auto& k : kraus) out += k * x * k.adjoint();
    return out;
  }
};

struct ChoiMatrix {
  Index input_dim = 0;
  Index output_dim = 0;
  ComplexMatrix c;  // block (i, j) of size n x n is Phi(E_ij)

  ComplexMatrix apply(const ComplexMatrix& x) const {
    if (x.rows() != input_dim || x.cols() != input_dim)
      throw ShapeError("ChoiMatrix apply: input must be " + std::to_string(input_dim) + "x" +
                       std::to_string(input_dim));
    const Index n = output_dim;
    ComplexMatrix out = ComplexMatrix::Zero(n, n);
    for (Index i = 0; i < input_dim; ++i)
      for (Index j = 0; j < input_dim; ++j) out += x(i, j) * c.block(i * n, j * n, n, n);
    return out;
  }
};

/// X -> 2 tr(X) I_d - X, optionally scaled by 1/(2d - 1) to make it unital.
/// Positive and 2-positive on M_3 but not completely positive, so it has no
/// Kraus form.
struct ReductionMap {
  Index dim = 3;
  bool normalized = false;

  ComplexMatrix apply(const ComplexMatrix& x) const {
    if (x.rows() != dim || x.cols() != dim)
      throw ShapeError("ReductionMap apply: input must be " + std::to_string(dim) + "x" +
                       std::to_string(dim));
    ComplexMatrix out = 2.0 * x.trace() * ComplexMatrix::Identity(dim, dim) - x;
    if (normalized) out /= static_cast<double>(2 * dim - 1);
    return out;
  }
};

/// Owning handle over the three carriers.
struct PositiveMap {
  std::variant<KrausMap, ChoiMatrix, ReductionMap> rep;

  PositiveMap(KrausMap k) : rep(std::move(k)) {}
  PositiveMap(ChoiMatrix c) : rep(std::move(c)) {}
  PositiveMap(ReductionMap r) : rep(r) {}

  template <typename T>
  const T* get_if() const {
    return std::get_if<T>(&rep);
  }

  ComplexMatrix apply(const ComplexMatrix& x) const {
    return std::visit([&](const auto& m) { return m.apply(x); }, rep);
  }

  Index input_dim() const {
    return std::visit([](const auto& m) -> Index {
      if constexpr (std::is_same_v<std::decay_t<decltype(m)>, ReductionMap>) return m.dim;
      else return m.input_dim;
    }, rep);
  }

  Index output_dim() const {
    return std::visit([](const auto& m) -> Index {
      if constexpr (std::is_same_v<std::decay_t<decltype(m)>, ReductionMap>) return m.dim;
      else return m.output_dim;
    }, rep);
  }
};

inline void validate(const KrausMap& map) {
  if (map.input_dim < 1 || map.output_dim < 1)
    throw ShapeError("KrausMap: dimensions must be >= 1");
  if (map.kraus.empty()) throw ShapeError("KrausMap: needs at least one Kraus operator");
  for (const auto& k : map.kraus)
    if (k.rows() != map.output_dim || k.cols() != map.input_dim)
      throw ShapeError("KrausMap: Kraus operator shape " + std::to_string(k.rows()) + "x" +
                       std::to_string(k.cols()) + " does not match " +
                       std::to_string(map.output_dim) + "x" + std::to_string(map.input_dim));
}

inline double unitality_defect(const PositiveMap& map) {
  const Index m = map.input_dim();
  const Index n = map.output_dim();
  return operator_norm(map.apply(ComplexMatrix::Identity(m, m)) -
                       ComplexMatrix::Identity(n, n));
}

inline bool is_unital(const PositiveMap& map, double tol = kHermitianTol) {
  return unitality_defect(map) <= tol;
}

inline ChoiMatrix kraus_to_choi(const KrausMap& map) {
  validate(map);
  const Index m = map.input_dim, n = map.output_dim;
  ComplexMatrix c = ComplexMatrix::Zero(m * n, m * n);
  // Rank-one form: C = sum_l w_l w_l^* with w_l[(i,a)] = K_l(a, i).
  for (const auto& k : map.kraus) {
    ComplexVector w(m * n);
    for (Index i = 0; i < m; ++i)
      for (Index a = 0; a < n; ++a) w(i * n + a) = k(a, i);
    c += w * w.adjoint();
  }
  return {m, n, std::move(c)};
}

/// Choi matrix of any map handle, assembled by applying it to matrix units.
inline ChoiMatrix to_choi(const PositiveMap& map) {
  if (const auto* k = map.get_if<KrausMap>()) return kraus_to_choi(*k);
  if (const auto* c = map.get_if<ChoiMatrix>()) return *c;
  const Index m = map.input_dim(), n = map.output_dim();
  ComplexMatrix c = ComplexMatrix::Zero(m * n, m * n);
  ComplexMatrix unit = ComplexMatrix::Zero(m, m);
  for (Index i = 0; i < m; ++i)
    for (Index j = 0; j < m; ++j) {
      unit(i, j) = 1.0;
      c.block(i * n, j * n, n, n) = map.apply(unit);
      unit(i, j) = 0.0;
    }
  return {m, n, std::move(c)};
}

inline KrausMap choi_to_kraus(const ChoiMatrix& choi, double rank_tol = kRankTol) {
  const Index m = choi.input_dim, n = choi.output_dim;
  if (choi.c.rows() != m * n || choi.c.cols() != m * n)
    throw ShapeError("choi_to_kraus: Choi block size mismatch");
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(choi.c));
  const RealVector& vals = es.eigenvalues();
  const double top =
      vals.size() ? std::max(std::abs(vals(0)), std::abs(vals(vals.size() - 1))) : 0.0;
  if (vals.size() && vals(0) < -kHermitianTol * (1.0 + top))
    throw DomainError("choi_to_kraus: Choi matrix is not PSD (min eigenvalue " +
                      std::to_string(vals(0)) + "); no Kraus form exists");
  KrausMap out{m, n, {}};
  for (Index l = vals.size() - 1; l >= 0; --l) {
    if (vals(l) <= rank_tol * top || vals(l) <= 0.0) break;  // eigenvalues ascend
    const double w = std::sqrt(vals(l));
    ComplexMatrix k(n, m);
    for (Index i = 0; i < m; ++i)
      for (Index a = 0; a < n; ++a) k(a, i) = w * es.eigenvectors()(i * n + a, l);
    out.kraus.push_back(std::move(k));
  }
  if (out.kraus.empty()) out.kraus.push_back(ComplexMatrix::Zero(n, m));
  return out;
}

/// Kraus form of a map handle. Throws NoKrausFormError for maps that are not
/// completely positive instead of fabricating pseudo-Kraus terms.
inline KrausMap kraus_form(const PositiveMap& map, double rank_tol = kRankTol) {
  if (const auto* k = map.get_if<KrausMap>()) return *k;
  const ChoiMatrix choi = to_choi(map);
  if (map.get_if<ReductionMap>() != nullptr) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(choi.c),
                                                    Eigen::EigenvaluesOnly);
    if (es.eigenvalues()(0) < 0.0)
      throw NoKrausFormError(
          "reduction map is not completely positive (Choi min eigenvalue " +
          std::to_string(es.eigenvalues()(0)) + "); it has no Kraus form");
  }
  return choi_to_kraus(choi, rank_tol);
}

// ---------------------------------------------------------------------------
// Amplification Phi_s: acts blockwise on s x s block matrices over M_m.
// ---------------------------------------------------------------------------

struct AmplifiedMap {
  PositiveMap base;
  int order = 1;

  ComplexMatrix apply(const ComplexMatrix& x) const {
    const Index m = base.input_dim(), n = base.output_dim();
    const Index s = order;
    if (x.rows() != s * m || x.cols() != s * m)
      throw ShapeError("amplified apply: input " + std::to_string(x.rows()) + "x" +
                       std::to_string(x.cols()) + " is not an " + std::to_string(s) + "x" +
                       std::to_string(s) + " block matrix over M_" + std::to_string(m));
    ComplexMatrix out(s * n, s * n);
    for (Index u = 0; u < s; ++u)
      for (Index v = 0; v < s; ++v)
        out.block(u * n, v * n, n, n) = base.apply(x.block(u * m, v * m, m, m));
    return out;
  }
};

inline AmplifiedMap amplify(PositiveMap map, int s) {
  if (s < 1) throw ConfigError("amplify: order must be >= 1");
  return {std::move(map), s};
}

// ---------------------------------------------------------------------------
// Positivity order testing
// ---------------------------------------------------------------------------

struct PositivityWitness {
  ComplexMatrix input;  // PSD block input whose image has a negative eigenvalue
  double min_eigenvalue = 0.0;
};

struct PositivityVerdict {
  enum class Mode { ExactComplete, Sampled };
  int order_tested = 1;
  Mode mode = Mode::ExactComplete;
  bool holds = false;
  std::optional<PositivityWitness> witness;
};

/// Unnormalized maximally entangled projector sum_ij E_ij (x) E_ij on C^{d^2}.
/// Amplifying a map of input dimension d over it reproduces the Choi matrix,
/// which makes it the canonical complete-positivity witness.
inline ComplexMatrix entangled_projector(Index d) {
  ComplexVector omega = ComplexVector::Zero(d * d);
  for (Index i = 0; i < d; ++i) omega(i * d + i) = 1.0;
  return omega * omega.adjoint();
}

/// Test k-positivity. Exact mode decides complete positivity from the Choi
/// spectrum (k is ignored). Sampled mode draws PSD inputs G*G in M_k(M_m); a
/// clean sample run is evidence, not proof, and the verdict records that.
inline PositivityVerdict positivity_order_test(const PositiveMap& map, int k,
                                               PositivityVerdict::Mode mode, int trials,
                                               std::uint64_t seed, double tol = kHermitianTol,
                                               const std::vector<ComplexMatrix>& preloaded = {}) {
  if (k < 1) throw ConfigError("positivity_order_test: k must be >= 1");
  const Index m = map.input_dim();
  PositivityVerdict verdict;
  verdict.mode = mode;

  if (mode == PositivityVerdict::Mode::ExactComplete) {
    verdict.order_tested = static_cast<int>(m);
    const ChoiMatrix choi = to_choi(map);
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(choi.c),
                                                    Eigen::EigenvaluesOnly);
    const double lambda_min = es.eigenvalues()(0);
    verdict.holds = lambda_min >= -tol * (1.0 + operator_norm(choi.c));
    if (!verdict.holds) verdict.witness = {entangled_projector(m), lambda_min};
    return verdict;
  }

  verdict.order_tested = k;
  const AmplifiedMap amp = amplify(map, k);
  auto check_input = [&](const ComplexMatrix& w) -> bool {
    const ComplexMatrix image = amp.apply(w);
    const PsdVerdict psd = is_psd(hermitian_part(image), tol);
    if (!psd.psd) {
      verdict.holds = false;
      verdict.witness = {w, psd.min_eigenvalue};
      return false;
    }
    return true;
  };
  verdict.holds = true;
  for (const auto& w : preloaded)
    if (!check_input(w)) return verdict;
  for (int t = 0; t < trials; ++t) {
    SplitMix64 rng(derive_seed(seed, static_cast<std::uint64_t>(t)));
    if (!check_input(random_psd(rng, k * m))) return verdict;
  }
  return verdict;
}

// ---------------------------------------------------------------------------
// Instance constructors
// ---------------------------------------------------------------------------

inline ReductionMap reduction_map(Index d, bool normalize) {
  if (d < 2) throw ConfigError("reduction_map: dimension must be >= 2");
  return {d, normalize};
}

/// Random unital completely positive map with `rank` Kraus operators:
/// Gaussian G_i whitened by (sum G_i G_i^*)^{-1/2}, so unitality is exact up
/// to roundoff. Deterministic per seed.
inline KrausMap random_unital_cp(Index m, Index n, Index rank, std::uint64_t seed) {
  if (m < 1 || n < 1 || rank < 1)
    throw ConfigError("random_unital_cp: dims and rank must be >= 1");
  if (rank * m < n)
    throw ConfigError("random_unital_cp: infeasible, rank*m = " + std::to_string(rank * m) +
                      " < n = " + std::to_string(n));
  std::uint64_t attempt_seed = seed;
  for (int attempt = 0; attempt < 8; ++attempt) {
    SplitMix64 rng(attempt_seed);
    std::vector<ComplexMatrix> g;
    g.reserve(rank);
    ComplexMatrix s = ComplexMatrix::Zero(n, n);
    for (Index i = 0; i < rank; ++i) {
      g.push_back(random_complex_matrix(rng, n, m));
      s += g.back() * g.back().adjoint();
    }
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(s));
    if (es.eigenvalues()(0) > 1e-12 * es.eigenvalues()(n - 1)) {
      const ComplexMatrix whiten = es.eigenvectors() *
                                   es.eigenvalues().cwiseSqrt().cwiseInverse().asDiagonal() *
                                   es.eigenvectors().adjoint();
      KrausMap out{m, n, {}};
      for (auto& gi : g) out.kraus.push_back(whiten * gi);
      return out;
    }
    attempt_seed = derive_seed(attempt_seed, 0x5eedu);
  }
  throw DomainError("random_unital_cp: normalizer stayed singular after 8 attempts");
}

/// sum_j C_j^* X_j C_j for a family with sum_j C_j^* C_j = I.
inline ComplexMatrix conditional_expectation(const std::vector<ComplexMatrix>& cs,
                                             const std::vector<ComplexMatrix>& xs,
                                             double tol = kHermitianTol) {
  if (cs.empty() || cs.size() != xs.size())
    throw ShapeError("conditional_expectation: need equal-length nonempty lists");
  const Index d = cs.front().rows();
  ComplexMatrix norm = ComplexMatrix::Zero(d, d);
  for (const auto& c : cs) {
    if (c.rows() != d || c.cols() != d)
      throw ShapeError("conditional_expectation: all C_j must be " + std::to_string(d) + "x" +
                       std::to_string(d));
    norm += c.adjoint() * c;
  }
  const double defect = operator_norm(norm - ComplexMatrix::Identity(d, d));
  if (defect > tol)
    throw DomainError("conditional_expectation: sum C_j^* C_j != I (defect " +
                      std::to_string(defect) + ")");
  ComplexMatrix out = ComplexMatrix::Zero(d, d);
  for (std::size_t j = 0; j < cs.size(); ++j) {
    if (xs[j].rows() != d || xs[j].cols() != d)
      throw ShapeError("conditional_expectation: all X_j must be " + std::to_string(d) + "x" +
                       std::to_string(d));
    out += cs[j].adjoint() * xs[j] * cs[j];
  }
  return out;
}

/// Finite quadrature realization of averaging a field of operators against a
/// probability measure: sum_t mu_t A_t with sum_t mu_t = 1.
inline ComplexMatrix quadrature_field_expectation(const std::vector<ComplexMatrix>& fields,
                                                  const std::vector<double>& weights,
                                                  double tol = kHermitianTol) {
  if (fields.empty() || fields.size() != weights.size())
    throw ShapeError("quadrature_field_expectation: need equal-length nonempty lists");
  double total = 0.0;
  for (double w : weights) {
    if (w < 0.0) throw DomainError("quadrature_field_expectation: negative weight");
    total += w;
  }
  if (std::abs(total - 1.0) > tol)
    throw DomainError("quadrature_field_expectation: weights sum to " + std::to_string(total) +
                      ", expected 1");
  ComplexMatrix out = ComplexMatrix::Zero(fields.front().rows(), fields.front().cols());
  for (std::size_t t = 0; t < fields.size(); ++t) {
    if (fields[t].rows() != out.rows() || fields[t].cols() != out.cols())
      throw ShapeError("quadrature_field_expectation: field shapes differ");
    out += weights[t] * fields[t];
  }
  return out;
}

}  // namespace grusslab
