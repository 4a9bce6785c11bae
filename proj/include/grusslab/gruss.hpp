#pragma once

#include <cstdint>
#include <cstdio>
#include <cstring>
#include <map>
#include <string>
#include <utility>
#include <vector>

#include "grusslab/cpmaps.hpp"
#include "grusslab/norms.hpp"
#include "grusslab/orbit.hpp"
#include "grusslab/stinespring.hpp"

namespace grusslab {

// ---------------------------------------------------------------------------
// Gruss-type inequality checks. Every check produces an InequalityReport
// with scale-free slack; a negative slack beyond tolerance on a check whose
// preconditions verified is a finding and is never clipped.
// ---------------------------------------------------------------------------

enum class CheckId {
  Kadison,
  VarianceBound,
  GrussNorm,
  GrussNormEta,
  GrussOperator,
  GrussHadamard,
  GrussDiscrete,
  ScalarClassical,
  ScalarBpr,
  GrussField,
  BlockGram,
  Stinespring,
  OrbitGeometry,
  NormContraction,
  NormSubmultiplicative,
  HornLogMajorization,
  KyFanDominance,
  CounterexampleBlockRaw,
  CounterexampleNormRaw,
  CounterexampleBlockUnital,
  CounterexampleNormUnital,
};

inline std::string to_string(CheckId id) {
  switch (id) {
    case CheckId::Kadison: return "kadison";
    case CheckId::VarianceBound: return "variance_bound";
    case CheckId::GrussNorm: return "gruss_norm";
    case CheckId::GrussNormEta: return "gruss_norm_eta";
    case CheckId::GrussOperator: return "gruss_operator";
    case CheckId::GrussHadamard: return "hadamard";
    case CheckId::GrussDiscrete: return "discrete";
    case CheckId::ScalarClassical: return "scalar_classical";
    case CheckId::ScalarBpr: return "scalar_bpr";
    case CheckId::GrussField: return "field";
    case CheckId::BlockGram: return "block_gram";
    case CheckId::Stinespring: return "stinespring";
    case CheckId::OrbitGeometry: return "orbit_geometry";
    case CheckId::NormContraction: return "norm_contraction";
    case CheckId::NormSubmultiplicative: return "norm_submultiplicative";
    case CheckId::HornLogMajorization: return "horn_log_majorization";
    case CheckId::KyFanDominance: return "kyfan_dominance";
    case CheckId::CounterexampleBlockRaw: return "counterexample_block_raw";
    case CheckId::CounterexampleNormRaw: return "counterexample_norm_raw";
    case CheckId::CounterexampleBlockUnital: return "counterexample_block_unital";
    case CheckId::CounterexampleNormUnital: return "counterexample_norm_unital";
  }
  return "?";
}

struct InequalityReport {
  CheckId check_id = CheckId::Kadison;
  std::string gauge;  // gauge token, or "operator-order" for PSD verdicts
  double lhs = 0.0;
  double rhs = 0.0;
  double slack = 0.0;  // rhs - lhs
  bool satisfied = false;
  double tol = 1e-8;
  std::uint64_t seed = 0;
  std::string digest;
  int m = 0, n = 0, k = 0, rank = 0;
  bool exploratory = false;  // recorded, never counted as a violation
  std::map<std::string, double> details;
};

namespace detail {

struct Digest {
  std::uint64_t h = 1469598103934665603ull;

  void feed_byte(unsigned char b) {
    h ^= b;
    h *= 1099511628211ull;
  }
  void feed(std::uint64_t v) {
    for (int i = 0; i < 8; ++i) feed_byte(static_cast<unsigned char>(v >> (8 * i)));
  }
  void feed(double v) {
    std::uint64_t bits;
    static_assert(sizeof(bits) == sizeof(v));
    std::memcpy(&bits, &v, sizeof(bits));
    feed(bits);
  }
  void feed(const ComplexMatrix& a) {
    feed(static_cast<std::uint64_t>(a.rows()));
    feed(static_cast<std::uint64_t>(a.cols()));
    for (Index i = 0; i < a.rows(); ++i)
      for (Index j = 0; j < a.cols(); ++j) {
        feed(a(i, j).real());
        feed(a(i, j).imag());
      }
  }
  void feed(const std::string& s) {
    for (unsigned char c : s) feed_byte(c);
    feed_byte(0);
  }

  std::string hex() const {
    char buf[17];
    std::snprintf(buf, sizeof(buf), "%016llx", static_cast<unsigned long long>(h));
    return buf;
  }
};

inline void finalize(InequalityReport& r) {
  r.slack = r.rhs - r.lhs;
  r.satisfied = r.slack >= -r.tol * (1.0 + r.rhs);
}

// lhs = violation magnitude, rhs = 0: satisfied exactly when the smallest
// eigenvalue clears -tol.
inline InequalityReport psd_style_report(CheckId id, double lambda_min, double tol) {
  InequalityReport r;
  r.check_id = id;
  r.gauge = "operator-order";
  r.lhs = std::max(0.0, -lambda_min);
  r.rhs = 0.0;
  r.tol = tol;
  r.details["lambda_min"] = lambda_min;
  finalize(r);
  return r;
}

inline void require_unital_cp(const PositiveMap& map, const char* what,
                              double tol = kHermitianTol) {
  const double defect = unitality_defect(map);
  if (defect > tol)
    throw DomainError(std::string(what) + ": map is not unital (defect " +
                      std::to_string(defect) + ")");
  if (map.get_if<KrausMap>() == nullptr) {  // Kraus form is CP structurally
    const ChoiMatrix choi = to_choi(map);
    const PsdVerdict psd = is_psd(hermitian_part(choi.c), tol);
    if (!psd.psd)
      throw DomainError(std::string(what) + ": map is not completely positive (Choi min eig " +
                        std::to_string(psd.min_eigenvalue) + ")");
  }
}

}  // namespace detail

struct KadisonDefect {
  ComplexMatrix defect;  // Phi(A*A) - Phi(A*) Phi(A)
  PsdVerdict verdict;
};

/// Kadison inequality residual for a unital CP map.
inline KadisonDefect kadison_defect(const PositiveMap& map, const ComplexMatrix& a,
                                    double tol = kHermitianTol) {
  detail::require_unital_cp(map, "kadison_defect", tol);
  const ComplexMatrix fa = map.apply(a);
  const ComplexMatrix fastar = map.apply(a.adjoint());
  ComplexMatrix defect = map.apply(a.adjoint() * a) - fastar * fa;
  const PsdVerdict verdict = is_psd(hermitian_part(defect), tol);
  return {std::move(defect), verdict};
}

/// 2n x 2n second-moment block over the pair (A, B). Its positivity is what
/// drives the norm bounds; its (1,1) entry is the Kadison residual. No
/// positivity preconditions: the counterexample needs it on a non-CP map.
struct BlockGram {
  ComplexMatrix block;
  PsdVerdict verdict;
};

inline BlockGram block_gram(const PositiveMap& map, const ComplexMatrix& a,
                            const ComplexMatrix& b, double tol = kHermitianTol) {
  const Index m = map.input_dim(), n = map.output_dim();
  if (a.rows() != m || a.cols() != m || b.rows() != m || b.cols() != m)
    throw ShapeError("block_gram: A and B must be " + std::to_string(m) + "x" +
                     std::to_string(m));
  const ComplexMatrix fa = map.apply(a), fb = map.apply(b);
  const ComplexMatrix fas = map.apply(a.adjoint()), fbs = map.apply(b.adjoint());
  ComplexMatrix block(2 * n, 2 * n);
  block.topLeftCorner(n, n) = map.apply(a.adjoint() * a) - fas * fa;
  block.topRightCorner(n, n) = map.apply(a.adjoint() * b) - fas * fb;
  block.bottomLeftCorner(n, n) = map.apply(b.adjoint() * a) - fbs * fa;
  block.bottomRightCorner(n, n) = map.apply(b.adjoint() * b) - fbs * fb;
  const PsdVerdict verdict = is_psd(hermitian_part(block), tol);
  return {std::move(block), verdict};
}

/// |||Phi(A*A) - Phi(A*)Phi(A)|||^(1/2) <= (1/2) sqrt(|||I_{kn}|||) d_A for a
/// unital CP map out of an algebra of dimension k (k defaults to m^2, the
/// dimension of M_m; it is a parameter so subalgebra experiments can lower
/// it).
inline InequalityReport check_variance_bound(const PositiveMap& map, const ComplexMatrix& a,
                                             const GaugeSpec& gauge, Index k = 0,
                                             double tol = 1e-8,
                                             const DiameterOptions& orbit_opts = {}) {
  detail::require_unital_cp(map, "check_variance_bound");
  const Index m = map.input_dim(), n = map.output_dim();
  if (k <= 0) k = m * m;
  const KadisonDefect kd = kadison_defect(map, a);
  const DiameterResult da = orbit_diameter(a, orbit_opts);

  InequalityReport r;
  r.check_id = CheckId::VarianceBound;
  r.gauge = to_string(gauge);
  r.m = static_cast<int>(m);
  r.n = static_cast<int>(n);
  r.k = static_cast<int>(k);
  r.tol = tol;
  r.lhs = std::sqrt(gauge_norm(gauge, kd.defect));
  r.rhs = 0.5 * std::sqrt(gauge_identity_value(gauge, k * n)) * da.d;
  r.details["d_A"] = da.d;
  r.details["defect_min_eig"] = kd.verdict.min_eigenvalue;
  detail::Digest dg;
  dg.feed(std::string("variance_bound"));
  dg.feed(to_choi(map).c);
  dg.feed(a);
  r.digest = dg.hex();
  detail::finalize(r);
  // Verdict on the squared scale: when the defect is exactly zero its
  // computed norm is eps-level roundoff, and the square root would inflate
  // that to sqrt(eps) and flip the verdict against a vanishing rhs.
  r.satisfied = r.lhs * r.lhs <= r.rhs * r.rhs + r.tol * (1.0 + r.rhs * r.rhs);
  return r;
}

/// |||Phi(AB) - Phi(A)Phi(B)||| <= (1/4) |||I_n||| |||I_{kn}||| d_A d_B.
/// With eta_mode the complete-positivity precondition is replaced by sampled
/// eta-positivity evidence (evidence, not proof; the report records that).
/// Checks with eta below 12 are exploratory and assert nothing.
inline InequalityReport check_gruss_norm(const PositiveMap& map, const ComplexMatrix& a,
                                         const ComplexMatrix& b, const GaugeSpec& gauge,
                                         bool eta_mode = false, int eta = 12, Index k = 0,
                                         double tol = 1e-8, std::uint64_t seed = 0x5eed,
                                         const DiameterOptions& orbit_opts = {}) {
  const Index m = map.input_dim(), n = map.output_dim();
  if (k <= 0) k = m * m;
  if (!eta_mode) {
    detail::require_unital_cp(map, "check_gruss_norm");
  } else {
    const double defect = unitality_defect(map);
    if (defect > kHermitianTol)
      throw DomainError("check_gruss_norm: map is not unital (defect " + std::to_string(defect) +
                        ")");
    const PositivityVerdict ev = positivity_order_test(
        map, eta, PositivityVerdict::Mode::Sampled, 4, derive_seed(seed, 0xabcd));
    if (!ev.holds)
      throw DomainError("check_gruss_norm: sampled " + std::to_string(eta) +
                        "-positivity evidence failed (witness min eig " +
                        std::to_string(ev.witness->min_eigenvalue) + ")");
  }

  const ComplexMatrix defect = map.apply(a * b) - map.apply(a) * map.apply(b);
  const DiameterResult da = orbit_diameter(a, orbit_opts);
  const DiameterResult db = orbit_diameter(b, orbit_opts);

  InequalityReport r;
  r.check_id = eta_mode ? CheckId::GrussNormEta : CheckId::GrussNorm;
  r.gauge = to_string(gauge);
  r.m = static_cast<int>(m);
  r.n = static_cast<int>(n);
  r.k = static_cast<int>(k);
  r.tol = tol;
  r.seed = seed;
  r.exploratory = eta_mode && eta < 12;
  r.lhs = gauge_norm(gauge, defect);
  r.rhs = 0.25 * gauge_identity_value(gauge, n) * gauge_identity_value(gauge, k * n) * da.d * db.d;
  r.details["d_A"] = da.d;
  r.details["d_B"] = db.d;
  if (eta_mode) {
    r.details["eta"] = eta;
    r.details["positivity_mode_sampled"] = 1.0;
  }
  detail::Digest dg;
  dg.feed(std::string("gruss_norm"));
  dg.feed(to_choi(map).c);
  dg.feed(a);
  dg.feed(b);
  r.digest = dg.hex();
  detail::finalize(r);
  return r;
}

namespace detail {

// Shared core of the operator-order checks: verdict on
// bound * I - |defect| >= 0, with the scalar norm comparison recorded as a
// cross-check. The two agree because |defect| has the singular values of
// defect.
inline InequalityReport operator_order_report(CheckId id, const ComplexMatrix& defect,
                                              double bound, double tol) {
  InequalityReport r;
  r.check_id = id;
  r.gauge = "operator-order";
  r.tol = tol;
  r.lhs = operator_norm(defect);
  r.rhs = bound;
  const Index n = defect.rows();
  const ComplexMatrix abs_defect = psd_sqrt((defect.adjoint() * defect).eval());
  const ComplexMatrix residual = bound * ComplexMatrix::Identity(n, n) - abs_defect;
  const PsdVerdict psd = is_psd(residual, tol);
  finalize(r);
  r.satisfied = psd.psd;  // operator-order verdict is primary
  r.details["residual_min_eig"] = psd.min_eigenvalue;
  r.details["order_agrees_norm"] =
      (psd.psd == (r.slack >= -tol * (1.0 + r.rhs))) ? 1.0 : 0.0;
  return r;
}

}  // namespace detail

/// Operator-order bound |Phi(AB) - Phi(A)Phi(B)| <= (1/4)|M1-m1||M2-m2| I for
/// a unital CP map and inputs inside the given balls.
inline InequalityReport check_gruss_operator(const PositiveMap& map, const ComplexMatrix& a,
                                             const ComplexMatrix& b, const BallSpec& ball_a,
                                             const BallSpec& ball_b, double tol = 1e-8) {
  detail::require_unital_cp(map, "check_gruss_operator");
  const Index m = map.input_dim(), n = map.output_dim();
  const BallMembership ma = ball_membership(a, ball_a, tol);
  if (!ma.inside)
    throw DomainError("check_gruss_operator: A is outside its ball (defect " +
                      std::to_string(ma.defect) + ")");
  const BallMembership mb = ball_membership(b, ball_b, tol);
  if (!mb.inside)
    throw DomainError("check_gruss_operator: B is outside its ball (defect " +
                      std::to_string(mb.defect) + ")");

  const ComplexMatrix defect = map.apply(a * b) - map.apply(a) * map.apply(b);
  const double bound = 0.25 * std::abs(ball_a.M - ball_a.m) * std::abs(ball_b.M - ball_b.m);
  InequalityReport r = detail::operator_order_report(CheckId::GrussOperator, defect, bound, tol);
  r.m = static_cast<int>(m);
  r.n = static_cast<int>(n);
  r.details["ball_a_re_m"] = ball_a.m.real();
  r.details["ball_a_im_m"] = ball_a.m.imag();
  r.details["ball_a_re_M"] = ball_a.M.real();
  r.details["ball_a_im_M"] = ball_a.M.imag();
  r.details["ball_b_re_m"] = ball_b.m.real();
  r.details["ball_b_im_m"] = ball_b.m.imag();
  r.details["ball_b_re_M"] = ball_b.M.real();
  r.details["ball_b_im_M"] = ball_b.M.imag();
  detail::Digest dg;
  dg.feed(std::string("gruss_operator"));
  dg.feed(to_choi(map).c);
  dg.feed(a);
  dg.feed(b);
  r.digest = dg.hex();
  return r;
}

/// Selective isometry V: e_i -> e_i (x) e_i, the compression implementing the
/// Hadamard product: V^*(X (x) Y)V = X o Y entrywise exactly.
inline ComplexMatrix selective_isometry(Index n) {
  ComplexMatrix v = ComplexMatrix::Zero(n * n, n);
  for (Index i = 0; i < n; ++i) v(i * n + i, i) = 1.0;
  return v;
}

/// Hadamard-product bound |(A1B1)o(A2B2) - (A1oA2)(B1oB2)| <=
/// (1/4)|M1-m1||M2-m2| I, with the tensor inputs inside the given balls.
inline InequalityReport check_hadamard_gruss(const ComplexMatrix& a1, const ComplexMatrix& a2,
                                             const ComplexMatrix& b1, const ComplexMatrix& b2,
                                             const BallSpec& ball_1, const BallSpec& ball_2,
                                             double tol = 1e-8) {
  const Index n = a1.rows();
  for (const auto* x : {&a1, &a2, &b1, &b2})
    if (x->rows() != n || x->cols() != n)
      throw ShapeError("check_hadamard_gruss: all four inputs must be n x n");

  const ComplexMatrix v = selective_isometry(n);
  // Route through the isometry and require the compression identity to be
  // bit-exact before trusting the shortcut.
  const ComplexMatrix ta = kron(a1, a2), tb = kron(b1, b2);
  const ComplexMatrix via_isometry = v.adjoint() * ta * v;
  if ((via_isometry - hadamard(a1, a2)).cwiseAbs().maxCoeff() != 0.0)
    throw DomainError("check_hadamard_gruss: selective isometry identity failed");

  const BallMembership m1 = ball_membership(ta, ball_1, tol);
  if (!m1.inside)
    throw DomainError("check_hadamard_gruss: A1 (x) A2 is outside its ball (defect " +
                      std::to_string(m1.defect) + ")");
  const BallMembership m2 = ball_membership(tb, ball_2, tol);
  if (!m2.inside)
    throw DomainError("check_hadamard_gruss: B1 (x) B2 is outside its ball (defect " +
                      std::to_string(m2.defect) + ")");

  const ComplexMatrix defect = hadamard((a1 * b1).eval(), (a2 * b2).eval()) -
                               hadamard(a1, a2) * hadamard(b1, b2);
  const double bound = 0.25 * std::abs(ball_1.M - ball_1.m) * std::abs(ball_2.M - ball_2.m);
  InequalityReport r = detail::operator_order_report(CheckId::GrussHadamard, defect, bound, tol);
  r.n = static_cast<int>(n);
  detail::Digest dg;
  dg.feed(std::string("hadamard"));
  dg.feed(a1);
  dg.feed(a2);
  dg.feed(b1);
  dg.feed(b2);
  r.digest = dg.hex();
  return r;
}

/// Discrete conditional-expectation bound with sum_j C_j^* C_j = I and
/// Hermitian A_j, B_j inside [m1, M1] and [m2, M2].
inline InequalityReport check_discrete_gruss(const std::vector<ComplexMatrix>& cs,
                                             const std::vector<ComplexMatrix>& as,
                                             const std::vector<ComplexMatrix>& bs, double m1,
                                             double big_m1, double m2, double big_m2,
                                             double tol = 1e-8) {
  if (cs.size() != as.size() || cs.size() != bs.size() || cs.empty())
    throw ShapeError("check_discrete_gruss: lists must be nonempty and of equal length");
  auto check_bounds = [&](const std::vector<ComplexMatrix>& xs, double lo, double hi,
                          const char* name) {
    for (std::size_t j = 0; j < xs.size(); ++j) {
      const double scale = 1.0 + operator_norm(xs[j]);
      if (operator_norm(xs[j] - xs[j].adjoint()) > tol * scale)
        throw DomainError(std::string("check_discrete_gruss: ") + name + "[" +
                          std::to_string(j) + "] is not Hermitian");
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(xs[j]),
                                                      Eigen::EigenvaluesOnly);
      if (es.eigenvalues()(0) < lo - tol * scale ||
          es.eigenvalues()(es.eigenvalues().size() - 1) > hi + tol * scale)
        throw DomainError(std::string("check_discrete_gruss: ") + name + "[" +
                          std::to_string(j) + "] spectrum outside [" + std::to_string(lo) +
                          ", " + std::to_string(hi) + "]");
    }
  };
  check_bounds(as, m1, big_m1, "A");
  check_bounds(bs, m2, big_m2, "B");

  std::vector<ComplexMatrix> products(cs.size());
  for (std::size_t j = 0; j < cs.size(); ++j) products[j] = as[j] * bs[j];
  const ComplexMatrix mean_ab = conditional_expectation(cs, products, tol);
  const ComplexMatrix mean_a = conditional_expectation(cs, as, tol);
  const ComplexMatrix mean_b = conditional_expectation(cs, bs, tol);
  const ComplexMatrix defect = mean_ab - mean_a * mean_b;
  const double bound = 0.25 * (big_m1 - m1) * (big_m2 - m2);
  InequalityReport r = detail::operator_order_report(CheckId::GrussDiscrete, defect, bound, tol);
  r.n = static_cast<int>(cs.front().rows());
  r.details["terms"] = static_cast<double>(cs.size());
  detail::Digest dg;
  dg.feed(std::string("discrete"));
  for (const auto& c : cs) dg.feed(c);
  for (const auto& a : as) dg.feed(a);
  for (const auto& b : bs) dg.feed(b);
  r.digest = dg.hex();
  return r;
}

/// Classical scalar bound |mean(ab) - mean(a)mean(b)| <= (1/4)(M1-m1)(M2-m2)
/// plus the floor(n/2)-refined constant; the refined bound never exceeds the
/// classical one.
inline std::pair<InequalityReport, InequalityReport> check_scalar_gruss(
    const std::vector<double>& a, const std::vector<double>& b, double m1, double big_m1,
    double m2, double big_m2, double tol = 1e-8) {
  if (a.size() != b.size() || a.empty())
    throw ShapeError("check_scalar_gruss: sequences must be nonempty and of equal length");
  const auto n = a.size();
  for (std::size_t j = 0; j < n; ++j) {
    if (a[j] < m1 - tol || a[j] > big_m1 + tol)
      throw DomainError("check_scalar_gruss: a[" + std::to_string(j) + "] outside bounds");
    if (b[j] < m2 - tol || b[j] > big_m2 + tol)
      throw DomainError("check_scalar_gruss: b[" + std::to_string(j) + "] outside bounds");
  }
  double mean_ab = 0.0, mean_a = 0.0, mean_b = 0.0;
  for (std::size_t j = 0; j < n; ++j) {
    mean_ab += a[j] * b[j];
    mean_a += a[j];
    mean_b += b[j];
  }
  const double dn = static_cast<double>(n);
  mean_ab /= dn;
  mean_a /= dn;
  mean_b /= dn;
  const double lhs = std::abs(mean_ab - mean_a * mean_b);

  detail::Digest dg;
  dg.feed(std::string("scalar"));
  for (double v : a) dg.feed(v);
  for (double v : b) dg.feed(v);

  InequalityReport classical;
  classical.check_id = CheckId::ScalarClassical;
  classical.gauge = "scalar";
  classical.tol = tol;
  classical.lhs = lhs;
  classical.rhs = 0.25 * (big_m1 - m1) * (big_m2 - m2);
  classical.digest = dg.hex();
  detail::finalize(classical);

  const double half = static_cast<double>(n / 2);  // floor(n/2)
  InequalityReport refined = classical;
  refined.check_id = CheckId::ScalarBpr;
  refined.rhs = (half / dn) * (1.0 - half / dn) * (big_m1 - m1) * (big_m2 - m2);
  detail::finalize(refined);
  return {classical, refined};
}

/// Quadrature version of the operator-order bound for fields (A_t), (B_t)
/// whose members all lie in the respective balls (the sup-norm membership
/// convention).
inline InequalityReport check_field_gruss(const std::vector<ComplexMatrix>& fields_a,
                                          const std::vector<ComplexMatrix>& fields_b,
                                          const std::vector<double>& weights,
                                          const BallSpec& ball_1, const BallSpec& ball_2,
                                          double tol = 1e-8) {
  if (fields_a.size() != fields_b.size() || fields_a.size() != weights.size() ||
      fields_a.empty())
    throw ShapeError("check_field_gruss: fields and weights must have equal nonzero length");
  for (std::size_t t = 0; t < fields_a.size(); ++t) {
    if (!ball_membership(fields_a[t], ball_1, tol).inside)
      throw DomainError("check_field_gruss: A field at t=" + std::to_string(t) +
                        " is outside its ball");
    if (!ball_membership(fields_b[t], ball_2, tol).inside)
      throw DomainError("check_field_gruss: B field at t=" + std::to_string(t) +
                        " is outside its ball");
  }
  std::vector<ComplexMatrix> products(fields_a.size());
  for (std::size_t t = 0; t < fields_a.size(); ++t) products[t] = fields_a[t] * fields_b[t];
  const ComplexMatrix mean_ab = quadrature_field_expectation(products, weights, tol);
  const ComplexMatrix mean_a = quadrature_field_expectation(fields_a, weights, tol);
  const ComplexMatrix mean_b = quadrature_field_expectation(fields_b, weights, tol);
  const ComplexMatrix defect = mean_ab - mean_a * mean_b;
  const double bound = 0.25 * std::abs(ball_1.M - ball_1.m) * std::abs(ball_2.M - ball_2.m);
  InequalityReport r = detail::operator_order_report(CheckId::GrussField, defect, bound, tol);
  r.n = static_cast<int>(fields_a.front().rows());
  r.details["points"] = static_cast<double>(fields_a.size());
  detail::Digest dg;
  dg.feed(std::string("field"));
  for (const auto& f : fields_a) dg.feed(f);
  for (const auto& f : fields_b) dg.feed(f);
  for (double w : weights) dg.feed(w);
  r.digest = dg.hex();
  return r;
}

// ---------------------------------------------------------------------------
// The 2-positive counterexample: Phi(X) = 2 tr(X) I_3 - X with a fixed
// Hermitian pair (A, B). The raw map breaks both the second-moment block
// positivity and the operator-norm product bound; the unitalized variant is
// recorded alongside without any asserted verdict.
// ---------------------------------------------------------------------------

struct CounterexampleBundle {
  ComplexMatrix a;
  ComplexMatrix b;
  ReductionMap raw;
  ReductionMap unital;
  std::vector<InequalityReport> reports;
};

inline CounterexampleBundle choi_counterexample() {
  CounterexampleBundle bundle;
  bundle.a = ComplexMatrix::Zero(3, 3);
  bundle.a(0, 0) = 1.0;
  bundle.a(1, 2) = 1.0;
  bundle.a(2, 1) = 1.0;
  bundle.b = ComplexMatrix::Zero(3, 3);
  bundle.b(0, 2) = 1.0;
  bundle.b(2, 0) = 1.0;
  bundle.b(2, 2) = 1.0;
  bundle.raw = reduction_map(3, false);
  bundle.unital = reduction_map(3, true);

  const DiameterResult da = orbit_diameter(bundle.a);
  const DiameterResult db = orbit_diameter(bundle.b);
  const GaugeSpec op = GaugeSpec::operator_norm();

  auto make_pair_reports = [&](const ReductionMap& map, CheckId block_id, CheckId norm_id,
                               bool exploratory) {
    const PositiveMap handle(map);
    const BlockGram bg = block_gram(handle, bundle.a, bundle.b);
    InequalityReport block = detail::psd_style_report(block_id, bg.verdict.min_eigenvalue, 1e-9);
    block.m = block.n = 3;
    block.exploratory = exploratory;

    const ComplexMatrix defect = handle.apply(bundle.a * bundle.b) -
                                 handle.apply(bundle.a) * handle.apply(bundle.b);
    InequalityReport norm;
    norm.check_id = norm_id;
    norm.gauge = to_string(op);
    norm.m = norm.n = 3;
    norm.k = 9;
    norm.tol = 1e-9;
    norm.exploratory = exploratory;
    norm.lhs = gauge_norm(op, defect);
    norm.rhs = 0.25 * gauge_identity_value(op, 3) * gauge_identity_value(op, 27) * da.d * db.d;
    norm.details["d_A"] = da.d;
    norm.details["d_B"] = db.d;
    norm.details["block_min_eig"] = bg.verdict.min_eigenvalue;
    detail::finalize(norm);

    detail::Digest dg;
    dg.feed(std::string("counterexample"));
    dg.feed(to_choi(handle).c);
    dg.feed(bundle.a);
    dg.feed(bundle.b);
    block.digest = dg.hex();
    norm.digest = dg.hex();
    bundle.reports.push_back(std::move(block));
    bundle.reports.push_back(std::move(norm));
  };

  make_pair_reports(bundle.raw, CheckId::CounterexampleBlockRaw, CheckId::CounterexampleNormRaw,
                    false);
  make_pair_reports(bundle.unital, CheckId::CounterexampleBlockUnital,
                    CheckId::CounterexampleNormUnital, true);
  return bundle;
}

}  // namespace grusslab
