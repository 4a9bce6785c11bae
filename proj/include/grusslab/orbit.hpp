#pragma once

#include <Eigen/Eigenvalues>

#include <algorithm>
#include <array>
#include <cmath>
#include <numeric>
#include <vector>

#include "grusslab/linalg.hpp"
#include "grusslab/rng.hpp"
#include "grusslab/types.hpp"

namespace grusslab {

// ---------------------------------------------------------------------------
// Unitary-orbit geometry: distance to the scalars, orbit diameter, and balls
// of diameter [mI, MI].
//
// d_A = sup_U ||AU - UA|| = 2 inf_lambda ||A - lambda I||. The infimum is the
// primary estimator; unitary sampling is only ever a lower-bound check.
// ---------------------------------------------------------------------------

struct Disk {
  Complex center{0.0, 0.0};
  double radius = 0.0;
};

namespace detail {

inline bool disk_contains(const Disk& d, Complex p) {
  const double slack = 1e-12 * (1.0 + d.radius + std::abs(p));
  return std::abs(p - d.center) <= d.radius + slack;
}

inline Disk disk2(Complex a, Complex b) { return {0.5 * (a + b), 0.5 * std::abs(a - b)}; }

inline Disk circumdisk(Complex a, Complex b, Complex c) {
  const double d = 2.0 * (a.real() * (b.imag() - c.imag()) + b.real() * (c.imag() - a.imag()) +
                          c.real() * (a.imag() - b.imag()));
  const double span = std::max({std::abs(a - b), std::abs(b - c), std::abs(c - a)});
  if (std::abs(d) <= 1e-14 * span * span) {
    // Collinear: the farthest pair's diameter disk covers the third point.
    Disk best = disk2(a, b);
    if (std::abs(b - c) > 2.0 * best.radius) best = disk2(b, c);
    if (std::abs(c - a) > 2.0 * best.radius) best = disk2(c, a);
    return best;
  }
  const double na = std::norm(a), nb = std::norm(b), nc = std::norm(c);
  const double ux = (na * (b.imag() - c.imag()) + nb * (c.imag() - a.imag()) +
                     nc * (a.imag() - b.imag())) /
                    d;
  const double uy = (na * (c.real() - b.real()) + nb * (a.real() - c.real()) +
                     nc * (b.real() - a.real())) /
                    d;
  const Complex center(ux, uy);
  return {center, std::max({std::abs(a - center), std::abs(b - center), std::abs(c - center)})};
}

inline Disk trivial_disk(const std::vector<Complex>& support) {
  switch (support.size()) {
    case 0: return {Complex(0.0, 0.0), -1.0};  // contains nothing
    case 1: return {support[0], 0.0};
    case 2: return disk2(support[0], support[1]);
    default: return circumdisk(support[0], support[1], support[2]);
  }
}

inline Disk welzl(std::vector<Complex>& pts, std::size_t end, std::vector<Complex>& support) {
  if (end == 0 || support.size() == 3) return trivial_disk(support);
  const Complex p = pts[end - 1];
  Disk d = welzl(pts, end - 1, support);
  if (d.radius >= 0.0 && disk_contains(d, p)) return d;
  support.push_back(p);
  d = welzl(pts, end - 1, support);
  support.pop_back();
  return d;
}

}  // namespace detail

/// Smallest disk enclosing a finite point set (Welzl, randomized order).
inline Disk smallest_enclosing_disk(std::vector<Complex> points, std::uint64_t seed = 0x5eed) {
  if (points.empty()) throw ConfigError("smallest_enclosing_disk: empty point set");
  SplitMix64 rng(seed);
  for (std::size_t i = points.size(); i > 1; --i)
    std::swap(points[i - 1], points[rng.next() % i]);
  std::vector<Complex> support;
  return detail::welzl(points, points.size(), support);
}

enum class DiameterMethod { Auto, HermitianExact, NormalDisk, ConvexDescent };

inline const char* to_string(DiameterMethod m) {
  switch (m) {
    case DiameterMethod::Auto: return "auto";
    case DiameterMethod::HermitianExact: return "hermitian_exact";
    case DiameterMethod::NormalDisk: return "normal_disk";
    case DiameterMethod::ConvexDescent: return "convex_descent";
  }
  return "?";
}

struct DiameterOptions {
  DiameterMethod method = DiameterMethod::Auto;
  double class_tol = 1e-10;   // Hermitian/normal classification, relative
  double target_gap = 1e-8;   // descent stopping gap, relative to (1 + ||A||)
  std::uint64_t seed = 0x5eed;
  int max_evals = 20000;
};

struct DiameterResult {
  double d = 0.0;  // scalar_distance reports Delta; orbit_diameter reports 2*Delta
  Complex lambda_star{0.0, 0.0};
  DiameterMethod method = DiameterMethod::HermitianExact;
  int iterations = 0;
  double certificate_gap = 0.0;
};

namespace detail {

struct DescentState {
  Complex best;
  double value = 0.0;
  int evals = 0;
};

// Minimize the convex objective f(lambda) = ||A - lambda I|| over C ~ R^2:
// coarse shrinking grids seeded at tr(A)/dim, Nelder-Mead restarts, then a
// pattern-search polish. The reported gap is the final pattern resolution;
// convexity of f is the only global claim behind it.
inline DiameterResult descend_scalar_distance(const ComplexMatrix& a, const DiameterOptions& opts) {
  const Index dim = a.rows();
  const ComplexMatrix eye = ComplexMatrix::Identity(dim, dim);
  DescentState st;
  auto f = [&](Complex lambda) {
    ++st.evals;
    return operator_norm(a - lambda * eye);
  };

  const double scale = 1.0 + operator_norm(a);
  const double target = opts.target_gap * scale;

  st.best = a.trace() / static_cast<double>(dim);
  st.value = f(st.best);
  if (st.value == 0.0) return {0.0, st.best, DiameterMethod::ConvexDescent, st.evals, 0.0};

  // Grid stage. The minimizer lies within 2 f(c) of the seed c.
  double width = 2.0 * st.value;
  double grid_step = width;
  for (int round = 0; round < 8 && st.evals < opts.max_evals; ++round) {
    constexpr int kGrid = 4;  // (2k+1)^2 points
    const Complex center = st.best;
    grid_step = width / kGrid;
    bool on_boundary = false;
    for (int gx = -kGrid; gx <= kGrid; ++gx)
      for (int gy = -kGrid; gy <= kGrid; ++gy) {
        const Complex lam = center + Complex(gx * grid_step, gy * grid_step);
        const double val = f(lam);
        if (val < st.value) {
          st.value = val;
          st.best = lam;
          on_boundary = std::abs(gx) == kGrid || std::abs(gy) == kGrid;
        }
      }
    width = on_boundary ? 2.0 * width : 0.35 * width;
    if (width < 1e3 * target) break;
  }

  // Nelder-Mead restarts on a coarse-to-fine ladder of simplex sizes. The
  // objective is a max of cones: a single simplex can collapse into a valley
  // between active cones, so every restart re-expands from the scale ladder
  // instead of the (possibly degenerate) final simplex.
  SplitMix64 rng(opts.seed);
  double simplex_diam = std::max(width, 10.0 * target);
  for (int restart = 0; restart < 7 && st.evals < opts.max_evals; ++restart) {
    const double h = std::max(std::max(width, 1e-2 * scale) * std::pow(10.0, -restart),
                              10.0 * target);
    const double angle = 2.0 * std::numbers::pi_v<double> * rng.uniform01();
    std::array<Complex, 3> xs = {st.best, st.best + h * std::polar(1.0, angle),
                                 st.best + h * std::polar(1.0, angle + 2.0943951023931953)};
    std::array<double, 3> fs = {st.value, f(xs[1]), f(xs[2])};

    for (int it = 0; it < 300 && st.evals < opts.max_evals; ++it) {
      std::array<int, 3> ord = {0, 1, 2};
      std::sort(ord.begin(), ord.end(), [&](int p, int q) { return fs[p] < fs[q]; });
      const int lo = ord[0], mid = ord[1], hi = ord[2];
      simplex_diam = std::max({std::abs(xs[0] - xs[1]), std::abs(xs[1] - xs[2]),
                               std::abs(xs[2] - xs[0])});
      if (simplex_diam <= 0.05 * target) break;

      const Complex centroid = 0.5 * (xs[lo] + xs[mid]);
      const Complex refl = centroid + (centroid - xs[hi]);
      const double f_refl = f(refl);
      if (f_refl < fs[lo]) {
        const Complex expan = centroid + 2.0 * (centroid - xs[hi]);
        const double f_expan = f(expan);
        if (f_expan < f_refl) {
          xs[hi] = expan;
          fs[hi] = f_expan;
        } else {
          xs[hi] = refl;
          fs[hi] = f_refl;
        }
      } else if (f_refl < fs[mid]) {
        xs[hi] = refl;
        fs[hi] = f_refl;
      } else {
        const Complex contr = f_refl < fs[hi] ? centroid + 0.5 * (refl - centroid)
                                              : centroid + 0.5 * (xs[hi] - centroid);
        const double f_contr = f(contr);
        if (f_contr < std::min(f_refl, fs[hi])) {
          xs[hi] = contr;
          fs[hi] = f_contr;
        } else {
          for (int v = 0; v < 3; ++v) {
            if (v == lo) continue;
            xs[v] = xs[lo] + 0.5 * (xs[v] - xs[lo]);
            fs[v] = f(xs[v]);
          }
        }
      }
    }
    for (int v = 0; v < 3; ++v)
      if (fs[v] < st.value) {
        st.value = fs[v];
        st.best = xs[v];
      }
  }

  // Compass polish: rotating eight-direction pattern search with a shrinking
  // step. This walks out of collapsed-simplex stalls and settles conic
  // minima that defeat a lone simplex.
  double step = std::max({4.0 * simplex_diam, 1e-4 * scale, 20.0 * target});
  double compass_angle = rng.uniform01();
  while (step > 0.02 * target && st.evals < opts.max_evals) {
    bool improved = false;
    for (int dir = 0; dir < 8; ++dir) {
      const Complex cand =
          st.best + step * std::polar(1.0, 0.25 * std::numbers::pi_v<double> * (dir + compass_angle));
      const double val = f(cand);
      if (val < st.value) {
        st.value = val;
        st.best = cand;
        improved = true;
      }
    }
    if (improved) {
      step *= 1.5;
    } else {
      step *= 0.5;
      compass_angle += 0.37;
    }
  }

  // Final pattern resolution plus the stopping threshold; convexity of f is
  // the only global claim behind this gap.
  const double gap = step + 0.05 * target;
  return {st.value, st.best, DiameterMethod::ConvexDescent, st.evals, gap};
}

}  // namespace detail

/// Distance Delta(A, C I) = inf_lambda ||A - lambda I|| and its minimizer.
/// Hermitian inputs use the spectral midpoint, normal inputs the smallest
/// enclosing disk of the spectrum, everything else convex descent.
inline DiameterResult scalar_distance(const ComplexMatrix& a, const DiameterOptions& opts = {}) {
  require_finite(a, "scalar_distance");
  require_square(a, "scalar_distance");
  const double scale = 1.0 + operator_norm(a);

  const bool hermitian = operator_norm(a - a.adjoint()) <= opts.class_tol * scale;
  const bool normal =
      operator_norm(a * a.adjoint() - a.adjoint() * a) <= opts.class_tol * scale * scale;

  DiameterMethod method = opts.method;
  if (method == DiameterMethod::Auto) {
    method = hermitian ? DiameterMethod::HermitianExact
             : normal  ? DiameterMethod::NormalDisk
                       : DiameterMethod::ConvexDescent;
  } else if (method == DiameterMethod::HermitianExact && !hermitian) {
    throw DomainError("scalar_distance: hermitian method requested for a non-Hermitian matrix");
  } else if (method == DiameterMethod::NormalDisk && !normal) {
    throw DomainError("scalar_distance: disk method requested for a non-normal matrix");
  }

  switch (method) {
    case DiameterMethod::HermitianExact: {
      Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(a), Eigen::EigenvaluesOnly);
      const double lo = es.eigenvalues()(0), hi = es.eigenvalues()(a.rows() - 1);
      return {0.5 * (hi - lo), Complex(0.5 * (hi + lo), 0.0), method, 0, 0.0};
    }
    case DiameterMethod::NormalDisk: {
      Eigen::ComplexEigenSolver<ComplexMatrix> es(a, false);
      std::vector<Complex> pts(es.eigenvalues().data(),
                               es.eigenvalues().data() + es.eigenvalues().size());
      const Disk disk = smallest_enclosing_disk(std::move(pts), opts.seed);
      return {disk.radius, disk.center, method, 0, 0.0};
    }
    default:
      return detail::descend_scalar_distance(a, opts);
  }
}

/// Diameter of the unitary orbit, d_A = 2 Delta(A, C I).
inline DiameterResult orbit_diameter(const ComplexMatrix& a, const DiameterOptions& opts = {}) {
  DiameterResult res = scalar_distance(a, opts);
  res.d *= 2.0;
  res.certificate_gap *= 2.0;
  return res;
}

struct CommutatorBound {
  double value = 0.0;
  ComplexMatrix witness;  // unitary attaining the reported value
};

/// Sampled lower bound sup_U ||AU - UA||. For Hermitian inputs the unitary
/// swapping the extreme eigenvectors is tried as well; it attains d_A.
inline CommutatorBound commutator_lower_bound(const ComplexMatrix& a, int trials,
                                              std::uint64_t seed) {
  require_square(a, "commutator_lower_bound");
  const Index dim = a.rows();
  CommutatorBound best{0.0, ComplexMatrix::Identity(dim, dim)};
  auto consider = [&](const ComplexMatrix& u) {
    const double v = operator_norm(a * u - u * a);
    if (v > best.value) best = {v, u};
  };
  for (int t = 0; t < trials; ++t) consider(random_unitary(dim, derive_seed(seed, t)));

  const double scale = 1.0 + operator_norm(a);
  if (operator_norm(a - a.adjoint()) <= 1e-10 * scale && dim >= 2) {
    Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(hermitian_part(a));
    const ComplexVector lo = es.eigenvectors().col(0);
    const ComplexVector hi = es.eigenvectors().col(dim - 1);
    ComplexMatrix swap = ComplexMatrix::Identity(dim, dim);
    swap -= lo * lo.adjoint() + hi * hi.adjoint();
    swap += lo * hi.adjoint() + hi * lo.adjoint();
    consider(swap);
  }
  return best;
}

/// Ball of diameter [m, M]: all A with ||A - (m+M)/2 I|| <= |M - m|/2.
struct BallSpec {
  Complex m{0.0, 0.0};
  Complex M{0.0, 0.0};

  Complex center() const { return 0.5 * (m + M); }
  double radius() const { return 0.5 * std::abs(M - m); }
};

struct BallMembership {
  bool inside = false;
  double defect = 0.0;    // max(0, distance - radius)
  double distance = 0.0;  // ||A - center I||
  double radius = 0.0;
  double reproduct_min_eig = 0.0;  // min eig of Re((MI - A)^*(A - mI))
};

/// Membership in the ball of diameter [m, M], checked both as a norm bound
/// and through the equivalent PSD criterion Re((MI - A)^*(A - mI)) >= 0; the
/// identity min-eig = radius^2 - distance^2 ties the two together and is
/// verified on every call.
inline BallMembership ball_membership(const ComplexMatrix& a, const BallSpec& ball,
                                      double tol = 1e-8) {
  require_finite(a, "ball_membership");
  require_square(a, "ball_membership");
  const Index dim = a.rows();
  const ComplexMatrix eye = ComplexMatrix::Identity(dim, dim);

  BallMembership out;
  out.radius = ball.radius();
  out.distance = operator_norm(a - ball.center() * eye);
  out.defect = std::max(0.0, out.distance - out.radius);
  out.inside = out.distance <= out.radius + tol * (1.0 + out.radius);

  const ComplexMatrix upper = ball.M * eye - a;
  const ComplexMatrix lower = a - ball.m * eye;
  const ComplexMatrix re_product = hermitian_part(upper.adjoint() * lower);
  Eigen::SelfAdjointEigenSolver<ComplexMatrix> es(re_product, Eigen::EigenvaluesOnly);
  out.reproduct_min_eig = es.eigenvalues()(0);

  const double expected = out.radius * out.radius - out.distance * out.distance;
  const double agree_scale = 1.0 + out.radius * out.radius + out.distance * out.distance;
  if (std::abs(out.reproduct_min_eig - expected) > std::max(tol, 1e-8) * agree_scale)
    throw DomainError("ball_membership: norm and PSD criteria disagree beyond tolerance");
  return out;
}

/// Canonical feasible ball for A: endpoints lambda_star -+ Delta, so the
/// diameter equals d_A and membership holds with zero defect.
inline BallSpec tight_ball(const ComplexMatrix& a, const DiameterOptions& opts = {}) {
  const DiameterResult res = scalar_distance(a, opts);
  return {res.lambda_star - res.d, res.lambda_star + res.d};
}

}  // namespace grusslab
