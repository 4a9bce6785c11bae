#pragma once

#include <atomic>
#include <cstdlib>
#include <string>
#include <thread>
#include <vector>

#include "grusslab/gruss.hpp"

namespace grusslab {

// ---------------------------------------------------------------------------
// Seeded sweeps over random instances. Trial t is a pure function of
// derive_seed(master, t), and aggregation runs in trial order, so results do
// not depend on the worker count or schedule.
// ---------------------------------------------------------------------------

struct CheckConfig {
  int m = 0;           // 0 cycles over {2, 3, 4} per trial
  int n = 0;           // 0 cycles over {2, 3, 4}
  int kraus_rank = 0;  // 0 cycles over {1, 2, m*n}
  int trials = 100;
  std::uint64_t seed = 1;
  std::vector<GaugeSpec> gauges;  // empty = default set
  double tol = 1e-8;
  std::vector<CheckId> checks;
  int eta = 12;
};

inline std::vector<GaugeSpec> default_gauges() {
  return {GaugeSpec::operator_norm(), GaugeSpec::ky_fan(2), GaugeSpec::schatten(1),
          GaugeSpec::schatten(2), GaugeSpec::schatten(3)};
}

inline std::vector<CheckId> gruss_suite() {
  return {CheckId::VarianceBound, CheckId::GrussNorm,  CheckId::GrussOperator,
          CheckId::GrussHadamard, CheckId::GrussDiscrete, CheckId::ScalarClassical,
          CheckId::ScalarBpr,     CheckId::GrussField};
}

inline std::vector<CheckId> core_suite() {
  return {CheckId::Kadison,          CheckId::BlockGram,
          CheckId::Stinespring,      CheckId::OrbitGeometry,
          CheckId::NormContraction,  CheckId::NormSubmultiplicative,
          CheckId::HornLogMajorization, CheckId::KyFanDominance};
}

inline std::vector<CheckId> suite_checks(const std::string& name) {
  if (name == "gruss") return gruss_suite();
  if (name == "core") return core_suite();
  if (name == "all") {
    std::vector<CheckId> all = core_suite();
    for (CheckId id : gruss_suite()) all.push_back(id);
    return all;
  }
  throw ConfigError("unknown suite '" + name + "' (expected all, core or gruss)");
}

struct SweepWitness {
  std::string digest;
  CheckId check_id = CheckId::Kadison;
  std::uint64_t seed = 0;
  std::vector<std::pair<std::string, ComplexMatrix>> inputs;
};

struct TrialOutput {
  std::vector<InequalityReport> reports;
  std::vector<SweepWitness> witnesses;
  std::vector<std::string> errors;
};

struct SweepAggregate {
  int trials = 0;
  int violations = 0;
  int errors = 0;
  std::map<std::string, double> min_slack_by_check;  // "check_id/gauge"
  std::map<std::string, int> violations_by_check;
  std::vector<InequalityReport> violating_reports;
  std::vector<SweepWitness> witnesses;
  std::vector<std::string> error_messages;
};

namespace detail {

inline int cycled(int configured, int which) {
  static constexpr int kDims[3] = {2, 3, 4};
  return configured > 0 ? configured : kDims[which % 3];
}

struct TrialDims {
  int m, n, rank;
};

inline TrialDims trial_dims(const CheckConfig& cfg, int trial) {
  TrialDims d{};
  d.m = cycled(cfg.m, trial);
  d.n = cycled(cfg.n, trial / 3);
  if (cfg.kraus_rank > 0) {
    d.rank = cfg.kraus_rank;
  } else {
    const int choice = (trial / 9) % 3;
    d.rank = choice == 0 ? 1 : choice == 1 ? 2 : d.m * d.n;
  }
  // rank * m >= n is required for a unital map to exist
  d.rank = std::max(d.rank, (d.n + d.m - 1) / d.m);
  return d;
}

inline ComplexMatrix seeded_matrix(std::uint64_t seed, Index rows, Index cols) {
  SplitMix64 rng(seed);
  return random_complex_matrix(rng, rows, cols);
}

inline ComplexMatrix seeded_hermitian(std::uint64_t seed, Index dim) {
  SplitMix64 rng(seed);
  return random_hermitian(rng, dim);
}

}  // namespace detail

/// One sweep trial: run every configured check on a fresh seeded instance.
/// Check errors land in `errors`, never escape.
inline TrialOutput run_trial(const CheckConfig& cfg, int trial) {
  TrialOutput out;
  const std::uint64_t trial_seed = derive_seed(cfg.seed, static_cast<std::uint64_t>(trial));
  const detail::TrialDims dims = detail::trial_dims(cfg, trial);
  const std::vector<GaugeSpec> gauges = cfg.gauges.empty() ? default_gauges() : cfg.gauges;

  auto record = [&](InequalityReport r,
                    const std::vector<std::pair<std::string, ComplexMatrix>>& inputs) {
    r.seed = trial_seed;
    if (r.rank == 0) r.rank = dims.rank;
    if (!r.satisfied && !r.exploratory)
      out.witnesses.push_back({r.digest, r.check_id, trial_seed, inputs});
    out.reports.push_back(std::move(r));
  };

  for (CheckId id : cfg.checks) {
    const std::uint64_t cs = derive_seed(trial_seed, 0x100u + static_cast<std::uint64_t>(id));
    try {
      switch (id) {
        case CheckId::Kadison: {
          const KrausMap map =
              random_unital_cp(dims.m, dims.n, dims.rank, derive_seed(cs, 1));
          const ComplexMatrix a = detail::seeded_matrix(derive_seed(cs, 2), dims.m, dims.m);
          const KadisonDefect kd = kadison_defect(PositiveMap(map), a);
          const double scale = 1.0 + operator_norm(a);
          InequalityReport r = detail::psd_style_report(CheckId::Kadison,
                                                        kd.verdict.min_eigenvalue,
                                                        1e-10 * scale * scale);
          r.m = dims.m;
          r.n = dims.n;
          detail::Digest dg;
          dg.feed(std::string("kadison"));
          dg.feed(kraus_to_choi(map).c);
          dg.feed(a);
          r.digest = dg.hex();
          record(std::move(r), {{"A", a}, {"choi", kraus_to_choi(map).c}});
          break;
        }
        case CheckId::BlockGram: {
          const KrausMap map =
              random_unital_cp(dims.m, dims.n, dims.rank, derive_seed(cs, 1));
          const ComplexMatrix a = detail::seeded_matrix(derive_seed(cs, 2), dims.m, dims.m);
          const ComplexMatrix b = detail::seeded_matrix(derive_seed(cs, 3), dims.m, dims.m);
          const BlockGram bg = block_gram(PositiveMap(map), a, b);
          const double scale = 1.0 + std::max(operator_norm(a), operator_norm(b));
          InequalityReport r = detail::psd_style_report(CheckId::BlockGram,
                                                        bg.verdict.min_eigenvalue,
                                                        1e-10 * scale * scale);
          r.m = dims.m;
          r.n = dims.n;
          detail::Digest dg;
          dg.feed(std::string("block_gram"));
          dg.feed(kraus_to_choi(map).c);
          dg.feed(a);
          dg.feed(b);
          r.digest = dg.hex();
          record(std::move(r), {{"A", a}, {"B", b}, {"choi", kraus_to_choi(map).c}});
          break;
        }
        case CheckId::VarianceBound: {
          const KrausMap map =
              random_unital_cp(dims.m, dims.n, dims.rank, derive_seed(cs, 1));
          const ComplexMatrix a = detail::seeded_matrix(derive_seed(cs, 2), dims.m, dims.m);
          for (const GaugeSpec& g : gauges) {
            InequalityReport r = check_variance_bound(PositiveMap(map), a, g, 0, cfg.tol);
            record(std::move(r), {{"A", a}, {"choi", kraus_to_choi(map).c}});
          }
          break;
        }
        case CheckId::GrussNorm:
        case CheckId::GrussNormEta: {
          const bool eta_mode = id == CheckId::GrussNormEta;
          const KrausMap map =
              random_unital_cp(dims.m, dims.n, dims.rank, derive_seed(cs, 1));
          const ComplexMatrix a = detail::seeded_matrix(derive_seed(cs, 2), dims.m, dims.m);
          const ComplexMatrix b = detail::seeded_matrix(derive_seed(cs, 3), dims.m, dims.m);
          for (const GaugeSpec& g : gauges) {
            InequalityReport r = check_gruss_norm(PositiveMap(map), a, b, g, eta_mode, cfg.eta,
                                                  0, cfg.tol, derive_seed(cs, 4));
            record(std::move(r), {{"A", a}, {"B", b}, {"choi", kraus_to_choi(map).c}});
          }
          break;
        }
        case CheckId::GrussOperator: {
          const KrausMap map =
              random_unital_cp(dims.m, dims.n, dims.rank, derive_seed(cs, 1));
          const ComplexMatrix a = detail::seeded_matrix(derive_seed(cs, 2), dims.m, dims.m);
          const ComplexMatrix b = detail::seeded_matrix(derive_seed(cs, 3), dims.m, dims.m);
          InequalityReport r = check_gruss_operator(PositiveMap(map), a, b, tight_ball(a),
                                                    tight_ball(b), cfg.tol);
          record(std::move(r), {{"A", a}, {"B", b}, {"choi", kraus_to_choi(map).c}});
          break;
        }
        case CheckId::GrussHadamard: {
          const Index hn = dims.n;
          const ComplexMatrix a1 = detail::seeded_matrix(derive_seed(cs, 1), hn, hn);
          const ComplexMatrix a2 = detail::seeded_matrix(derive_seed(cs, 2), hn, hn);
          const ComplexMatrix b1 = detail::seeded_matrix(derive_seed(cs, 3), hn, hn);
          const ComplexMatrix b2 = detail::seeded_matrix(derive_seed(cs, 4), hn, hn);
          InequalityReport r =
              check_hadamard_gruss(a1, a2, b1, b2, tight_ball(kron(a1, a2)),
                                   tight_ball(kron(b1, b2)), cfg.tol);
          record(std::move(r), {{"A1", a1}, {"A2", a2}, {"B1", b1}, {"B2", b2}});
          break;
        }
        case CheckId::GrussDiscrete: {
          const Index d = dims.n;
          constexpr int kTerms = 3;
          std::vector<ComplexMatrix> as, bs, csops;
          double lo_a = 0, hi_a = 0, lo_b = 0, hi_b = 0;
          for (int j = 0; j < kTerms; ++j) {
            as.push_back(detail::seeded_hermitian(derive_seed(cs, 10 + j), d));
            bs.push_back(detail::seeded_hermitian(derive_seed(cs, 20 + j), d));
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> ea(as.back(), Eigen::EigenvaluesOnly);
            Eigen::SelfAdjointEigenSolver<ComplexMatrix> eb(bs.back(), Eigen::EigenvaluesOnly);
            lo_a = j == 0 ? ea.eigenvalues()(0) : std::min(lo_a, ea.eigenvalues()(0));
            hi_a = j == 0 ? ea.eigenvalues()(d - 1) : std::max(hi_a, ea.eigenvalues()(d - 1));
            lo_b = j == 0 ? eb.eigenvalues()(0) : std::min(lo_b, eb.eigenvalues()(0));
            hi_b = j == 0 ? eb.eigenvalues()(d - 1) : std::max(hi_b, eb.eigenvalues()(d - 1));
          }
          // Isometric column family: sum_j C_j^* C_j = I exactly up to QR roundoff.
          const ComplexMatrix tall = detail::seeded_matrix(derive_seed(cs, 30), kTerms * d, d);
          Eigen::HouseholderQR<ComplexMatrix> qr(tall);
          const ComplexMatrix q = ComplexMatrix(qr.householderQ()).leftCols(d);
          for (int j = 0; j < kTerms; ++j) csops.push_back(q.middleRows(j * d, d));
          InequalityReport r =
              check_discrete_gruss(csops, as, bs, lo_a, hi_a, lo_b, hi_b, cfg.tol);
          record(std::move(r), {{"A0", as[0]}, {"B0", bs[0]}, {"C0", csops[0]}});
          break;
        }
        case CheckId::ScalarClassical:
        case CheckId::ScalarBpr: {
          SplitMix64 rng(derive_seed(cs, 1));
          std::vector<double> a(8), b(8);
          for (auto& v : a) v = rng.uniform(-1.0, 1.0);
          for (auto& v : b) v = rng.uniform(-1.0, 1.0);
          auto [classical, refined] = check_scalar_gruss(a, b, -1.0, 1.0, -1.0, 1.0, cfg.tol);
          ComplexMatrix row(1, 8);
          for (int j = 0; j < 8; ++j) row(0, j) = Complex(a[j], b[j]);
          record(id == CheckId::ScalarClassical ? std::move(classical) : std::move(refined),
                 {{"ab", row}});
          break;
        }
        case CheckId::GrussField: {
          const Index d = dims.m;
          constexpr int kPoints = 4;
          SplitMix64 rng(derive_seed(cs, 1));
          std::vector<double> weights(kPoints);
          double total = 0.0;
          for (auto& w : weights) {
            w = rng.uniform(0.1, 1.0);
            total += w;
          }
          for (auto& w : weights) w /= total;
          auto make_fields = [&](std::uint64_t fs, BallSpec& ball) {
            const ComplexMatrix base = detail::seeded_matrix(derive_seed(fs, 0), d, d);
            std::vector<ComplexMatrix> fields;
            for (int t = 0; t < kPoints; ++t)
              fields.push_back(base +
                               0.25 * detail::seeded_matrix(derive_seed(fs, 1 + t), d, d));
            const Complex center = scalar_distance(base).lambda_star;
            double radius = 0.0;
            for (const auto& f : fields)
              radius = std::max(radius,
                                operator_norm(f - center * ComplexMatrix::Identity(d, d)));
            ball = {center - radius, center + radius};
            return fields;
          };
          BallSpec ball_1, ball_2;
          const std::vector<ComplexMatrix> fa = make_fields(derive_seed(cs, 2), ball_1);
          const std::vector<ComplexMatrix> fb = make_fields(derive_seed(cs, 3), ball_2);
          InequalityReport r = check_field_gruss(fa, fb, weights, ball_1, ball_2, cfg.tol);
          record(std::move(r), {{"A0", fa[0]}, {"B0", fb[0]}});
          break;
        }
        case CheckId::Stinespring: {
          const KrausMap map =
              random_unital_cp(dims.m, dims.n, dims.rank, derive_seed(cs, 1));
          const StinespringDilation built = build_stinespring(map);
          const StinespringDilation minimized = minimize_stinespring(built);
          const double defect =
              std::max(verify_stinespring(built, PositiveMap(map), 8, derive_seed(cs, 2)),
                       verify_stinespring(minimized, PositiveMap(map), 8, derive_seed(cs, 3)));
          InequalityReport r;
          r.check_id = CheckId::Stinespring;
          r.gauge = "operator-order";
          r.m = dims.m;
          r.n = dims.n;
          r.lhs = defect;
          r.rhs = 1e-10;
          r.tol = 1e-12;
          r.details["built_dim"] = static_cast<double>(built.space_dim());
          r.details["minimized_dim"] = static_cast<double>(minimized.space_dim());
          r.details["dim_bound"] = static_cast<double>(dims.m * dims.m * dims.n);
          detail::finalize(r);
          if (minimized.space_dim() > static_cast<Index>(dims.m) * dims.m * dims.n)
            r.satisfied = false;
          detail::Digest dg;
          dg.feed(std::string("stinespring"));
          dg.feed(kraus_to_choi(map).c);
          r.digest = dg.hex();
          record(std::move(r), {{"choi", kraus_to_choi(map).c}});
          break;
        }
        case CheckId::OrbitGeometry: {
          SplitMix64 rng(derive_seed(cs, 1));
          const ComplexMatrix a = random_complex_matrix(rng, dims.m, dims.m);
          const Complex mu(rng.uniform(-1.0, 1.0), rng.uniform(-1.0, 1.0));
          const double c = rng.uniform(0.5, 1.5);
          const Index d = dims.m;
          const double base = orbit_diameter(a).d;
          const ComplexMatrix u = random_unitary(d, derive_seed(cs, 2));
          double worst = std::abs(orbit_diameter(a + mu * ComplexMatrix::Identity(d, d)).d - base);
          worst = std::max(worst, std::abs(orbit_diameter((u * a * u.adjoint()).eval()).d - base));
          worst = std::max(worst, std::abs(orbit_diameter((c * a).eval()).d - c * base));
          const CommutatorBound lower = commutator_lower_bound(a, 20, derive_seed(cs, 3));
          worst = std::max(worst, lower.value - base - 1e-8);
          InequalityReport r;
          r.check_id = CheckId::OrbitGeometry;
          r.gauge = "operator-order";
          r.m = dims.m;
          r.lhs = std::max(0.0, worst);
          r.rhs = 1e-7 * (1.0 + operator_norm(a));
          r.tol = 1e-9;
          r.details["d_A"] = base;
          r.details["commutator_lower"] = lower.value;
          detail::finalize(r);
          detail::Digest dg;
          dg.feed(std::string("orbit"));
          dg.feed(a);
          r.digest = dg.hex();
          record(std::move(r), {{"A", a}});
          break;
        }
        case CheckId::NormContraction: {
          SplitMix64 rng(derive_seed(cs, 1));
          ComplexMatrix k = random_complex_matrix(rng, dims.n, dims.n);
          k *= rng.uniform01() / std::max(1.0, operator_norm(k));
          for (const GaugeSpec& g : gauges) {
            InequalityReport r;
            r.check_id = CheckId::NormContraction;
            r.gauge = to_string(g);
            r.n = dims.n;
            r.lhs = gauge_norm(g, k);
            r.rhs = gauge_identity_value(g, dims.n);
            r.tol = 1e-10;
            detail::finalize(r);
            detail::Digest dg;
            dg.feed(std::string("contraction"));
            dg.feed(k);
            r.digest = dg.hex();
            record(std::move(r), {{"K", k}});
          }
          break;
        }
        case CheckId::NormSubmultiplicative: {
          const ComplexMatrix a = detail::seeded_matrix(derive_seed(cs, 1), dims.n, dims.n);
          const ComplexMatrix x = detail::seeded_matrix(derive_seed(cs, 2), dims.n, dims.n);
          const ComplexMatrix b = detail::seeded_matrix(derive_seed(cs, 3), dims.n, dims.n);
          for (const GaugeSpec& g : gauges) {
            InequalityReport r;
            r.check_id = CheckId::NormSubmultiplicative;
            r.gauge = to_string(g);
            r.n = dims.n;
            r.lhs = gauge_norm(g, (a * x * b).eval());
            r.rhs = operator_norm(a) * gauge_norm(g, x) * operator_norm(b);
            r.tol = 1e-10;
            detail::finalize(r);
            detail::Digest dg;
            dg.feed(std::string("submultiplicative"));
            dg.feed(a);
            dg.feed(x);
            dg.feed(b);
            r.digest = dg.hex();
            record(std::move(r), {{"A", a}, {"X", x}, {"B", b}});
          }
          break;
        }
        case CheckId::HornLogMajorization: {
          const ComplexMatrix a = detail::seeded_matrix(derive_seed(cs, 1), dims.n, dims.n);
          const ComplexMatrix b = detail::seeded_matrix(derive_seed(cs, 2), dims.n, dims.n);
          const RealVector sab = singular_values((a * b).eval()).values;
          const RealVector sa = singular_values(a).values;
          const RealVector sb = singular_values(b).values;
          std::vector<double> x(sab.data(), sab.data() + sab.size());
          std::vector<double> y(sa.size());
          for (Index i = 0; i < sa.size(); ++i) y[static_cast<std::size_t>(i)] = sa(i) * sb(i);
          const MajorizationVerdict log_verdict = weak_majorization(x, y, true, cfg.tol);
          const MajorizationVerdict sum_verdict = weak_majorization(x, y, false, cfg.tol);
          double min_rel = 0.0;
          for (std::size_t i = 0; i < log_verdict.margins.size(); ++i)
            min_rel = std::min(min_rel, log_verdict.margins[i]);
          InequalityReport r;
          r.check_id = CheckId::HornLogMajorization;
          r.gauge = "log-majorization";
          r.n = dims.n;
          r.lhs = std::max(0.0, -min_rel);
          r.rhs = 0.0;
          r.tol = cfg.tol;
          r.details["weak_follows"] = sum_verdict.holds ? 1.0 : 0.0;
          detail::finalize(r);
          r.satisfied = log_verdict.holds && sum_verdict.holds;
          detail::Digest dg;
          dg.feed(std::string("horn"));
          dg.feed(a);
          dg.feed(b);
          r.digest = dg.hex();
          record(std::move(r), {{"A", a}, {"B", b}});
          break;
        }
        case CheckId::KyFanDominance: {
          SplitMix64 rng(derive_seed(cs, 1));
          const ComplexMatrix g1 = random_complex_matrix(rng, dims.n, dims.n);
          const ComplexMatrix g2 = random_complex_matrix(rng, dims.n, dims.n);
          const ComplexMatrix a = g1.adjoint() * g1;
          const ComplexMatrix b = a + g2.adjoint() * g2;
          const MajorizationVerdict dom = ky_fan_dominates(a, b, cfg.tol);
          double min_gauge_margin = 0.0;
          bool first = true;
          for (const GaugeSpec& g : gauges) {
            const double ga = gauge_norm(g, a), gb = gauge_norm(g, b);
            const double margin = gb - ga + 1e-8 * (1.0 + gb);
            if (first || margin < min_gauge_margin) min_gauge_margin = margin;
            first = false;
          }
          InequalityReport r;
          r.check_id = CheckId::KyFanDominance;
          r.gauge = "all-gauges";
          r.n = dims.n;
          r.lhs = std::max(0.0, -min_gauge_margin);
          r.rhs = 0.0;
          r.tol = cfg.tol;
          r.details["dominance_holds"] = dom.holds ? 1.0 : 0.0;
          detail::finalize(r);
          r.satisfied = r.satisfied && dom.holds;
          detail::Digest dg;
          dg.feed(std::string("kyfan"));
          dg.feed(a);
          dg.feed(b);
          r.digest = dg.hex();
          record(std::move(r), {{"A", a}, {"B", b}});
          break;
        }
        case CheckId::CounterexampleBlockRaw:
        case CheckId::CounterexampleNormRaw:
        case CheckId::CounterexampleBlockUnital:
        case CheckId::CounterexampleNormUnital: {
          const CounterexampleBundle bundle = choi_counterexample();
          for (const InequalityReport& rep : bundle.reports)
            if (rep.check_id == id)
              record(rep, {{"A", bundle.a}, {"B", bundle.b}});
          break;
        }
      }
    } catch (const std::exception& e) {
      out.errors.push_back(to_string(id) + ": " + e.what());
    }
  }
  return out;
}

inline int resolve_threads(int requested, int trials) {
  int threads = requested;
  if (threads <= 0) {
    if (const char* env = std::getenv("GRUSS_LAB_THREADS")) threads = std::atoi(env);
    if (threads <= 0) threads = static_cast<int>(std::thread::hardware_concurrency());
    if (threads <= 0) threads = 1;
  }
  return std::max(1, std::min(threads, std::max(trials, 1)));
}

/// Run the configured checks over seeded trials. Worker count only affects
/// wall time; the aggregate is a deterministic function of the config.
inline SweepAggregate sweep(const CheckConfig& cfg, int threads = 0) {
  SweepAggregate agg;
  agg.trials = cfg.trials;
  if (cfg.trials <= 0) return agg;

  std::vector<TrialOutput> outputs(static_cast<std::size_t>(cfg.trials));
  const int workers = resolve_threads(threads, cfg.trials);
  std::atomic<int> next{0};
  auto worker = [&] {
    for (;;) {
      const int t = next.fetch_add(1);
      if (t >= cfg.trials) return;
      outputs[static_cast<std::size_t>(t)] = run_trial(cfg, t);
    }
  };
  if (workers == 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(static_cast<std::size_t>(workers));
    for (int w = 0; w < workers; ++w) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }

  constexpr std::size_t kMaxKept = 32;
  for (const TrialOutput& out : outputs) {
    for (const InequalityReport& r : out.reports) {
      const std::string key = to_string(r.check_id) + "/" + r.gauge;
      auto it = agg.min_slack_by_check.find(key);
      if (it == agg.min_slack_by_check.end() || r.slack < it->second)
        agg.min_slack_by_check[key] = r.slack;
      if (!r.satisfied && !r.exploratory) {
        ++agg.violations;
        ++agg.violations_by_check[to_string(r.check_id)];
        if (agg.violating_reports.size() < kMaxKept) agg.violating_reports.push_back(r);
      }
    }
    for (const SweepWitness& w : out.witnesses)
      if (agg.witnesses.size() < kMaxKept) agg.witnesses.push_back(w);
    for (const std::string& e : out.errors) {
      ++agg.errors;
      if (agg.error_messages.size() < kMaxKept) agg.error_messages.push_back(e);
    }
  }
  return agg;
}

}  // namespace grusslab
