// gruss_lab: check Gruss-type inequalities for positive maps on matrix
// algebras, reproduce the 2-positive counterexample, and run the orbit /
// dilation workflows. All randomness comes from the seeded generator, so any
// run is reproducible from its manifest.

#include <CLI11.hpp>

#include <chrono>
#include <cstdio>
#include <ctime>
#include <iostream>
#include <string>
#include <vector>

#include "grusslab/grusslab.hpp"

namespace {

using namespace grusslab;

constexpr int kExitOk = 0;
constexpr int kExitUsage = 1;
constexpr int kExitViolations = 2;

std::string now_utc() {
  const std::time_t t = std::chrono::system_clock::to_time_t(std::chrono::system_clock::now());
  char buf[32];
  std::tm tm{};
  gmtime_r(&t, &tm);
  std::strftime(buf, sizeof(buf), "%Y-%m-%dT%H:%M:%SZ", &tm);
  return buf;
}

std::vector<GaugeSpec> parse_gauge_list(const std::string& csv) {
  std::vector<GaugeSpec> out;
  std::size_t pos = 0;
  while (pos <= csv.size()) {
    const std::size_t next = csv.find(',', pos);
    const std::string token =
        csv.substr(pos, next == std::string::npos ? std::string::npos : next - pos);
    if (!token.empty()) out.push_back(parse_gauge(token));
    if (next == std::string::npos) break;
    pos = next + 1;
  }
  if (out.empty()) throw ConfigError("gauge list '" + csv + "' is empty");
  return out;
}

std::vector<CheckId> checks_for_token(const std::string& which) {
  if (which == "main1") return {CheckId::VarianceBound, CheckId::GrussNorm};
  if (which == "the2") return {CheckId::GrussNormEta};
  if (which == "main2") return {CheckId::GrussOperator};
  if (which == "hadamard") return {CheckId::GrussHadamard};
  if (which == "discrete") return {CheckId::GrussDiscrete};
  if (which == "scalar") return {CheckId::ScalarClassical, CheckId::ScalarBpr};
  if (which == "fields") return {CheckId::GrussField};
  // Individual check ids are accepted too, e.g. "kadison" or
  // "counterexample_norm_raw".
  for (CheckId id : suite_checks("all"))
    if (to_string(id) == which) return {id};
  for (CheckId id : {CheckId::CounterexampleBlockRaw, CheckId::CounterexampleNormRaw,
                     CheckId::CounterexampleBlockUnital, CheckId::CounterexampleNormUnital})
    if (to_string(id) == which) return {id};
  throw ConfigError("unknown check '" + which +
                    "' (expected main1, the2, main2, hadamard, discrete, scalar, fields or a "
                    "check id)");
}

void deliver(const Json& payload, const std::string& out_path, RunManifest& manifest) {
  if (out_path.empty()) {
    std::cout << payload.dump(2) << "\n";
    return;
  }
  manifest.outputs.push_back(out_path);
  Json with_manifest = payload;
  with_manifest["manifest"] = manifest_to_json(manifest);
  write_text_file(out_path, with_manifest.dump(2) + "\n");
}

std::string sweep_csv(const SweepAggregate& agg) {
  std::ostringstream out;
  out << "check_id,gauge,min_slack,violations,trials\n";
  for (const auto& [key, slack] : agg.min_slack_by_check) {
    const std::size_t cut = key.find('/');
    const std::string check = key.substr(0, cut);
    const std::string gauge = cut == std::string::npos ? "" : key.substr(cut + 1);
    const auto it = agg.violations_by_check.find(check);
    out << check << ',' << gauge << ',' << Json(slack).dump() << ','
        << (it == agg.violations_by_check.end() ? 0 : it->second) << ',' << agg.trials << '\n';
  }
  return out.str();
}

int run_sweep_like(const CheckConfig& cfg, const std::string& label, const std::string& out_path,
                   const std::string& format, RunManifest manifest) {
  const std::string started = now_utc();
  const SweepAggregate agg = sweep(cfg);
  manifest.seed = cfg.seed;
  manifest.config = config_to_json(cfg);

  if (format == "csv") {
    if (out_path.empty()) {
      std::cout << sweep_csv(agg);
    } else {
      manifest.outputs.push_back(out_path);
      write_text_file(out_path, sweep_csv(agg));
    }
  } else {
    Json payload{{"type", "sweep"}, {"label", label}, {"aggregate", aggregate_to_json(agg)}};
    if (!out_path.empty() && !agg.witnesses.empty()) {
      Json witnesses = Json::array();
      for (const auto& w : agg.witnesses) witnesses.push_back(witness_to_json(w));
      const std::string wpath = out_path + ".witnesses.json";
      write_text_file(wpath, witnesses.dump(2) + "\n");
      manifest.outputs.push_back(wpath);
      payload["witness_file"] = wpath;
    } else if (!agg.witnesses.empty()) {
      Json witnesses = Json::array();
      for (const auto& w : agg.witnesses) witnesses.push_back(witness_to_json(w));
      payload["witnesses"] = std::move(witnesses);
    }
    deliver(payload, out_path, manifest);
  }

  std::cerr << "gruss_lab " << label << ": trials=" << agg.trials
            << " violations=" << agg.violations << " errors=" << agg.errors << " started "
            << started << " finished " << now_utc() << "\n";
  for (const auto& e : agg.error_messages) std::cerr << "  error: " << e << "\n";
  if (agg.violations > 0) return kExitViolations;
  if (agg.errors > 0) return kExitUsage;
  return kExitOk;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"Gruss-type inequality checks for positive maps on matrix algebras"};
  app.require_subcommand(1);

  RunManifest manifest;
  for (int i = 0; i < argc; ++i) manifest.argv.emplace_back(argv[i]);

  // --- check ---------------------------------------------------------------
  auto* check_cmd = app.add_subcommand(
      "check", "Run one check family over seeded random instances");
  std::string check_which;
  check_cmd->add_option("which", check_which,
                        "one of main1, the2, main2, hadamard, discrete, scalar, fields")
      ->required();
  CheckConfig check_cfg;
  check_cfg.trials = 100;
  std::string check_gauges, check_out, check_format = "json";
  check_cmd->add_option("--m", check_cfg.m, "input dimension (0 cycles 2..4)");
  check_cmd->add_option("--n", check_cfg.n, "output dimension (0 cycles 2..4)");
  check_cmd->add_option("--rank", check_cfg.kraus_rank, "Kraus rank (0 cycles 1,2,mn)");
  check_cmd->add_option("--trials", check_cfg.trials, "number of seeded trials");
  check_cmd->add_option("--seed", check_cfg.seed, "master seed");
  check_cmd->add_option("--gauges", check_gauges, "comma list: op | kyfan:K | schatten:P");
  check_cmd->add_option("--tol", check_cfg.tol, "relative slack tolerance");
  check_cmd->add_option("--eta", check_cfg.eta,
                        "positivity order for the2 (below 12 is exploratory)");
  check_cmd->add_option("--out", check_out, "write results to this path");
  check_cmd->add_option("--format", check_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  // --- counterexample -------------------------------------------------------
  auto* ce_cmd = app.add_subcommand(
      "counterexample",
      "Reproduce the 2-positive reduction-map counterexample (raw and unital forms)");
  std::string ce_out, ce_format = "json";
  ce_cmd->add_option("--out", ce_out, "write reports to this path");
  ce_cmd->add_option("--format", ce_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  // --- diameter --------------------------------------------------------------
  auto* diam_cmd = app.add_subcommand("diameter", "Unitary-orbit diameter of a matrix");
  std::string diam_in, diam_method = "auto", diam_out;
  double diam_tol = 1e-8;
  diam_cmd->add_option("--in", diam_in, "matrix JSON file")->required();
  diam_cmd->add_option("--method", diam_method, "auto, hermitian, disk or descent")
      ->check(CLI::IsMember({"auto", "hermitian", "disk", "descent"}));
  diam_cmd->add_option("--tol", diam_tol, "descent certificate target (relative)");
  diam_cmd->add_option("--out", diam_out, "write result to this path");

  // --- dilation ---------------------------------------------------------------
  auto* dil_cmd = app.add_subcommand(
      "dilation", "Stinespring dilation of a unital completely positive map");
  std::string dil_map, dil_out;
  bool dil_minimize = false, dil_verify = false;
  dil_cmd->add_option("--map", dil_map, "map JSON file (kraus or choi kind)")->required();
  dil_cmd->add_flag("--minimize", dil_minimize, "compress to the minimal dilation");
  dil_cmd->add_flag("--verify", dil_verify, "report the worst reconstruction defect");
  dil_cmd->add_option("--out", dil_out, "write dilation JSON to this path");

  // --- sweep ------------------------------------------------------------------
  auto* sweep_cmd = app.add_subcommand("sweep", "Run a check suite over seeded trials");
  CheckConfig sweep_cfg;
  std::string sweep_suite = "gruss", sweep_gauges, sweep_out, sweep_format = "json";
  sweep_cmd->add_option("--suite", sweep_suite, "all, core or gruss")
      ->check(CLI::IsMember({"all", "core", "gruss"}));
  sweep_cmd->add_option("--trials", sweep_cfg.trials, "number of seeded trials");
  sweep_cmd->add_option("--seed", sweep_cfg.seed, "master seed");
  sweep_cmd->add_option("--gauges", sweep_gauges, "comma list: op | kyfan:K | schatten:P");
  sweep_cmd->add_option("--m", sweep_cfg.m, "input dimension (0 cycles 2..4)");
  sweep_cmd->add_option("--n", sweep_cfg.n, "output dimension (0 cycles 2..4)");
  sweep_cmd->add_option("--rank", sweep_cfg.kraus_rank, "Kraus rank (0 cycles 1,2,mn)");
  sweep_cmd->add_option("--tol", sweep_cfg.tol, "relative slack tolerance");
  sweep_cmd->add_option("--eta", sweep_cfg.eta, "positivity order for eta-mode checks");
  sweep_cmd->add_option("--out", sweep_out, "write aggregate to this path");
  sweep_cmd->add_option("--format", sweep_format, "json or csv")
      ->check(CLI::IsMember({"json", "csv"}));

  try {
    app.parse(argc, argv);
  } catch (const CLI::CallForHelp& e) {
    std::cout << app.help();
    return kExitOk;
  } catch (const CLI::ParseError& e) {
    std::cerr << "error: " << e.what() << "\n" << app.help();
    return kExitUsage;
  }

  try {
    if (check_cmd->parsed()) {
      check_cfg.checks = checks_for_token(check_which);
      if (!check_gauges.empty()) check_cfg.gauges = parse_gauge_list(check_gauges);
      return run_sweep_like(check_cfg, "check " + check_which, check_out, check_format,
                            manifest);
    }

    if (ce_cmd->parsed()) {
      const std::string started = now_utc();
      const CounterexampleBundle bundle = choi_counterexample();
      int violations = 0;
      for (const auto& r : bundle.reports)
        if (!r.satisfied && !r.exploratory) ++violations;

      if (ce_format == "csv") {
        const std::string csv = reports_to_csv(bundle.reports);
        if (ce_out.empty()) std::cout << csv;
        else write_text_file(ce_out, csv);
      } else {
        Json reports = Json::array();
        for (const auto& r : bundle.reports) reports.push_back(report_to_json(r));
        Json payload{{"type", "counterexample"},
                     {"reports", std::move(reports)},
                     {"A", matrix_to_json(bundle.a)},
                     {"B", matrix_to_json(bundle.b)},
                     {"violations", violations}};
        deliver(payload, ce_out, manifest);
      }
      std::cerr << "gruss_lab counterexample: violations=" << violations << " started "
                << started << " finished " << now_utc() << "\n";
      return violations > 0 ? kExitViolations : kExitOk;
    }

    if (diam_cmd->parsed()) {
      const ComplexMatrix a = matrix_from_json(parse_json_file(diam_in), diam_in);
      DiameterOptions opts;
      opts.target_gap = diam_tol;
      if (diam_method == "hermitian") opts.method = DiameterMethod::HermitianExact;
      else if (diam_method == "disk") opts.method = DiameterMethod::NormalDisk;
      else if (diam_method == "descent") opts.method = DiameterMethod::ConvexDescent;
      const DiameterResult res = orbit_diameter(a, opts);
      Json payload{{"type", "diameter"},
                   {"d", res.d},
                   {"delta", 0.5 * res.d},
                   {"lambda_star", Json::array({res.lambda_star.real(), res.lambda_star.imag()})},
                   {"method", to_string(res.method)},
                   {"iterations", res.iterations},
                   {"certificate_gap", res.certificate_gap}};
      deliver(payload, diam_out, manifest);
      return kExitOk;
    }

    if (dil_cmd->parsed()) {
      const PositiveMap map = map_from_json(parse_json_file(dil_map), dil_map);
      StinespringDilation dil = build_stinespring(map);
      if (dil_minimize) dil = minimize_stinespring(dil);
      Json payload{{"type", "dilation"}, {"dilation", dilation_to_json(dil)}};
      if (dil_verify) payload["verify_defect"] = verify_stinespring(dil, map, 32, 0x5eed);
      deliver(payload, dil_out, manifest);
      return kExitOk;
    }

    if (sweep_cmd->parsed()) {
      sweep_cfg.checks = suite_checks(sweep_suite);
      if (!sweep_gauges.empty()) sweep_cfg.gauges = parse_gauge_list(sweep_gauges);
      return run_sweep_like(sweep_cfg, "sweep " + sweep_suite, sweep_out, sweep_format,
                            manifest);
    }
  } catch (const std::exception& e) {
    std::cerr << "error: " << e.what() << "\n";
    return kExitUsage;
  }
  return kExitUsage;
}
