#define DOCTEST_CONFIG_IMPLEMENT_WITH_MAIN
#include <doctest.h>

#include <sys/wait.h>
#include <unistd.h>

#include <cstdlib>
#include <filesystem>
#include <string>

#include "grusslab/io.hpp"
#include "grusslab/rng.hpp"

using namespace grusslab;
namespace fs = std::filesystem;

namespace {

int run_cmd(const std::string& cmd) {
  const int rc = std::system(cmd.c_str());
  if (rc == -1) return -1;
  return WIFEXITED(rc) ? WEXITSTATUS(rc) : -1;
}

fs::path scratch_dir() {
  static int counter = 0;
  const fs::path dir =
      fs::temp_directory_path() / ("grusslab_io_" + std::to_string(::getpid()) + "_" +
                                   std::to_string(counter++));
  fs::create_directories(dir);
  return dir;
}

const std::string kBin = GRUSS_LAB_BIN;

}  // namespace

TEST_CASE("matrix json round trip is exact") {
  SplitMix64 rng(201);
  for (int t = 0; t < 10; ++t) {
    const ComplexMatrix a = random_complex_matrix(rng, 2 + t % 3, 2 + (t / 2) % 3);
    const ComplexMatrix back = matrix_from_json(matrix_to_json(a), "roundtrip");
    CHECK((a - back).cwiseAbs().maxCoeff() == 0.0);
  }
}

TEST_CASE("matrix json errors name the offending field") {
  Json j{{"rows", 2}, {"cols", 2}};
  CHECK_THROWS_WITH_AS(matrix_from_json(j, "input.json"), doctest::Contains("data"),
                       ConfigError);
  j["data"] = Json::array({Json::array({1.0, 0.0})});
  CHECK_THROWS_WITH_AS(matrix_from_json(j, "input.json"), doctest::Contains("rows*cols"),
                       ConfigError);
  Json bad = matrix_to_json(ComplexMatrix::Identity(2, 2));
  bad["data"][3] = "oops";
  CHECK_THROWS_WITH_AS(matrix_from_json(bad, "input.json"), doctest::Contains("data[3]"),
                       ConfigError);
}

TEST_CASE("map json: all three kinds round trip") {
  const KrausMap phi = random_unital_cp(2, 3, 3, 17);
  const PositiveMap handle(phi);
  const PositiveMap back = map_from_json(map_to_json(handle), "map");
  SplitMix64 rng(202);
  const ComplexMatrix x = random_complex_matrix(rng, 2, 2);
  CHECK(operator_norm(handle.apply(x) - back.apply(x)) == 0.0);

  const PositiveMap choi_handle(kraus_to_choi(phi));
  const PositiveMap choi_back = map_from_json(map_to_json(choi_handle), "map");
  CHECK(operator_norm(choi_handle.apply(x) - choi_back.apply(x)) == 0.0);

  const PositiveMap red(reduction_map(3, true));
  const PositiveMap red_back = map_from_json(map_to_json(red), "map");
  const ComplexMatrix y = random_complex_matrix(rng, 3, 3);
  CHECK(operator_norm(red.apply(y) - red_back.apply(y)) == 0.0);

  CHECK_THROWS_WITH_AS(map_from_json(Json{{"kind", "mystery"}}, "map"),
                       doctest::Contains("mystery"), ConfigError);
}

TEST_CASE("dilation json round trip") {
  const KrausMap phi = random_unital_cp(2, 2, 3, 23);
  const StinespringDilation d = minimize_stinespring(build_stinespring(phi));
  const StinespringDilation back = dilation_from_json(dilation_to_json(d), "dilation");
  CHECK(back.multiplicity == d.multiplicity);
  CHECK(back.minimal == d.minimal);
  CHECK((back.v - d.v).cwiseAbs().maxCoeff() == 0.0);
}

TEST_CASE("report json carries the documented fields") {
  CheckConfig cfg;
  cfg.trials = 1;
  cfg.m = cfg.n = 2;
  cfg.kraus_rank = 2;
  cfg.checks = {CheckId::GrussOperator};
  const TrialOutput out = run_trial(cfg, 0);
  REQUIRE(out.reports.size() == 1);
  const Json j = report_to_json(out.reports[0]);
  for (const char* field :
       {"check_id", "gauge", "lhs", "rhs", "slack", "satisfied", "tol", "seed", "dims",
        "details", "digest"})
    CHECK(j.contains(field));
  CHECK(j["dims"].contains("m"));
  CHECK(j["dims"].contains("rank"));
}

TEST_CASE("csv export is stable and one row per report") {
  const CounterexampleBundle bundle = choi_counterexample();
  const std::string csv = reports_to_csv(bundle.reports);
  CHECK(csv == reports_to_csv(bundle.reports));
  std::size_t lines = 0;
  for (char c : csv)
    if (c == '\n') ++lines;
  CHECK(lines == bundle.reports.size() + 1);
  CHECK(csv.rfind("check_id,gauge,lhs,rhs,slack,satisfied,tol,seed,m,n,k,rank,digest,details",
                  0) == 0);
}

TEST_CASE("cli: counterexample exits with the violation code") {
  const fs::path dir = scratch_dir();
  const int rc = run_cmd(kBin + " counterexample --out " + (dir / "ce.json").string() +
                         " 2> " + (dir / "err.txt").string());
  CHECK(rc == 2);
  const Json out = parse_json_file((dir / "ce.json").string());
  CHECK(out["violations"].get<int>() == 2);
  CHECK(out["reports"].size() == 4);
  CHECK(out.contains("manifest"));
}

TEST_CASE("cli: small clean check run exits zero") {
  const fs::path dir = scratch_dir();
  const int rc = run_cmd(kBin + " check main1 --m 2 --n 2 --trials 5 --seed 1 --out " +
                         (dir / "main1.json").string() + " 2> /dev/null");
  CHECK(rc == 0);
  const Json out = parse_json_file((dir / "main1.json").string());
  CHECK(out["aggregate"]["violations"].get<int>() == 0);
  CHECK(out["aggregate"]["trials"].get<int>() == 5);
}

TEST_CASE("cli: diameter of the identity is zero") {
  const fs::path dir = scratch_dir();
  write_text_file((dir / "I3.json").string(),
                  matrix_to_json(ComplexMatrix::Identity(3, 3)).dump());
  const int rc = run_cmd(kBin + " diameter --in " + (dir / "I3.json").string() + " --out " +
                         (dir / "d.json").string() + " 2> /dev/null");
  CHECK(rc == 0);
  const Json out = parse_json_file((dir / "d.json").string());
  CHECK(out["d"].get<double>() == 0.0);
  CHECK(out["method"].get<std::string>() == "hermitian_exact");
}

TEST_CASE("cli: dilation workflow") {
  const fs::path dir = scratch_dir();
  const KrausMap phi = random_unital_cp(2, 2, 4, 31);
  write_text_file((dir / "map.json").string(), map_to_json(PositiveMap(phi)).dump());
  const int rc = run_cmd(kBin + " dilation --map " + (dir / "map.json").string() +
                         " --minimize --verify --out " + (dir / "dil.json").string() +
                         " 2> /dev/null");
  CHECK(rc == 0);
  const Json out = parse_json_file((dir / "dil.json").string());
  CHECK(out["verify_defect"].get<double>() <= 1e-10);
  CHECK(out["dilation"]["minimal"].get<bool>());
  const StinespringDilation d = dilation_from_json(out["dilation"], "dil.json");
  CHECK(d.space_dim() <= 2 * 2 * 2);
}

TEST_CASE("cli: usage and malformed inputs exit 1") {
  CHECK(run_cmd(kBin + " check main1 --no-such-flag 2> /dev/null") == 1);
  CHECK(run_cmd(kBin + " check doesnotexist 2> /dev/null") == 1);
  CHECK(run_cmd(kBin + " 2> /dev/null") == 1);

  const fs::path dir = scratch_dir();
  write_text_file((dir / "broken.json").string(), "{ not json");
  const std::string err = (dir / "err.txt").string();
  CHECK(run_cmd(kBin + " diameter --in " + (dir / "broken.json").string() + " 2> " + err) == 1);
  CHECK(read_text_file(err).find("broken.json") != std::string::npos);

  write_text_file((dir / "nofield.json").string(), "{\"rows\": 2, \"cols\": 2}");
  CHECK(run_cmd(kBin + " diameter --in " + (dir / "nofield.json").string() + " 2> " + err) ==
        1);
  CHECK(read_text_file(err).find("data") != std::string::npos);

  CHECK(run_cmd(kBin + " check main1 --gauges schatten:0.5 --trials 1 2> " + err) == 1);
  CHECK(read_text_file(err).find("0.5") != std::string::npos);
}

TEST_CASE("cli: a violating sweep writes a referenced witness file") {
  const fs::path dir = scratch_dir();
  const std::string out = (dir / "viol.json").string();
  const int rc = run_cmd(kBin + " check counterexample_norm_raw --trials 1 --seed 5 --out " +
                         out + " 2> /dev/null");
  CHECK(rc == 2);
  const Json payload = parse_json_file(out);
  CHECK(payload["aggregate"]["violations"].get<int>() == 1);
  REQUIRE(payload.contains("witness_file"));
  const Json witnesses = parse_json_file(payload["witness_file"].get<std::string>());
  REQUIRE(witnesses.size() == 1);
  CHECK(witnesses[0]["check_id"].get<std::string>() == "counterexample_norm_raw");
  // Witness inputs replay to the violation.
  const ComplexMatrix a = matrix_from_json(witnesses[0]["inputs"]["A"], "witness.A");
  const ComplexMatrix b = matrix_from_json(witnesses[0]["inputs"]["B"], "witness.B");
  const ReductionMap raw = reduction_map(3, false);
  const double lhs =
      operator_norm(raw.apply(a * b) - raw.apply(a) * raw.apply(b));
  CHECK(lhs == doctest::Approx(2.0 + 2.0 * std::sqrt(3.0)).epsilon(1e-12));
}

TEST_CASE("cli: sweep outputs are byte-identical across runs and worker counts") {
  const fs::path dir1 = scratch_dir();
  const fs::path dir2 = scratch_dir();
  const std::string args = " sweep --suite gruss --trials 6 --seed 99 --out out.json";
  const int rc1 =
      run_cmd("cd " + dir1.string() + " && GRUSS_LAB_THREADS=1 " + kBin + args + " 2> /dev/null");
  const int rc2 =
      run_cmd("cd " + dir2.string() + " && GRUSS_LAB_THREADS=4 " + kBin + args + " 2> /dev/null");
  CHECK(rc1 == 0);
  CHECK(rc2 == 0);
  CHECK(read_text_file((dir1 / "out.json").string()) ==
        read_text_file((dir2 / "out.json").string()));
}
