#include <filesystem>
#include <string>

#include "beamsculpt/version.hpp"
#include "doctest.h"
#include "json.hpp"
#include "test_util.hpp"

namespace fs = std::filesystem;
using test_util::read_file;
using test_util::run_cli;
using test_util::temp_dir;
using test_util::write_file;

namespace {

fs::path write_small_config(const fs::path& dir) {
  const fs::path path = dir / "small.json";
  write_file(path, R"({
  "n_tx": 8,
  "n_users": 2,
  "bandwidth_hz": 3.0e9,
  "power_budget": 2000.0,
  "noise_variance": 1.0,
  "min_rate_bps": 1.0e8,
  "fairness_weights": 1.0
})");
  return path;
}

fs::path write_abort_config(const fs::path& dir) {
  const fs::path path = dir / "abort.json";
  // Astronomically heavy fairness weights make the first trial iterate
  // overflow, so the solver aborts on a non-finite gradient at iteration 2.
  write_file(path, R"({
  "n_tx": 8,
  "n_users": 2,
  "fairness_weights": 1.0e200
})");
  return path;
}

}  // namespace

TEST_CASE("version subcommand prints the artifact name and version") {
  const auto dir = temp_dir("cli_version");
  const auto out = dir / "stdout.txt";
  CHECK(run_cli("version", out) == 0);
  const std::string text = read_file(out);
  CHECK(text.find("beamsculpt") != std::string::npos);
  CHECK(text.find(beamsculpt::kVersion) != std::string::npos);
}

TEST_CASE("solve writes trace, pattern and metrics artifacts") {
  const auto dir = temp_dir("cli_solve");
  const auto cfg = write_small_config(dir);
  const auto out_dir = dir / "out";
  const auto out = dir / "stdout.txt";

  const std::string args = "solve --config " + cfg.string() + " --out " +
                           out_dir.string() + " --max-iters 40";
  REQUIRE(run_cli(args, out) == 0);

  CHECK(fs::exists(out_dir / "trace.csv"));
  CHECK(fs::exists(out_dir / "pattern.csv"));
  CHECK(fs::exists(out_dir / "metrics.json"));

  const auto doc = nlohmann::json::parse(read_file(out_dir / "metrics.json"));
  CHECK(doc.at("gamma").get<double>() == 0.0);
  CHECK(doc.at("seed").get<std::uint64_t>() == 0);
  CHECK(doc.at("iterations").get<int>() == 40);
  // Without shrinkage no coefficient is driven to zero.
  CHECK(doc.at("bmd_percent").get<double>() == 100.0);
  CHECK(doc.at("pw_watts").get<double>() > 0.0);
  CHECK(doc.at("ri_avg_bps").get<double>() ==
        doc.at("se_bps_hz").get<double>() * 1.5e9);

  const std::string text = read_file(out);
  CHECK(text.find("gamma=0 seed=0") != std::string::npos);
  CHECK(text.find("se_bps_hz=") != std::string::npos);
}

TEST_CASE("solve is reproducible across invocations") {
  const auto dir = temp_dir("cli_solve_repro");
  const auto cfg = write_small_config(dir);
  const auto a = dir / "a";
  const auto b = dir / "b";
  const std::string tail = " --gamma 5 --seed 17 --max-iters 30";
  REQUIRE(run_cli("solve --config " + cfg.string() + " --out " + a.string() + tail,
                  dir / "a.txt") == 0);
  REQUIRE(run_cli("solve --config " + cfg.string() + " --out " + b.string() + tail,
                  dir / "b.txt") == 0);
  CHECK(read_file(a / "trace.csv") == read_file(b / "trace.csv"));
  CHECK(read_file(a / "pattern.csv") == read_file(b / "pattern.csv"));
  CHECK(read_file(a / "metrics.json") == read_file(b / "metrics.json"));
  CHECK(read_file(dir / "a.txt") == read_file(dir / "b.txt"));
}

TEST_CASE("solve with a heavy shrinkage weight silences coefficients") {
  const auto dir = temp_dir("cli_solve_gamma");
  const auto cfg = write_small_config(dir);
  const auto out_dir = dir / "out";
  REQUIRE(run_cli("solve --config " + cfg.string() + " --out " + out_dir.string() +
                      " --gamma 5000 --max-iters 60",
                  dir / "stdout.txt") == 0);
  const auto doc = nlohmann::json::parse(read_file(out_dir / "metrics.json"));
  CHECK(doc.at("bmd_percent").get<double>() < 100.0);
}

TEST_CASE("solve reports a missing config as a config error") {
  const auto dir = temp_dir("cli_solve_badcfg");
  const auto missing = dir / "nope.json";
  const auto err = dir / "stderr.txt";
  CHECK(run_cli("solve --config " + missing.string() + " --out " +
                    (dir / "out").string(),
                dir / "stdout.txt", err) == 2);
  CHECK(read_file(err).find("nope.json") != std::string::npos);
}

TEST_CASE("solve surfaces a diverging run as exit code 3") {
  const auto dir = temp_dir("cli_solve_abort");
  const auto cfg = write_abort_config(dir);
  const auto err = dir / "stderr.txt";
  CHECK(run_cli("solve --config " + cfg.string() + " --out " + (dir / "out").string(),
                dir / "stdout.txt", err) == 3);
  const std::string text = read_file(err);
  CHECK(text.find("solver abort") != std::string::npos);
  CHECK(text.find("iteration 2") != std::string::npos);
}

TEST_CASE("sweep emits artifacts and mirrors the summary on stdout") {
  const auto dir = temp_dir("cli_sweep");
  const auto cfg = write_small_config(dir);
  const auto out_dir = dir / "out";
  const auto out = dir / "stdout.txt";
  const std::string args = "sweep --config " + cfg.string() +
                           " --gammas 0,5 --runs 2 --max-iters 30 --out " +
                           out_dir.string();
  REQUIRE(run_cli(args, out) == 0);

  CHECK(fs::exists(out_dir / "summary.csv"));
  CHECK(fs::exists(out_dir / "runs.csv"));
  CHECK(fs::exists(out_dir / "reliability.csv"));
  CHECK(fs::exists(out_dir / "meta.json"));
  CHECK(fs::exists(out_dir / "trace_g0_r0.csv"));
  CHECK(fs::exists(out_dir / "trace_g5_r1.csv"));

  CHECK(read_file(out) == read_file(out_dir / "summary.csv"));
}

TEST_CASE("sweep rejects a non-positive run count") {
  const auto dir = temp_dir("cli_sweep_runs0");
  const auto cfg = write_small_config(dir);
  CHECK(run_cli("sweep --config " + cfg.string() + " --runs 0 --out " +
                    (dir / "out").string(),
                dir / "stdout.txt", dir / "stderr.txt") == 2);
}

TEST_CASE("sweep rejects a malformed gamma list") {
  const auto dir = temp_dir("cli_sweep_badgamma");
  const auto cfg = write_small_config(dir);
  const auto err = dir / "stderr.txt";
  CHECK(run_cli("sweep --config " + cfg.string() + " --gammas 0,abc --out " +
                    (dir / "out").string(),
                dir / "stdout.txt", err) == 2);
  CHECK(read_file(err).find("invalid --gammas entry") != std::string::npos);
}

TEST_CASE("sweep exits 3 when a gamma has no surviving run") {
  const auto dir = temp_dir("cli_sweep_abort");
  const auto cfg = write_abort_config(dir);
  const auto err = dir / "stderr.txt";
  CHECK(run_cli("sweep --config " + cfg.string() +
                    " --gammas 0 --runs 2 --max-iters 20 --out " +
                    (dir / "out").string(),
                dir / "stdout.txt", err) == 3);
  CHECK(read_file(err).find("aborted") != std::string::npos);
  // The artifacts are still written, with the failures marked.
  CHECK(read_file(dir / "out" / "runs.csv").find("abort") != std::string::npos);
}

TEST_CASE("gradcheck passes at the default step and fails at a coarse one") {
  const auto dir = temp_dir("cli_gradcheck");
  const auto out = dir / "stdout.txt";
  CHECK(run_cli("gradcheck", out) == 0);
  CHECK(read_file(out).find("result=pass") != std::string::npos);

  CHECK(run_cli("gradcheck --step 1", out) == 4);
  CHECK(read_file(out).find("result=fail") != std::string::npos);
}

TEST_CASE("proxcheck passes against the brute-force reference") {
  const auto dir = temp_dir("cli_proxcheck");
  const auto out = dir / "stdout.txt";
  CHECK(run_cli("proxcheck --samples 200 --seed 3", out) == 0);
  const std::string text = read_file(out);
  CHECK(text.find("samples=200") != std::string::npos);
  CHECK(text.find("result=pass") != std::string::npos);
}

TEST_CASE("usage mistakes exit with the config error code") {
  const auto dir = temp_dir("cli_usage");
  const auto sink = dir / "sink.txt";
  const auto err = dir / "err.txt";
  CHECK(run_cli("", sink, err) == 2);
  CHECK(run_cli("frobnicate", sink, err) == 2);
  CHECK(run_cli("solve --out somewhere", sink, err) == 2);
  CHECK(run_cli("solve --config a.json --out b --bogus-flag", sink, err) == 2);
  CHECK(run_cli("--help", sink, err) == 0);
  CHECK(read_file(sink).find("solve") != std::string::npos);
}
