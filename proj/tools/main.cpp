#include <cctype>
#include <cstdint>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <stdexcept>
#include <string>
#include <vector>

#include "CLI11.hpp"
#include "beamsculpt/harness.hpp"
#include "beamsculpt/oracle.hpp"
#include "beamsculpt/version.hpp"
#include "json.hpp"

namespace {

namespace fs = std::filesystem;
using namespace beamsculpt;

std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::vector<double> parse_gamma_list(const std::string& text) {
  std::vector<double> values;
  size_t pos = 0;
  while (pos <= text.size()) {
    const size_t comma = text.find(',', pos);
    const std::string tok =
        text.substr(pos, comma == std::string::npos ? std::string::npos : comma - pos);
    try {
      size_t used = 0;
      const double v = std::stod(tok, &used);
      while (used < tok.size() && std::isspace(static_cast<unsigned char>(tok[used])))
        ++used;
      if (used != tok.size()) throw std::invalid_argument(tok);
      values.push_back(v);
    } catch (const std::exception&) {
      throw ConfigError("invalid --gammas entry: '" + tok + "'");
    }
    if (comma == std::string::npos) break;
    pos = comma + 1;
  }
  return values;
}

void write_metrics_json(const fs::path& path, double gamma, std::uint64_t seed,
                        const SolveResult& sol, const MetricsReport& rep) {
  nlohmann::ordered_json doc;
  doc["gamma"] = gamma;
  doc["seed"] = seed;
  doc["converged"] = sol.converged;
  doc["iterations"] = sol.iterations;
  doc["se_bps_hz"] = rep.se_bps_hz;
  doc["ri_bps"] = rep.ri_bps;
  doc["ri_avg_bps"] = rep.ri_avg_bps;
  doc["rl_percent"] = rep.rl_percent;
  doc["bmd_percent"] = rep.bmd_percent;
  doc["pw_watts"] = rep.pw_watts;
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  out << doc.dump(2) << '\n';
  out.flush();
  if (!out) throw IoError("failed while writing " + path.string());
}

int run_solve(const std::string& config_path, double gamma, std::uint64_t seed,
              const std::string& out_dir, int max_iters) {
  const LoadedConfig cfg = load_config(config_path);
  SolverParams params;
  if (max_iters > 0) params.max_iters = max_iters;

  const ChannelMatrix h = generate_channel(cfg.system, seed);
  const ReliabilityMatrix beta = generate_reliability(
      cfg.system, seed, cfg.reliability.scheme, cfg.reliability.path);
  const PenaltyParams penalty(gamma, beta);
  const SolveResult sol = solve(h, penalty, cfg.system, params, seed);

  const MetricsParams mp;
  const MetricsReport rep = compute_metrics(sol.w_final, h, beta.beta, cfg.system, mp);

  const fs::path out(out_dir);
  std::error_code ec;
  fs::create_directories(out, ec);
  if (ec)
    throw IoError("cannot create output directory " + out.string() + ": " + ec.message());
  emit_convergence_trace(sol.trace, out / "trace.csv");
  emit_sparsity_pattern(sol.w_final, mp.zero_tol, out / "pattern.csv");
  write_metrics_json(out / "metrics.json", gamma, seed, sol, rep);

  std::printf("gamma=%g seed=%llu converged=%d iterations=%d\n", gamma,
              static_cast<unsigned long long>(seed), sol.converged ? 1 : 0,
              sol.iterations);
  std::printf("se_bps_hz=%s ri_avg_bps=%s rl_percent=%s bmd_percent=%s pw_watts=%s\n",
              fmt_full(rep.se_bps_hz).c_str(), fmt_full(rep.ri_avg_bps).c_str(),
              fmt_full(rep.rl_percent).c_str(), fmt_full(rep.bmd_percent).c_str(),
              fmt_full(rep.pw_watts).c_str());
  return 0;
}

int run_sweep_cmd(const std::string& config_path, const std::string& gammas_text,
                  int runs, std::uint64_t seed, const std::string& out_dir,
                  int max_iters, bool redraw, int threads) {
  const LoadedConfig cfg = load_config(config_path);
  SweepSpec spec;
  spec.gamma_values = parse_gamma_list(gammas_text);
  spec.n_runs = runs;
  spec.base_seed = seed;
  spec.config = cfg.system;
  if (max_iters > 0) spec.solver.max_iters = max_iters;
  spec.reliability = cfg.reliability;
  spec.redraw_reliability_per_run = redraw;
  spec.output_dir = out_dir;
  spec.max_threads = threads;

  const SweepResult result = run_sweep(spec);

  std::printf("gamma,se_mean,ri_mean,rl_mean,bmd_mean,bmd_std,pw_mean,pw_std\n");
  for (const auto& row : result.summary)
    std::printf("%s,%s,%s,%s,%s,%s,%s,%s\n", fmt_full(row.gamma).c_str(),
                fmt_full(row.stats.se.mean).c_str(), fmt_full(row.stats.ri.mean).c_str(),
                fmt_full(row.stats.rl.mean).c_str(), fmt_full(row.stats.bmd.mean).c_str(),
                fmt_full(row.stats.bmd.stddev).c_str(), fmt_full(row.stats.pw.mean).c_str(),
                fmt_full(row.stats.pw.stddev).c_str());

  bool every_gamma_has_success = true;
  for (const auto& row : result.summary)
    if (row.stats.n_runs == 0) every_gamma_has_success = false;
  for (const auto& run : result.runs)
    if (!run.ok)
      std::fprintf(stderr, "gamma=%g run=%d aborted: %s\n", run.gamma, run.run,
                   run.error.c_str());
  return every_gamma_has_success ? 0 : 3;
}

int run_gradcheck(std::uint64_t seed, int ntx, int users, double step) {
  const GradCheckInstance inst = make_gradcheck_instance(ntx, users, seed);
  const GradCheckReport rep = grad_check(inst.w, inst.h, inst.config, inst.duals, step);
  std::printf("gradcheck ntx=%d users=%d seed=%llu fd_step=%s\n", ntx, users,
              static_cast<unsigned long long>(seed), fmt_full(rep.fd_step).c_str());
  std::printf("max_abs_error=%s max_rel_error=%s worst=(%d,%d,%s)\n",
              fmt_full(rep.max_abs_error).c_str(), fmt_full(rep.max_rel_error).c_str(),
              rep.worst_row, rep.worst_col, rep.worst_is_imag ? "im" : "re");
  const bool pass = rep.max_rel_error < 1e-5;
  std::printf("result=%s\n", pass ? "pass" : "fail");
  return pass ? 0 : 4;
}

int run_proxcheck(int samples, std::uint64_t seed) {
  const ProxCheckReport rep = prox_check(samples, seed);
  std::printf("proxcheck samples=%d seed=%llu max_abs_deviation=%s\n", rep.samples,
              static_cast<unsigned long long>(seed),
              fmt_full(rep.max_abs_deviation).c_str());
  const bool pass = rep.max_abs_deviation < 5e-4;
  std::printf("result=%s\n", pass ? "pass" : "fail");
  return pass ? 0 : 4;
}

}  // namespace

int main(int argc, char** argv) {
  CLI::App app{"antenna-health-aware selective beamforming"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string gammas_text = "0,3.334,33.34,166.7,333.4";
  double gamma = 0.0;
  std::uint64_t seed = 0;
  int runs = 10;
  int max_iters = 0;
  int threads = 0;
  bool redraw = false;
  int ntx = 8;
  int users = 3;
  double step = 1e-6;
  int samples = 1000;

  auto* solve_cmd = app.add_subcommand("solve", "run one solve and write its artifacts");
  solve_cmd->add_option("--config", config_path, "system config JSON")->required();
  solve_cmd->add_option("--gamma", gamma, "sparsity embedding weight (default 0)");
  solve_cmd->add_option("--seed", seed, "base seed (default 0)");
  solve_cmd->add_option("--out", out_dir, "output directory")->required();
  solve_cmd->add_option("--max-iters", max_iters, "override iteration cap");

  auto* sweep_cmd = app.add_subcommand("sweep", "gamma sweep with paired channels");
  sweep_cmd->add_option("--config", config_path, "system config JSON")->required();
  sweep_cmd->add_option("--gammas", gammas_text,
                        "comma-separated gamma values (default trade-off sweep)");
  sweep_cmd->add_option("--runs", runs, "runs per gamma (default 10)");
  sweep_cmd->add_option("--seed", seed, "base seed (default 0)");
  sweep_cmd->add_option("--out", out_dir, "output directory")->required();
  sweep_cmd->add_option("--max-iters", max_iters, "override iteration cap");
  sweep_cmd->add_flag("--redraw-reliability", redraw,
                      "redraw the reliability matrix per run");
  sweep_cmd->add_option("--threads", threads,
                        "worker cap (default BEAMSCULPT_THREADS, then cores)");

  auto* grad_cmd = app.add_subcommand("gradcheck",
                                      "finite-difference check of the smooth gradient");
  grad_cmd->add_option("--seed", seed, "instance seed (default 0)");
  grad_cmd->add_option("--ntx", ntx, "antennas (default 8)");
  grad_cmd->add_option("--users", users, "users (default 3)");
  grad_cmd->add_option("--step", step, "central-difference step (default 1e-6)");

  auto* prox_cmd = app.add_subcommand("proxcheck",
                                      "brute-force check of the shrinkage operator");
  prox_cmd->add_option("--samples", samples, "random (x, kappa) pairs (default 1000)");
  prox_cmd->add_option("--seed", seed, "sample seed (default 0)");

  auto* version_cmd = app.add_subcommand("version", "print version");

  try {
    app.parse(argc, argv);
  } catch (const CLI::ParseError& e) {
    const int code = app.exit(e);
    return code == 0 ? 0 : 2;
  }

  try {
    if (version_cmd->parsed()) {
      std::printf("beamsculpt %s\n", kVersion);
      return 0;
    }
    if (solve_cmd->parsed())
      return run_solve(config_path, gamma, seed, out_dir, max_iters);
    if (sweep_cmd->parsed())
      return run_sweep_cmd(config_path, gammas_text, runs, seed, out_dir, max_iters,
                           redraw, threads);
    if (grad_cmd->parsed()) return run_gradcheck(seed, ntx, users, step);
    if (prox_cmd->parsed()) return run_proxcheck(samples, seed);
  } catch (const ConfigError& e) {
    std::fprintf(stderr, "config error: %s\n", e.what());
    return 2;
  } catch (const SolverAbort& e) {
    std::fprintf(stderr, "solver abort: %s\n", e.what());
    return 3;
  } catch (const IoError& e) {
    std::fprintf(stderr, "io error: %s\n", e.what());
    return 1;
  } catch (const std::invalid_argument& e) {
    std::fprintf(stderr, "invalid argument: %s\n", e.what());
    return 2;
  } catch (const std::exception& e) {
    std::fprintf(stderr, "error: %s\n", e.what());
    return 1;
  }
  return 0;
}
