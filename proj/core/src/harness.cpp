#include "beamsculpt/harness.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdio>
#include <cstdlib>
#include <exception>
#include <fstream>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "beamsculpt/version.hpp"
#include "json.hpp"

namespace beamsculpt {

namespace {

std::string fmt_full(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%.17g", v);
  return buf;
}

std::string fmt_short(double v) {
  char buf[40];
  std::snprintf(buf, sizeof(buf), "%g", v);
  return buf;
}

std::ofstream open_out(const std::filesystem::path& path) {
  std::ofstream out(path);
  if (!out) throw IoError("cannot open " + path.string() + " for writing");
  return out;
}

void finish(std::ofstream& out, const std::filesystem::path& path) {
  out.flush();
  if (!out) throw IoError("failed while writing " + path.string());
}

int resolve_threads(int requested) {
  if (requested > 0) return requested;
  if (const char* env = std::getenv("BEAMSCULPT_THREADS")) {
    char* end = nullptr;
    const long v = std::strtol(env, &end, 10);
    if (end != nullptr && *end == '\0' && v > 0) return static_cast<int>(v);
  }
  const unsigned hc = std::thread::hardware_concurrency();
  return hc > 0 ? static_cast<int>(hc) : 1;
}

double trace_se_bps_hz(const IterateRecord& rec) {
  return rec.rates_nats.sum() /
         (M_LN2 * static_cast<double>(rec.rates_nats.size()));
}

void write_summary_csv(const SweepResult& result,
                       const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "gamma,se_mean,ri_mean,rl_mean,bmd_mean,bmd_std,pw_mean,pw_std\n";
  for (const auto& row : result.summary) {
    out << fmt_full(row.gamma) << ',' << fmt_full(row.stats.se.mean) << ','
        << fmt_full(row.stats.ri.mean) << ',' << fmt_full(row.stats.rl.mean)
        << ',' << fmt_full(row.stats.bmd.mean) << ','
        << fmt_full(row.stats.bmd.stddev) << ',' << fmt_full(row.stats.pw.mean)
        << ',' << fmt_full(row.stats.pw.stddev) << '\n';
  }
  finish(out, path);
}

void write_runs_csv(const SweepResult& result,
                    const std::filesystem::path& path) {
  auto out = open_out(path);
  out << "gamma,run,channel_seed,status,converged,iterations,se_bps_hz,"
         "ri_avg_bps,rl_percent,bmd_percent,pw_watts\n";
  const double nan = std::numeric_limits<double>::quiet_NaN();
  for (const auto& o : result.runs) {
    const MetricsReport& m = o.metrics;
    out << fmt_full(o.gamma) << ',' << o.run << ',' << o.channel_seed << ','
        << (o.ok ? "ok" : "abort") << ',' << (o.converged ? 1 : 0) << ','
        << o.iterations << ',' << fmt_full(o.ok ? m.se_bps_hz : nan) << ','
        << fmt_full(o.ok ? m.ri_avg_bps : nan) << ','
        << fmt_full(o.ok ? m.rl_percent : nan) << ','
        << fmt_full(o.ok ? m.bmd_percent : nan) << ','
        << fmt_full(o.ok ? m.pw_watts : nan) << '\n';
  }
  finish(out, path);
}

void write_meta_json(const SweepSpec& spec, const std::vector<double>& gammas,
                     const std::filesystem::path& path) {
  nlohmann::ordered_json meta;
  meta["artifact"] = {{"name", "beamsculpt"}, {"version", kVersion}};
  meta["sweep"] = {
      {"gamma_values", gammas},
      {"n_runs", spec.n_runs},
      {"base_seed", spec.base_seed},
      {"redraw_reliability_per_run", spec.redraw_reliability_per_run},
      {"max_threads", spec.max_threads},
  };
  meta["system"] = {
      {"n_tx", spec.config.n_tx},
      {"n_users", spec.config.n_users},
      {"bandwidth_hz", spec.config.bandwidth_hz},
      {"power_budget", spec.config.power_budget},
      {"noise_variance", spec.config.noise_variance},
      {"min_rate_bps", spec.config.min_rate_bps},
      {"fairness_weights", spec.config.fairness_weights},
  };
  meta["solver"] = {
      {"eta_x_init", spec.solver.eta_x_init},
      {"dual_step", spec.solver.dual_step},
      {"backtrack_shrink", spec.solver.backtrack_shrink},
      {"max_iters", spec.solver.max_iters},
      {"max_backtracks", spec.solver.max_backtracks},
      {"tolerance", spec.solver.tolerance},
      {"lambda1_init", spec.solver.lambda1_init},
      {"lambda2_init", spec.solver.lambda2_init},
      {"mu_init", spec.solver.mu_init},
      {"enable_lambda2", spec.solver.enable_lambda2},
  };
  meta["reliability"] = {
      {"scheme", spec.reliability.scheme == ReliabilityScheme::from_file
                     ? "from_file"
                     : "per_antenna_uniform"},
      {"path", spec.reliability.path},
  };
  meta["metrics"] = {
      {"zero_tol", spec.metrics.zero_tol},
      {"reliability_threshold", spec.metrics.reliability_threshold},
      {"definitions",
       {
           {"se_bps_hz", "mean over users of log2(1 + SINR_m)"},
           {"ri_avg_bps", "se_bps_hz * bandwidth_hz / n_users, exact identity"},
           {"bmd_percent",
            "100 * |{(i,j): |w_ij| > zero_tol * max|w|}| / (n_tx * n_users); "
            "0 for w = 0"},
           {"rl_percent",
            "artifact-defined: among entries with beta < "
            "reliability_threshold, the percentage carrying no power "
            "(|w_ij| <= zero_tol * max|w|); 100 when no entry is below the "
            "threshold"},
           {"pw_watts", "squared Frobenius norm of the final iterate"},
       }},
  };
  auto out = open_out(path);
  out << meta.dump(2) << '\n';
  finish(out, path);
}

}  // namespace

void emit_sparsity_pattern(const BeamformingMatrix& w, double zero_tol,
                           const std::filesystem::path& path) {
  auto out = open_out(path);
  for (Eigen::Index j = 0; j < w.cols(); ++j)
    out << (j ? "," : "") << 'u' << j;
  out << '\n';
  const double peak = w.cwiseAbs().maxCoeff();
  const double cutoff = zero_tol * peak;
  for (Eigen::Index i = 0; i < w.rows(); ++i) {
    for (Eigen::Index j = 0; j < w.cols(); ++j) {
      const bool active = peak > 0.0 && std::abs(w(i, j)) > cutoff;
      out << (j ? "," : "") << (active ? 1 : 0);
    }
    out << '\n';
  }
  finish(out, path);
}

void emit_reliability_heatmap(const ReliabilityMatrix& beta,
                              const std::filesystem::path& path) {
  auto out = open_out(path);
  for (Eigen::Index j = 0; j < beta.beta.cols(); ++j)
    out << (j ? "," : "") << 'u' << j;
  out << '\n';
  for (Eigen::Index i = 0; i < beta.beta.rows(); ++i) {
    for (Eigen::Index j = 0; j < beta.beta.cols(); ++j)
      out << (j ? "," : "") << fmt_full(beta.beta(i, j));
    out << '\n';
  }
  finish(out, path);
}

void emit_convergence_trace(const IterateTrace& trace,
                            const std::filesystem::path& path) {
  auto out = open_out(path);
  const Eigen::Index n_users =
      trace.records.empty() ? 0 : trace.records.front().lambda1.size();
  out << "iter,objective,se_bps_hz,power,eta,backtracks,primal_change";
  for (Eigen::Index j = 0; j < n_users; ++j) out << ",lambda1_" << j;
  for (Eigen::Index j = 0; j < n_users; ++j) out << ",lambda2_" << j;
  out << ",mu\n";
  for (const auto& rec : trace.records) {
    out << rec.iter << ',' << fmt_full(rec.objective) << ','
        << fmt_full(trace_se_bps_hz(rec)) << ',' << fmt_full(rec.power) << ','
        << fmt_full(rec.eta) << ',' << rec.backtracks << ','
        << fmt_full(rec.primal_change);
    for (Eigen::Index j = 0; j < n_users; ++j)
      out << ',' << fmt_full(rec.lambda1(j));
    for (Eigen::Index j = 0; j < n_users; ++j)
      out << ',' << fmt_full(rec.lambda2(j));
    out << ',' << fmt_full(rec.mu) << '\n';
  }
  finish(out, path);
}

SweepResult run_sweep(const SweepSpec& spec) {
  spec.config.validate();
  spec.solver.validate();
  if (spec.gamma_values.empty())
    throw std::invalid_argument("gamma_values must be nonempty");
  if (spec.n_runs < 1) throw std::invalid_argument("n_runs must be >= 1");
  for (double g : spec.gamma_values)
    if (!(g >= 0.0)) throw std::invalid_argument("gamma values must be >= 0");

  std::vector<double> gammas = spec.gamma_values;
  std::sort(gammas.begin(), gammas.end());

  const bool writing = !spec.output_dir.empty();
  if (writing) {
    std::error_code ec;
    std::filesystem::create_directories(spec.output_dir, ec);
    if (ec)
      throw IoError("cannot create output directory " +
                    spec.output_dir.string() + ": " + ec.message());
  }

  SweepResult result;
  result.reliability = generate_reliability(
      spec.config, spec.base_seed, spec.reliability.scheme, spec.reliability.path);

  const size_t runs_per_gamma = static_cast<size_t>(spec.n_runs);
  const size_t n_jobs = gammas.size() * runs_per_gamma;
  result.runs.resize(n_jobs);

  std::atomic<size_t> next{0};
  std::mutex err_mutex;
  std::exception_ptr first_error;

  auto worker = [&]() {
    for (;;) {
      const size_t job = next.fetch_add(1);
      if (job >= n_jobs) return;
      {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (first_error) return;
      }
      const size_t gi = job / runs_per_gamma;
      const int r = static_cast<int>(job % runs_per_gamma);
      RunOutcome& out = result.runs[job];
      out.gamma = gammas[gi];
      out.run = r;
      out.channel_seed = spec.base_seed + static_cast<std::uint64_t>(r);
      try {
        const ChannelMatrix h = generate_channel(spec.config, out.channel_seed);
        ReliabilityMatrix beta = result.reliability;
        if (spec.redraw_reliability_per_run)
          beta = generate_reliability(spec.config,
                                      spec.base_seed + static_cast<std::uint64_t>(r),
                                      spec.reliability.scheme,
                                      spec.reliability.path);
        const PenaltyParams penalty(out.gamma, beta);
        try {
          SolveResult sol = solve(h, penalty, spec.config, spec.solver,
                                  spec.base_seed + static_cast<std::uint64_t>(r));
          out.ok = true;
          out.converged = sol.converged;
          out.iterations = sol.iterations;
          out.metrics =
              compute_metrics(sol.w_final, h, beta.beta, spec.config, spec.metrics);
          out.trace = std::move(sol.trace);
          out.w_final = std::move(sol.w_final);
          if (writing) {
            const std::string tag =
                "_g" + fmt_short(out.gamma) + "_r" + std::to_string(r);
            emit_convergence_trace(out.trace,
                                   spec.output_dir / ("trace" + tag + ".csv"));
            emit_sparsity_pattern(out.w_final, spec.metrics.zero_tol,
                                  spec.output_dir / ("pattern" + tag + ".csv"));
          }
        } catch (const SolverAbort& e) {
          out.ok = false;
          out.error = e.what();
        }
      } catch (...) {
        std::lock_guard<std::mutex> lock(err_mutex);
        if (!first_error) first_error = std::current_exception();
        return;
      }
    }
  };

  const size_t want =
      std::min<size_t>(static_cast<size_t>(resolve_threads(spec.max_threads)), n_jobs);
  if (want <= 1) {
    worker();
  } else {
    std::vector<std::thread> pool;
    pool.reserve(want);
    for (size_t t = 0; t < want; ++t) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
  }
  if (first_error) std::rethrow_exception(first_error);

  result.summary.reserve(gammas.size());
  for (size_t gi = 0; gi < gammas.size(); ++gi) {
    std::vector<MetricsReport> good;
    good.reserve(runs_per_gamma);
    for (size_t r = 0; r < runs_per_gamma; ++r) {
      const RunOutcome& o = result.runs[gi * runs_per_gamma + r];
      if (o.ok) good.push_back(o.metrics);
    }
    SummaryRow row;
    row.gamma = gammas[gi];
    if (good.empty()) {
      const double nan = std::numeric_limits<double>::quiet_NaN();
      row.stats.n_runs = 0;
      row.stats.se = row.stats.ri = row.stats.rl = row.stats.bmd =
          row.stats.pw = MetricStats{nan, nan};
    } else {
      row.stats = aggregate(good);
    }
    result.summary.push_back(std::move(row));
  }

  if (writing) {
    write_summary_csv(result, spec.output_dir / "summary.csv");
    write_runs_csv(result, spec.output_dir / "runs.csv");
    emit_reliability_heatmap(result.reliability,
                             spec.output_dir / "reliability.csv");
    write_meta_json(spec, gammas, spec.output_dir / "meta.json");
  }
  return result;
}

}  // namespace beamsculpt
