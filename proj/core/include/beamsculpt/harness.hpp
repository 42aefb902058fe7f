#pragma once

#include <filesystem>
#include <string>
#include <vector>

#include "beamsculpt/metrics.hpp"
#include "beamsculpt/solver.hpp"

namespace beamsculpt {

// A gamma-sweep experiment: n_runs independent channel draws, each solved at
// every gamma (paired design: run r uses channel seed base_seed + r for all
// gammas, so levels are compared on identical channels). One reliability
// matrix per sweep (seed = base_seed) unless redraw_reliability_per_run.
struct SweepSpec {
  std::vector<double> gamma_values;  // sorted ascending before running
  int n_runs = 10;
  std::uint64_t base_seed = 0;
  SystemConfig config;
  SolverParams solver;
  ReliabilitySpec reliability;
  MetricsParams metrics;
  bool redraw_reliability_per_run = false;
  std::filesystem::path output_dir;
  // 0: BEAMSCULPT_THREADS env var if set, else hardware concurrency.
  int max_threads = 0;
};

struct RunOutcome {
  double gamma = 0.0;
  int run = 0;
  std::uint64_t channel_seed = 0;
  bool ok = false;
  std::string error;  // empty when ok
  bool converged = false;
  int iterations = 0;
  MetricsReport metrics;
  IterateTrace trace;
  BeamformingMatrix w_final;
};

struct SummaryRow {
  double gamma = 0.0;
  AggregateReport stats;  // over the gamma's successful runs
};

struct SweepResult {
  std::vector<SummaryRow> summary;  // one per gamma, ascending
  std::vector<RunOutcome> runs;     // gamma-major, run-minor order
  ReliabilityMatrix reliability;    // the sweep-level matrix
};

// Runs the sweep and writes, under spec.output_dir:
//   summary.csv                 per-gamma aggregates
//   runs.csv                    one row per (gamma, run)
//   trace_g{gamma}_r{run}.csv   convergence trace per successful run
//   pattern_g{gamma}_r{run}.csv 0/1 occupancy of the final beamformer
//   reliability.csv             the sweep's beta matrix
//   meta.json                   spec echo, artifact version, metric definitions
// Solver aborts are recorded per run and do not stop the sweep; I/O failures
// do. Output bytes are deterministic under a fixed spec, independent of the
// thread count.
SweepResult run_sweep(const SweepSpec& spec);

// 0/1 occupancy CSV (1 = modulus above zero_tol * max|w|), header row then
// n_tx rows by n_users columns.
void emit_sparsity_pattern(const BeamformingMatrix& w, double zero_tol,
                           const std::filesystem::path& path);

// Beta values as CSV, header row then n_tx rows. Round-trips through
// load_reliability_csv at full precision.
void emit_reliability_heatmap(const ReliabilityMatrix& beta,
                              const std::filesystem::path& path);

// Columns: iter, objective, se_bps_hz, power, eta, backtracks, primal_change,
// lambda1_j..., lambda2_j..., mu.
void emit_convergence_trace(const IterateTrace& trace,
                            const std::filesystem::path& path);

}  // namespace beamsculpt
