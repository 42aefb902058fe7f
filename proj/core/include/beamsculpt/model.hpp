#pragma once

#include <cstdint>
#include <string>
#include <vector>

#include "beamsculpt/types.hpp"

namespace beamsculpt {

// Physical scenario: array/user sizes, band, power budget, noise floor and
// per-user rate requirements. Immutable once validated; safe to share across
// threads.
struct SystemConfig {
  int n_tx = 64;
  int n_users = 4;
  double bandwidth_hz = 3.0e9;
  double power_budget = 2000.0;  // watts
  double noise_variance = 1.0;
  std::vector<double> min_rate_bps;      // length n_users, entries >= 0
  std::vector<double> fairness_weights;  // length n_users, entries > 0

  // Users split the band evenly; per-user rate = SE * this.
  double per_user_bandwidth_hz() const { return bandwidth_hz / n_users; }

  // Throws ConfigError naming the offending field.
  void validate() const;

  // Convenience constructor: the bundled band/power/noise defaults with
  // zero minimum rates and unit fairness weights.
  static SystemConfig make(int n_tx, int n_users);
};

// Health scores in [0,1] per antenna-to-chain connection. 0 = failed,
// 1 = fully healthy. Row-constant when built from a per-antenna vector.
struct ReliabilityMatrix {
  Eigen::MatrixXd beta;

  // Validates every entry lies in [0,1].
  static ReliabilityMatrix from_matrix(Eigen::MatrixXd values);
  static ReliabilityMatrix from_per_antenna(const Eigen::VectorXd& per_antenna,
                                            int n_users);
};

enum class ReliabilityScheme { per_antenna_uniform, from_file };

struct ReliabilitySpec {
  ReliabilityScheme scheme = ReliabilityScheme::per_antenna_uniform;
  std::string path;  // only for from_file
};

// Config file contents: the physical scenario plus how to obtain beta.
struct LoadedConfig {
  SystemConfig system;
  ReliabilitySpec reliability;
};

// i.i.d. CN(0,1) entries (real and imaginary parts each N(0, 1/2)),
// filled column by column. Pure function of (config, seed): identical
// inputs give bit-identical matrices.
ChannelMatrix generate_channel(const SystemConfig& config, std::uint64_t seed);

// per_antenna_uniform: beta'_i ~ U[0,1] per antenna, replicated across the
// user columns. from_file: reads `path` (seed unused). Deterministic.
ReliabilityMatrix generate_reliability(
    const SystemConfig& config, std::uint64_t seed,
    ReliabilityScheme scheme = ReliabilityScheme::per_antenna_uniform,
    const std::string& path = {});

// CSV with n_tx data rows: either a single column of per-antenna values
// (replicated across users) or n_users columns. A leading non-numeric line
// is treated as a header and skipped. Values outside [0,1] are rejected.
ReliabilityMatrix load_reliability_csv(const std::string& path,
                                       const SystemConfig& config);

// Flat JSON with snake_case keys; unknown keys are rejected. Defaults:
// noise_variance 1.0, min_rate_bps 0 per user, fairness_weights 1 per user,
// reliability scheme per_antenna_uniform. See README for the schema.
LoadedConfig load_config(const std::string& path);

}  // namespace beamsculpt
