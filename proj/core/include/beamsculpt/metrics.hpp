#pragma once

#include <vector>

#include "beamsculpt/model.hpp"

namespace beamsculpt {

struct MetricsParams {
  // Entries with |w_ij| <= zero_tol * max|w| count as carrying no power.
  double zero_tol = 1e-6;
  // Connections with beta below this count as unreliable for RL.
  double reliability_threshold = 0.5;
};

struct MetricsReport {
  double se_bps_hz = 0.0;      // per-user average log2(1+gamma), bps/Hz
  std::vector<double> ri_bps;  // per-user rate, bit/s
  double ri_avg_bps = 0.0;     // se_bps_hz * (bandwidth / n_users), exactly
  double rl_percent = 0.0;     // artifact-defined reliability score, [0,100]
  double bmd_percent = 0.0;    // beamforming matrix density, [0,100]
  double pw_watts = 0.0;       // trace(ww^H) at the reported iterate
};

// (1/M) sum_j log2(1 + gamma_j)
double spectral_efficiency(const BeamformingMatrix& w, const ChannelMatrix& h,
                           const SystemConfig& config);

// 100 * |{(i,j): |w_ij| > zero_tol * max|w|}| / (n_tx * n_users); 0 for w = 0.
double beamforming_density(const BeamformingMatrix& w, double zero_tol);

// Percentage of unreliable connections (beta_ij < reliability_threshold)
// that carry no power; 100 when no connection is unreliable.
double reliability_score(const BeamformingMatrix& w, const Eigen::MatrixXd& beta,
                         const MetricsParams& params = {});

// trace(ww^H) = sum |w_ij|^2, watts.
double power_used(const BeamformingMatrix& w);

MetricsReport compute_metrics(const BeamformingMatrix& w,
                              const ChannelMatrix& h,
                              const Eigen::MatrixXd& beta,
                              const SystemConfig& config,
                              const MetricsParams& params = {});

struct MetricStats {
  double mean = 0.0;
  double stddev = 0.0;  // (n-1)-denominator; 0 for a single sample
};

struct AggregateReport {
  int n_runs = 0;
  MetricStats se;   // se_bps_hz
  MetricStats ri;   // ri_avg_bps
  MetricStats rl;   // rl_percent
  MetricStats bmd;  // bmd_percent
  MetricStats pw;   // pw_watts
};

// Sample mean and standard deviation per metric. Throws on an empty list.
AggregateReport aggregate(const std::vector<MetricsReport>& reports);

}  // namespace beamsculpt
