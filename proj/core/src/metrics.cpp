#include "beamsculpt/metrics.hpp"

#include <cmath>
#include <stdexcept>

#include "beamsculpt/objective.hpp"

namespace beamsculpt {

double spectral_efficiency(const BeamformingMatrix& w, const ChannelMatrix& h,
                           const SystemConfig& config) {
  const Eigen::VectorXd rates = user_rates_nats(w, h, config.noise_variance);
  return rates.sum() / (M_LN2 * config.n_users);
}

double beamforming_density(const BeamformingMatrix& w, double zero_tol) {
  const double peak = w.cwiseAbs().maxCoeff();
  if (peak == 0.0) return 0.0;
  const double cutoff = zero_tol * peak;
  Eigen::Index active = 0;
  for (Eigen::Index j = 0; j < w.cols(); ++j)
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      if (std::abs(w(i, j)) > cutoff) ++active;
  return 100.0 * static_cast<double>(active) /
         static_cast<double>(w.size());
}

double reliability_score(const BeamformingMatrix& w, const Eigen::MatrixXd& beta,
                         const MetricsParams& params) {
  if (w.rows() != beta.rows() || w.cols() != beta.cols())
    throw std::invalid_argument("beamformer and reliability shapes differ");
  const double peak = w.cwiseAbs().maxCoeff();
  const double cutoff = params.zero_tol * peak;
  Eigen::Index unreliable = 0;
  Eigen::Index silenced = 0;
  for (Eigen::Index j = 0; j < w.cols(); ++j)
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      if (beta(i, j) >= params.reliability_threshold) continue;
      ++unreliable;
      if (peak == 0.0 || std::abs(w(i, j)) <= cutoff) ++silenced;
    }
  if (unreliable == 0) return 100.0;
  return 100.0 * static_cast<double>(silenced) / static_cast<double>(unreliable);
}

double power_used(const BeamformingMatrix& w) { return w.squaredNorm(); }

MetricsReport compute_metrics(const BeamformingMatrix& w, const ChannelMatrix& h,
                              const Eigen::MatrixXd& beta,
                              const SystemConfig& config,
                              const MetricsParams& params) {
  MetricsReport rep;
  const Eigen::VectorXd rates = user_rates_nats(w, h, config.noise_variance);
  const double per_user_bw = config.per_user_bandwidth_hz();
  rep.ri_bps.resize(static_cast<size_t>(config.n_users));
  double se = 0.0;
  for (int j = 0; j < config.n_users; ++j) {
    const double se_j = rates(j) / M_LN2;
    se += se_j;
    rep.ri_bps[static_cast<size_t>(j)] = se_j * per_user_bw;
  }
  rep.se_bps_hz = se / config.n_users;
  // Computed as SE * per-user bandwidth so the identity holds bit for bit.
  rep.ri_avg_bps = rep.se_bps_hz * per_user_bw;
  rep.rl_percent = reliability_score(w, beta, params);
  rep.bmd_percent = beamforming_density(w, params.zero_tol);
  rep.pw_watts = power_used(w);
  return rep;
}

AggregateReport aggregate(const std::vector<MetricsReport>& reports) {
  if (reports.empty())
    throw std::invalid_argument("aggregate requires at least one report");
  struct Welford {
    long long n = 0;
    double mean = 0.0;
    double m2 = 0.0;
    void add(double x) {
      ++n;
      const double d = x - mean;
      mean += d / static_cast<double>(n);
      m2 += d * (x - mean);
    }
    MetricStats stats() const {
      MetricStats s;
      s.mean = (n > 0) ? mean : 0.0;
      s.stddev = (n > 1) ? std::sqrt(m2 / static_cast<double>(n - 1)) : 0.0;
      return s;
    }
  };
  Welford se, ri, rl, bmd, pw;
  for (const auto& r : reports) {
    se.add(r.se_bps_hz);
    ri.add(r.ri_avg_bps);
    rl.add(r.rl_percent);
    bmd.add(r.bmd_percent);
    pw.add(r.pw_watts);
  }
  AggregateReport agg;
  agg.n_runs = static_cast<int>(reports.size());
  agg.se = se.stats();
  agg.ri = ri.stats();
  agg.rl = rl.stats();
  agg.bmd = bmd.stats();
  agg.pw = pw.stats();
  return agg;
}

}  // namespace beamsculpt
