#include "beamsculpt/objective.hpp"

#include <cmath>
#include <stdexcept>

namespace beamsculpt {

namespace {

void check_shapes(const BeamformingMatrix& w, const ChannelMatrix& h) {
  if (w.rows() != h.rows() || w.cols() != h.cols())
    throw std::invalid_argument("beamformer and channel shapes differ");
}

void check_user(const ChannelMatrix& h, int m) {
  if (m < 0 || m >= h.cols()) throw std::out_of_range("user index out of range");
}

void check_duals(const DualState& duals, int n_users) {
  if (duals.lambda1.size() != n_users || duals.lambda2.size() != n_users)
    throw std::invalid_argument("dual vectors must have one entry per user");
}

}  // namespace

DualState DualState::zeros(int n_users) {
  DualState d;
  d.lambda1 = Eigen::VectorXd::Zero(n_users);
  d.lambda2 = Eigen::VectorXd::Zero(n_users);
  d.mu = 0.0;
  return d;
}

Eigen::VectorXd effective_weights(const SystemConfig& config,
                                  const DualState& duals) {
  check_duals(duals, config.n_users);
  Eigen::VectorXd omega(config.n_users);
  for (int j = 0; j < config.n_users; ++j)
    omega(j) = config.fairness_weights[static_cast<size_t>(j)] + duals.lambda1(j) -
               duals.lambda2(j);
  return omega;
}

Eigen::VectorXd min_rates_nats(const SystemConfig& config) {
  const double per_user_bw = config.per_user_bandwidth_hz();
  Eigen::VectorXd r(config.n_users);
  for (int j = 0; j < config.n_users; ++j)
    r(j) = M_LN2 * config.min_rate_bps[static_cast<size_t>(j)] / per_user_bw;
  return r;
}

double sinr(const BeamformingMatrix& w, const ChannelMatrix& h,
            double noise_variance, int m) {
  check_shapes(w, h);
  check_user(h, m);
  if (!(noise_variance > 0.0)) throw std::invalid_argument("noise_variance must be > 0");
  const Eigen::RowVectorXcd row = h.col(m).adjoint() * w;  // h_m^H w_j for all j
  double interference = noise_variance;
  for (Eigen::Index j = 0; j < row.size(); ++j)
    if (j != m) interference += std::norm(row(j));
  return std::norm(row(m)) / interference;
}

double user_rate_nats(const BeamformingMatrix& w, const ChannelMatrix& h,
                      double noise_variance, int m) {
  return std::log1p(sinr(w, h, noise_variance, m));
}

Eigen::VectorXd user_rates_nats(const BeamformingMatrix& w,
                                const ChannelMatrix& h, double noise_variance) {
  check_shapes(w, h);
  const Eigen::Index m_users = w.cols();
  // Delegates per user so rates(j) reproduces user_rate_nats bit for bit.
  Eigen::VectorXd rates(m_users);
  for (Eigen::Index m = 0; m < m_users; ++m)
    rates(m) = user_rate_nats(w, h, noise_variance, static_cast<int>(m));
  return rates;
}

double smooth_value(const BeamformingMatrix& w, const ChannelMatrix& h,
                    const SystemConfig& config, const DualState& duals) {
  check_shapes(w, h);
  const Eigen::VectorXd omega = effective_weights(config, duals);
  const Eigen::VectorXd rates = user_rates_nats(w, h, config.noise_variance);
  return omega.dot(rates) - duals.mu * (w.squaredNorm() - config.power_budget);
}

BeamformingMatrix smooth_gradient(const BeamformingMatrix& w,
                                  const ChannelMatrix& h,
                                  const SystemConfig& config,
                                  const DualState& duals) {
  check_shapes(w, h);
  const Eigen::VectorXd omega = effective_weights(config, duals);
  const Eigen::Index m_users = w.cols();
  const Eigen::MatrixXcd cross = h.adjoint() * w;  // cross(m, j) = h_m^H w_j

  // t(m, i) collects the scalar factor multiplying h_m in column i.
  Eigen::MatrixXcd t(m_users, m_users);
  for (Eigen::Index m = 0; m < m_users; ++m) {
    double den = config.noise_variance;
    for (Eigen::Index j = 0; j < m_users; ++j)
      if (j != m) den += std::norm(cross(m, j));
    const double gamma = std::norm(cross(m, m)) / den;
    const double signal_coeff = omega(m) / ((1.0 + gamma) * den);
    const double interf_coeff = signal_coeff * gamma;
    for (Eigen::Index i = 0; i < m_users; ++i)
      t(m, i) = (i == m) ? signal_coeff * cross(m, m) : -interf_coeff * cross(m, i);
  }
  return 2.0 * (h * t - duals.mu * w);
}

ConstraintResiduals constraint_residuals(const BeamformingMatrix& w,
                                         const ChannelMatrix& h,
                                         const SystemConfig& config) {
  check_shapes(w, h);
  ConstraintResiduals res;
  res.rate_slack_nats =
      user_rates_nats(w, h, config.noise_variance) - min_rates_nats(config);
  res.power_slack = config.power_budget - w.squaredNorm();
  return res;
}

}  // namespace beamsculpt
