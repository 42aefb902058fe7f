#pragma once

#include <cstdint>

#include "beamsculpt/objective.hpp"

namespace beamsculpt {

// Independent verification utilities. Everything here recomputes results by
// a route disjoint from the implementation it checks.

struct GradCheckReport {
  double max_abs_error = 0.0;
  // Per-coordinate error normalized by ||analytic gradient||_F + 1e-12.
  double max_rel_error = 0.0;
  int worst_row = 0;
  int worst_col = 0;
  bool worst_is_imag = false;
  double fd_step = 0.0;
};

// Central finite differences of smooth_value over every real and imaginary
// coordinate, assembled in the same real-pair convention as smooth_gradient.
// Steps in [1e-8, 1e-3] balance truncation against roundoff; other positive
// steps are accepted with degraded accuracy.
BeamformingMatrix fd_gradient(const BeamformingMatrix& w,
                              const ChannelMatrix& h,
                              const SystemConfig& config,
                              const DualState& duals, double step);

GradCheckReport grad_check(const BeamformingMatrix& w, const ChannelMatrix& h,
                           const SystemConfig& config, const DualState& duals,
                           double step);

// Random instance for gradient checks: w and h entries with real/imag parts
// uniform in [-2, 2], duals uniform in [0, 1]. Deterministic under seed.
struct GradCheckInstance {
  BeamformingMatrix w;
  ChannelMatrix h;
  SystemConfig config;
  DualState duals;
};
GradCheckInstance make_gradcheck_instance(int n_tx, int n_users,
                                          std::uint64_t seed);

// Minimizes kappa |z| + |z - x|^2 / 2 by a 1-D radial grid search with step
// 1e-4 |x| plus a refinement pass around the coarse minimum. For fixed |z|,
// |z - x|^2 is smallest when z aligns with x, so the minimizer lies on the
// ray from the origin through x and the radial reduction is exact.
Complex brute_force_prox_scalar(Complex x, double kappa);

// Closed-form soft threshold vs the brute-force prox on random (x, kappa):
// real/imag of x uniform in [-2, 2], kappa uniform in [0, 2].
struct ProxCheckReport {
  int samples = 0;
  double max_abs_deviation = 0.0;
};
ProxCheckReport prox_check(int samples, std::uint64_t seed);

// Matched filter: w* = sqrt(P) h / ||h||, rate = ln(1 + P ||h||^2 / sigma^2).
// Throws std::invalid_argument on a zero channel.
struct SingleUserOptimum {
  Eigen::VectorXcd w_star;
  double rate_nats = 0.0;
};
SingleUserOptimum single_user_optimum(const Eigen::VectorXcd& h_vec,
                                      double power_budget,
                                      double noise_variance);

}  // namespace beamsculpt
