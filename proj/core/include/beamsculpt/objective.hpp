#pragma once

#include "beamsculpt/model.hpp"

namespace beamsculpt {

// Lagrange multipliers. Projected dual ascent keeps every entry >= 0.
struct DualState {
  Eigen::VectorXd lambda1;  // per-user minimum-rate multipliers
  Eigen::VectorXd lambda2;  // per-user companion multipliers (see solver)
  double mu = 0.0;          // power multiplier

  static DualState zeros(int n_users);
};

// omega_j = rho_j + lambda1_j - lambda2_j. Recomputed on demand, never cached.
Eigen::VectorXd effective_weights(const SystemConfig& config,
                                  const DualState& duals);

// Per-user minimum rates in the optimizer's nat units:
// ln(2) * min_rate_bps_j / (bandwidth_hz / n_users).
Eigen::VectorXd min_rates_nats(const SystemConfig& config);

// gamma_m = |h_m^H w_m|^2 / (sum_{j != m} |h_m^H w_j|^2 + sigma^2)
double sinr(const BeamformingMatrix& w, const ChannelMatrix& h,
            double noise_variance, int m);

// ln(1 + gamma_m). Natural log throughout the optimizer; base-2 conversion
// happens only in metrics.
double user_rate_nats(const BeamformingMatrix& w, const ChannelMatrix& h,
                      double noise_variance, int m);

// All users at once; rates(j) == user_rate_nats(w, h, noise, j).
Eigen::VectorXd user_rates_nats(const BeamformingMatrix& w,
                                const ChannelMatrix& h, double noise_variance);

// Smooth part of the dual-weighted objective:
//
//   F(w) = sum_j omega_j ln(1 + gamma_j) - mu (||w||_F^2 - P_t)
//
// Terms constant in w (the lambda1 * Rmin offsets) are omitted;
// smooth_gradient differentiates exactly this F, so the pair stays
// consistent.
double smooth_value(const BeamformingMatrix& w, const ChannelMatrix& h,
                    const SystemConfig& config, const DualState& duals);

// Gradient of smooth_value in the real-pair convention: entry (i,j) equals
// dF/dRe(w_ij) + i dF/dIm(w_ij), i.e. twice the conjugate Wirtinger
// derivative. Under this convention the power term contributes exactly
// -2 mu w, so the ascent step w + eta * G matches the solver's update rule
// with no extra scaling. Verified against central finite differences.
//
// Columnwise, with cross(m,j) = h_m^H w_j and D_m the interference-plus-
// noise denominator of user m:
//
//   G[:,i] = 2 [ omega_i / ((1+gamma_i) D_i) h_i cross(i,i)
//                - sum_{m != i} omega_m gamma_m / ((1+gamma_m) D_m)
//                                h_m cross(m,i)
//                - mu w_i ]
//
// The cross term carries the negative sign because growing |h_m^H w_i|
// raises user m's interference and lowers gamma_m.
BeamformingMatrix smooth_gradient(const BeamformingMatrix& w,
                                  const ChannelMatrix& h,
                                  const SystemConfig& config,
                                  const DualState& duals);

struct ConstraintResiduals {
  Eigen::VectorXd rate_slack_nats;  // ln(1+gamma_j) - Rmin_j; positive = met
  double power_slack = 0.0;         // P_t - ||w||_F^2; positive = met
};

ConstraintResiduals constraint_residuals(const BeamformingMatrix& w,
                                         const ChannelMatrix& h,
                                         const SystemConfig& config);

}  // namespace beamsculpt
