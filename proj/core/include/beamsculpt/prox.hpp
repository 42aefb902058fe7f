#pragma once

#include "beamsculpt/model.hpp"

namespace beamsculpt {

// Reliability-weighted sparsity penalty rho_s * sum_{ij} (1 - beta_ij) |w_ij|.
struct PenaltyParams {
  double sparsity_weight = 0.0;  // rho_s; the sweep's gamma knob
  Eigen::MatrixXd beta;          // n_tx x n_users health scores in [0,1]

  PenaltyParams() = default;
  PenaltyParams(double sparsity_weight, const ReliabilityMatrix& reliability);
};

double penalty_value(const BeamformingMatrix& w, const PenaltyParams& params);

// Scalar complex soft threshold: x * max(0, 1 - kappa/|x|), exactly zero
// when |x| <= kappa (ties map to zero). On the real line this is the usual
// three-branch shrink; magnitude shrinkage is its exact complex prox.
Complex soft_threshold(Complex x, double kappa);

// prox of step * penalty at x: elementwise soft threshold with per-entry
// threshold kappa_ij = step * rho_s * (1 - beta_ij). Nonexpansive, phase
// preserving, identity when rho_s = 0.
BeamformingMatrix prox_step(const BeamformingMatrix& x, double step,
                            const PenaltyParams& params);

}  // namespace beamsculpt
