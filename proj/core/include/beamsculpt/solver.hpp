#pragma once

#include <cstdint>
#include <vector>

#include "beamsculpt/objective.hpp"
#include "beamsculpt/prox.hpp"

namespace beamsculpt {

struct SolverParams {
  double eta_x_init = 0.025;      // primal step, reset every outer iteration
  double dual_step = 0.025;       // alpha in the multiplier updates
  double backtrack_shrink = 0.5;  // eta <- shrink * eta on a failed trial
  int max_iters = 3000;
  int max_backtracks = 50;
  double tolerance = 1e-12;  // on ||x^{k+1} - x^k||_F
  double lambda1_init = 0.04;
  double lambda2_init = 0.06;
  double mu_init = 0.05;
  bool enable_lambda2 = true;  // off: lambda2 pinned at zero

  void validate() const;  // throws ConfigError
};

struct IterateRecord {
  int iter = 0;
  // Primal objective at the new iterate: sum_j rho_j ln(1+gamma_j) - penalty.
  double objective = 0.0;
  // smooth_value at the new iterate under the duals used for the step.
  double smooth = 0.0;
  double penalty = 0.0;
  Eigen::VectorXd rates_nats;  // at the new iterate
  double power = 0.0;          // ||x^{k+1}||_F^2
  Eigen::VectorXd lambda1;     // duals after this iteration's update
  Eigen::VectorXd lambda2;
  double mu = 0.0;
  double eta = 0.0;  // accepted primal step size
  int backtracks = 0;
  double primal_change = 0.0;  // ||x^{k+1} - x^k||_F
};

struct IterateTrace {
  std::vector<IterateRecord> records;  // one per outer iteration
};

struct SolveResult {
  BeamformingMatrix w_final;
  DualState duals_final;
  IterateTrace trace;
  bool converged = false;  // implies final primal_change < tolerance
  int iterations = 0;
};

// Complex Gaussian entries rescaled so trace(ww^H) = P_t (feasible start).
// Deterministic under (config, seed).
BeamformingMatrix initialize_primal(const SystemConfig& config,
                                    std::uint64_t seed);

struct PrimalStep {
  BeamformingMatrix w;
  double eta = 0.0;
  int backtracks = 0;
  bool exhausted = false;  // max_backtracks hit; last trial accepted anyway
};

// One backtracking proximal-gradient ascent step at fixed duals. Trials
// z(eta) = prox_step(w + eta * G, eta) starting from eta_x_init; eta shrinks
// until the sufficient-increase test
//
//   F(z) >= F(w) + Re<G, z - w> - ||z - w||_F^2 / (2 eta)
//
// holds, certifying the step improves the quadratic model of F. The prox
// threshold uses the current trial eta. Throws SolverAbort on a non-finite
// gradient.
PrimalStep primal_update(const BeamformingMatrix& w, const DualState& duals,
                         const ChannelMatrix& h, const PenaltyParams& penalty,
                         const SystemConfig& config, const SolverParams& params);

// Projected dual subgradient step in place, evaluated at the new primal
// iterate:
//   lambda1_j <- max(0, lambda1_j + alpha (Rmin_j - r_j))
//   lambda2_j <- max(0, lambda2_j - alpha r_j)        [enable_lambda2]
//   mu        <- max(0, mu + alpha (power - P_t))
// lambda1 and mu ascend toward constraint violation; lambda2 keeps its
// literal companion update, which decays to zero for positive rates.
void dual_update(DualState& duals, const Eigen::VectorXd& rates_nats,
                 double power, const SystemConfig& config,
                 const SolverParams& params);

// Full run: alternates primal_update and dual_update until the primal change
// falls below tolerance or max_iters is reached. Deterministic under
// (h, penalty, config, params, seed). Throws SolverAbort (with the iteration
// index) if non-finite values appear.
SolveResult solve(const ChannelMatrix& h, const PenaltyParams& penalty,
                  const SystemConfig& config, const SolverParams& params,
                  std::uint64_t seed);

}  // namespace beamsculpt
