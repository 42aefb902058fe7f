#include "beamsculpt/solver.hpp"

#include <cmath>
#include <stdexcept>
#include <string>

#include "rand_detail.hpp"

namespace beamsculpt {

namespace {

// Re<G, D> with the real-pair pairing: sum of ReG.*ReD + ImG.*ImD.
double real_inner(const BeamformingMatrix& g, const BeamformingMatrix& d) {
  return g.real().cwiseProduct(d.real()).sum() +
         g.imag().cwiseProduct(d.imag()).sum();
}

void check_problem(const ChannelMatrix& h, const PenaltyParams& penalty,
                   const SystemConfig& config) {
  if (h.rows() != config.n_tx || h.cols() != config.n_users)
    throw std::invalid_argument("channel shape does not match config");
  if (penalty.beta.rows() != config.n_tx || penalty.beta.cols() != config.n_users)
    throw std::invalid_argument("reliability shape does not match config");
}

}  // namespace

void SolverParams::validate() const {
  if (!(eta_x_init > 0.0)) throw std::invalid_argument("eta_x_init must be > 0");
  if (!(dual_step > 0.0)) throw std::invalid_argument("dual_step must be > 0");
  if (!(backtrack_shrink > 0.0 && backtrack_shrink < 1.0))
    throw std::invalid_argument("backtrack_shrink must be in (0, 1)");
  if (max_iters < 1) throw std::invalid_argument("max_iters must be >= 1");
  if (max_backtracks < 1) throw std::invalid_argument("max_backtracks must be >= 1");
  if (!(tolerance > 0.0)) throw std::invalid_argument("tolerance must be > 0");
  if (!(lambda1_init >= 0.0)) throw std::invalid_argument("lambda1_init must be >= 0");
  if (!(lambda2_init >= 0.0)) throw std::invalid_argument("lambda2_init must be >= 0");
  if (!(mu_init >= 0.0)) throw std::invalid_argument("mu_init must be >= 0");
}

BeamformingMatrix initialize_primal(const SystemConfig& config, uint64_t seed) {
  auto rng = detail::make_rng(seed, detail::kPrimalStream);
  BeamformingMatrix w(config.n_tx, config.n_users);
  for (Eigen::Index j = 0; j < w.cols(); ++j)
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      w(i, j) = detail::complex_gaussian(rng);
  const double trace = w.squaredNorm();
  if (trace > 0.0) w *= std::sqrt(config.power_budget / trace);
  return w;
}

PrimalStep primal_update(const BeamformingMatrix& w, const DualState& duals,
                         const ChannelMatrix& h, const PenaltyParams& penalty,
                         const SystemConfig& config, const SolverParams& params) {
  const BeamformingMatrix grad = smooth_gradient(w, h, config, duals);
  if (!grad.allFinite())
    throw SolverAbort("smooth gradient is not finite");
  const double f_w = smooth_value(w, h, config, duals);

  double eta = params.eta_x_init;
  PrimalStep out;
  for (int b = 0;; ++b) {
    BeamformingMatrix z = prox_step(w + eta * grad, eta, penalty);
    const BeamformingMatrix diff = z - w;
    const double f_z = smooth_value(z, h, config, duals);
    const double bound =
        f_w + real_inner(grad, diff) - diff.squaredNorm() / (2.0 * eta);
    const bool ok = std::isfinite(f_z) && f_z >= bound;
    if (ok || b >= params.max_backtracks) {
      out.w = std::move(z);
      out.eta = eta;
      out.backtracks = b;
      out.exhausted = !ok;
      return out;
    }
    eta *= params.backtrack_shrink;
  }
}

void dual_update(DualState& duals, const Eigen::VectorXd& rates_nats,
                 double power, const SystemConfig& config,
                 const SolverParams& params) {
  const Eigen::VectorXd rmin = min_rates_nats(config);
  duals.lambda1 =
      (duals.lambda1 + params.dual_step * (rmin - rates_nats)).cwiseMax(0.0);
  if (params.enable_lambda2)
    duals.lambda2 =
        (duals.lambda2 - params.dual_step * rates_nats).cwiseMax(0.0);
  duals.mu = std::max(
      0.0, duals.mu + params.dual_step * (power - config.power_budget));
}

SolveResult solve(const ChannelMatrix& h, const PenaltyParams& penalty,
                  const SystemConfig& config, const SolverParams& params,
                  uint64_t seed) {
  config.validate();
  params.validate();
  check_problem(h, penalty, config);

  BeamformingMatrix w = initialize_primal(config, seed);
  DualState duals;
  duals.lambda1 = Eigen::VectorXd::Constant(config.n_users, params.lambda1_init);
  duals.lambda2 = params.enable_lambda2
                      ? Eigen::VectorXd::Constant(config.n_users, params.lambda2_init)
                      : Eigen::VectorXd::Zero(config.n_users);
  duals.mu = params.mu_init;

  SolveResult result;
  result.trace.records.reserve(static_cast<size_t>(params.max_iters));
  result.converged = false;
  result.iterations = 0;

  for (int k = 1; k <= params.max_iters; ++k) {
    PrimalStep step;
    try {
      step = primal_update(w, duals, h, penalty, config, params);
    } catch (const SolverAbort& e) {
      throw SolverAbort(std::string(e.what()) + " at iteration " + std::to_string(k));
    }

    const double primal_change = (step.w - w).norm();
    const Eigen::VectorXd rates = user_rates_nats(step.w, h, config.noise_variance);
    const double power = step.w.squaredNorm();
    const double smooth_new = smooth_value(step.w, h, config, duals);
    const double pen = penalty_value(step.w, penalty);

    dual_update(duals, rates, power, config, params);

    IterateRecord rec;
    rec.iter = k;
    rec.smooth = smooth_new;
    rec.penalty = pen;
    double weighted = 0.0;
    for (int j = 0; j < config.n_users; ++j)
      weighted += config.fairness_weights[static_cast<size_t>(j)] * rates(j);
    rec.objective = weighted - pen;
    rec.rates_nats = rates;
    rec.power = power;
    rec.lambda1 = duals.lambda1;
    rec.lambda2 = duals.lambda2;
    rec.mu = duals.mu;
    rec.eta = step.eta;
    rec.backtracks = step.backtracks;
    rec.primal_change = primal_change;
    result.trace.records.push_back(std::move(rec));

    w = std::move(step.w);
    result.iterations = k;
    if (primal_change < params.tolerance) {
      result.converged = true;
      break;
    }
  }

  result.w_final = std::move(w);
  result.duals_final = std::move(duals);
  return result;
}

}  // namespace beamsculpt
