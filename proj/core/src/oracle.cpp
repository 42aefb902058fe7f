#include "beamsculpt/oracle.hpp"

#include <cmath>
#include <stdexcept>

#include "beamsculpt/prox.hpp"
#include "rand_detail.hpp"

namespace beamsculpt {

BeamformingMatrix fd_gradient(const BeamformingMatrix& w, const ChannelMatrix& h,
                              const SystemConfig& config, const DualState& duals,
                              double step) {
  if (!(step > 0.0)) throw std::invalid_argument("step must be > 0");
  BeamformingMatrix g(w.rows(), w.cols());
  BeamformingMatrix probe = w;
  for (Eigen::Index j = 0; j < w.cols(); ++j)
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      const Complex orig = probe(i, j);
      probe(i, j) = orig + Complex(step, 0.0);
      const double fp_re = smooth_value(probe, h, config, duals);
      probe(i, j) = orig - Complex(step, 0.0);
      const double fm_re = smooth_value(probe, h, config, duals);
      probe(i, j) = orig + Complex(0.0, step);
      const double fp_im = smooth_value(probe, h, config, duals);
      probe(i, j) = orig - Complex(0.0, step);
      const double fm_im = smooth_value(probe, h, config, duals);
      probe(i, j) = orig;
      g(i, j) = Complex((fp_re - fm_re) / (2.0 * step),
                        (fp_im - fm_im) / (2.0 * step));
    }
  return g;
}

GradCheckReport grad_check(const BeamformingMatrix& w, const ChannelMatrix& h,
                           const SystemConfig& config, const DualState& duals,
                           double step) {
  const BeamformingMatrix analytic = smooth_gradient(w, h, config, duals);
  const BeamformingMatrix numeric = fd_gradient(w, h, config, duals, step);
  const double scale = analytic.norm() + 1e-12;

  GradCheckReport rep;
  rep.max_abs_error = 0.0;
  rep.max_rel_error = 0.0;
  rep.worst_row = 0;
  rep.worst_col = 0;
  rep.worst_is_imag = false;
  rep.fd_step = step;
  for (Eigen::Index j = 0; j < w.cols(); ++j)
    for (Eigen::Index i = 0; i < w.rows(); ++i) {
      const double err_re = std::abs(analytic(i, j).real() - numeric(i, j).real());
      const double err_im = std::abs(analytic(i, j).imag() - numeric(i, j).imag());
      if (err_re > rep.max_abs_error) {
        rep.max_abs_error = err_re;
        rep.worst_row = static_cast<int>(i);
        rep.worst_col = static_cast<int>(j);
        rep.worst_is_imag = false;
      }
      if (err_im > rep.max_abs_error) {
        rep.max_abs_error = err_im;
        rep.worst_row = static_cast<int>(i);
        rep.worst_col = static_cast<int>(j);
        rep.worst_is_imag = true;
      }
    }
  rep.max_rel_error = rep.max_abs_error / scale;
  return rep;
}

GradCheckInstance make_gradcheck_instance(int n_tx, int n_users, uint64_t seed) {
  GradCheckInstance inst;
  inst.config = SystemConfig::make(n_tx, n_users);
  auto rng = detail::make_rng(seed, detail::kCheckStream);
  inst.h = ChannelMatrix(n_tx, n_users);
  inst.w = BeamformingMatrix(n_tx, n_users);
  for (Eigen::Index j = 0; j < n_users; ++j)
    for (Eigen::Index i = 0; i < n_tx; ++i)
      inst.h(i, j) = Complex(detail::uniform(rng, -2.0, 2.0),
                             detail::uniform(rng, -2.0, 2.0));
  for (Eigen::Index j = 0; j < n_users; ++j)
    for (Eigen::Index i = 0; i < n_tx; ++i)
      inst.w(i, j) = Complex(detail::uniform(rng, -2.0, 2.0),
                             detail::uniform(rng, -2.0, 2.0));
  inst.duals.lambda1 = Eigen::VectorXd(n_users);
  inst.duals.lambda2 = Eigen::VectorXd(n_users);
  for (int j = 0; j < n_users; ++j) {
    inst.duals.lambda1(j) = detail::uniform01(rng);
    inst.duals.lambda2(j) = detail::uniform01(rng);
  }
  inst.duals.mu = detail::uniform01(rng);
  return inst;
}

Complex brute_force_prox_scalar(Complex x, double kappa) {
  // The objective kappa*|z| + |z - x|^2/2 is minimized on the ray through x:
  // writing z = t * x/|x| with t >= 0, any off-ray candidate with the same
  // modulus has a strictly larger distance to x, so a 1-d scan suffices.
  if (kappa <= 0.0) return x;
  const double mag = std::abs(x);
  if (mag == 0.0) return Complex(0.0, 0.0);
  const Complex dir = x / mag;

  auto cost = [&](double t) {
    const Complex z = t * dir;
    return kappa * t + 0.5 * std::norm(z - x);
  };

  double best_t = 0.0;
  double best_cost = cost(0.0);
  const int grid = 10000;
  for (int k = 1; k <= grid; ++k) {
    const double t = mag * static_cast<double>(k) / grid;
    const double c = cost(t);
    if (c < best_cost) {
      best_cost = c;
      best_t = t;
    }
  }
  // Refine around the grid winner with a shrinking three-point search.
  double lo = std::max(0.0, best_t - mag / grid);
  double hi = std::min(mag, best_t + mag / grid);
  for (int pass = 0; pass < 100; ++pass) {
    const double m1 = lo + (hi - lo) / 3.0;
    const double m2 = hi - (hi - lo) / 3.0;
    if (cost(m1) < cost(m2))
      hi = m2;
    else
      lo = m1;
  }
  best_t = 0.5 * (lo + hi);
  if (cost(0.0) <= cost(best_t)) best_t = 0.0;
  return best_t * dir;
}

ProxCheckReport prox_check(int samples, uint64_t seed) {
  if (samples < 1) throw std::invalid_argument("samples must be >= 1");
  auto rng = detail::make_rng(seed, detail::kCheckStream);
  ProxCheckReport rep;
  rep.samples = samples;
  rep.max_abs_deviation = 0.0;
  for (int s = 0; s < samples; ++s) {
    const Complex x(detail::uniform(rng, -2.0, 2.0),
                    detail::uniform(rng, -2.0, 2.0));
    const double kappa = detail::uniform(rng, 0.0, 2.0);
    const Complex fast = soft_threshold(x, kappa);
    const Complex slow = brute_force_prox_scalar(x, kappa);
    rep.max_abs_deviation =
        std::max(rep.max_abs_deviation, std::abs(fast - slow));
  }
  return rep;
}

SingleUserOptimum single_user_optimum(const Eigen::VectorXcd& h_vec,
                                      double power_budget,
                                      double noise_variance) {
  if (!(power_budget > 0.0)) throw std::invalid_argument("power_budget must be > 0");
  if (!(noise_variance > 0.0)) throw std::invalid_argument("noise_variance must be > 0");
  const double hn = h_vec.norm();
  if (hn == 0.0) throw std::invalid_argument("channel vector must be nonzero");
  SingleUserOptimum opt;
  // Matched filter at full power maximizes |h^H w|^2 under ||w||^2 <= P.
  opt.w_star = std::sqrt(power_budget) / hn * h_vec;
  opt.rate_nats = std::log1p(power_budget * hn * hn / noise_variance);
  return opt;
}

}  // namespace beamsculpt
