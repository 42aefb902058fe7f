#include "beamsculpt/prox.hpp"

#include <cmath>
#include <stdexcept>

namespace beamsculpt {

PenaltyParams::PenaltyParams(double sparsity_weight_in,
                             const ReliabilityMatrix& reliability)
    : sparsity_weight(sparsity_weight_in), beta(reliability.beta) {
  if (!(sparsity_weight >= 0.0))
    throw std::invalid_argument("sparsity_weight must be >= 0");
}

double penalty_value(const BeamformingMatrix& w, const PenaltyParams& params) {
  if (w.rows() != params.beta.rows() || w.cols() != params.beta.cols())
    throw std::invalid_argument("beamformer and reliability shapes differ");
  double total = 0.0;
  for (Eigen::Index j = 0; j < w.cols(); ++j)
    for (Eigen::Index i = 0; i < w.rows(); ++i)
      total += (1.0 - params.beta(i, j)) * std::abs(w(i, j));
  return params.sparsity_weight * total;
}

Complex soft_threshold(Complex x, double kappa) {
  if (kappa <= 0.0) return x;
  const double mag = std::abs(x);
  if (mag <= kappa) return Complex(0.0, 0.0);
  return x * (1.0 - kappa / mag);
}

BeamformingMatrix prox_step(const BeamformingMatrix& x, double step,
                            const PenaltyParams& params) {
  if (!(step > 0.0)) throw std::invalid_argument("step must be > 0");
  if (x.rows() != params.beta.rows() || x.cols() != params.beta.cols())
    throw std::invalid_argument("beamformer and reliability shapes differ");
  BeamformingMatrix z(x.rows(), x.cols());
  for (Eigen::Index j = 0; j < x.cols(); ++j)
    for (Eigen::Index i = 0; i < x.rows(); ++i) {
      const double kappa =
          step * params.sparsity_weight * (1.0 - params.beta(i, j));
      z(i, j) = soft_threshold(x(i, j), kappa);
    }
  return z;
}

}  // namespace beamsculpt
