#pragma once

#include <Eigen/Dense>
#include <complex>
#include <stdexcept>

namespace beamsculpt {

using Complex = std::complex<double>;

// n_tx x n_users complex matrices; column j belongs to user j.
using ChannelMatrix = Eigen::MatrixXcd;
using BeamformingMatrix = Eigen::MatrixXcd;

// Invalid configuration file or parameter value. CLI maps this to exit 2.
struct ConfigError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Failed read/write of an output file. CLI maps this to exit 1.
struct IoError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// Solver hit non-finite values. CLI maps this to exit 3.
struct SolverAbort : std::runtime_error {
  using std::runtime_error::runtime_error;
};

}  // namespace beamsculpt
