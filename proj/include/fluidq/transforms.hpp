#pragma once

#include "fluidq/levy_model.hpp"

namespace fluidq {

// Right inverse of the exponent: Phi(q) = sup{ theta >= 0 : psi(theta) = q },
// the largest nonnegative solution of psi(theta) = q (q >= 0). For a
// spectrally positive model psi is strictly increasing from 0, so
// Phi(0) == 0 exactly.
double phi_Y(const LevyModel& m, double q, double tol = 1e-12);

struct QueueExponents {
  // Long-run rate of the local time at zero of the reflected input, which is
  // also P(stationary queue > 0).
  double mu = 0.0;
  // Exponential decay rate of the stationary queue tail.
  double theta_star = 0.0;
  // Phi(0) for the driving process (0 in the spectrally positive case).
  double phi_Y0 = 0.0;
};

// Throws std::invalid_argument when the model fails its admissibility or
// stability checks.
QueueExponents queue_exponents(const LevyModel& m, double tol = 1e-12);

// Exponent of the (spectrally positive) net-input process of the queue,
// defined through the exponent/inverse of the driving process:
//   spectrally negative input:  theta - theta / Phi_Y(theta)
//   spectrally positive input:  theta - Phi_Y(theta)
// with value 0 at theta = 0.
double psi_lambda(const LevyModel& m, double theta, double tol = 1e-12);

// Largest nonnegative root of psi_lambda(theta) = alpha; phi_lambda(0) equals
// theta_star.
double phi_lambda(const LevyModel& m, double alpha, double tol = 1e-12);

}  // namespace fluidq
