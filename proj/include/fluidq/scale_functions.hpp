#pragma once

#include <stdexcept>

#include "fluidq/levy_model.hpp"

namespace fluidq {

enum class InversionMethod { FixedTalbot, EulerSummation, CrossValidate };

struct InversionParams {
  // The fixed-Talbot contour multiplies round-off by roughly exp(2M/5), so in
  // double precision accuracy peaks near M = 32 and degrades beyond it.
  int talbot_nodes = 32;
  int euler_terms = 40;     // partial sums before averaging
  int euler_average = 12;   // binomial averaging width
  double euler_decay = 23.0;
  // Maximum allowed relative discrepancy between the two methods when
  // cross-validating.
  double cross_tol = 1e-7;
};

struct ScaleFunctionSpec {
  LevyModel model;
  double q = 0.0;
  InversionMethod method = InversionMethod::FixedTalbot;
  InversionParams params{};
};

struct ScaleFunctionError : std::runtime_error {
  using std::runtime_error::runtime_error;
};

// q-scale function W^(q)(x) of the driving process, i.e. the increasing
// function supported on [0, inf) whose Laplace transform is
// 1/(psi(beta) - q) for beta > Phi(q). Spectrally positive models are handled
// through the same exponent (the scale function always refers to the
// spectrally negative orientation of the input). W^(q)(0) = 1/|drift| for
// bounded variation and 0 otherwise.
double W_q(const ScaleFunctionSpec& spec, double x);

// Companion function Z^(q)(x) = 1 + q * int_0^x W^(q)(y) dy, computed by
// inverting psi(beta) / (beta (psi(beta) - q)). Z^(0) is identically 1.
double Z_q(const ScaleFunctionSpec& spec, double x);

// Laplace transform of the first passage of the driving process above level
// x (started at 0, spectrally negative orientation): exp(-Phi(q) x).
double exit_up_lt(const LevyModel& m, double q, double x);

// Laplace transform of the first passage below -x:
// Z^(q)(x) - q W^(q)(x) / Phi(q), with the q -> 0 limit
// 1 - psi'(0+) W(x) when Phi(0) = 0 and Z(x) (== 1) when Phi(0) > 0.
double exit_down_lt(const ScaleFunctionSpec& spec, double x);

}  // namespace fluidq
