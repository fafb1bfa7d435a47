#pragma once

#include <functional>

#include "fluidq/levy_model.hpp"
#include "fluidq/transforms.hpp"

namespace fluidq {

struct StationaryLaw {
  enum class Kind { Background, Queue };
  Kind kind = Kind::Queue;
  double atom_at_zero = 0.0;
  // When `exponential` is true the law is atom_at_zero * delta_0 plus an
  // exponential density with this rate on (0, inf); tail(a) is then available
  // in closed form.
  bool exponential = false;
  double decay_rate = 0.0;

  double tail(double a) const;  // P(value > a), a >= 0; requires `exponential`
};

// Laplace transform E[exp(-beta X)] of the stationary reflected input X.
double stationary_X_lt(const LevyModel& m, double beta);

// Stationary law of the reflected input where it has a two-parameter closed
// form: spectrally negative models give a pure exponential with rate Phi(0);
// spectrally positive models give an atom of mass psi'(0+)/|drift| (bounded
// variation) or 0, exponential only in the Brownian case.
StationaryLaw stationary_X_law(const LevyModel& m);

// Stationary law of the fluid queue fed by the local time of X:
// P(Q > a) = mu * exp(-theta_star * a) with an atom 1 - mu at zero.
StationaryLaw stationary_Q_law(const LevyModel& m);

// E[exp(-q L^{-1}(x))] for the right-continuous inverse of the local time of
// the reflected input. L^{-1} is a subordinator with exponent
// kappa(q) = q - psi_lambda(q), i.e. q/Phi_Y(q) (spectrally negative) or
// Phi_Y(q) (spectrally positive), and the transform is exp(-x kappa(q)).
double inverse_local_time_lt(const LevyModel& m, double q, double x);

// E[exp(-theta D)] where D is the stationary forward recurrence time to the
// zero set of X.
double D_lt(const LevyModel& m, double theta);

// Joint transform E[exp(-alpha D + beta G)] of the forward (D >= 0) and
// backward (G <= 0 here entering as exp(+beta G) with beta >= 0) recurrence
// times; requires alpha != beta.
double DG_joint_lt(const LevyModel& m, double alpha, double beta);

// Observed (length-biased) idle period around a stationary inspection time:
// E[exp(-alpha d(0) + beta g(0)) | Q_0 = 0] with d(0) >= 0 the time to the
// end of the idle period and g(0) <= 0 the time since it began. alpha != beta.
double observed_idle_lt(const LevyModel& m, double alpha, double beta);

// E[exp(-alpha g(1)) | Q_0 > 0]: remaining busy time seen from a stationary
// inspection inside a busy period; equals alpha-scaled resolvent
// 1/Phi_Lambda-type expression.
double g1_conditional_lt(const LevyModel& m, double alpha);

// Observed busy period: E[exp(-alpha g(1) + beta d(0)) | Q_0 > 0] with
// g(1) >= 0 the residual busy time and d(0) <= 0 the elapsed one. alpha != beta.
double observed_busy_lt(const LevyModel& m, double alpha, double beta);

struct PeriodLaw {
  // Long-run rate of periods per unit time.
  double rate = 0.0;
  // Laplace transform of the typical (Palm) period length.
  std::function<double(double)> lt;
};

// Typical (Palm-averaged) idle and busy periods of the queue.
PeriodLaw typical_idle(const LevyModel& m);
PeriodLaw typical_busy(const LevyModel& m);

struct PeriodMeans {
  double mean_idle = 0.0;
  double mean_busy = 0.0;
  // Rates from the idle- and busy-side derivations. They coincide except in
  // the bounded-variation spectrally positive case, where the two published
  // routes genuinely disagree; both are reported and `rates_agree` is false.
  double idle_rate = 0.0;
  double busy_rate = 0.0;
  bool rates_agree = true;
};

PeriodMeans mean_periods(const LevyModel& m);

struct InspectionReport {
  // Closed-form mean comparison E[observed idle] >= E[typical idle],
  // equivalent to lhs <= rhs below (spectrally negative models only).
  double lhs = 0.0;
  double rhs = 0.0;
  bool holds = false;
  double typical_idle_mean = 0.0;
  double observed_idle_mean = 0.0;
  bool means_ordered = false;
  // Set when the two sides are of comparable size (within a factor of four),
  // e.g. near criticality, so the conclusion is numerically delicate.
  bool near_equality = false;
  // Set when the numerically differentiated observed mean is unstable across
  // step sizes.
  bool derivative_unstable = false;
};

// Inspection-paradox check; requires a spectrally negative model.
InspectionReport inspection_inequality(const LevyModel& m);

// Double transform H(q, theta) = (psi_lambda(theta)/theta - q/Phi_Lambda(q))
// / (psi_lambda(theta) - q) of the time-and-level resolvent of the queue;
// requires theta > Phi_Lambda(q).
double H_q(const LevyModel& m, double q, double theta);

}  // namespace fluidq
