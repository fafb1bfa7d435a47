#include "fluidq/queue_analytics.hpp"

#include <cmath>
#include <limits>
#include <stdexcept>

namespace fluidq {

namespace {

// Exponent of the inverse local time L^{-1}: kappa(q) = q - psi_lambda(q).
double kappa(const LevyModel& m, double q) {
  if (q == 0.0) return 0.0;
  if (m.spectral_sign == SpectralSign::Negative) return q / phi_Y(m, q);
  return phi_Y(m, q);
}

// psi_lambda(theta)/(theta - theta_star), with the removable singularity at
// theta == theta_star filled by a central-difference derivative.
double psi_lambda_ratio(const LevyModel& m, double theta, double theta_star) {
  const double scale = std::max(1.0, theta_star);
  if (std::abs(theta - theta_star) > 1e-7 * scale)
    return psi_lambda(m, theta) / (theta - theta_star);
  const double h = 1e-6 * scale;
  return (psi_lambda(m, theta_star + h) - psi_lambda(m, theta_star - h)) / (2.0 * h);
}

// Size of the atom at zero in the per-cycle idle-period law: in the
// bounded-variation spectrally positive case a fraction 1/|drift| of queue
// visits to zero have zero duration (the input refills instantly), so the
// maximal idle intervals arrive at a thinned rate.
double idle_atom(const LevyModel& m) {
  const auto vc = classify(m);
  if (m.spectral_sign == SpectralSign::Positive && vc.bounded)
    return 1.0 / std::abs(vc.drift);
  return 0.0;
}

void require_distinct(double alpha, double beta, const char* who) {
  if (alpha == beta)
    throw std::domain_error(std::string(who) + ": requires alpha != beta");
  if (alpha < 0.0 || beta < 0.0)
    throw std::domain_error(std::string(who) + ": arguments must be >= 0");
}

}  // namespace

double StationaryLaw::tail(double a) const {
  if (!exponential)
    throw std::logic_error("StationaryLaw::tail: law has no two-parameter closed form");
  if (a < 0.0) return 1.0;
  return (1.0 - atom_at_zero) * std::exp(-decay_rate * a);
}

double stationary_X_lt(const LevyModel& m, double beta) {
  if (beta < 0.0) throw std::domain_error("stationary_X_lt: beta must be >= 0");
  if (beta == 0.0) return 1.0;
  const auto ex = queue_exponents(m);
  if (m.spectral_sign == SpectralSign::Negative)
    return ex.phi_Y0 / (ex.phi_Y0 + beta);
  return ex.mu * beta / laplace_exponent(m, beta);
}

StationaryLaw stationary_X_law(const LevyModel& m) {
  const auto ex = queue_exponents(m);
  StationaryLaw law;
  law.kind = StationaryLaw::Kind::Background;
  if (m.spectral_sign == SpectralSign::Negative) {
    law.atom_at_zero = 0.0;
    law.exponential = true;
    law.decay_rate = ex.phi_Y0;
    return law;
  }
  const auto vc = classify(m);
  law.atom_at_zero = vc.bounded ? ex.mu / std::abs(vc.drift) : 0.0;
  if (std::holds_alternative<NoJumps>(m.jumps)) {
    law.exponential = true;
    law.decay_rate = 2.0 * ex.mu / (m.gaussian_sigma * m.gaussian_sigma);
  } else {
    law.exponential = false;
    law.decay_rate = std::numeric_limits<double>::quiet_NaN();
  }
  return law;
}

StationaryLaw stationary_Q_law(const LevyModel& m) {
  const auto ex = queue_exponents(m);
  StationaryLaw law;
  law.kind = StationaryLaw::Kind::Queue;
  law.atom_at_zero = 1.0 - ex.mu;
  law.exponential = true;
  law.decay_rate = ex.theta_star;
  return law;
}

double inverse_local_time_lt(const LevyModel& m, double q, double x) {
  if (q < 0.0 || x < 0.0)
    throw std::domain_error("inverse_local_time_lt: q, x must be >= 0");
  return std::exp(-x * kappa(m, q));
}

double D_lt(const LevyModel& m, double theta) {
  if (theta < 0.0) throw std::domain_error("D_lt: theta must be >= 0");
  if (theta == 0.0) return 1.0;
  const auto ex = queue_exponents(m);
  // mu * kappa(theta)/theta in both orientations.
  return ex.mu * kappa(m, theta) / theta;
}

double DG_joint_lt(const LevyModel& m, double alpha, double beta) {
  require_distinct(alpha, beta, "DG_joint_lt");
  const auto ex = queue_exponents(m);
  return ex.mu * (kappa(m, alpha) - kappa(m, beta)) / (alpha - beta);
}

double observed_idle_lt(const LevyModel& m, double alpha, double beta) {
  require_distinct(alpha, beta, "observed_idle_lt");
  const auto ex = queue_exponents(m);
  const double pre = ex.mu * ex.theta_star / (1.0 - ex.mu);
  const double a_term =
      alpha == 0.0 ? 0.0 : psi_lambda_ratio(m, alpha, ex.theta_star);
  const double b_term =
      beta == 0.0 ? 0.0 : psi_lambda_ratio(m, beta, ex.theta_star);
  return pre * (a_term - b_term) / (alpha - beta);
}

double g1_conditional_lt(const LevyModel& m, double alpha) {
  if (alpha < 0.0) throw std::domain_error("g1_conditional_lt: alpha must be >= 0");
  const auto ex = queue_exponents(m);
  if (alpha == 0.0) return 1.0;
  return ex.theta_star / phi_lambda(m, alpha);
}

double observed_busy_lt(const LevyModel& m, double alpha, double beta) {
  require_distinct(alpha, beta, "observed_busy_lt");
  const auto ex = queue_exponents(m);
  const double ta = alpha == 0.0 ? 0.0 : alpha / phi_lambda(m, alpha);
  const double tb = beta == 0.0 ? 0.0 : beta / phi_lambda(m, beta);
  return ex.theta_star * (ta - tb) / (alpha - beta);
}

PeriodLaw typical_idle(const LevyModel& m) {
  const auto ex = queue_exponents(m);
  const double atom = idle_atom(m);
  const double rate = ex.mu * ex.theta_star * (1.0 - atom);
  const double theta_star = ex.theta_star;
  LevyModel model = m;
  return PeriodLaw{rate, [model, theta_star, atom](double alpha) {
                     if (alpha < 0.0)
                       throw std::domain_error("typical_idle lt: alpha must be >= 0");
                     if (alpha == 0.0) return 1.0;
                     return 1.0 - psi_lambda_ratio(model, alpha, theta_star) / (1.0 - atom);
                   }};
}

PeriodLaw typical_busy(const LevyModel& m) {
  const auto ex = queue_exponents(m);
  const double rate = ex.mu * ex.theta_star;
  LevyModel model = m;
  return PeriodLaw{rate, [model](double alpha) {
                     if (alpha < 0.0)
                       throw std::domain_error("typical_busy lt: alpha must be >= 0");
                     if (alpha == 0.0) return 1.0;
                     return 1.0 - alpha / phi_lambda(model, alpha);
                   }};
}

PeriodMeans mean_periods(const LevyModel& m) {
  const auto ex = queue_exponents(m);
  const double atom = idle_atom(m);
  PeriodMeans pm;
  pm.idle_rate = ex.mu * ex.theta_star * (1.0 - atom);
  pm.busy_rate = ex.mu * ex.theta_star;
  pm.rates_agree = atom == 0.0;
  // Means of the maximal idle / busy intervals; the idle-side rate is the
  // one that counts alternations of the two.
  pm.mean_idle = (1.0 - ex.mu) / pm.idle_rate;
  pm.mean_busy = ex.mu / pm.idle_rate;
  return pm;
}

InspectionReport inspection_inequality(const LevyModel& m) {
  if (m.spectral_sign != SpectralSign::Negative)
    throw std::domain_error("inspection_inequality: requires a spectrally negative model");
  const auto ex = queue_exponents(m);
  const double phi0 = ex.phi_Y0;
  const double psi1 = ex.theta_star;
  const double phi_prime0 = 1.0 / laplace_exponent_derivative(m, phi0);

  InspectionReport rep;
  rep.lhs = (1.0 - phi0) * (1.0 - phi0);
  rep.rhs = 2.0 * (phi0 * phi0 - phi0 + phi_prime0 * psi1);
  rep.holds = rep.lhs <= rep.rhs * (1.0 + 1e-12);
  rep.near_equality = rep.lhs > 0.25 * rep.rhs;

  rep.typical_idle_mean = (1.0 - ex.mu) / (ex.mu * ex.theta_star);
  // Observed idle length mean = -2 * d/dalpha E[e^{-alpha d(0)} | idle] at 0,
  // one-sided second-order difference with two step sizes as a stability probe.
  auto f = [&](double a) { return a == 0.0 ? 1.0 : observed_idle_lt(m, a, 0.0); };
  auto deriv = [&](double h) {
    return (4.0 * f(h) - 3.0 * f(0.0) - f(2.0 * h)) / (2.0 * h);
  };
  const double scale = std::max(1.0, ex.theta_star);
  const double d1 = deriv(1e-4 * scale);
  const double d2 = deriv(5e-5 * scale);
  // One step of Richardson extrapolation on the O(h^2) scheme.
  const double d = (4.0 * d2 - d1) / 3.0;
  rep.derivative_unstable = std::abs(d1 - d2) > 1e-3 * std::max(1.0, std::abs(d));
  rep.observed_idle_mean = -2.0 * d;
  rep.means_ordered =
      rep.observed_idle_mean >= rep.typical_idle_mean * (1.0 - 1e-9);
  return rep;
}

double H_q(const LevyModel& m, double q, double theta) {
  if (q < 0.0 || theta <= 0.0)
    throw std::domain_error("H_q: requires q >= 0 and theta > 0");
  const double phi_l = phi_lambda(m, q);
  if (!(theta > phi_l))
    throw std::domain_error("H_q: requires theta > phi_lambda(q)");
  const double pl = psi_lambda(m, theta);
  const double tail_coef = q == 0.0 ? 0.0 : q / phi_l;
  return (pl / theta - tail_coef) / (pl - q);
}

}  // namespace fluidq
