#include "fluidq/transforms.hpp"

#include <cmath>
#include <limits>
#include <sstream>

#include "fluidq/rootfind.hpp"

namespace fluidq {

namespace {

// Start of the increasing branch of psi: 0 when psi'(0+) >= 0, otherwise the
// strict minimizer of psi on (0, inf).
double increasing_branch_start(const LevyModel& m) {
  const double d0 = laplace_exponent_derivative(m, 0.0);
  if (d0 >= 0.0) return 0.0;
  return detail::convex_minimizer(
      [&](double t) { return laplace_exponent_derivative(m, t); });
}

}  // namespace

double phi_Y(const LevyModel& m, double q, double tol) {
  if (q < 0.0) throw std::domain_error("phi_Y: q must be >= 0");
  const double d0 = laplace_exponent_derivative(m, 0.0);
  if (q == 0.0 && d0 >= 0.0) return 0.0;
  const double start = increasing_branch_start(m);
  return detail::solve_increasing([&](double t) { return laplace_exponent(m, t); },
                                  start, q, tol);
}

QueueExponents queue_exponents(const LevyModel& m, double tol) {
  const auto report = validate_assumptions(m);
  if (!report.ok()) {
    std::ostringstream os;
    os << "queue_exponents: model fails admissibility checks:";
    for (const auto& c : report.checks)
      if (!c.pass) os << " [" << c.name << ": " << c.detail << "]";
    throw std::invalid_argument(os.str());
  }
  QueueExponents out;
  if (m.spectral_sign == SpectralSign::Negative) {
    out.phi_Y0 = phi_Y(m, 0.0, tol);
    out.mu = out.phi_Y0;
    out.theta_star = laplace_exponent(m, 1.0);
  } else {
    out.phi_Y0 = 0.0;
    out.mu = laplace_exponent_derivative(m, 0.0);
    // Positive fixed point of psi(theta) = theta. g(theta) = psi(theta) - theta
    // is convex with g(0) = 0 and g'(0) = mu - 1 < 0, so the fixed point is the
    // largest root of g, found on the increasing branch of g.
    auto g = [&](double t) { return laplace_exponent(m, t) - t; };
    auto gd = [&](double t) { return laplace_exponent_derivative(m, t) - 1.0; };
    const double start = detail::convex_minimizer(gd);
    out.theta_star = detail::solve_increasing(g, start, 0.0, tol);
  }
  return out;
}

double psi_lambda(const LevyModel& m, double theta, double tol) {
  if (theta < 0.0) throw std::domain_error("psi_lambda: theta must be >= 0");
  if (theta == 0.0) return 0.0;
  const double phi = phi_Y(m, theta, tol);
  if (m.spectral_sign == SpectralSign::Negative) return theta - theta / phi;
  return theta - phi;
}

double phi_lambda(const LevyModel& m, double alpha, double tol) {
  if (alpha < 0.0) throw std::domain_error("phi_lambda: alpha must be >= 0");
  const double theta_star = queue_exponents(m, tol).theta_star;
  if (alpha == 0.0) return theta_star;
  // psi_lambda is convex, vanishes at 0 and at theta_star, hence is
  // nondecreasing on [theta_star, inf) where its largest root pre-image lives.
  return detail::solve_increasing(
      [&](double t) { return psi_lambda(m, t, tol); }, theta_star, alpha, tol);
}

}  // namespace fluidq
