#include "fluidq/scale_functions.hpp"

#include <cmath>
#include <complex>
#include <functional>
#include <sstream>
#include <vector>

#include "fluidq/transforms.hpp"

namespace fluidq {

namespace {

using cplx = std::complex<double>;

// Fixed-Talbot inversion of a transform F analytic to the right of (and on)
// the deformed contour; evaluates f(x) for x > 0.
double invert_talbot(const std::function<cplx(cplx)>& F, double x, int M) {
  const double r = 2.0 * M / (5.0 * x);
  double sum = 0.5 * std::exp(r * x) * F(cplx(r, 0.0)).real();
  for (int k = 1; k < M; ++k) {
    const double th = k * M_PI / M;
    const double cot = std::cos(th) / std::sin(th);
    const cplx s(r * th * cot, r * th);
    const double sigma = th + (th * cot - 1.0) * cot;
    const cplx val = std::exp(s * x) * F(s) * cplx(1.0, sigma);
    sum += val.real();
  }
  return sum * r / M;
}

// Abate-Whitt Euler-summation inversion: alternating Bromwich series
// accelerated by binomial averaging of m consecutive partial sums.
double invert_euler(const std::function<cplx(cplx)>& F, double x,
                    double A, int n_terms, int m_avg) {
  const int total = n_terms + m_avg;
  std::vector<double> partial(total + 1);
  double s = F(cplx(A / (2.0 * x), 0.0)).real();
  partial[0] = s;
  double sign = -1.0;
  for (int k = 1; k <= total; ++k) {
    const cplx arg(A / (2.0 * x), k * M_PI / x);
    s += 2.0 * sign * F(arg).real();
    partial[k] = s;
    sign = -sign;
  }
  // Binomial average of partial sums n_terms .. n_terms + m_avg.
  double avg = 0.0;
  double binom = 1.0;  // C(m_avg, 0)
  double norm = std::ldexp(1.0, -m_avg);
  for (int j = 0; j <= m_avg; ++j) {
    avg += binom * partial[n_terms + j];
    binom *= double(m_avg - j) / double(j + 1);
  }
  return avg * norm * std::exp(A / 2.0) / (2.0 * x);
}

struct Inverter {
  InversionMethod method;
  InversionParams params;

  double operator()(const std::function<cplx(cplx)>& F, double x) const {
    switch (method) {
      case InversionMethod::FixedTalbot:
        return invert_talbot(F, x, params.talbot_nodes);
      case InversionMethod::EulerSummation:
        return invert_euler(F, x, params.euler_decay, params.euler_terms,
                            params.euler_average);
      case InversionMethod::CrossValidate: {
        const double a = invert_talbot(F, x, params.talbot_nodes);
        const double b = invert_euler(F, x, params.euler_decay, params.euler_terms,
                                      params.euler_average);
        const double scale = 1.0 + std::max(std::abs(a), std::abs(b));
        if (!(std::abs(a - b) <= params.cross_tol * scale)) {
          std::ostringstream os;
          os << "Laplace inversion cross-validation failed at x = " << x
             << ": Talbot = " << a << ", Euler = " << b;
          throw ScaleFunctionError(os.str());
        }
        return a;
      }
    }
    throw ScaleFunctionError("unknown inversion method");
  }
};

void check_spec(const ScaleFunctionSpec& spec) {
  if (spec.q < 0.0) throw std::domain_error("scale function: q must be >= 0");
}

double finite_or_throw(double v, const char* what, double x) {
  if (!std::isfinite(v)) {
    std::ostringstream os;
    os << what << ": inversion produced a non-finite value at x = " << x;
    throw ScaleFunctionError(os.str());
  }
  return v;
}

}  // namespace

double W_q(const ScaleFunctionSpec& spec, double x) {
  check_spec(spec);
  if (x < 0.0) return 0.0;
  if (x == 0.0) {
    const auto vc = classify(spec.model);
    return vc.bounded ? 1.0 / std::abs(vc.drift) : 0.0;
  }
  // W^(q) grows like exp(Phi(q) x); shift the transform by s0 > Phi(q) so the
  // inverted function decays and the contour methods stay accurate.
  const double s0 = phi_Y(spec.model, spec.q) + 1.0;
  const LevyModel& m = spec.model;
  const double q = spec.q;
  auto F = [&](cplx s) -> cplx {
    return 1.0 / (laplace_exponent(m, s + s0) - q);
  };
  const double v = Inverter{spec.method, spec.params}(F, x) * std::exp(s0 * x);
  return finite_or_throw(v, "W_q", x);
}

double Z_q(const ScaleFunctionSpec& spec, double x) {
  check_spec(spec);
  if (x <= 0.0) return 1.0;
  if (spec.q == 0.0) return 1.0;
  const double s0 = phi_Y(spec.model, spec.q) + 1.0;
  const LevyModel& m = spec.model;
  const double q = spec.q;
  auto F = [&](cplx s) -> cplx {
    const cplx b = s + s0;
    return laplace_exponent(m, b) / (b * (laplace_exponent(m, b) - q));
  };
  const double v = Inverter{spec.method, spec.params}(F, x) * std::exp(s0 * x);
  return finite_or_throw(v, "Z_q", x);
}

double exit_up_lt(const LevyModel& m, double q, double x) {
  if (q < 0.0 || x < 0.0) throw std::domain_error("exit_up_lt: q, x must be >= 0");
  return std::exp(-phi_Y(m, q) * x);
}

double exit_down_lt(const ScaleFunctionSpec& spec, double x) {
  check_spec(spec);
  if (x < 0.0) throw std::domain_error("exit_down_lt: x must be >= 0");
  // E[exp(-q tau)] = Z^(q)(x) - (q / Phi(q)) W^(q)(x); at q = 0 the ratio
  // q/Phi(q) tends to 0 when Phi(0) > 0 and to psi'(0+) when Phi(0) = 0.
  double coef;
  if (spec.q > 0.0) {
    coef = spec.q / phi_Y(spec.model, spec.q);
  } else {
    const double phi0 = phi_Y(spec.model, 0.0);
    coef = phi0 > 0.0 ? 0.0 : laplace_exponent_derivative(spec.model, 0.0);
  }
  const double v = Z_q(spec, x) - coef * W_q(spec, x);
  return finite_or_throw(v, "exit_down_lt", x);
}

}  // namespace fluidq
