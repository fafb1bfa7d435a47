#pragma once

#include <complex>
#include <stdexcept>
#include <string>
#include <variant>
#include <vector>

namespace fluidq {

// Spectral sign of the driving process Y: Negative means all jumps of Y are
// downward (Y = a*t + sigma*B - S for a subordinator S), Positive means all
// jumps are upward (Y = a*t + sigma*B + S).
enum class SpectralSign { Negative, Positive };

struct NoJumps {
  bool operator==(const NoJumps&) const = default;
};

// Jumps arrive at rate `rate`; each jump size is Exp(`jump_rate`) distributed
// (mean 1/jump_rate).
struct CompoundPoissonExp {
  double rate = 1.0;
  double jump_rate = 1.0;
  bool operator==(const CompoundPoissonExp&) const = default;
};

// Stable subordinator with index in (0,1) and Laplace exponent c * theta^index.
struct StableSubordinator {
  double index = 0.5;
  double scale = 1.0;
  bool operator==(const StableSubordinator&) const = default;
};

// Subordinator distributed as the inverse local time at zero of a Brownian
// motion run at scale c; its Laplace exponent is 2*c*sqrt(theta), i.e. a
// 1/2-stable subordinator.
struct InverseBMLocalTime {
  double scale = 1.0;
  bool operator==(const InverseBMLocalTime&) const = default;
};

using JumpSpec =
    std::variant<NoJumps, CompoundPoissonExp, StableSubordinator, InverseBMLocalTime>;

struct LevyModel {
  SpectralSign spectral_sign = SpectralSign::Negative;
  double gaussian_sigma = 0.0;
  // Coefficient of the deterministic linear part of Y (the drift of the
  // decomposition Y_t = linear_drift * t + gaussian_sigma * B_t +/- S_t).
  double linear_drift = 0.0;
  JumpSpec jumps = NoJumps{};

  // Validating constructor: throws std::invalid_argument on bad parameters or
  // on an (a.s.) monotone process. Direct aggregate construction bypasses the
  // checks; tests use that for degenerate cases.
  static LevyModel make(SpectralSign sign, double sigma, double drift,
                        JumpSpec jumps = NoJumps{});

  bool operator==(const LevyModel&) const = default;
};

// Throws std::invalid_argument if parameters are out of range or the process
// is monotone.
void validate_model(const LevyModel& m);

// The exponent psi(theta) defined by
//   E[exp( theta * Y_1)] = exp(psi(theta))   (spectrally negative)
//   E[exp(-theta * Y_1)] = exp(psi(theta))   (spectrally positive)
// so that in both cases psi is finite on [0, inf), convex, psi(0) = 0 and
// psi(theta)/theta -> +inf (unbounded variation) or |linear_drift| (bounded).
double laplace_exponent(const LevyModel& m, double theta);

// Analytic continuation of the exponent to complex arguments with
// Re(theta) > 0 (principal branches for the fractional powers). Used by the
// numerical Laplace inversion of scale functions.
std::complex<double> laplace_exponent(const LevyModel& m, std::complex<double> theta);

// psi'(theta). At theta == 0 the one-sided limit psi'(0+) is returned; for
// models whose jump part has infinite mean contribution at the origin
// (stable-type jumps) this is -inf, signalled as
// -std::numeric_limits<double>::infinity(), not an exception.
double laplace_exponent_derivative(const LevyModel& m, double theta);

struct VariationClass {
  bool bounded = false;
  // For bounded variation, the drift d of the decomposition
  // Y_t = d*t +/- (pure-jump part); equals linear_drift. Meaningless when
  // bounded == false (set to NaN).
  double drift = 0.0;
};

VariationClass classify(const LevyModel& m);

struct ValidationCheck {
  std::string name;
  bool pass = false;
  std::string detail;
};

struct ValidationReport {
  std::vector<ValidationCheck> checks;
  bool ok() const {
    for (const auto& c : checks)
      if (!c.pass) return false;
    return true;
  }
  const ValidationCheck& operator[](const std::string& name) const;
};

// Checks, without throwing:
//  - "non_monotone": the process is not a.s. monotone,
//  - "drift_sign":   psi'(0+) < 0 (neg. case) / mean drift of -Y in (0,..)
//                    i.e. psi'(0+) > 0 (pos. case),
//  - "stability":    the queue input is subcritical (neg: psi(1) > 0,
//                    pos: psi'(0+) < 1),
//  - "bv_rate":      bounded-variation positive case needs |drift| > 1.
ValidationReport validate_assumptions(const LevyModel& m);

}  // namespace fluidq
