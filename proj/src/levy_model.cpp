#include "fluidq/levy_model.hpp"

#include <cmath>
#include <limits>
#include <sstream>

namespace fluidq {

namespace {

constexpr double kInf = std::numeric_limits<double>::infinity();

// log E[exp(-theta * S_1)] for the subordinator S described by the jump spec.
template <typename T>
T jump_exponent(const JumpSpec& jumps, T theta) {
  return std::visit(
      [&](const auto& j) -> T {
        using J = std::decay_t<decltype(j)>;
        if constexpr (std::is_same_v<J, NoJumps>) {
          return T(0.0);
        } else if constexpr (std::is_same_v<J, CompoundPoissonExp>) {
          return -j.rate * theta / (j.jump_rate + theta);
        } else if constexpr (std::is_same_v<J, StableSubordinator>) {
          return -j.scale * std::pow(theta, T(j.index));
        } else {
          return -2.0 * j.scale * std::sqrt(theta);
        }
      },
      jumps);
}

// d/dtheta of jump_exponent, real arguments only; -inf at theta==0 for the
// stable-type specs.
double jump_exponent_derivative(const JumpSpec& jumps, double theta) {
  return std::visit(
      [&](const auto& j) -> double {
        using J = std::decay_t<decltype(j)>;
        if constexpr (std::is_same_v<J, NoJumps>) {
          return 0.0;
        } else if constexpr (std::is_same_v<J, CompoundPoissonExp>) {
          const double d = j.jump_rate + theta;
          return -j.rate * j.jump_rate / (d * d);
        } else if constexpr (std::is_same_v<J, StableSubordinator>) {
          if (theta == 0.0) return -kInf;
          return -j.scale * j.index * std::pow(theta, j.index - 1.0);
        } else {
          if (theta == 0.0) return -kInf;
          return -j.scale / std::sqrt(theta);
        }
      },
      jumps);
}

bool has_jumps(const JumpSpec& jumps) {
  return !std::holds_alternative<NoJumps>(jumps);
}

double sign_mult(const LevyModel& m) {
  return m.spectral_sign == SpectralSign::Negative ? 1.0 : -1.0;
}

}  // namespace

LevyModel LevyModel::make(SpectralSign sign, double sigma, double drift, JumpSpec jumps) {
  LevyModel m{sign, sigma, drift, std::move(jumps)};
  validate_model(m);
  return m;
}

void validate_model(const LevyModel& m) {
  auto fail = [](const std::string& msg) { throw std::invalid_argument(msg); };
  if (!(m.gaussian_sigma >= 0.0) || !std::isfinite(m.gaussian_sigma))
    fail("gaussian_sigma must be finite and >= 0");
  if (!std::isfinite(m.linear_drift)) fail("linear_drift must be finite");
  std::visit(
      [&](const auto& j) {
        using J = std::decay_t<decltype(j)>;
        if constexpr (std::is_same_v<J, CompoundPoissonExp>) {
          if (!(j.rate > 0.0) || !(j.jump_rate > 0.0))
            fail("compound Poisson rate and jump_rate must be > 0");
        } else if constexpr (std::is_same_v<J, StableSubordinator>) {
          if (!(j.index > 0.0) || !(j.index < 1.0)) fail("stable index must lie in (0,1)");
          if (!(j.scale > 0.0)) fail("stable scale must be > 0");
        } else if constexpr (std::is_same_v<J, InverseBMLocalTime>) {
          if (!(j.scale > 0.0)) fail("local-time scale must be > 0");
        }
      },
      m.jumps);
  if (m.gaussian_sigma == 0.0) {
    if (!has_jumps(m.jumps)) fail("deterministic drift is monotone: rejected");
    const bool jumps_up = m.spectral_sign == SpectralSign::Positive;
    if (jumps_up && m.linear_drift >= 0.0)
      fail("monotone increasing process (upward jumps, nonnegative drift): rejected");
    if (!jumps_up && m.linear_drift <= 0.0)
      fail("monotone decreasing process (downward jumps, nonpositive drift): rejected");
  }
}

double laplace_exponent(const LevyModel& m, double theta) {
  if (theta < 0.0) throw std::domain_error("laplace_exponent: theta must be >= 0");
  return sign_mult(m) * m.linear_drift * theta +
         0.5 * m.gaussian_sigma * m.gaussian_sigma * theta * theta +
         jump_exponent(m.jumps, theta);
}

std::complex<double> laplace_exponent(const LevyModel& m, std::complex<double> theta) {
  return sign_mult(m) * m.linear_drift * theta +
         0.5 * m.gaussian_sigma * m.gaussian_sigma * theta * theta +
         jump_exponent(m.jumps, theta);
}

double laplace_exponent_derivative(const LevyModel& m, double theta) {
  if (theta < 0.0) throw std::domain_error("laplace_exponent_derivative: theta must be >= 0");
  const double jd = jump_exponent_derivative(m.jumps, theta);
  if (jd == -kInf) return -kInf;
  return sign_mult(m) * m.linear_drift + m.gaussian_sigma * m.gaussian_sigma * theta + jd;
}

VariationClass classify(const LevyModel& m) {
  // All supported jump specs are subordinators (bounded-variation jump parts),
  // so the path variation is decided by the Gaussian coefficient alone.
  if (m.gaussian_sigma == 0.0) return {true, m.linear_drift};
  return {false, std::numeric_limits<double>::quiet_NaN()};
}

const ValidationCheck& ValidationReport::operator[](const std::string& name) const {
  for (const auto& c : checks)
    if (c.name == name) return c;
  throw std::out_of_range("no validation check named " + name);
}

ValidationReport validate_assumptions(const LevyModel& m) {
  ValidationReport rep;
  auto add = [&rep](std::string name, bool pass, std::string detail) {
    rep.checks.push_back({std::move(name), pass, std::move(detail)});
  };

  bool monotone = false;
  if (m.gaussian_sigma == 0.0) {
    if (!has_jumps(m.jumps)) {
      monotone = true;
    } else if (m.spectral_sign == SpectralSign::Positive) {
      monotone = m.linear_drift >= 0.0;
    } else {
      monotone = m.linear_drift <= 0.0;
    }
  }
  add("non_monotone", !monotone,
      monotone ? "process is a.s. monotone" : "paths are non-monotone");

  // In both orientations psi'(0+) = -E[Y_1] for the positive case and
  // psi'(0+) = E[Y_1] for the negative case, so the reflected process drifts
  // back to zero iff psi'(0+) < 0 (negative) / psi'(0+) > 0 (positive).
  const double d0 = laplace_exponent_derivative(m, 0.0);
  {
    std::ostringstream os;
    os << "psi'(0+) = " << d0;
    const bool ok = m.spectral_sign == SpectralSign::Negative ? d0 < 0.0 : d0 > 0.0;
    add("drift_sign", ok, os.str());
  }

  if (m.spectral_sign == SpectralSign::Negative) {
    const double p1 = laplace_exponent(m, 1.0);
    std::ostringstream os;
    os << "psi(1) = " << p1 << " (needs > 0 so the local-time rate is < 1)";
    add("stability", p1 > 0.0, os.str());
  } else {
    // The local time of the reflected process grows at mean rate psi'(0+);
    // the queue drains at rate 1, so stability needs psi'(0+) < 1.
    std::ostringstream os;
    os << "local-time rate psi'(0+) = " << d0 << " (needs to lie in (0,1))";
    add("stability", d0 > 0.0 && d0 < 1.0, os.str());
  }

  const auto vc = classify(m);
  if (m.spectral_sign == SpectralSign::Positive && vc.bounded) {
    std::ostringstream os;
    os << "bounded-variation drift |d| = " << std::abs(vc.drift) << " (needs > 1)";
    add("bv_rate", std::abs(vc.drift) > 1.0, os.str());
  } else {
    add("bv_rate", true, "not applicable");
  }
  return rep;
}

}  // namespace fluidq
