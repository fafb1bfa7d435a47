#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "fluidq/levy_model.hpp"
#include "fluidq/queue_analytics.hpp"
#include "fluidq/transforms.hpp"

using namespace fluidq;

namespace {

LevyModel bm_pos() { return LevyModel::make(SpectralSign::Positive, 1.0, -0.5); }
LevyModel cp_pos() {
  return LevyModel::make(SpectralSign::Positive, 0.0, -1.2, CompoundPoissonExp{1.0, 2.0});
}
LevyModel stable_neg() {
  return LevyModel::make(SpectralSign::Negative, 0.0, 2.0, StableSubordinator{0.5, 1.0});
}
LevyModel invbm_neg() {
  return LevyModel::make(SpectralSign::Negative, 1.0, 0.9, InverseBMLocalTime{0.4});
}

const double kSqrt17 = std::sqrt(17.0);

}  // namespace

TEST_CASE("stationary transform of the reflected input") {
  // Reflected Brownian with drift -1/2: E e^{-beta X} = 1/(1+beta).
  for (double beta : {0.5, 1.0, 2.0})
    CHECK(stationary_X_lt(bm_pos(), beta) ==
          doctest::Approx(1.0 / (1.0 + beta)).epsilon(1e-12));
  CHECK(stationary_X_lt(bm_pos(), 0.0) == 1.0);
  // Spectrally negative: phi(0)/(phi(0)+beta).
  CHECK(stationary_X_lt(stable_neg(), 1.0) == doctest::Approx(0.2).epsilon(1e-12));
  // Positive general form mu*beta/psi(beta): at beta = 1, 0.7/(1.2 - 1/3).
  CHECK(stationary_X_lt(cp_pos(), 1.0) == doctest::Approx(21.0 / 26.0).epsilon(1e-12));
  CHECK_THROWS_AS(stationary_X_lt(bm_pos(), -1.0), std::domain_error);
}

TEST_CASE("stationary law of the reflected input") {
  {
    const auto law = stationary_X_law(stable_neg());
    CHECK(law.exponential);
    CHECK(law.atom_at_zero == 0.0);
    CHECK(law.decay_rate == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(law.tail(2.0) == doctest::Approx(std::exp(-0.5)).epsilon(1e-12));
  }
  {
    const auto law = stationary_X_law(bm_pos());
    CHECK(law.exponential);
    CHECK(law.atom_at_zero == 0.0);
    CHECK(law.decay_rate == doctest::Approx(1.0).epsilon(1e-12));
  }
  {
    // Bounded variation: atom mu/|drift| = 0.7/1.2 and no two-parameter form.
    const auto law = stationary_X_law(cp_pos());
    CHECK_FALSE(law.exponential);
    CHECK(law.atom_at_zero == doctest::Approx(7.0 / 12.0).epsilon(1e-12));
    CHECK_THROWS_AS(law.tail(1.0), std::logic_error);
  }
}

TEST_CASE("stationary law of the queue") {
  {
    const auto law = stationary_Q_law(bm_pos());
    CHECK(law.atom_at_zero == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(law.decay_rate == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(law.tail(2.0) == doctest::Approx(0.5 * std::exp(-2.0)).epsilon(1e-12));
  }
  {
    const auto law = stationary_Q_law(cp_pos());
    CHECK(law.atom_at_zero == doctest::Approx(0.3).epsilon(1e-12));
    CHECK(law.decay_rate == doctest::Approx(3.0).epsilon(1e-12));
  }
}

TEST_CASE("inverse local time transform") {
  // Positive orientation: exponent phi_Y(q).
  CHECK(inverse_local_time_lt(bm_pos(), 2.0, 1.5) ==
        doctest::Approx(std::exp(-1.5 * (-1.0 + kSqrt17) / 2.0)).epsilon(1e-12));
  // Negative orientation: exponent q/phi_Y(q); for 2 theta - sqrt(theta) = 2
  // that is (9 - sqrt(17))/4.
  CHECK(inverse_local_time_lt(stable_neg(), 2.0, 1.0) ==
        doctest::Approx(std::exp(-(9.0 - kSqrt17) / 4.0)).epsilon(1e-12));
  CHECK(inverse_local_time_lt(stable_neg(), 0.0, 3.0) == 1.0);
  CHECK_THROWS_AS(inverse_local_time_lt(bm_pos(), -1.0, 1.0), std::domain_error);
}

TEST_CASE("forward recurrence transform D_lt") {
  CHECK(D_lt(bm_pos(), 0.0) == 1.0);
  CHECK(D_lt(bm_pos(), 1.0) == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(D_lt(cp_pos(), 3.0) == doctest::Approx(0.7).epsilon(1e-12));
  CHECK(D_lt(stable_neg(), 1.0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(D_lt(stable_neg(), 2.0) ==
        doctest::Approx((9.0 - kSqrt17) / 32.0).epsilon(1e-12));
  CHECK_THROWS_AS(D_lt(bm_pos(), -0.5), std::domain_error);
}

TEST_CASE("joint recurrence transform reduces to D_lt at beta = 0") {
  for (const auto& m : {bm_pos(), cp_pos(), stable_neg(), invbm_neg()}) {
    for (double a : {0.5, 2.0})
      CHECK(DG_joint_lt(m, a, 0.0) == doctest::Approx(D_lt(m, a)).epsilon(1e-12));
  }
  CHECK_THROWS_AS(DG_joint_lt(bm_pos(), 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(DG_joint_lt(bm_pos(), -1.0, 0.5), std::domain_error);
}

TEST_CASE("observed idle transform closed-form values") {
  // Reflected Brownian drift -1/2: value (5 - sqrt(17))/4 at (2, 0).
  CHECK(observed_idle_lt(bm_pos(), 2.0, 0.0) ==
        doctest::Approx((5.0 - kSqrt17) / 4.0).epsilon(1e-12));
  // Symmetry of the two-argument transform.
  CHECK(observed_idle_lt(bm_pos(), 0.0, 2.0) ==
        doctest::Approx(observed_idle_lt(bm_pos(), 2.0, 0.0)).epsilon(1e-12));
  // Stable-drift model: (sqrt(17) - 1)/24 at (2, 0).
  CHECK(observed_idle_lt(stable_neg(), 2.0, 0.0) ==
        doctest::Approx((kSqrt17 - 1.0) / 24.0).epsilon(1e-12));
  CHECK_THROWS_AS(observed_idle_lt(bm_pos(), 2.0, 2.0), std::domain_error);
}

TEST_CASE("observed idle transform is continuous across theta_star") {
  // alpha = theta_star is a removable singularity of the building block; the
  // value must connect continuously to nearby arguments.
  for (const auto& m : {bm_pos(), stable_neg(), invbm_neg()}) {
    const double ts = queue_exponents(m).theta_star;
    const double at = observed_idle_lt(m, ts, 0.0);
    const double lo = observed_idle_lt(m, ts * (1.0 - 1e-4), 0.0);
    const double hi = observed_idle_lt(m, ts * (1.0 + 1e-4), 0.0);
    CHECK(std::isfinite(at));
    CHECK(at == doctest::Approx(0.5 * (lo + hi)).epsilon(1e-6));
  }
  // Hand value at the singular point for the Brownian model: the ratio
  // becomes psi_lambda'(1) = 1 - 2/3 = 1/3 and the transform 1/3 / 2... at
  // (1, 0) the transform equals pre * ratio / 1 = 1/3.
  CHECK(observed_idle_lt(bm_pos(), 1.0, 0.0) ==
        doctest::Approx(1.0 / 3.0).epsilon(1e-7));
}

TEST_CASE("two routes to the observed idle transform agree") {
  for (const auto& m : {bm_pos(), cp_pos(), stable_neg(), invbm_neg()}) {
    const auto ex = queue_exponents(m);
    auto term = [&](double t) {
      return t == 0.0 ? 0.0 : t * (ex.mu - D_lt(m, t)) / (t - ex.theta_star);
    };
    auto route_b = [&](double a, double b) {
      return (ex.theta_star / (1.0 - ex.mu)) * (term(a) - term(b)) / (a - b);
    };
    for (auto [a, b] : {std::pair{2.0, 0.0}, {2.0, 0.5}, {5.0, 2.0}}) {
      if (a == ex.theta_star || b == ex.theta_star) continue;
      CHECK(std::abs(observed_idle_lt(m, a, b) - route_b(a, b)) <= 1e-10);
    }
  }
}

TEST_CASE("residual busy time and observed busy transform") {
  CHECK(g1_conditional_lt(bm_pos(), 0.0) == 1.0);
  CHECK(g1_conditional_lt(bm_pos(), 1.0) == doctest::Approx(1.0 / 3.0).epsilon(1e-12));
  CHECK(observed_busy_lt(bm_pos(), 2.0, 1.0) ==
        doctest::Approx(4.0 / (5.0 + kSqrt17) - 1.0 / 3.0).epsilon(1e-10));
  CHECK(observed_busy_lt(bm_pos(), 1.0, 2.0) ==
        doctest::Approx(observed_busy_lt(bm_pos(), 2.0, 1.0)).epsilon(1e-12));
  CHECK_THROWS_AS(observed_busy_lt(bm_pos(), 1.0, 1.0), std::domain_error);
  CHECK_THROWS_AS(g1_conditional_lt(bm_pos(), -1.0), std::domain_error);
}

TEST_CASE("typical period laws of the Brownian-input queue") {
  const auto idle = typical_idle(bm_pos());
  const auto busy = typical_busy(bm_pos());
  CHECK(idle.rate == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(busy.rate == doctest::Approx(0.5).epsilon(1e-12));
  CHECK(idle.lt(0.0) == 1.0);
  CHECK(busy.lt(0.0) == 1.0);
  CHECK(idle.lt(2.0) == doctest::Approx((kSqrt17 - 3.0) / 2.0).epsilon(1e-12));
  CHECK(busy.lt(1.0) == doctest::Approx(2.0 / 3.0).epsilon(1e-12));
  CHECK_THROWS_AS(idle.lt(-1.0), std::domain_error);
  // (1 - lt(h))/h converges to the mean 1 from below the transform.
  CHECK((1.0 - idle.lt(1e-7)) / 1e-7 == doctest::Approx(1.0).epsilon(1e-5));
  CHECK((1.0 - busy.lt(1e-7)) / 1e-7 == doctest::Approx(1.0).epsilon(1e-5));
}

TEST_CASE("typical period transforms are valid Laplace transforms") {
  for (const auto& m : {bm_pos(), cp_pos(), stable_neg(), invbm_neg()}) {
    for (const auto& law : {typical_idle(m), typical_busy(m)}) {
      double prev = 1.0;
      for (double a : {0.25, 0.5, 1.0, 2.0, 4.0, 16.0}) {
        const double v = law.lt(a);
        CHECK(v > 0.0);
        CHECK(v < prev);
        prev = v;
      }
    }
  }
}

TEST_CASE("period means and rates") {
  {
    const auto pm = mean_periods(bm_pos());
    CHECK(pm.mean_idle == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pm.mean_busy == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pm.idle_rate == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(pm.rates_agree);
  }
  {
    // Bounded-variation positive input: a fraction 1/|drift| of the visits to
    // zero are zero-length, so the two published rates differ.
    const auto pm = mean_periods(cp_pos());
    CHECK(pm.mean_idle == doctest::Approx(6.0 / 7.0).epsilon(1e-12));
    CHECK(pm.mean_busy == doctest::Approx(2.0).epsilon(1e-12));
    CHECK(pm.idle_rate == doctest::Approx(0.35).epsilon(1e-12));
    CHECK(pm.busy_rate == doctest::Approx(2.1).epsilon(1e-12));
    CHECK_FALSE(pm.rates_agree);
  }
  {
    const auto pm = mean_periods(stable_neg());
    CHECK(pm.mean_idle == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(pm.mean_busy == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(pm.idle_rate == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(pm.rates_agree);
  }
}

TEST_CASE("inspection inequality for spectrally negative models") {
  {
    const auto rep = inspection_inequality(stable_neg());
    CHECK(rep.lhs == doctest::Approx(0.5625).epsilon(1e-12));
    CHECK(rep.rhs == doctest::Approx(1.625).epsilon(1e-12));
    CHECK(rep.holds);
    CHECK(rep.typical_idle_mean == doctest::Approx(3.0).epsilon(1e-12));
    // Series expansion of the observed transform gives mean 26/3.
    CHECK(rep.observed_idle_mean == doctest::Approx(26.0 / 3.0).epsilon(1e-6));
    CHECK(rep.means_ordered);
    CHECK_FALSE(rep.derivative_unstable);
  }
  {
    const auto rep = inspection_inequality(invbm_neg());
    CHECK(rep.holds);
    CHECK(rep.means_ordered);
    CHECK(rep.observed_idle_mean >= rep.typical_idle_mean);
  }
  {
    // Near-critical variant: psi(1) = 2 - 1.99 = 0.01, phi(0) close to 1.
    const auto m = LevyModel::make(SpectralSign::Negative, 0.0, 2.0,
                                   StableSubordinator{0.5, 1.99});
    const auto rep = inspection_inequality(m);
    CHECK(rep.holds);
    CHECK(rep.near_equality);
  }
  CHECK_THROWS_AS(inspection_inequality(bm_pos()), std::domain_error);
}

TEST_CASE("time-and-level resolvent transform H") {
  // Independent arithmetic: psi_lambda(4) = 4 - (-1+sqrt(33))/2 for the
  // Brownian model, phi_lambda(1) = 3.
  const double pl4 = 4.0 - (-1.0 + std::sqrt(33.0)) / 2.0;
  const double expected = (pl4 / 4.0 - 1.0 / 3.0) / (pl4 - 1.0);
  CHECK(H_q(bm_pos(), 1.0, 4.0) == doctest::Approx(expected).epsilon(1e-10));
  // q = 0 collapses to 1/theta for every model.
  for (const auto& m : {bm_pos(), cp_pos(), stable_neg(), invbm_neg()}) {
    const double theta = queue_exponents(m).theta_star + 1.0;
    CHECK(H_q(m, 0.0, theta) == doctest::Approx(1.0 / theta).epsilon(1e-10));
  }
  // Domain: needs theta > phi_lambda(q) = 3 here (the boundary itself is
  // decided by the root finder's last few ulps, so probe strictly inside).
  CHECK_THROWS_AS(H_q(bm_pos(), 1.0, 2.9), std::domain_error);
  CHECK_THROWS_AS(H_q(bm_pos(), 1.0, 2.5), std::domain_error);
  CHECK_THROWS_AS(H_q(bm_pos(), -1.0, 4.0), std::domain_error);
}
