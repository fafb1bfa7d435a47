#include <cmath>
#include <stdexcept>

#include <doctest.h>

#include "fluidq/levy_model.hpp"
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

// Independent oracle for the zero of 0.9 t + 0.5 t^2 - 0.8 sqrt(t): substitute
// u = sqrt(t) and bisect the cubic 0.5 u^3 + 0.9 u - 0.8 on [0, 1].
double invbm_phi0_oracle() {
  auto f = [](double u) { return 0.5 * u * u * u + 0.9 * u - 0.8; };
  double lo = 0.0, hi = 1.0;
  for (int i = 0; i < 200; ++i) {
    const double mid = 0.5 * (lo + hi);
    (f(mid) < 0.0 ? lo : hi) = mid;
  }
  const double u = 0.5 * (lo + hi);
  return u * u;
}

}  // namespace

TEST_CASE("largest root of psi = q against closed forms") {
  // Brownian with drift: theta^2 + theta - 2q = 0.
  CHECK(phi_Y(bm_pos(), 0.0) == 0.0);  // exactly, by construction
  CHECK(phi_Y(bm_pos(), 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(phi_Y(bm_pos(), 2.0) ==
        doctest::Approx((-1.0 + std::sqrt(17.0)) / 2.0).epsilon(1e-12));

  // 1.2 theta - theta/(2+theta) = q  <=>  1.2 theta^2 + (1.4 - q) theta - 2q = 0.
  CHECK(phi_Y(cp_pos(), 0.0) == 0.0);
  CHECK(phi_Y(cp_pos(), 3.0) == doctest::Approx(3.0).epsilon(1e-12));

  // 2 theta - sqrt(theta) = q: with u = sqrt(theta), u = (1 + sqrt(1+8q))/4.
  CHECK(phi_Y(stable_neg(), 0.0) == doctest::Approx(0.25).epsilon(1e-12));
  CHECK(phi_Y(stable_neg(), 1.0) == doctest::Approx(1.0).epsilon(1e-12));
  {
    const double u = (1.0 + std::sqrt(17.0)) / 4.0;
    CHECK(phi_Y(stable_neg(), 2.0) == doctest::Approx(u * u).epsilon(1e-12));
  }

  CHECK(phi_Y(invbm_neg(), 0.0) ==
        doctest::Approx(invbm_phi0_oracle()).epsilon(1e-11));
}

TEST_CASE("phi round trip psi(phi(q)) = q on a log grid") {
  const LevyModel models[] = {bm_pos(), cp_pos(), stable_neg(), invbm_neg()};
  for (const auto& m : models) {
    for (double q = 1e-6; q < 2e3; q *= 4.0) {
      const double phi = phi_Y(m, q);
      CHECK(std::abs(laplace_exponent(m, phi) - q) <= 1e-10 * std::max(1.0, q));
    }
  }
}

TEST_CASE("phi is increasing in q and above the zero root") {
  const LevyModel models[] = {bm_pos(), cp_pos(), stable_neg(), invbm_neg()};
  for (const auto& m : models) {
    double prev = phi_Y(m, 0.0);
    for (double q = 0.125; q < 64.0; q *= 2.0) {
      const double cur = phi_Y(m, q);
      CHECK(cur > prev);
      prev = cur;
    }
  }
}

TEST_CASE("phi grows like theta/|drift| for bounded variation") {
  CHECK(phi_Y(cp_pos(), 1e8) / 1e8 == doctest::Approx(1.0 / 1.2).epsilon(1e-6));
  // The stable jump part only decays like theta^{-1/2} relative to the drift
  // term, so the approach to the asymptote is slower here.
  CHECK(phi_Y(stable_neg(), 1e8) / 1e8 == doctest::Approx(0.5).epsilon(1e-4));
}

TEST_CASE("queue exponents of the four admissible models") {
  {
    const auto e = queue_exponents(bm_pos());
    CHECK(e.mu == doctest::Approx(0.5).epsilon(1e-12));
    CHECK(e.theta_star == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.phi_Y0 == 0.0);
  }
  {
    const auto e = queue_exponents(cp_pos());
    CHECK(e.mu == doctest::Approx(0.7).epsilon(1e-12));
    CHECK(e.theta_star == doctest::Approx(3.0).epsilon(1e-12));
    CHECK(e.phi_Y0 == 0.0);
  }
  {
    const auto e = queue_exponents(stable_neg());
    CHECK(e.mu == doctest::Approx(0.25).epsilon(1e-12));
    CHECK(e.theta_star == doctest::Approx(1.0).epsilon(1e-12));
    CHECK(e.phi_Y0 == doctest::Approx(0.25).epsilon(1e-12));
  }
  {
    const auto e = queue_exponents(invbm_neg());
    CHECK(e.mu == doctest::Approx(invbm_phi0_oracle()).epsilon(1e-11));
    // theta_star solves psi(theta) = theta for the negative orientation at 1:
    // psi(1) = 0.9 + 0.5 - 0.8 = 0.6.
    CHECK(e.theta_star == doctest::Approx(0.6).epsilon(1e-12));
    CHECK(e.mu == doctest::Approx(e.phi_Y0));
  }
}

TEST_CASE("queue exponents reject inadmissible models") {
  // Critical spectrally negative Brownian: psi(1) = 0.
  CHECK_THROWS_AS(queue_exponents(LevyModel::make(SpectralSign::Negative, 1.0, -0.5)),
                  std::invalid_argument);
  // Supercritical positive: psi'(0+) = 1.5 >= 1.
  CHECK_THROWS_AS(queue_exponents(LevyModel::make(SpectralSign::Positive, 1.0, -1.5)),
                  std::invalid_argument);
  // Bounded-variation positive with |drift| <= 1.
  CHECK_THROWS_AS(queue_exponents(LevyModel::make(SpectralSign::Positive, 0.0, -0.9,
                                                  CompoundPoissonExp{1.0, 4.0})),
                  std::invalid_argument);
}

TEST_CASE("net-input exponent psi_lambda") {
  // Positive orientation: theta - phi_Y(theta).
  CHECK(psi_lambda(bm_pos(), 0.0) == doctest::Approx(0.0));
  CHECK(psi_lambda(bm_pos(), 2.0) ==
        doctest::Approx(2.0 - (-1.0 + std::sqrt(17.0)) / 2.0).epsilon(1e-12));
  // Negative orientation: theta - theta/phi_Y(theta).
  CHECK(psi_lambda(stable_neg(), 1.0) == doctest::Approx(0.0).epsilon(1e-12));
  CHECK(psi_lambda(stable_neg(), 2.0) ==
        doctest::Approx(2.0 - (9.0 - std::sqrt(17.0)) / 4.0).epsilon(1e-12));
  // psi_lambda vanishes exactly at theta_star for every model.
  for (const auto& m : {bm_pos(), cp_pos(), stable_neg(), invbm_neg()}) {
    const auto e = queue_exponents(m);
    CHECK(std::abs(psi_lambda(m, e.theta_star)) < 1e-10);
  }
}

TEST_CASE("phi_lambda inverts psi_lambda from theta_star") {
  CHECK(phi_lambda(bm_pos(), 0.0) == doctest::Approx(1.0).epsilon(1e-12));
  CHECK(phi_lambda(bm_pos(), 1.0) == doctest::Approx(3.0).epsilon(1e-12));
  CHECK(phi_lambda(bm_pos(), 2.0) ==
        doctest::Approx((5.0 + std::sqrt(17.0)) / 2.0).epsilon(1e-12));
  for (const auto& m : {bm_pos(), cp_pos(), stable_neg(), invbm_neg()}) {
    const auto e = queue_exponents(m);
    CHECK(phi_lambda(m, 0.0) == doctest::Approx(e.theta_star).epsilon(1e-10));
    for (double a : {0.25, 1.0, 4.0}) {
      const double t = phi_lambda(m, a);
      CHECK(t >= e.theta_star);
      CHECK(std::abs(psi_lambda(m, t) - a) <= 1e-9 * std::max(1.0, a));
    }
  }
}
