#include <cmath>
#include <vector>

#include <doctest.h>

#include "fluidq/levy_model.hpp"
#include "fluidq/path.hpp"
#include "fluidq/rng.hpp"

using namespace fluidq;

TEST_CASE("counter generator is deterministic and splittable") {
  CounterRng a(42, 3, StreamRole::Gaussian);
  CounterRng b(42, 3, StreamRole::Gaussian);
  for (int i = 0; i < 100; ++i) CHECK(a.next_u64() == b.next_u64());

  // Different roles / replications / seeds give different streams.
  CounterRng c(42, 3, StreamRole::Poisson);
  CounterRng d(42, 4, StreamRole::Gaussian);
  CounterRng e(43, 3, StreamRole::Gaussian);
  CounterRng base(42, 3, StreamRole::Gaussian);
  int eq_c = 0, eq_d = 0, eq_e = 0;
  for (int i = 0; i < 64; ++i) {
    const auto v = base.next_u64();
    eq_c += v == c.next_u64();
    eq_d += v == d.next_u64();
    eq_e += v == e.next_u64();
  }
  CHECK(eq_c == 0);
  CHECK(eq_d == 0);
  CHECK(eq_e == 0);
}

TEST_CASE("uniform variates stay strictly inside (0,1)") {
  CounterRng rng(1, 0, StreamRole::Inspection);
  double lo = 1.0, hi = 0.0, sum = 0.0;
  const int n = 200000;
  for (int i = 0; i < n; ++i) {
    const double u = rng.next_unit();
    lo = std::min(lo, u);
    hi = std::max(hi, u);
    sum += u;
  }
  CHECK(lo > 0.0);
  CHECK(hi < 1.0);
  CHECK(sum / n == doctest::Approx(0.5).epsilon(2e-3));
}

TEST_CASE("normal moments") {
  CounterRng rng(2, 0, StreamRole::Gaussian);
  const int n = 400000;
  double s1 = 0.0, s2 = 0.0, s3 = 0.0, s4 = 0.0;
  for (int i = 0; i < n; ++i) {
    const double z = rng.next_normal();
    s1 += z;
    s2 += z * z;
    s3 += z * z * z;
    s4 += z * z * z * z;
  }
  CHECK(s1 / n == doctest::Approx(0.0).epsilon(1).scale(0.01));
  CHECK(s2 / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(s3 / n == doctest::Approx(0.0).epsilon(1).scale(0.05));
  CHECK(s4 / n == doctest::Approx(3.0).epsilon(0.05));
}

TEST_CASE("exponential and Poisson moments") {
  CounterRng rng(3, 0, StreamRole::Marks);
  const int n = 300000;
  double se = 0.0, se2 = 0.0;
  double sp = 0.0;
  for (int i = 0; i < n; ++i) {
    const double x = rng.next_exp();
    se += x;
    se2 += x * x;
    sp += rng.next_poisson(0.35);
  }
  CHECK(se / n == doctest::Approx(1.0).epsilon(0.01));
  CHECK(se2 / n == doctest::Approx(2.0).epsilon(0.02));
  CHECK(sp / n == doctest::Approx(0.35).epsilon(0.01));
}

TEST_CASE("stable variates reproduce their Laplace transform") {
  // S has transform E[e^{-t S}] = exp(-t^alpha); check at t = 1 and t = 2.
  for (double alpha : {0.5, 0.7}) {
    CounterRng rng(4, 0, StreamRole::Stable);
    const int n = 400000;
    double m1 = 0.0, m2 = 0.0;
    for (int i = 0; i < n; ++i) {
      const double s = rng.next_stable(alpha);
      m1 += std::exp(-s);
      m2 += std::exp(-2.0 * s);
    }
    CHECK(m1 / n == doctest::Approx(std::exp(-1.0)).epsilon(5e-3));
    CHECK(m2 / n ==
          doctest::Approx(std::exp(-std::pow(2.0, alpha))).epsilon(5e-3));
  }
}

TEST_CASE("degenerate drift-only increments") {
  // Aggregate construction bypasses the monotonicity validation on purpose.
  const LevyModel drain{SpectralSign::Positive, 0.0, -1.0, NoJumps{}};
  IncrementSampler s(drain, 0.25, 11, 0);
  // Increments of Y itself: positive orientation keeps the drift as is.
  for (int i = 0; i < 8; ++i) CHECK(s.next() == doctest::Approx(-0.25).epsilon(1e-14));
}

TEST_CASE("law of large numbers for the sampled increments") {
  struct Case {
    LevyModel m;
    double mean;  // E[Y_1]
  };
  const Case cases[] = {
      // E[Y_1] = -psi'(0+) in the positive orientation.
      {LevyModel::make(SpectralSign::Positive, 1.0, -0.5), -0.5},
      {LevyModel::make(SpectralSign::Positive, 0.0, -1.2, CompoundPoissonExp{1.0, 2.0}),
       -0.7},
      // E[Y_1] = drift - E[S_1]; CP(rate 1) of Exp(4) jumps downward.
      {LevyModel::make(SpectralSign::Negative, 0.0, 2.0, CompoundPoissonExp{1.0, 4.0}),
       1.75},
  };
  const double dt = 0.01;
  const int n = 400000;
  for (const auto& c : cases) {
    IncrementSampler s(c.m, dt, 5, 1);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += s.next();
    CHECK(acc / (n * dt) == doctest::Approx(c.mean).epsilon(0.02));
  }
}

TEST_CASE("per-cell increments reproduce the exponent") {
  // E[e^{s theta Y_dt}] = e^{psi(theta) dt} with s the orientation sign; check
  // on a moderate grid cell so the Monte Carlo error dominates discretization.
  struct Case {
    LevyModel m;
    double sgn;
  };
  const Case cases[] = {
      {LevyModel::make(SpectralSign::Positive, 1.0, -0.5), -1.0},
      {LevyModel::make(SpectralSign::Negative, 0.0, 2.0, StableSubordinator{0.5, 1.0}),
       1.0},
      {LevyModel::make(SpectralSign::Negative, 1.0, 0.9, InverseBMLocalTime{0.4}), 1.0},
  };
  const double dt = 0.05, theta = 1.3;
  const int n = 400000;
  for (const auto& c : cases) {
    IncrementSampler s(c.m, dt, 6, 2);
    double acc = 0.0;
    for (int i = 0; i < n; ++i) acc += std::exp(c.sgn * theta * s.next());
    const double expected = std::exp(laplace_exponent(c.m, theta) * dt);
    CHECK(acc / n == doctest::Approx(expected).epsilon(0.01));
  }
}
