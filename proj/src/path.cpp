#include "fluidq/path.hpp"

#include <cmath>
#include <stdexcept>

#include "fluidq/transforms.hpp"

namespace fluidq {

IncrementSampler::IncrementSampler(const LevyModel& m, double dt, std::uint64_t seed,
                                   std::uint64_t replication)
    : drift_dt_(m.linear_drift * dt),
      sigma_sqrt_dt_(m.gaussian_sigma * std::sqrt(dt)),
      jump_sign_(m.spectral_sign == SpectralSign::Positive ? 1.0 : -1.0),
      gauss_(seed, replication, StreamRole::Gaussian),
      jump_(seed, replication,
            std::holds_alternative<CompoundPoissonExp>(m.jumps) ? StreamRole::Poisson
                                                                : StreamRole::Stable) {
  if (const auto* cp = std::get_if<CompoundPoissonExp>(&m.jumps)) {
    kind_ = Kind::CompoundPoisson;
    cp_mean_ = cp->rate * dt;
    cp_jump_rate_ = cp->jump_rate;
  } else if (const auto* st = std::get_if<StableSubordinator>(&m.jumps)) {
    kind_ = Kind::Stable;
    stable_alpha_ = st->index;
    stable_cell_scale_ = std::pow(st->scale * dt, 1.0 / st->index);
  } else if (const auto* bm = std::get_if<InverseBMLocalTime>(&m.jumps)) {
    // Laplace exponent 2 c sqrt(theta): a 1/2-stable subordinator with
    // effective scale 2c.
    kind_ = Kind::Stable;
    stable_alpha_ = 0.5;
    stable_cell_scale_ = std::pow(2.0 * bm->scale * dt, 2.0);
  }
}

double IncrementSampler::next() {
  double dy = drift_dt_;
  if (sigma_sqrt_dt_ > 0.0) dy += sigma_sqrt_dt_ * gauss_.next_normal();
  switch (kind_) {
    case Kind::None:
      break;
    case Kind::CompoundPoisson: {
      const unsigned n = jump_.next_poisson(cp_mean_);
      double s = 0.0;
      for (unsigned i = 0; i < n; ++i) s += jump_.next_exp() / cp_jump_rate_;
      dy += jump_sign_ * s;
      break;
    }
    case Kind::Stable:
      dy += jump_sign_ * stable_cell_scale_ * jump_.next_stable(stable_alpha_);
      break;
  }
  return dy;
}

std::vector<double> sample_path(const LevyModel& m, double dt, double horizon,
                                std::uint64_t seed, std::uint64_t replication) {
  if (!(dt > 0.0) || !(horizon > 0.0))
    throw std::invalid_argument("sample_path: dt and horizon must be > 0");
  const auto n = static_cast<std::size_t>(std::llround(horizon / dt));
  IncrementSampler sampler(m, dt, seed, replication);
  std::vector<double> out(n);
  for (auto& v : out) v = sampler.next();
  return out;
}

std::vector<double> reflect(double x0, const std::vector<double>& increments) {
  if (x0 < 0.0) throw std::invalid_argument("reflect: x0 must be >= 0");
  std::vector<double> x(increments.size() + 1);
  x[0] = x0;
  for (std::size_t k = 0; k < increments.size(); ++k)
    x[k + 1] = reflect_step(x[k], increments[k]).x_next;
  return x;
}

LocalTimeRegime local_time_regime(const LevyModel& m) {
  const bool bounded = classify(m).bounded;
  if (m.spectral_sign == SpectralSign::Positive)
    return bounded ? LocalTimeRegime::DriftAtZero : LocalTimeRegime::Regulator;
  return bounded ? LocalTimeRegime::ExponentialMarks
                 : LocalTimeRegime::CalibratedExcursions;
}

LocalTimeBuilder::LocalTimeBuilder(const LevyModel& m, double dt,
                                   double excursion_cutoff, double mark_mean)
    : regime_(local_time_regime(m)), dt_(dt), cutoff_(excursion_cutoff),
      mark_mean_(mark_mean) {
  if (regime_ == LocalTimeRegime::DriftAtZero ||
      regime_ == LocalTimeRegime::ExponentialMarks)
    drift_rate_ = std::abs(classify(m).drift);
  if (regime_ == LocalTimeRegime::CalibratedExcursions && cutoff_ < 0.0)
    cutoff_ = std::sqrt(dt);
}

double LocalTimeBuilder::step(double x_prev, double x_next, double clip,
                              CounterRng& marks) {
  switch (regime_) {
    case LocalTimeRegime::Regulator:
      return clip;
    case LocalTimeRegime::DriftAtZero:
      return x_prev == 0.0 ? drift_rate_ * dt_ : 0.0;
    case LocalTimeRegime::ExponentialMarks:
      // One exponential mass per detected visit to zero. The inverse local
      // time is compound Poisson with total jump rate |drift| per unit of
      // local time (its exponent q/phi(q) tends to |drift|), so each visit
      // carries mean mass 1/|drift|.
      return x_next == 0.0 ? marks.next_exp() / drift_rate_ : 0.0;
    case LocalTimeRegime::CalibratedExcursions: {
      if (x_next > 0.0) {
        if (x_next > peak_) peak_ = x_next;
        return 0.0;
      }
      // The path has returned to zero: an excursion has just completed.
      const bool deep = peak_ > cutoff_;
      peak_ = 0.0;
      if (!deep) return 0.0;
      ++excursions_;
      return mark_mean_ * marks.next_exp();
    }
  }
  return 0.0;
}

std::vector<double> local_time_path(const LevyModel& m, const std::vector<double>& x,
                                    const std::vector<double>& increments,
                                    double dt, std::uint64_t seed,
                                    std::uint64_t replication,
                                    double excursion_cutoff, double mark_mean) {
  if (x.size() != increments.size() + 1)
    throw std::invalid_argument("local_time_path: path/increment size mismatch");
  const std::size_t n = increments.size();
  const auto regime = local_time_regime(m);

  if (regime == LocalTimeRegime::CalibratedExcursions && mark_mean <= 0.0) {
    // Calibration pass on the same path: count deep excursions and match the
    // long-run rate of L to Phi_Y(0).
    LocalTimeBuilder counter(m, dt, excursion_cutoff, 1.0);
    CounterRng dummy(seed, replication, StreamRole::Calibration);
    for (std::size_t k = 0; k < n; ++k)
      counter.step(x[k], x[k + 1], 0.0, dummy);
    const double rate = counter.excursion_count() / (n * dt);
    const double phi0 = phi_Y(m, 0.0);
    mark_mean = rate > 0.0 ? phi0 / rate : 0.0;
  }

  LocalTimeBuilder builder(m, dt, excursion_cutoff, mark_mean);
  CounterRng marks(seed, replication, StreamRole::Marks);
  std::vector<double> dl(n);
  for (std::size_t k = 0; k < n; ++k) {
    const double clip = x[k + 1] == 0.0 ? std::max(0.0, -(x[k] + increments[k])) : 0.0;
    dl[k] = builder.step(x[k], x[k + 1], clip, marks);
  }
  return dl;
}

std::vector<double> queue_path(const std::vector<double>& local_time_increments,
                               double dt, double q0) {
  std::vector<double> q(local_time_increments.size() + 1);
  q[0] = q0;
  for (std::size_t k = 0; k < local_time_increments.size(); ++k) {
    const double v = q[k] + local_time_increments[k] - dt;
    q[k + 1] = v > 0.0 ? v : 0.0;
  }
  return q;
}

PeriodSet extract_periods(const std::vector<double>& q, double dt) {
  PeriodSet ps;
  for (std::size_t k = 1; k < q.size(); ++k) {
    if (q[k - 1] > 0.0 && q[k] == 0.0) ps.idle_starts.push_back(k * dt);
    if (q[k - 1] == 0.0 && q[k] > 0.0) ps.idle_ends.push_back(k * dt);
  }
  return ps;
}

PathGrid build_path_grid(const LevyModel& m, double dt, double horizon,
                         std::uint64_t seed, std::uint64_t replication) {
  PathGrid g;
  g.dt = dt;
  g.increments = sample_path(m, dt, horizon, seed, replication);
  g.x = reflect(0.0, g.increments);
  g.local_time_increments = local_time_path(m, g.x, g.increments, dt, seed, replication);
  g.q = queue_path(g.local_time_increments, dt, 0.0);
  return g;
}

}  // namespace fluidq
