#pragma once

#include <cstdint>
#include <vector>

#include "fluidq/levy_model.hpp"
#include "fluidq/path.hpp"

namespace fluidq {

struct Estimate {
  double value = 0.0;
  double std_error = 0.0;
  int n_reps = 0;
  std::uint64_t seed = 0;
};

struct SimConfig {
  double dt = 1e-3;
  // Total simulated time per replication, burn-in included.
  double horizon = 1e4;
  // Discarded initial stretch; negative means automatic
  // (50 * max(1/|psi'(0+)|, 1/theta_star), with the first term dropped when
  // psi'(0+) is infinite).
  double burn_in = -1.0;
  int n_reps = 16;
  std::uint64_t seed = 20240814;
  // Queue levels a for tail probabilities.
  std::vector<double> a_grid{1e-9, 0.5, 1.0, 2.0};
  // Transform arguments for period/recurrence estimates.
  std::vector<double> alpha_grid{0.5, 1.0, 2.0};
  // Excursion-depth cutoff for the calibrated local-time regime; negative
  // means sqrt(dt).
  double excursion_cutoff = -1.0;
  int inspections_per_rep = 625;
  // 0: use FLUIDQ_THREADS or the hardware concurrency.
  int threads = 0;

  bool operator==(const SimConfig&) const = default;
};

double resolve_burn_in(const LevyModel& m, const SimConfig& cfg);
int resolve_threads(const SimConfig& cfg);

// Everything measured on one replication (post burn-in).
struct RepStats {
  double window = 0.0;
  double local_time_rate = 0.0;
  std::vector<double> tail_time;  // P(Q > a), time average
  std::vector<double> tail_palm;  // P0(Q > a), local-time (Palm) average
  double period_rate = 0.0;       // completed idle periods per unit time
  double mean_idle = 0.0, mean_busy = 0.0;
  std::size_t n_idle = 0, n_busy = 0;
  std::vector<double> typ_idle_lt, typ_busy_lt;    // E[e^{-alpha len}] per alpha
  std::vector<double> obs_idle_lt, obs_busy_lt;    // residual transforms per alpha
  double obs_idle_mean = 0.0, obs_busy_mean = 0.0;
  std::size_t n_obs_idle = 0, n_obs_busy = 0;
  std::vector<double> D_lt_hat;  // E[e^{-alpha D}] per alpha
  // Residual of the two-argument/one-argument consistency identity for the
  // observed idle transform at (alpha, beta) = (2, 1).
  double idle_identity_residual = 0.0;
  double calib_residual = 0.0;
  double mark_mean = 0.0;
  // Per-inspection samples for the independence diagnostics.
  std::vector<double> s_qg;      // queue level at the last zero of X
  std::vector<double> s_grel;    // t - G >= 0
  std::vector<double> s_drel;    // D - t >= 0
  std::vector<char> s_qzero;     // Q_t == 0
  std::vector<double> s_queue_drel;  // next queue-idle start minus t (or -1)
};

RepStats run_replication(const LevyModel& m, const SimConfig& cfg,
                         std::uint64_t replication, double mark_mean);

struct IndependenceReport {
  double ks_statistic = 0.0;
  double ks_critical_1pct = 0.0;
  std::size_t ks_n = 0;
  double corr_qg_g = 0.0;
  double corr_qg_d = 0.0;
  // Fraction of inspections where {Q_t = 0} agrees with {Q_G <= t - G}.
  double idle_set_match = 0.0;
  // Fraction of idle inspections where the queue's forward idle time and the
  // background process' forward zero-hitting time coincide on the grid.
  double drain_coincidence = 0.0;
  std::size_t n_idle_samples = 0;
};

struct SimSummary {
  SimConfig cfg;
  double burn_in = 0.0;
  Estimate local_time_rate;
  std::vector<Estimate> tail_time, tail_palm, tail_ratio;  // per a
  Estimate period_rate, mean_idle, mean_busy;
  std::vector<Estimate> typ_idle_lt, typ_busy_lt;          // per alpha
  std::vector<Estimate> obs_idle_lt, obs_busy_lt;          // per alpha
  Estimate obs_idle_mean, obs_busy_mean;
  std::vector<Estimate> D_lt;                              // per alpha
  Estimate idle_identity_residual;
  IndependenceReport independence;
  bool approximate_local_time = false;
  double mark_mean = 0.0;
  Estimate calib_residual;
};

SimSummary run_simulation(const LevyModel& m, const SimConfig& cfg);

// Palm expectation of f(Q) under the local-time measure on a finished grid:
// sum f(q_{k+1}) dL_k / sum dL_k.
template <typename F>
double palm_local_time_expectation(const PathGrid& g, F&& f) {
  double num = 0.0, den = 0.0;
  for (std::size_t k = 0; k < g.local_time_increments.size(); ++k) {
    num += f(g.q[k + 1]) * g.local_time_increments[k];
    den += g.local_time_increments[k];
  }
  return den > 0.0 ? num / den : 0.0;
}

struct PeriodTransformEstimates {
  std::vector<double> idle_lt, busy_lt;  // per alpha
  double mean_idle = 0.0, mean_busy = 0.0;
  std::size_t n_idle = 0, n_busy = 0;
};

PeriodTransformEstimates period_transform_estimates(const PeriodSet& ps,
                                                    const std::vector<double>& alphas);

// Convenience wrapper running a fresh simulation and returning only the
// independence diagnostics.
IndependenceReport independence_checks(const LevyModel& m, const SimConfig& cfg);

}  // namespace fluidq
