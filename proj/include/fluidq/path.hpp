#pragma once

#include <cstdint>
#include <vector>

#include "fluidq/levy_model.hpp"
#include "fluidq/rng.hpp"

namespace fluidq {

// Draws the i.i.d. grid increments of the driving process Y on cells of
// length dt. Jumps are placed at the right endpoint of their cell.
class IncrementSampler {
 public:
  IncrementSampler(const LevyModel& m, double dt, std::uint64_t seed,
                   std::uint64_t replication);

  double next();

 private:
  double drift_dt_;
  double sigma_sqrt_dt_;
  double jump_sign_;
  // Compound Poisson: per-cell jump count mean and jump-size rate.
  double cp_mean_ = 0.0;
  double cp_jump_rate_ = 0.0;
  // Stable-type jumps: index and per-cell scale (c*dt)^(1/alpha).
  double stable_alpha_ = 0.0;
  double stable_cell_scale_ = 0.0;
  enum class Kind { None, CompoundPoisson, Stable } kind_ = Kind::None;
  CounterRng gauss_;
  CounterRng jump_;
};

std::vector<double> sample_path(const LevyModel& m, double dt, double horizon,
                                std::uint64_t seed, std::uint64_t replication = 0);

// One cell of the Skorokhod reflection recursion.
struct ReflectStep {
  double x_next;
  double regulator;  // amount clipped at zero in this cell
};

inline ReflectStep reflect_step(double x, double dy) {
  const double v = x + dy;
  if (v >= 0.0) return {v, 0.0};
  return {0.0, -v};
}

// Reflected path started from x0; output has increments.size() + 1 entries.
std::vector<double> reflect(double x0, const std::vector<double>& increments);

enum class LocalTimeRegime {
  // Unbounded variation, spectrally positive: L equals the reflection
  // regulator.
  Regulator,
  // Bounded variation, spectrally positive: L grows at rate |drift| on
  // { X = 0 }.
  DriftAtZero,
  // Bounded variation, spectrally negative: each visit to zero carries an
  // independent exponential mass of mean 1/|drift|.
  ExponentialMarks,
  // Unbounded variation, spectrally negative: excursions deeper than a cutoff
  // carry exponential masses whose mean is calibrated so the long-run rate of
  // L matches Phi_Y(0). This regime is approximate.
  CalibratedExcursions,
};

LocalTimeRegime local_time_regime(const LevyModel& m);

// Per-cell local-time accumulator shared by the batch helpers and the
// streaming simulation driver.
class LocalTimeBuilder {
 public:
  LocalTimeBuilder(const LevyModel& m, double dt, double excursion_cutoff,
                   double mark_mean);

  // Increment of L over a cell, given the state before the cell, the state
  // after, and the amount clipped by the reflection in the cell.
  double step(double x_prev, double x_next, double clip, CounterRng& marks);

  LocalTimeRegime regime() const { return regime_; }
  // Number of completed marked excursions so far (CalibratedExcursions only).
  std::uint64_t excursion_count() const { return excursions_; }

 private:
  LocalTimeRegime regime_;
  double dt_;
  double drift_rate_ = 0.0;
  double cutoff_ = 0.0;
  double mark_mean_ = 1.0;
  double peak_ = 0.0;  // max height since the last visit to zero
  std::uint64_t excursions_ = 0;
};

// Batch local-time path: dL over each cell of a reflected path x (as produced
// by reflect() from the given increments). The marks stream is derived from
// (seed, replication). For the CalibratedExcursions regime the calibration
// constant is fitted on the path itself in a first pass unless mark_mean > 0
// is supplied.
std::vector<double> local_time_path(const LevyModel& m, const std::vector<double>& x,
                                    const std::vector<double>& increments,
                                    double dt, std::uint64_t seed,
                                    std::uint64_t replication = 0,
                                    double excursion_cutoff = -1.0,
                                    double mark_mean = -1.0);

// Queue recursion q_{k+1} = max(q_k + dL_k - dt, 0).
std::vector<double> queue_path(const std::vector<double>& local_time_increments,
                               double dt, double q0 = 0.0);

struct PeriodSet {
  // Times (grid-point indices * dt) at which an idle period starts (queue
  // reaches zero) and ends (queue leaves zero).
  std::vector<double> idle_starts;   // "g" points
  std::vector<double> idle_ends;     // "d" points
};

PeriodSet extract_periods(const std::vector<double>& q, double dt);

struct PathGrid {
  double dt = 0.0;
  std::vector<double> increments;            // of Y
  std::vector<double> x;                     // reflected path, size n+1
  std::vector<double> local_time_increments; // size n
  std::vector<double> q;                     // queue, size n+1
};

PathGrid build_path_grid(const LevyModel& m, double dt, double horizon,
                         std::uint64_t seed, std::uint64_t replication = 0);

}  // namespace fluidq
