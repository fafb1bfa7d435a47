#include "fluidq/mc.hpp"

#include <algorithm>
#include <atomic>
#include <cmath>
#include <cstdlib>
#include <limits>
#include <mutex>
#include <stdexcept>
#include <thread>

#include "fluidq/transforms.hpp"

namespace fluidq {

namespace {

struct ZeroInterval {
  double t0, t1;
  double q_end;
};

Estimate aggregate(const std::vector<double>& vals, std::uint64_t seed) {
  Estimate e;
  e.seed = seed;
  double sum = 0.0;
  int n = 0;
  for (double v : vals)
    if (std::isfinite(v)) {
      sum += v;
      ++n;
    }
  e.n_reps = n;
  if (n == 0) {
    e.value = std::numeric_limits<double>::quiet_NaN();
    return e;
  }
  e.value = sum / n;
  if (n >= 2) {
    double ss = 0.0;
    for (double v : vals)
      if (std::isfinite(v)) ss += (v - e.value) * (v - e.value);
    e.std_error = std::sqrt(ss / (n - 1) / n);
  }
  return e;
}

double pearson(const std::vector<double>& a, const std::vector<double>& b) {
  const std::size_t n = std::min(a.size(), b.size());
  if (n < 2) return 0.0;
  double ma = 0.0, mb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    ma += a[i];
    mb += b[i];
  }
  ma /= n;
  mb /= n;
  double sab = 0.0, saa = 0.0, sbb = 0.0;
  for (std::size_t i = 0; i < n; ++i) {
    sab += (a[i] - ma) * (b[i] - mb);
    saa += (a[i] - ma) * (a[i] - ma);
    sbb += (b[i] - mb) * (b[i] - mb);
  }
  if (saa <= 0.0 || sbb <= 0.0) return 0.0;
  return sab / std::sqrt(saa * sbb);
}

}  // namespace

double resolve_burn_in(const LevyModel& m, const SimConfig& cfg) {
  if (cfg.burn_in >= 0.0) return std::round(cfg.burn_in / cfg.dt) * cfg.dt;
  const auto ex = queue_exponents(m);
  const double d0 = laplace_exponent_derivative(m, 0.0);
  const double t_input = std::isfinite(d0) ? 1.0 / std::abs(d0) : 0.0;
  const double b = 50.0 * std::max(t_input, 1.0 / ex.theta_star);
  return std::round(b / cfg.dt) * cfg.dt;
}

int resolve_threads(const SimConfig& cfg) {
  if (cfg.threads > 0) return cfg.threads;
  if (const char* env = std::getenv("FLUIDQ_THREADS")) {
    const int v = std::atoi(env);
    if (v > 0) return v;
  }
  const unsigned hw = std::thread::hardware_concurrency();
  return hw > 0 ? static_cast<int>(hw) : 1;
}

PeriodTransformEstimates period_transform_estimates(const PeriodSet& ps,
                                                    const std::vector<double>& alphas) {
  PeriodTransformEstimates out;
  out.idle_lt.assign(alphas.size(), 0.0);
  out.busy_lt.assign(alphas.size(), 0.0);

  // Idle periods: each idle start paired with the first idle end after it.
  {
    std::size_t j = 0;
    double sum_len = 0.0;
    for (double g : ps.idle_starts) {
      while (j < ps.idle_ends.size() && ps.idle_ends[j] <= g) ++j;
      if (j == ps.idle_ends.size()) break;
      const double len = ps.idle_ends[j] - g;
      sum_len += len;
      for (std::size_t i = 0; i < alphas.size(); ++i)
        out.idle_lt[i] += std::exp(-alphas[i] * len);
      ++out.n_idle;
    }
    if (out.n_idle > 0) {
      out.mean_idle = sum_len / out.n_idle;
      for (auto& v : out.idle_lt) v /= out.n_idle;
    }
  }
  // Busy periods: each idle end paired with the first idle start after it.
  {
    std::size_t j = 0;
    double sum_len = 0.0;
    for (double d : ps.idle_ends) {
      while (j < ps.idle_starts.size() && ps.idle_starts[j] <= d) ++j;
      if (j == ps.idle_starts.size()) break;
      const double len = ps.idle_starts[j] - d;
      sum_len += len;
      for (std::size_t i = 0; i < alphas.size(); ++i)
        out.busy_lt[i] += std::exp(-alphas[i] * len);
      ++out.n_busy;
    }
    if (out.n_busy > 0) {
      out.mean_busy = sum_len / out.n_busy;
      for (auto& v : out.busy_lt) v /= out.n_busy;
    }
  }
  return out;
}

RepStats run_replication(const LevyModel& m, const SimConfig& cfg,
                         std::uint64_t replication, double mark_mean) {
  const double dt = cfg.dt;
  const double burn = resolve_burn_in(m, cfg);
  const auto n_total = static_cast<std::size_t>(std::llround(cfg.horizon / dt));
  const auto n_burn = static_cast<std::size_t>(std::llround(burn / dt));
  if (n_total <= n_burn)
    throw std::invalid_argument("run_replication: horizon does not exceed the burn-in");
  const double window = (n_total - n_burn) * dt;

  IncrementSampler inc(m, dt, cfg.seed, replication);
  CounterRng marks(cfg.seed, replication, StreamRole::Marks);
  LocalTimeBuilder builder(m, dt, cfg.excursion_cutoff, mark_mean);

  // Inspection times, uniform over the measured window.
  std::vector<double> insp_times(std::max(cfg.inspections_per_rep, 0));
  {
    CounterRng insp_rng(cfg.seed, replication, StreamRole::Inspection);
    for (auto& t : insp_times) t = burn + window * insp_rng.next_unit();
    std::sort(insp_times.begin(), insp_times.end());
  }
  struct Insp {
    double t, q, x;
  };
  std::vector<Insp> samples;
  samples.reserve(insp_times.size());

  const std::size_t na = cfg.a_grid.size();
  RepStats st;
  st.window = window;
  st.tail_time.assign(na, 0.0);
  st.tail_palm.assign(na, 0.0);
  st.mark_mean = mark_mean;

  std::vector<double> g_times, d_times;
  std::vector<ZeroInterval> zeros;
  bool in_zero = true;
  double zero_begin = 0.0;

  double x = 0.0, q = 0.0;
  double total_L = 0.0;
  std::size_t insp_idx = 0;

  for (std::size_t k = 0; k < n_total; ++k) {
    const double t_next = (k + 1) * dt;
    while (insp_idx < insp_times.size() && insp_times[insp_idx] < t_next) {
      samples.push_back({insp_times[insp_idx], q, x});
      ++insp_idx;
    }
    const double dy = inc.next();
    const auto rs = reflect_step(x, dy);
    const double dl = builder.step(x, rs.x_next, rs.regulator, marks);
    double qn = q + dl - dt;
    if (qn < 0.0) qn = 0.0;

    if (k >= n_burn) {
      total_L += dl;
      for (std::size_t i = 0; i < na; ++i) {
        if (q > cfg.a_grid[i]) st.tail_time[i] += dt;
        // Palm average w.r.t. L: when the local time arrives in a lump the
        // queue sweeps through (q, q + dl], and the Palm sample is uniform in
        // local-time level, so integrate the indicator over the lump instead
        // of weighting the post-jump level by the whole mass.
        if (dl > 0.0)
          st.tail_palm[i] += std::max(0.0, q + dl - std::max(cfg.a_grid[i], q));
      }
    }
    if (q > 0.0 && qn == 0.0) g_times.push_back(t_next);
    if (q == 0.0 && qn > 0.0) d_times.push_back(t_next);

    if (rs.x_next == 0.0) {
      if (!in_zero) {
        in_zero = true;
        zero_begin = t_next;
      }
    } else if (in_zero) {
      zeros.push_back({zero_begin, k * dt, q});
      in_zero = false;
    }
    x = rs.x_next;
    q = qn;
  }
  if (in_zero) zeros.push_back({zero_begin, n_total * dt, q});

  st.local_time_rate = total_L / window;
  for (std::size_t i = 0; i < na; ++i) {
    st.tail_time[i] /= window;
    st.tail_palm[i] = total_L > 0.0 ? st.tail_palm[i] / total_L : 0.0;
  }
  if (builder.regime() == LocalTimeRegime::CalibratedExcursions) {
    const double phi0 = phi_Y(m, 0.0);
    st.calib_residual = std::abs(st.local_time_rate - phi0) / phi0;
  }

  // Periods inside the measured window.
  PeriodSet ps;
  for (double g : g_times)
    if (g >= burn) ps.idle_starts.push_back(g);
  for (double d : d_times)
    if (d >= burn) ps.idle_ends.push_back(d);
  st.period_rate = ps.idle_starts.size() / window;
  const auto pte = period_transform_estimates(ps, cfg.alpha_grid);
  st.typ_idle_lt = pte.idle_lt;
  st.typ_busy_lt = pte.busy_lt;
  st.mean_idle = pte.n_idle > 0 ? pte.mean_idle : std::numeric_limits<double>::quiet_NaN();
  st.mean_busy = pte.n_busy > 0 ? pte.mean_busy : std::numeric_limits<double>::quiet_NaN();
  st.n_idle = pte.n_idle;
  st.n_busy = pte.n_busy;

  // Observed (length-biased) period estimates and recurrence-time samples.
  const std::size_t nal = cfg.alpha_grid.size();
  st.obs_idle_lt.assign(nal, 0.0);
  st.obs_busy_lt.assign(nal, 0.0);
  st.D_lt_hat.assign(nal, 0.0);
  std::size_t n_D = 0;
  double idle_len_sum = 0.0, busy_len_sum = 0.0;
  double j_joint = 0.0, j_single_a = 0.0, j_single_b = 0.0;
  std::size_t n_joint = 0;
  const double ia = 2.0, ib = 1.0;  // identity probe arguments

  for (const auto& s : samples) {
    const bool idle = s.q == 0.0;
    double queue_drel = -1.0;
    if (idle) {
      auto gi = std::upper_bound(g_times.begin(), g_times.end(), s.t);
      auto di = std::upper_bound(d_times.begin(), d_times.end(), s.t);
      const bool has_g = gi != g_times.begin();
      const bool has_d = di != d_times.end();
      if (has_d) queue_drel = *di - s.t;
      if (has_g && has_d) {
        const double g_last = *std::prev(gi);
        const double d_next = *di;
        for (std::size_t i = 0; i < nal; ++i)
          st.obs_idle_lt[i] += std::exp(-cfg.alpha_grid[i] * (d_next - s.t));
        idle_len_sum += d_next - g_last;
        ++st.n_obs_idle;
        j_joint += std::exp(-ia * (d_next - s.t) + ib * (g_last - s.t));
        j_single_a += std::exp(-ia * (d_next - s.t));
        j_single_b += std::exp(-ib * (d_next - s.t));
        ++n_joint;
      }
    } else {
      auto di = std::upper_bound(d_times.begin(), d_times.end(), s.t);
      auto gi = std::upper_bound(g_times.begin(), g_times.end(), s.t);
      const bool has_d = di != d_times.begin();
      const bool has_g = gi != g_times.end();
      if (has_d && has_g) {
        const double d_last = *std::prev(di);
        const double g_next = *gi;
        for (std::size_t i = 0; i < nal; ++i)
          st.obs_busy_lt[i] += std::exp(-cfg.alpha_grid[i] * (g_next - s.t));
        busy_len_sum += g_next - d_last;
        ++st.n_obs_busy;
      }
    }

    // Recurrence times of the zero set of X around s.t.
    auto zi = std::upper_bound(zeros.begin(), zeros.end(), s.t,
                               [](double t, const ZeroInterval& z) { return t < z.t0; });
    // zi is the first interval beginning strictly after s.t.
    double d_rel = -1.0, g_rel = -1.0, qg = -1.0;
    bool inside = false;
    if (zi != zeros.begin()) {
      const auto& prev = *std::prev(zi);
      if (s.t <= prev.t1) {
        inside = true;
        d_rel = 0.0;
        g_rel = 0.0;
        qg = s.q;
      } else {
        g_rel = s.t - prev.t1;
        qg = prev.q_end;
      }
    }
    if (!inside) {
      if (zi != zeros.end()) d_rel = zi->t0 - s.t;
    }
    if (d_rel >= 0.0) {
      for (std::size_t i = 0; i < nal; ++i)
        st.D_lt_hat[i] += std::exp(-cfg.alpha_grid[i] * d_rel);
      ++n_D;
    }
    if (qg >= 0.0 && d_rel >= 0.0) {
      st.s_qg.push_back(qg);
      st.s_grel.push_back(g_rel);
      st.s_drel.push_back(d_rel);
      st.s_qzero.push_back(idle ? 1 : 0);
      st.s_queue_drel.push_back(idle ? queue_drel : -1.0);
    }
  }

  for (std::size_t i = 0; i < nal; ++i) {
    st.obs_idle_lt[i] = st.n_obs_idle ? st.obs_idle_lt[i] / st.n_obs_idle
                                      : std::numeric_limits<double>::quiet_NaN();
    st.obs_busy_lt[i] = st.n_obs_busy ? st.obs_busy_lt[i] / st.n_obs_busy
                                      : std::numeric_limits<double>::quiet_NaN();
    st.D_lt_hat[i] =
        n_D ? st.D_lt_hat[i] / n_D : std::numeric_limits<double>::quiet_NaN();
  }
  st.obs_idle_mean = st.n_obs_idle ? idle_len_sum / st.n_obs_idle
                                   : std::numeric_limits<double>::quiet_NaN();
  st.obs_busy_mean = st.n_obs_busy ? busy_len_sum / st.n_obs_busy
                                   : std::numeric_limits<double>::quiet_NaN();
  if (n_joint > 0) {
    const double combo =
        (ia * (j_single_a / n_joint) - ib * (j_single_b / n_joint)) / (ia - ib);
    st.idle_identity_residual = j_joint / n_joint - combo;
  } else {
    st.idle_identity_residual = std::numeric_limits<double>::quiet_NaN();
  }
  return st;
}

namespace {

// Short pre-pass fixing the exponential-mark mean of the approximate
// local-time regime so that the long-run rate of L matches Phi_Y(0).
double calibrate_mark_mean(const LevyModel& m, const SimConfig& cfg) {
  const double dt = cfg.dt;
  const double burn = resolve_burn_in(m, cfg);
  // Use the full configured horizon: the residual of the calibration scales
  // like one over the square root of the number of deep excursions seen here.
  const double horizon = cfg.horizon;
  const auto n_total = static_cast<std::size_t>(std::llround(horizon / dt));
  const auto n_burn = static_cast<std::size_t>(std::llround(burn / dt));

  const std::uint64_t rep = 0x43414c4942ULL;  // distinct calibration stream id
  IncrementSampler inc(m, dt, cfg.seed, rep);
  CounterRng marks(cfg.seed, rep, StreamRole::Calibration);
  LocalTimeBuilder builder(m, dt, cfg.excursion_cutoff, 1.0);
  double x = 0.0;
  std::uint64_t count0 = 0;
  for (std::size_t k = 0; k < n_total; ++k) {
    const auto rs = reflect_step(x, inc.next());
    builder.step(x, rs.x_next, rs.regulator, marks);
    x = rs.x_next;
    if (k + 1 == n_burn) count0 = builder.excursion_count();
  }
  const double window = (n_total - n_burn) * dt;
  const double rate = (builder.excursion_count() - count0) / window;
  if (rate <= 0.0)
    throw std::runtime_error("local-time calibration: no excursions observed");
  return phi_Y(m, 0.0) / rate;
}

}  // namespace

SimSummary run_simulation(const LevyModel& m, const SimConfig& cfg) {
  const auto ex = queue_exponents(m);  // also validates the model
  SimSummary out;
  out.cfg = cfg;
  out.burn_in = resolve_burn_in(m, cfg);
  out.approximate_local_time =
      local_time_regime(m) == LocalTimeRegime::CalibratedExcursions;
  out.mark_mean = out.approximate_local_time ? calibrate_mark_mean(m, cfg) : 0.0;

  std::vector<RepStats> reps(cfg.n_reps);
  {
    std::atomic<int> next{0};
    std::exception_ptr err;
    std::mutex err_mu;
    const int nthreads = std::min(resolve_threads(cfg), std::max(cfg.n_reps, 1));
    auto worker = [&] {
      for (;;) {
        const int i = next.fetch_add(1);
        if (i >= cfg.n_reps) return;
        try {
          reps[i] = run_replication(m, cfg, static_cast<std::uint64_t>(i), out.mark_mean);
        } catch (...) {
          std::lock_guard<std::mutex> lock(err_mu);
          if (!err) err = std::current_exception();
          return;
        }
      }
    };
    std::vector<std::thread> pool;
    for (int i = 0; i < nthreads; ++i) pool.emplace_back(worker);
    for (auto& th : pool) th.join();
    if (err) std::rethrow_exception(err);
  }

  auto collect = [&](auto&& get) {
    std::vector<double> v(reps.size());
    for (std::size_t i = 0; i < reps.size(); ++i) v[i] = get(reps[i]);
    return aggregate(v, cfg.seed);
  };

  out.local_time_rate = collect([](const RepStats& r) { return r.local_time_rate; });
  const std::size_t na = cfg.a_grid.size(), nal = cfg.alpha_grid.size();
  for (std::size_t i = 0; i < na; ++i) {
    out.tail_time.push_back(collect([i](const RepStats& r) { return r.tail_time[i]; }));
    out.tail_palm.push_back(collect([i](const RepStats& r) { return r.tail_palm[i]; }));
    out.tail_ratio.push_back(collect([i](const RepStats& r) {
      return r.tail_palm[i] > 0.0 ? r.tail_time[i] / r.tail_palm[i]
                                  : std::numeric_limits<double>::quiet_NaN();
    }));
  }
  out.period_rate = collect([](const RepStats& r) { return r.period_rate; });
  out.mean_idle = collect([](const RepStats& r) { return r.mean_idle; });
  out.mean_busy = collect([](const RepStats& r) { return r.mean_busy; });
  for (std::size_t i = 0; i < nal; ++i) {
    out.typ_idle_lt.push_back(collect([i](const RepStats& r) { return r.typ_idle_lt[i]; }));
    out.typ_busy_lt.push_back(collect([i](const RepStats& r) { return r.typ_busy_lt[i]; }));
    out.obs_idle_lt.push_back(collect([i](const RepStats& r) { return r.obs_idle_lt[i]; }));
    out.obs_busy_lt.push_back(collect([i](const RepStats& r) { return r.obs_busy_lt[i]; }));
    out.D_lt.push_back(collect([i](const RepStats& r) { return r.D_lt_hat[i]; }));
  }
  out.obs_idle_mean = collect([](const RepStats& r) { return r.obs_idle_mean; });
  out.obs_busy_mean = collect([](const RepStats& r) { return r.obs_busy_mean; });
  out.idle_identity_residual =
      collect([](const RepStats& r) { return r.idle_identity_residual; });
  out.calib_residual = collect([](const RepStats& r) { return r.calib_residual; });

  // Independence diagnostics on the pooled inspection samples.
  std::vector<double> qg, grel, drel;
  std::size_t n_match = 0, n_tot = 0, n_idle = 0, n_coin = 0;
  for (const auto& r : reps) {
    for (std::size_t i = 0; i < r.s_qg.size(); ++i) {
      qg.push_back(r.s_qg[i]);
      grel.push_back(r.s_grel[i]);
      drel.push_back(r.s_drel[i]);
      ++n_tot;
      const bool pred_idle = r.s_qg[i] <= r.s_grel[i];
      if (pred_idle == (r.s_qzero[i] != 0)) ++n_match;
      if (r.s_qzero[i] != 0 && r.s_queue_drel[i] >= 0.0) {
        ++n_idle;
        if (std::abs(r.s_queue_drel[i] - r.s_drel[i]) <= 2.0000001 * cfg.dt) ++n_coin;
      }
    }
  }
  auto& ind = out.independence;
  ind.ks_n = qg.size();
  if (!qg.empty()) {
    std::vector<double> sorted = qg;
    std::sort(sorted.begin(), sorted.end());
    double ks = 0.0;
    const double rate = ex.theta_star;
    for (std::size_t i = 0; i < sorted.size(); ++i) {
      const double f = 1.0 - std::exp(-rate * sorted[i]);
      const double lo = static_cast<double>(i) / sorted.size();
      const double hi = static_cast<double>(i + 1) / sorted.size();
      ks = std::max(ks, std::max(std::abs(f - lo), std::abs(f - hi)));
    }
    ind.ks_statistic = ks;
    ind.ks_critical_1pct = 1.628 / std::sqrt(static_cast<double>(sorted.size()));
    ind.corr_qg_g = pearson(qg, grel);
    ind.corr_qg_d = pearson(qg, drel);
    ind.idle_set_match = n_tot ? static_cast<double>(n_match) / n_tot : 0.0;
    ind.drain_coincidence = n_idle ? static_cast<double>(n_coin) / n_idle : 0.0;
    ind.n_idle_samples = n_idle;
  }
  return out;
}

IndependenceReport independence_checks(const LevyModel& m, const SimConfig& cfg) {
  return run_simulation(m, cfg).independence;
}

}  // namespace fluidq
