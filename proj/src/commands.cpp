#include "fluidq/commands.hpp"

#include <cmath>
#include <cstdio>
#include <filesystem>
#include <fstream>
#include <functional>
#include <iostream>
#include <limits>
#include <sstream>

#include "fluidq/mc.hpp"
#include "fluidq/queue_analytics.hpp"
#include "fluidq/transforms.hpp"

namespace fluidq {

namespace {

using nlohmann::json;

std::string fmt17(double v) {
  char buf[64];
  std::snprintf(buf, sizeof buf, "%.17g", v);
  return buf;
}

void write_text(const std::string& dir, const std::string& name, const std::string& body) {
  std::filesystem::create_directories(dir);
  std::ofstream out(std::filesystem::path(dir) / name);
  if (!out) throw std::runtime_error("cannot open output file " + name + " in " + dir);
  out << body;
}

json estimate_json(const Estimate& e) {
  return json{{"value", e.value},
              {"std_error", e.std_error},
              {"n_reps", e.n_reps},
              {"seed", e.seed}};
}

double deriv_at_zero(const std::function<double(double)>& f, double scale) {
  auto one_sided = [&](double h) {
    return (4.0 * f(h) - 3.0 * f(0.0) - f(2.0 * h)) / (2.0 * h);
  };
  const double d1 = one_sided(1e-4 * scale);
  const double d2 = one_sided(5e-5 * scale);
  return (4.0 * d2 - d1) / 3.0;
}

struct Row {
  std::string name;
  double analytic = 0.0;
  double estimate = 0.0;
  double std_error = 0.0;
  bool soft = false;
  bool pass = true;
  // Secondary analytic candidate (e.g. the busy-side period rate); the row
  // passes if the estimate is compatible with either value.
  bool has_alt = false;
  double alt_analytic = 0.0;
};

Row make_row(std::string name, double analytic, const Estimate& e,
             const Tolerances& tol, bool soft) {
  Row r;
  r.name = std::move(name);
  r.analytic = analytic;
  r.estimate = e.value;
  r.std_error = e.std_error;
  r.soft = soft;
  const double z = e.std_error > 0.0 ? (e.value - analytic) / e.std_error
                                     : std::numeric_limits<double>::infinity();
  const double rel = std::abs(analytic) > 0.0
                         ? std::abs(e.value - analytic) / std::abs(analytic)
                         : std::abs(e.value - analytic);
  r.pass = std::isfinite(e.value) && (std::abs(z) <= tol.z_max || rel <= tol.rel_max);
  return r;
}

}  // namespace

double observed_idle_mean_closed(const LevyModel& m) {
  const auto ex = queue_exponents(m);
  auto f = [&](double a) { return a == 0.0 ? 1.0 : observed_idle_lt(m, a, 0.0); };
  return -2.0 * deriv_at_zero(f, std::max(1.0, ex.theta_star));
}

double observed_busy_mean_closed(const LevyModel& m) {
  const auto ex = queue_exponents(m);
  auto f = [&](double a) { return g1_conditional_lt(m, a); };
  return -2.0 * deriv_at_zero(f, std::max(1.0, ex.theta_star));
}

int cmd_analyze(const ExperimentConfig& cfg, std::ostream& log) {
  const auto report = validate_assumptions(cfg.model);
  json j;
  j["schema"] = "fluidq-analyze/1";
  j["config"] = config_to_json(cfg);
  {
    json checks = json::array();
    for (const auto& c : report.checks)
      checks.push_back({{"name", c.name}, {"pass", c.pass}, {"detail", c.detail}});
    j["validation"] = {{"ok", report.ok()}, {"checks", checks}};
  }
  if (!report.ok()) {
    log << "model rejected by admissibility checks:\n";
    for (const auto& c : report.checks)
      if (!c.pass) log << "  " << c.name << ": " << c.detail << "\n";
    write_text(cfg.outputs.dir, "analysis.json", j.dump(2) + "\n");
    return kExitBadConfig;
  }

  const auto& m = cfg.model;
  const auto ex = queue_exponents(m);
  j["exponents"] = {{"mu", ex.mu},
                    {"theta_star", ex.theta_star},
                    {"phi_Y0", ex.phi_Y0}};
  {
    const auto xl = stationary_X_law(m);
    const auto ql = stationary_Q_law(m);
    j["stationary_X"] = {{"atom_at_zero", xl.atom_at_zero},
                         {"exponential", xl.exponential},
                         {"decay_rate", xl.decay_rate}};
    j["stationary_Q"] = {{"atom_at_zero", ql.atom_at_zero},
                         {"decay_rate", ql.decay_rate}};
  }
  {
    const auto pm = mean_periods(m);
    j["periods"] = {{"idle_rate", pm.idle_rate},
                    {"busy_rate", pm.busy_rate},
                    {"rates_agree", pm.rates_agree},
                    {"mean_idle", pm.mean_idle},
                    {"mean_busy", pm.mean_busy},
                    {"observed_mean_idle", observed_idle_mean_closed(m)},
                    {"observed_mean_busy", observed_busy_mean_closed(m)}};
  }
  {
    json rows = json::array();
    const auto ti = typical_idle(m);
    const auto tb = typical_busy(m);
    for (double a : cfg.sim.alpha_grid) {
      rows.push_back({{"alpha", a},
                      {"D_lt", D_lt(m, a)},
                      {"typical_idle_lt", ti.lt(a)},
                      {"typical_busy_lt", tb.lt(a)},
                      {"observed_idle_lt", observed_idle_lt(m, a, 0.0)},
                      {"observed_busy_lt", g1_conditional_lt(m, a)},
                      {"inverse_local_time_lt_x1", inverse_local_time_lt(m, a, 1.0)}});
    }
    j["transforms"] = rows;
  }
  if (m.spectral_sign == SpectralSign::Negative) {
    const auto ir = inspection_inequality(m);
    j["inspection"] = {{"lhs", ir.lhs},
                       {"rhs", ir.rhs},
                       {"holds", ir.holds},
                       {"typical_idle_mean", ir.typical_idle_mean},
                       {"observed_idle_mean", ir.observed_idle_mean},
                       {"means_ordered", ir.means_ordered},
                       {"near_equality", ir.near_equality},
                       {"derivative_unstable", ir.derivative_unstable}};
  }
  write_text(cfg.outputs.dir, "analysis.json", j.dump(2) + "\n");
  log << "mu = " << ex.mu << ", theta_star = " << ex.theta_star
      << ", phi_Y(0) = " << ex.phi_Y0 << "\n";
  log << "wrote " << (std::filesystem::path(cfg.outputs.dir) / "analysis.json").string()
      << "\n";
  return kExitOk;
}

namespace {

json summary_to_json(const ExperimentConfig& cfg, const SimSummary& s) {
  json j;
  j["schema"] = "fluidq-simulate/1";
  j["config"] = config_to_json(cfg);
  j["burn_in"] = s.burn_in;
  j["approximate_local_time"] = s.approximate_local_time;
  if (s.approximate_local_time) {
    j["mark_mean"] = s.mark_mean;
    j["calibration_residual"] = estimate_json(s.calib_residual);
  }
  j["local_time_rate"] = estimate_json(s.local_time_rate);
  auto arr = [](const std::vector<double>& grid, const std::vector<Estimate>& es,
                const char* key) {
    json out = json::array();
    for (std::size_t i = 0; i < es.size(); ++i)
      out.push_back({{key, grid[i]}, {"estimate", estimate_json(es[i])}});
    return out;
  };
  j["queue_tail"] = arr(cfg.sim.a_grid, s.tail_time, "a");
  j["palm_tail"] = arr(cfg.sim.a_grid, s.tail_palm, "a");
  j["tail_ratio"] = arr(cfg.sim.a_grid, s.tail_ratio, "a");
  j["period_rate"] = estimate_json(s.period_rate);
  j["mean_idle"] = estimate_json(s.mean_idle);
  j["mean_busy"] = estimate_json(s.mean_busy);
  j["typical_idle_lt"] = arr(cfg.sim.alpha_grid, s.typ_idle_lt, "alpha");
  j["typical_busy_lt"] = arr(cfg.sim.alpha_grid, s.typ_busy_lt, "alpha");
  j["observed_idle_lt"] = arr(cfg.sim.alpha_grid, s.obs_idle_lt, "alpha");
  j["observed_busy_lt"] = arr(cfg.sim.alpha_grid, s.obs_busy_lt, "alpha");
  j["observed_idle_mean"] = estimate_json(s.obs_idle_mean);
  j["observed_busy_mean"] = estimate_json(s.obs_busy_mean);
  j["D_lt"] = arr(cfg.sim.alpha_grid, s.D_lt, "alpha");
  j["idle_identity_residual"] = estimate_json(s.idle_identity_residual);
  const auto& ind = s.independence;
  j["independence"] = {{"ks_statistic", ind.ks_statistic},
                       {"ks_critical_1pct", ind.ks_critical_1pct},
                       {"ks_n", ind.ks_n},
                       {"corr_qg_g", ind.corr_qg_g},
                       {"corr_qg_d", ind.corr_qg_d},
                       {"idle_set_match", ind.idle_set_match},
                       {"drain_coincidence", ind.drain_coincidence},
                       {"n_idle_samples", ind.n_idle_samples}};
  return j;
}

void maybe_dump_path(const ExperimentConfig& cfg) {
  if (!cfg.outputs.dump_path) return;
  const double horizon = std::min(cfg.outputs.dump_limit, cfg.sim.horizon);
  const auto g = build_path_grid(cfg.model, cfg.sim.dt, horizon, cfg.sim.seed, 0);
  std::ostringstream os;
  os << "t,x,local_time_increment,q\n";
  for (std::size_t k = 0; k + 1 < g.x.size(); ++k)
    os << fmt17(k * g.dt) << ',' << fmt17(g.x[k]) << ','
       << fmt17(g.local_time_increments[k]) << ',' << fmt17(g.q[k]) << "\n";
  write_text(cfg.outputs.dir, "path.csv", os.str());
}

}  // namespace

int cmd_simulate(const ExperimentConfig& cfg, std::ostream& log) {
  if (!validate_assumptions(cfg.model).ok()) {
    log << "model rejected by admissibility checks (run 'analyze' for details)\n";
    return kExitBadConfig;
  }
  const auto s = run_simulation(cfg.model, cfg.sim);
  write_text(cfg.outputs.dir, "summary.json", summary_to_json(cfg, s).dump(2) + "\n");
  maybe_dump_path(cfg);
  log << "local-time rate = " << s.local_time_rate.value << " +- "
      << s.local_time_rate.std_error << "\n";
  log << "wrote " << (std::filesystem::path(cfg.outputs.dir) / "summary.json").string()
      << "\n";
  return kExitOk;
}

int cmd_compare(const ExperimentConfig& cfg, std::ostream& log) {
  if (!validate_assumptions(cfg.model).ok()) {
    log << "model rejected by admissibility checks (run 'analyze' for details)\n";
    return kExitBadConfig;
  }
  const auto& m = cfg.model;
  const auto ex = queue_exponents(m);
  const auto s = run_simulation(m, cfg.sim);
  const auto pm = mean_periods(m);
  const auto ti = typical_idle(m);
  const auto tb = typical_busy(m);
  // All rows of the calibrated-approximate local-time regime are advisory.
  const bool all_soft = s.approximate_local_time;
  // Grid detection of zero visits and of idle/busy periods misses events
  // shorter than a cell; period-length densities behave like t^(-1/2) near
  // zero, so the missing mass is O(sqrt(dt)). Widen the relative floor by a
  // conservative envelope of that bias (it vanishes as dt -> 0) so the gate
  // measures disagreement beyond discretization.
  Tolerances tol = cfg.tol;
  tol.rel_max += 2.0 * std::sqrt(cfg.sim.dt * ex.theta_star);

  std::vector<Row> rows;
  rows.push_back(make_row("local_time_rate", ex.mu, s.local_time_rate, tol, all_soft));
  for (std::size_t i = 0; i < cfg.sim.a_grid.size(); ++i) {
    const double a = cfg.sim.a_grid[i];
    rows.push_back(make_row("queue_tail_a=" + fmt17(a),
                            ex.mu * std::exp(-ex.theta_star * a), s.tail_time[i], tol,
                            all_soft));
    rows.push_back(make_row("palm_tail_a=" + fmt17(a), std::exp(-ex.theta_star * a),
                            s.tail_palm[i], tol, all_soft));
    rows.push_back(
        make_row("tail_ratio_a=" + fmt17(a), ex.mu, s.tail_ratio[i], tol, all_soft));
  }
  {
    Row r = make_row("period_rate", pm.idle_rate, s.period_rate, tol, all_soft);
    if (!pm.rates_agree) {
      const Row alt = make_row("period_rate", pm.busy_rate, s.period_rate, tol, all_soft);
      r.has_alt = true;
      r.alt_analytic = pm.busy_rate;
      r.pass = r.pass || alt.pass;
    }
    rows.push_back(r);
  }
  rows.push_back(make_row("mean_idle", pm.mean_idle, s.mean_idle, tol, all_soft));
  rows.push_back(make_row("mean_busy", pm.mean_busy, s.mean_busy, tol, all_soft));
  for (std::size_t i = 0; i < cfg.sim.alpha_grid.size(); ++i) {
    const double a = cfg.sim.alpha_grid[i];
    rows.push_back(
        make_row("typical_idle_lt_alpha=" + fmt17(a), ti.lt(a), s.typ_idle_lt[i], tol, all_soft));
    {
      Row r = make_row("typical_busy_lt_alpha=" + fmt17(a), tb.lt(a), s.typ_busy_lt[i],
                       tol, all_soft);
      if (!pm.rates_agree) {
        // When the idle- and busy-side rates disagree, a fraction 1 - rr of
        // local-time cycles are zero-length queue touches invisible on the
        // grid (rr = alternation rate / cycle rate), so the simulator sees
        // the cycle law conditioned on a positive length:
        // (cycle transform - (1 - rr)) / rr.
        const double rr = pm.idle_rate / pm.busy_rate;
        const double alt = (tb.lt(a) - (1.0 - rr)) / rr;
        const Row r2 = make_row(r.name, alt, s.typ_busy_lt[i], tol, all_soft);
        r.has_alt = true;
        r.alt_analytic = alt;
        r.pass = r.pass || r2.pass;
      }
      rows.push_back(r);
    }
    rows.push_back(make_row("observed_idle_lt_alpha=" + fmt17(a),
                            observed_idle_lt(m, a, 0.0), s.obs_idle_lt[i], tol, all_soft));
    rows.push_back(make_row("observed_busy_lt_alpha=" + fmt17(a),
                            g1_conditional_lt(m, a), s.obs_busy_lt[i], tol, all_soft));
    rows.push_back(make_row("D_lt_alpha=" + fmt17(a), D_lt(m, a), s.D_lt[i], tol, all_soft));
  }
  rows.push_back(make_row("observed_idle_mean", observed_idle_mean_closed(m),
                          s.obs_idle_mean, tol, all_soft));
  rows.push_back(make_row("observed_busy_mean", observed_busy_mean_closed(m),
                          s.obs_busy_mean, tol, all_soft));

  // Boolean diagnostics.
  std::vector<Row> diag;
  {
    Row r;
    r.name = "inspection_means_ordered";
    r.analytic = 1.0;
    r.estimate = (s.obs_idle_mean.value >= s.mean_idle.value - 3.0 * s.mean_idle.std_error &&
                  s.obs_busy_mean.value >= s.mean_busy.value - 3.0 * s.mean_busy.std_error)
                     ? 1.0
                     : 0.0;
    r.pass = r.estimate == 1.0;
    r.soft = all_soft;
    diag.push_back(r);
  }
  {
    const auto& ind = s.independence;
    Row r;
    r.name = "ks_below_critical";
    r.analytic = ind.ks_critical_1pct;
    r.estimate = ind.ks_statistic;
    // Grid rounding and the missed sub-cell periods distort the recurrence
    // samples by O(sqrt(dt)) (measured ~0.4 sqrt(dt) on the bounded-variation
    // presets), so allow that much on top of the critical value.
    r.pass = ind.ks_statistic <= ind.ks_critical_1pct + 0.5 * std::sqrt(cfg.sim.dt);
    r.soft = all_soft;
    diag.push_back(r);
    Row r2;
    r2.name = "idle_set_match";
    r2.analytic = 1.0;
    r2.estimate = ind.idle_set_match;
    r2.pass = ind.idle_set_match > 0.99;
    r2.soft = all_soft;
    diag.push_back(r2);
    Row r3;
    r3.name = "drain_coincidence";
    r3.analytic = 1.0;
    r3.estimate = ind.drain_coincidence;
    // Inspections falling where the queue or the driving path is within a
    // grid cell of zero see an ambiguous state; for diffusive paths that
    // happens with probability O(sqrt(dt)) (measured ~0.5 sqrt(dt) on the
    // Brownian preset), so allow for it on coarse grids.
    r3.pass = ind.drain_coincidence > 0.999 - std::sqrt(cfg.sim.dt) ||
              ind.n_idle_samples == 0;
    r3.soft = all_soft;
    diag.push_back(r3);
  }

  std::ostringstream csv;
  csv << "name,analytic,estimate,std_error,z,rel_err,soft,pass,alt_analytic\n";
  bool gate_ok = true;
  auto emit = [&](const Row& r) {
    const double z = r.std_error > 0.0 ? (r.estimate - r.analytic) / r.std_error
                                       : std::numeric_limits<double>::quiet_NaN();
    const double rel = std::abs(r.analytic) > 0.0
                           ? std::abs(r.estimate - r.analytic) / std::abs(r.analytic)
                           : std::numeric_limits<double>::quiet_NaN();
    csv << r.name << ',' << fmt17(r.analytic) << ',' << fmt17(r.estimate) << ','
        << fmt17(r.std_error) << ',' << fmt17(z) << ',' << fmt17(rel) << ','
        << (r.soft ? "soft" : "hard") << ',' << (r.pass ? "pass" : "fail") << ','
        << (r.has_alt ? fmt17(r.alt_analytic) : "") << "\n";
    if (!r.soft && !r.pass) gate_ok = false;
    log << (r.pass ? "  pass " : "  FAIL ") << (r.soft ? "(soft) " : "") << r.name
        << ": analytic " << r.analytic << ", estimate " << r.estimate << " +- "
        << r.std_error << "\n";
  };
  for (const auto& r : rows) emit(r);
  for (const auto& r : diag) emit(r);

  write_text(cfg.outputs.dir, "comparison.csv", csv.str());
  write_text(cfg.outputs.dir, "summary.json", summary_to_json(cfg, s).dump(2) + "\n");
  log << (gate_ok ? "comparison gate: pass" : "comparison gate: FAIL") << "\n";
  return gate_ok ? kExitOk : kExitGateFailed;
}

int cmd_scale_fn(const ExperimentConfig& cfg, const ScaleFnOptions& opt,
                 std::ostream& log) {
  if (opt.points < 2 || !(opt.x_max > 0.0) || opt.q < 0.0) {
    log << "scale-fn: needs q >= 0, x_max > 0 and at least two points\n";
    return kExitBadConfig;
  }
  ScaleFunctionSpec spec{cfg.model, opt.q, opt.method, {}};
  std::ostringstream csv;
  csv << "x,W,Z\n";
  for (int i = 0; i < opt.points; ++i) {
    const double x = opt.x_max * i / (opt.points - 1);
    csv << fmt17(x) << ',' << fmt17(W_q(spec, x)) << ',' << fmt17(Z_q(spec, x)) << "\n";
  }
  write_text(cfg.outputs.dir, "scale_fn.csv", csv.str());
  log << "wrote " << (std::filesystem::path(cfg.outputs.dir) / "scale_fn.csv").string()
      << "\n";
  return kExitOk;
}

}  // namespace fluidq
