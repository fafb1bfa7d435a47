#include "fluidq/config.hpp"

#include <stdexcept>

namespace fluidq {

using nlohmann::json;

bool ExperimentConfig::operator==(const ExperimentConfig& o) const {
  return model == o.model && sim == o.sim && tol == o.tol && outputs == o.outputs &&
         preset_name == o.preset_name;
}

ExperimentConfig preset(const std::string& name) {
  ExperimentConfig cfg;
  cfg.preset_name = name;
  if (name == "example1" || name == "example5") {
    // Reflected Brownian input: sigma = 1, drift -1/2.
    cfg.model = LevyModel::make(SpectralSign::Positive, 1.0, -0.5);
  } else if (name == "example2") {
    // Bounded-variation input: drift -1.2 plus upward Exp(2) jumps at rate 1.
    cfg.model = LevyModel::make(SpectralSign::Positive, 0.0, -1.2,
                                CompoundPoissonExp{1.0, 2.0});
  } else if (name == "example3") {
    // Drift 2 minus a 1/2-stable subordinator (scale 1).
    cfg.model = LevyModel::make(SpectralSign::Negative, 0.0, 2.0,
                                StableSubordinator{0.5, 1.0});
  } else if (name == "example4") {
    // Brownian part plus drift 0.9, minus the inverse-Brownian-local-time
    // subordinator at scale 0.4; the local-time simulation regime for this
    // model is the calibrated-approximate one.
    cfg.model = LevyModel::make(SpectralSign::Negative, 1.0, 0.9,
                                InverseBMLocalTime{0.4});
  } else {
    throw std::invalid_argument("unknown preset: " + name);
  }
  return cfg;
}

namespace {

json jumps_to_json(const JumpSpec& jumps) {
  return std::visit(
      [](const auto& j) -> json {
        using J = std::decay_t<decltype(j)>;
        if constexpr (std::is_same_v<J, NoJumps>) {
          return json{{"type", "none"}};
        } else if constexpr (std::is_same_v<J, CompoundPoissonExp>) {
          return json{{"type", "compound_poisson_exp"},
                      {"rate", j.rate},
                      {"jump_rate", j.jump_rate}};
        } else if constexpr (std::is_same_v<J, StableSubordinator>) {
          return json{{"type", "stable_subordinator"},
                      {"index", j.index},
                      {"scale", j.scale}};
        } else {
          return json{{"type", "inverse_bm_local_time"}, {"scale", j.scale}};
        }
      },
      jumps);
}

JumpSpec jumps_from_json(const json& j) {
  const std::string type = j.at("type").get<std::string>();
  if (type == "none") return NoJumps{};
  if (type == "compound_poisson_exp")
    return CompoundPoissonExp{j.at("rate").get<double>(), j.at("jump_rate").get<double>()};
  if (type == "stable_subordinator")
    return StableSubordinator{j.at("index").get<double>(), j.at("scale").get<double>()};
  if (type == "inverse_bm_local_time")
    return InverseBMLocalTime{j.at("scale").get<double>()};
  throw std::invalid_argument("unknown jump spec type: " + type);
}

}  // namespace

json config_to_json(const ExperimentConfig& cfg) {
  json j;
  j["schema"] = "fluidq-config/1";
  j["preset"] = cfg.preset_name;
  j["model"] = {
      {"spectral_sign",
       cfg.model.spectral_sign == SpectralSign::Negative ? "negative" : "positive"},
      {"gaussian_sigma", cfg.model.gaussian_sigma},
      {"linear_drift", cfg.model.linear_drift},
      {"jumps", jumps_to_json(cfg.model.jumps)},
  };
  j["sim"] = {
      {"dt", cfg.sim.dt},
      {"horizon", cfg.sim.horizon},
      {"burn_in", cfg.sim.burn_in},
      {"n_reps", cfg.sim.n_reps},
      {"seed", cfg.sim.seed},
      {"a_grid", cfg.sim.a_grid},
      {"alpha_grid", cfg.sim.alpha_grid},
      {"excursion_cutoff", cfg.sim.excursion_cutoff},
      {"inspections_per_rep", cfg.sim.inspections_per_rep},
      {"threads", cfg.sim.threads},
  };
  j["tolerances"] = {{"z_max", cfg.tol.z_max}, {"rel_max", cfg.tol.rel_max}};
  j["outputs"] = {{"dir", cfg.outputs.dir},
                  {"dump_path", cfg.outputs.dump_path},
                  {"dump_limit", cfg.outputs.dump_limit}};
  return j;
}

ExperimentConfig config_from_json(const json& j) {
  try {
    ExperimentConfig cfg;
    if (j.contains("preset") && j.at("preset").is_string())
      cfg.preset_name = j.at("preset").get<std::string>();
    if (!cfg.preset_name.empty()) cfg = preset(cfg.preset_name);

    if (j.contains("model")) {
      const auto& jm = j.at("model");
      const std::string sign = jm.at("spectral_sign").get<std::string>();
      if (sign != "negative" && sign != "positive")
        throw std::invalid_argument("spectral_sign must be 'negative' or 'positive'");
      cfg.model = LevyModel::make(
          sign == "negative" ? SpectralSign::Negative : SpectralSign::Positive,
          jm.at("gaussian_sigma").get<double>(), jm.at("linear_drift").get<double>(),
          jm.contains("jumps") ? jumps_from_json(jm.at("jumps")) : JumpSpec{NoJumps{}});
    } else if (cfg.preset_name.empty()) {
      throw std::invalid_argument("config needs a 'model' section or a 'preset'");
    }

    if (j.contains("sim")) {
      const auto& js = j.at("sim");
      auto get = [&](const char* key, auto& field) {
        if (js.contains(key)) field = js.at(key).get<std::decay_t<decltype(field)>>();
      };
      get("dt", cfg.sim.dt);
      get("horizon", cfg.sim.horizon);
      get("burn_in", cfg.sim.burn_in);
      get("n_reps", cfg.sim.n_reps);
      get("seed", cfg.sim.seed);
      get("a_grid", cfg.sim.a_grid);
      get("alpha_grid", cfg.sim.alpha_grid);
      get("excursion_cutoff", cfg.sim.excursion_cutoff);
      get("inspections_per_rep", cfg.sim.inspections_per_rep);
      get("threads", cfg.sim.threads);
      if (!(cfg.sim.dt > 0.0) || !(cfg.sim.horizon > 0.0) || cfg.sim.n_reps < 1)
        throw std::invalid_argument("sim: dt, horizon must be > 0 and n_reps >= 1");
    }
    if (j.contains("tolerances")) {
      const auto& jt = j.at("tolerances");
      if (jt.contains("z_max")) cfg.tol.z_max = jt.at("z_max").get<double>();
      if (jt.contains("rel_max")) cfg.tol.rel_max = jt.at("rel_max").get<double>();
    }
    if (j.contains("outputs")) {
      const auto& jo = j.at("outputs");
      if (jo.contains("dir")) cfg.outputs.dir = jo.at("dir").get<std::string>();
      if (jo.contains("dump_path")) cfg.outputs.dump_path = jo.at("dump_path").get<bool>();
      if (jo.contains("dump_limit")) cfg.outputs.dump_limit = jo.at("dump_limit").get<double>();
    }
    return cfg;
  } catch (const json::exception& e) {
    throw std::invalid_argument(std::string("malformed config: ") + e.what());
  }
}

}  // namespace fluidq
