#include <fstream>
#include <iostream>

#include <CLI11.hpp>
#include <json.hpp>

#include "fluidq/commands.hpp"

namespace {

int run(int argc, char** argv) {
  CLI::App app{"fluidq: closed-form and Monte Carlo analysis of a fluid queue "
               "fed by the local time of a reflected one-sided jump process"};
  app.require_subcommand(1);

  std::string config_path, preset_name, out_dir;
  std::uint64_t seed = 0;
  bool have_seed = false;
  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "JSON configuration file");
    sub->add_option("--preset", preset_name, "built-in configuration (example1..example5)");
    sub->add_option("--seed", seed, "override the simulation seed")
        ->each([&](const std::string&) { have_seed = true; });
    sub->add_option("--out", out_dir, "output directory");
  };

  auto* analyze = app.add_subcommand("analyze", "closed-form quantities only");
  auto* simulate = app.add_subcommand("simulate", "Monte Carlo estimates only");
  auto* compare = app.add_subcommand("compare", "closed forms vs Monte Carlo, gated");
  auto* scale = app.add_subcommand("scale-fn", "tabulate the scale functions W and Z");
  fluidq::ScaleFnOptions sopt;
  std::string method_name = "cross";
  scale->add_option("--q", sopt.q, "transform argument q (default 0)");
  scale->add_option("--xmax", sopt.x_max, "largest tabulated x (default 5)");
  scale->add_option("--points", sopt.points, "number of grid points (default 101)");
  scale->add_option("--method", method_name, "talbot | euler | cross (default cross)");
  for (auto* sub : {analyze, simulate, compare, scale}) add_common(sub);

  CLI11_PARSE(app, argc, argv);

  fluidq::ExperimentConfig cfg;
  try {
    if (!config_path.empty()) {
      std::ifstream in(config_path);
      if (!in) {
        std::cerr << "cannot read config file: " << config_path << "\n";
        return fluidq::kExitBadConfig;
      }
      nlohmann::json j;
      in >> j;
      cfg = fluidq::config_from_json(j);
      if (!preset_name.empty() && cfg.preset_name != preset_name) {
        std::cerr << "--preset conflicts with the config file's preset\n";
        return fluidq::kExitBadConfig;
      }
    } else if (!preset_name.empty()) {
      cfg = fluidq::preset(preset_name);
    } else {
      std::cerr << "either --config or --preset is required\n";
      return fluidq::kExitBadConfig;
    }
  } catch (const nlohmann::json::exception& e) {
    std::cerr << "config parse error: " << e.what() << "\n";
    return fluidq::kExitBadConfig;
  } catch (const std::invalid_argument& e) {
    std::cerr << "config error: " << e.what() << "\n";
    return fluidq::kExitBadConfig;
  }
  if (have_seed) cfg.sim.seed = seed;
  if (!out_dir.empty()) cfg.outputs.dir = out_dir;

  try {
    if (*analyze) return fluidq::cmd_analyze(cfg, std::cout);
    if (*simulate) return fluidq::cmd_simulate(cfg, std::cout);
    if (*compare) return fluidq::cmd_compare(cfg, std::cout);
    if (*scale) {
      if (method_name == "talbot")
        sopt.method = fluidq::InversionMethod::FixedTalbot;
      else if (method_name == "euler")
        sopt.method = fluidq::InversionMethod::EulerSummation;
      else if (method_name == "cross")
        sopt.method = fluidq::InversionMethod::CrossValidate;
      else {
        std::cerr << "unknown inversion method: " << method_name << "\n";
        return fluidq::kExitBadConfig;
      }
      return fluidq::cmd_scale_fn(cfg, sopt, std::cout);
    }
  } catch (const std::invalid_argument& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return fluidq::kExitBadConfig;
  } catch (const std::domain_error& e) {
    std::cerr << "validation error: " << e.what() << "\n";
    return fluidq::kExitBadConfig;
  } catch (const std::exception& e) {
    std::cerr << "runtime error: " << e.what() << "\n";
    return fluidq::kExitRuntime;
  }
  return fluidq::kExitBadConfig;
}

}  // namespace

int main(int argc, char** argv) { return run(argc, argv); }
