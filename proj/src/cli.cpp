#include "dtc/cli.hpp"

#include <chrono>
#include <cstdlib>
#include <fstream>
#include <numbers>
#include <ostream>

#include <CLI11.hpp>

#include "dtc/config.hpp"
#include "dtc/ed.hpp"
#include "dtc/error.hpp"
#include "dtc/meanfield.hpp"
#include "dtc/mps.hpp"
#include "dtc/reproduce.hpp"
#include "dtc/spectrum.hpp"

namespace dtc::cli {

namespace {

using io::format_real;
namespace fs = std::filesystem;

// Failure inside a named pipeline stage.
struct StageError : Error {
  StageError(std::string stage_name, const std::string& what)
      : Error(what), stage(std::move(stage_name)) {}
  std::string stage;
};

template <typename F>
auto stage(const std::string& name, F&& body) {
  try {
    return body();
  } catch (const ConfigError&) {
    throw;
  } catch (const StageError&) {
    throw;
  } catch (const std::exception& e) {
    throw StageError(name, e.what());
  }
}

fs::path output_directory(const std::string& flag, const std::string& leaf) {
  if (!flag.empty()) {
    return flag;
  }
  if (const char* root = std::getenv(kOutputRootEnv); root != nullptr && *root != '\0') {
    return fs::path(root) / leaf;
  }
  return fs::path("dtc-output") / leaf;
}

std::string file_name(const std::string& stem, const std::string& base) {
  return stem.empty() ? base : stem + "_" + base;
}

KeyValueMap apply_overrides(KeyValueMap config, const std::vector<std::string>& sets) {
  for (const auto& item : sets) {
    const auto eq = item.find('=');
    if (eq == std::string::npos || eq == 0) {
      throw ConfigError(item, "--set expects key=value");
    }
    config[item.substr(0, eq)] = item.substr(eq + 1);
  }
  return config;
}

meanfield::IntegratorOptions mf_options(const KeyValueMap& config) {
  meanfield::IntegratorOptions options;
  options.steps_per_period = get_int(config, "steps_per_period");
  if (options.steps_per_period < 100) {
    throw ConfigError("steps_per_period", "must be at least 100");
  }
  return options;
}

int positive(const KeyValueMap& config, const std::string& key) {
  const int v = get_int(config, key);
  if (v < 1) {
    throw ConfigError(key, "must be at least 1");
  }
  return v;
}

ProductStateSpec initial_spec(const KeyValueMap& config, const ModelParams& params) {
  const int sign = get_int(config, "sign");
  if (sign != 1 && sign != -1) {
    throw ConfigError("sign", "must be +1 or -1");
  }
  return ProductStateSpec(params.axis_angle(), sign, params.sites());
}

void write_spectrum(const StroboscopicSeries& series, const fs::path& directory,
                    const std::string& stem, io::RunManifest& manifest) {
  const auto spectrum = stage("spectrum", [&] { return power_spectrum(series); });
  const auto name = file_name(stem, "spectrum.csv");
  io::write_atomic(directory / name, io::spectrum_csv(spectrum));
  manifest.outputs.push_back(name);
  if (spectrum.n_samples % 2 == 0) {
    manifest.details["subharmonic_peak"] = subharmonic_peak(spectrum);
    manifest.details["dominance_ratio"] = dominance_ratio(spectrum);
  }
}

}  // namespace

KeyValueMap resolve_config(const std::string& subcommand, KeyValueMap config,
                           const std::string& engine) {
  reject_unknown_keys(config);
  set_default(config, "T", "1");
  set_default(config, "phi", "0");
  if (!config.contains("h")) {
    set_default(config, "epsilonT", "0");
  }
  const bool quantum_scan = subcommand == "scan-delta" && engine != "meanfield";
  if (subcommand == "psos" || subcommand == "mf-evolve" ||
      (subcommand == "scan-delta" && !quantum_scan)) {
    set_default(config, "N", "1");
    set_default(config, "steps_per_period", "1000");
  }
  if (subcommand == "psos") {
    set_default(config, "n_periods", "200");
    set_default(config, "seeds_per_axis", "24");
  } else if (subcommand == "mf-evolve") {
    set_default(config, "n_periods", "1200");
    set_default(config, "P0", format_real(0.5 * std::numbers::pi));
    set_default(config, "Q0", "0");
  } else if (subcommand == "mps-evolve") {
    set_default(config, "N", "30");
    set_default(config, "M", "30");
    set_default(config, "dt_over_T", "0.001");
    set_default(config, "n_periods", "100");
    set_default(config, "truncation_budget", "0.01");
    set_default(config, "sign", "1");
  } else if (subcommand == "ed-evolve") {
    set_default(config, "N", "8");
    set_default(config, "dt_over_T", "0.001");
    set_default(config, "n_periods", "100");
    set_default(config, "sign", "1");
  } else if (subcommand == "scan-delta") {
    set_default(config, "n_periods", "1200");
    set_default(config, "steps_per_period", "1000");
    set_default(config, "dt_over_T", "0.001");
    set_default(config, "M", "30");
    set_default(config, "truncation_budget", "0.01");
    set_default(config, "N", quantum_scan ? (engine == "ed" ? "8" : "30") : "1");
    if (!config.contains("deltas")) {
      set_default(config, "delta_min", "0");
      set_default(config, "delta_max", "0.2");
      set_default(config, "delta_step", "0.01");
    }
  }
  return config;
}

io::RunManifest execute(const std::string& subcommand, const KeyValueMap& config,
                        const std::string& engine, const fs::path& directory, bool with_spectrum,
                        const std::string& stem) {
  io::RunManifest manifest;
  manifest.subcommand = subcommand;
  manifest.config = config;
  manifest.engine = engine;
  const ModelParams params = stage("config", [&] { return build_params(config); });
  const int periods = stage("config", [&] { return positive(config, "n_periods"); });
  fs::create_directories(directory);

  if (subcommand == "psos") {
    const auto options = mf_options(config);
    const int per_axis = get_int(config, "seeds_per_axis");
    const auto cloud = stage("meanfield", [&] {
      return meanfield::psos(meanfield::default_seed_grid(per_axis), periods, params, options);
    });
    const auto name = file_name(stem, "psos.csv");
    io::write_atomic(directory / name, io::psos_csv(cloud));
    manifest.outputs.push_back(name);
    manifest.details["warnings"] = cloud.warnings;
  } else if (subcommand == "mf-evolve") {
    const auto options = mf_options(config);
    const meanfield::State start{get_real(config, "Q0"), get_real(config, "P0")};
    const auto samples = stage("meanfield", [&] {
      return meanfield::stroboscopic(start, periods, params, options);
    });
    const auto name = file_name(stem, "stroboscopic.csv");
    io::write_atomic(directory / name, io::stroboscopic_csv(samples));
    manifest.outputs.push_back(name);
    if (with_spectrum) {
      write_spectrum(samples.sigma_y_series(), directory, stem, manifest);
    }
  } else if (subcommand == "mps-evolve" || subcommand == "ed-evolve") {
    const bool is_mps = subcommand == "mps-evolve";
    const double dt = get_real(config, "dt_over_T") * params.period();
    const MagnetizationAxis axis(params.axis_angle());
    const auto spec = initial_spec(config, params);
    const auto started = std::chrono::steady_clock::now();
    StroboscopicSeries series;
    std::vector<double> truncation;
    nlohmann::json metadata;
    if (is_mps) {
      const int bond = positive(config, "M");
      mps::EvolveOptions options;
      options.truncation_budget = get_real(config, "truncation_budget");
      auto evolution = stage("mps", [&] {
        auto state = mps::MpsState::product(spec, bond);
        return mps::evolve_periods(state, params, dt, periods, axis, options);
      });
      series = std::move(evolution.magnetization);
      truncation = std::move(evolution.cumulative_truncation);
      metadata["M"] = bond;
      metadata["coefficient_set"] = mps::third_order_coefficients().name;
    } else {
      series = stage("ed", [&] {
        return ed::ed_evolve(ed::DenseState::product(spec), params, dt, periods, axis);
      });
      metadata["stepper"] = "commutator-free magnus 4";
    }
    const double seconds =
        std::chrono::duration<double>(std::chrono::steady_clock::now() - started).count();
    const auto name = file_name(stem, "evolution.csv");
    io::write_atomic(directory / name, io::evolution_csv(series, truncation));
    manifest.outputs.push_back(name);
    metadata["params"] = config;
    metadata["dt"] = dt;
    metadata["wall_time_seconds"] = seconds;
    const auto meta_name = file_name(stem, "metadata.json");
    io::write_atomic(directory / meta_name, metadata.dump(2) + "\n");
    manifest.outputs.push_back(meta_name);
    if (with_spectrum) {
      write_spectrum(series, directory, stem, manifest);
    }
  } else if (subcommand == "scan-delta") {
    const Engine selected = stage("config", [&] { return engine_from_string(engine); });
    const auto options = stage("config", [&] { return engine_options(config); });
    const auto deltas = stage("config", [&] { return delta_values(config); });
    const auto curve = stage("scan", [&] { return scan_delta(params, deltas, selected, options); });
    const auto name = file_name(stem, "scan.csv");
    io::write_atomic(directory / name, io::scan_csv(curve));
    manifest.outputs.push_back(name);
    nlohmann::json failures = nlohmann::json::array();
    for (const auto& p : curve) {
      if (p.error) {
        failures.push_back({{"delta", p.delta}, {"error", *p.error}});
      }
    }
    manifest.details["failures"] = failures;
  } else {
    throw Error("subcommand '" + subcommand + "' is not config driven");
  }
  if (stem.empty()) {
    io::write_manifest(directory, manifest);
  }
  return manifest;
}

namespace {

io::RunManifest run_spectrum(const std::string& input, const std::string& column, double period,
                             const fs::path& directory) {
  const auto series = stage("input", [&] { return io::read_series_csv(input, column, period); });
  io::RunManifest manifest;
  manifest.subcommand = "spectrum";
  manifest.arguments = {input, column, format_real(period)};
  write_spectrum(series, directory, {}, manifest);
  io::write_manifest(directory, manifest);
  return manifest;
}

io::RunManifest run_reproduce(const std::string& figure, const ReproduceOverrides& overrides,
                              const std::vector<std::string>& arguments,
                              const fs::path& directory) {
  const auto recipe = stage("config", [&] { return figure_recipe(figure, overrides); });
  io::RunManifest bundle;
  bundle.subcommand = "reproduce";
  bundle.arguments = arguments;
  bundle.engine = overrides.engine.value_or("");
  bundle.details["figure"] = recipe.id;
  bundle.details["description"] = recipe.description;
  bundle.details["feeds"] = recipe.feeds;
  nlohmann::json jobs = nlohmann::json::array();
  for (const auto& job : recipe.jobs) {
    const auto config = resolve_config(job.subcommand, job.config, job.engine);
    const auto m = execute(job.subcommand, config, job.engine, directory, job.with_spectrum,
                           job.name);
    jobs.push_back(m.to_json());
    bundle.outputs.insert(bundle.outputs.end(), m.outputs.begin(), m.outputs.end());
  }
  bundle.details["jobs"] = jobs;
  io::write_manifest(directory, bundle);
  return bundle;
}

}  // namespace

int run(const std::vector<std::string>& args, std::ostream& out, std::ostream& err) {
  CLI::App app{"Discrete time crystal signatures in a harmonically driven Ising chain", "dtc"};
  app.require_subcommand(1);

  std::string config_path;
  std::string out_dir;
  std::string engine = "meanfield";
  std::vector<std::string> sets;

  auto add_common = [&](CLI::App* sub) {
    sub->add_option("--config", config_path, "flat key = value config file");
    sub->add_option("--out", out_dir, "output directory");
    sub->add_option("--set", sets, "override a config key (key=value)");
  };
  std::vector<CLI::App*> config_driven;
  for (const char* name : {"psos", "mf-evolve", "mps-evolve", "ed-evolve", "scan-delta"}) {
    auto* sub = app.add_subcommand(name);
    add_common(sub);
    config_driven.push_back(sub);
  }
  config_driven.back()
      ->add_option("--engine", engine, "backend for the scan")
      ->check(CLI::IsMember({"meanfield", "mps", "ed"}));

  std::string input;
  std::string column;
  double period = 1.0;
  auto* spectrum_cmd = app.add_subcommand("spectrum", "power spectrum of a stroboscopic CSV");
  spectrum_cmd->add_option("--input", input, "series CSV")->required();
  spectrum_cmd->add_option("--column", column, "value column (default: auto)");
  spectrum_cmd->add_option("--period", period, "drive period T");
  spectrum_cmd->add_option("--out", out_dir, "output directory");

  std::string figure;
  ReproduceOverrides overrides;
  std::string figure_engine;
  int sites = 0;
  int bond = 0;
  int periods = 0;
  double dt_over_t = 0.0;
  auto* reproduce_cmd = app.add_subcommand("reproduce", "run the parameters of one figure");
  reproduce_cmd->add_option("figure", figure, "figure id")->required();
  reproduce_cmd->add_option("--engine", figure_engine)
      ->check(CLI::IsMember({"meanfield", "mps", "ed"}));
  reproduce_cmd->add_option("--sites", sites, "quantum site count override");
  reproduce_cmd->add_option("--bond", bond, "bond dimension override");
  reproduce_cmd->add_option("--periods", periods, "number of periods override");
  reproduce_cmd->add_option("--dt", dt_over_t, "dt/T override");
  reproduce_cmd->add_option("--out", out_dir, "output directory");

  std::string manifest_path;
  auto* replay_cmd = app.add_subcommand("replay", "re-run the job recorded in a manifest");
  replay_cmd->add_option("manifest", manifest_path)->required();
  replay_cmd->add_option("--out", out_dir, "output directory")->required();

  std::vector<std::string> reversed(args.rbegin(), args.rend());
  try {
    app.parse(reversed);
  } catch (const CLI::ParseError& e) {
    std::ostringstream usage_out;
    std::ostringstream usage_err;
    const int code = app.exit(e, usage_out, usage_err);
    out << usage_out.str();
    err << usage_err.str();
    return code == 0 ? 0 : 2;
  }

  try {
    for (auto* sub : config_driven) {
      if (!sub->parsed()) {
        continue;
      }
      const std::string name = sub->get_name();
      KeyValueMap config = config_path.empty()
                               ? KeyValueMap{}
                               : stage("config", [&] { return read_config_file(config_path); });
      config = apply_overrides(std::move(config), sets);
      const std::string used_engine =
          name == "scan-delta" ? engine
                               : (name == "mps-evolve" ? "mps"
                                                       : (name == "ed-evolve" ? "ed" : "meanfield"));
      config = resolve_config(name, std::move(config), used_engine);
      const auto directory = output_directory(out_dir, name);
      const auto manifest = execute(name, config, used_engine, directory);
      for (const auto& o : manifest.outputs) {
        out << (directory / o).string() << '\n';
      }
      return 0;
    }
    if (spectrum_cmd->parsed()) {
      const auto directory = output_directory(out_dir, "spectrum");
      const auto manifest = run_spectrum(input, column, period, directory);
      out << (directory / manifest.outputs.front()).string() << '\n';
      return 0;
    }
    if (reproduce_cmd->parsed()) {
      std::vector<std::string> recorded{figure};
      auto note = [&](const char* flag, const std::string& value) {
        recorded.push_back(flag);
        recorded.push_back(value);
      };
      if (!figure_engine.empty()) {
        overrides.engine = figure_engine;
        note("--engine", figure_engine);
      }
      if (sites > 0) {
        overrides.sites = sites;
        note("--sites", std::to_string(sites));
      }
      if (bond > 0) {
        overrides.bond = bond;
        note("--bond", std::to_string(bond));
      }
      if (periods > 0) {
        overrides.periods = periods;
        note("--periods", std::to_string(periods));
      }
      if (dt_over_t > 0.0) {
        overrides.dt_over_T = dt_over_t;
        note("--dt", format_real(dt_over_t));
      }
      const auto directory = output_directory(out_dir, figure);
      const auto bundle = run_reproduce(figure, overrides, recorded, directory);
      for (const auto& o : bundle.outputs) {
        out << (directory / o).string() << '\n';
      }
      return 0;
    }
    if (replay_cmd->parsed()) {
      const auto manifest = stage("config", [&] {
        std::ifstream in(manifest_path);
        if (!in) {
          throw Error("cannot read manifest " + manifest_path);
        }
        return io::RunManifest::from_json(nlohmann::json::parse(in));
      });
      const fs::path directory = out_dir;
      std::vector<std::string> forwarded;
      if (manifest.subcommand == "spectrum") {
        if (manifest.arguments.size() != 3) {
          throw ConfigError("arguments", "spectrum manifest needs input, column and period");
        }
        forwarded = {"spectrum", "--input", manifest.arguments[0], "--period",
                     manifest.arguments[2], "--out", directory.string()};
        if (!manifest.arguments[1].empty()) {
          forwarded.insert(forwarded.end(), {"--column", manifest.arguments[1]});
        }
        return run(forwarded, out, err);
      }
      if (manifest.subcommand == "reproduce") {
        forwarded = {"reproduce"};
        forwarded.insert(forwarded.end(), manifest.arguments.begin(), manifest.arguments.end());
        forwarded.insert(forwarded.end(), {"--out", directory.string()});
        return run(forwarded, out, err);
      }
      const auto config = resolve_config(manifest.subcommand, manifest.config, manifest.engine);
      const auto result = execute(manifest.subcommand, config, manifest.engine, directory);
      for (const auto& o : result.outputs) {
        out << (directory / o).string() << '\n';
      }
      return 0;
    }
  } catch (const ConfigError& e) {
    err << "dtc: config: " << e.what() << '\n';
    return 2;
  } catch (const StageError& e) {
    err << "dtc: " << e.stage << ": " << e.what() << '\n';
    return e.stage == "config" ? 2 : 3;
  } catch (const std::exception& e) {
    err << "dtc: output: " << e.what() << '\n';
    return 3;
  }
  return 2;
}

}  // namespace dtc::cli
