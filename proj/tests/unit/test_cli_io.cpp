#include <doctest.h>

#include <cstdlib>
#include <filesystem>
#include <fstream>
#include <sstream>

#include "dtc/cli.hpp"
#include "dtc/config.hpp"
#include "dtc/error.hpp"
#include "dtc/output.hpp"
#include "dtc/reproduce.hpp"

using namespace dtc;
using cli::figure_ids;
using cli::figure_recipe;
using cli::ReproduceOverrides;
namespace fs = std::filesystem;

namespace {

fs::path scratch(const std::string& name) {
  const auto dir = fs::temp_directory_path() / ("dtc_cli_test_" + name);
  fs::remove_all(dir);
  fs::create_directories(dir);
  return dir;
}

std::string slurp(const fs::path& p) {
  std::ifstream in(p);
  std::stringstream ss;
  ss << in.rdbuf();
  return ss.str();
}

struct Result {
  int code;
  std::string out;
  std::string err;
};

Result dtc_run(const std::vector<std::string>& args) {
  std::ostringstream out, err;
  const int code = cli::run(args, out, err);
  return {code, out.str(), err.str()};
}

std::string error_key(const std::string& text) {
  try {
    cli::reject_unknown_keys(cli::parse_config(text));
  } catch (const ConfigError& e) {
    return e.key();
  }
  return "none";
}

}  // namespace

TEST_CASE("config parsing") {
  const auto c = cli::parse_config(
      "# figure 1(b)\n[model]\nJT = 1\nlambdaT=0.05   # trailing\nepsilonT = \"0.05\"\n"
      "deltas = [0.01, 0.02,0.03]\n\n");
  CHECK(c.at("JT") == "1");
  CHECK(c.at("lambdaT") == "0.05");
  CHECK(c.at("epsilonT") == "0.05");
  CHECK(cli::get_list(c, "deltas") == std::vector<double>{0.01, 0.02, 0.03});
  CHECK(cli::get_real(c, "JT") == 1.0);
}

TEST_CASE("config errors name the key") {
  CHECK(error_key("JT = 1\nlamdaT = 0.05\n") == "lamdaT");
  CHECK(error_key("JT = 1\nJT = 2\n") == "JT");
  CHECK(error_key("JT =\n") == "JT");
  CHECK(error_key("epsilonT = \"0.05\n") == "epsilonT");
  CHECK(error_key("JT = 1\nN = 4\n") == "none");
  CHECK_THROWS_AS(cli::parse_config("just words\n"), ConfigError);
  KeyValueMap m{{"N", "2.5"}, {"JT", "abc"}, {"deltas", "[0.1, 0.2"}};
  CHECK_THROWS_AS(cli::get_int(m, "N"), ConfigError);
  CHECK_THROWS_AS(cli::get_real(m, "JT"), ConfigError);
  CHECK_THROWS_AS(cli::get_list(m, "deltas"), ConfigError);
  CHECK_THROWS_AS(cli::get_real(m, "T"), ConfigError);
}

TEST_CASE("delta grid and engine options") {
  KeyValueMap m{{"delta_min", "0.01"}, {"delta_max", "0.2"}, {"delta_step", "0.01"}};
  const auto d = cli::delta_values(m);
  CHECK(d.size() == 20);
  CHECK(d.front() == doctest::Approx(0.01));
  CHECK(d.back() == doctest::Approx(0.2));
  m["deltas"] = "0.5";
  CHECK(cli::delta_values(m) == std::vector<double>{0.5});

  KeyValueMap e{{"n_periods", "100"}, {"steps_per_period", "1000"}, {"dt_over_T", "0.01"},
                {"M", "16"}, {"truncation_budget", "0.01"}};
  CHECK(cli::engine_options(e).max_bond == 16);
  e["dt_over_T"] = "1.5";
  try {
    cli::engine_options(e);
    FAIL("expected ConfigError");
  } catch (const ConfigError& err) {
    CHECK(err.key() == "dt_over_T");
  }
}

TEST_CASE("real formatting round trips") {
  for (double x : {0.1, 1.0 / 3.0, -2.5e-17, 6.02214076e23}) {
    CHECK(std::stod(io::format_real(x)) == x);
  }
}

TEST_CASE("csv schemas") {
  meanfield::StroboscopicSamples s;
  s.states = {{0.0, 1.0}, {0.5, -1.0}};
  s.sigma_y = {0.8, -0.4};
  const auto csv = io::stroboscopic_csv(s);
  CHECK(csv.rfind("n,P,Q,sigma_y\n0,1,0,0.80000000000000004\n", 0) == 0);

  StroboscopicSeries m;
  m.initial = 1.0;
  m.values = {-0.5, 0.25};
  CHECK(io::evolution_csv(m, {}) ==
        "n,magnetization,cumulative_truncation_weight\n0,1,0\n1,-0.5,0\n2,0.25,0\n");
  CHECK(io::scan_csv({{0.05, 0.5, std::nullopt}}) == "delta,peak\n0.050000000000000003,0.5\n");

  meanfield::PsosCloud cloud;
  cloud.seeds = {{0.1, 0.2}};
  cloud.points = {{0, 0, {0.1, 0.2}}};
  CHECK(io::psos_csv(cloud).rfind("seed_P,seed_Q,n,P,Q\n", 0) == 0);
}

TEST_CASE("series csv round trip") {
  const auto dir = scratch("series");
  StroboscopicSeries m;
  m.initial = 1.0;
  m.values = {-0.5, 0.25, 0.125, -0.0625};
  io::write_atomic(dir / "e.csv", io::evolution_csv(m, {0, 0, 1e-9, 2e-9, 3e-9}));
  const auto back = io::read_series_csv(dir / "e.csv");
  CHECK(back.values == m.values);
  CHECK(back.initial == 1.0);
  const auto weights = io::read_series_csv(dir / "e.csv", "cumulative_truncation_weight");
  CHECK(weights.values.back() == 3e-9);
  CHECK_THROWS_AS(io::read_series_csv(dir / "e.csv", "nope"), DomainError);
  CHECK_THROWS_AS(io::read_series_csv(dir / "missing.csv"), Error);
}

TEST_CASE("manifest json round trip") {
  io::RunManifest m;
  m.subcommand = "mps-evolve";
  m.arguments = {"a"};
  m.config = {{"JT", "0.5"}, {"N", "8"}};
  m.engine = "mps";
  m.outputs = {"evolution.csv"};
  m.details["x"] = 1;
  const auto back = io::RunManifest::from_json(m.to_json());
  CHECK(back.subcommand == m.subcommand);
  CHECK(back.config == m.config);
  CHECK(back.outputs == m.outputs);
  CHECK(back.details == m.details);
}

TEST_CASE("figure recipes") {
  const auto ids = figure_ids();
  CHECK(ids.size() == 15);
  for (const auto& id : ids) {
    const auto r = figure_recipe(id, {});
    CHECK_FALSE(r.jobs.empty());
    CHECK_FALSE(r.feeds.empty());
  }
  const auto fig4 = figure_recipe("fig4", {});
  CHECK(fig4.jobs.size() == 3);
  for (const auto& job : fig4.jobs) {
    CHECK(job.with_spectrum);
    CHECK(job.config.at("N") == "30");
    CHECK(job.config.at("M") == "30");
  }
  const auto fig7 = figure_recipe("fig7", ReproduceOverrides{30, std::nullopt, std::nullopt,
                                                             std::nullopt, std::nullopt});
  CHECK(fig7.jobs.size() == 1);
  CHECK(fig7.jobs.front().config.at("N") == "30");
  const auto fig3c = figure_recipe("fig3c", {});
  CHECK(fig3c.jobs.front().config.at("JT") == "0");
  CHECK_THROWS_AS(figure_recipe("fig9", {}), DomainError);
}

TEST_CASE("mf-evolve writes csv and manifest; replay is bit identical") {
  const auto dir = scratch("replay");
  const auto r = dtc_run({"mf-evolve", "--set", "JT=0.5", "--set", "epsilonT=0.05", "--set",
                          "lambdaT=0.05", "--set", "n_periods=40", "--out",
                          (dir / "a").string()});
  REQUIRE(r.code == 0);
  const auto manifest = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
  CHECK(manifest.at("subcommand") == "mf-evolve");
  CHECK(manifest.at("config").at("steps_per_period") == "1000");
  CHECK(manifest.contains("tool_version"));
  CHECK(manifest.contains("timestamp"));

  const auto again = dtc_run({"replay", (dir / "a" / "manifest.json").string(), "--out",
                              (dir / "b").string()});
  REQUIRE(again.code == 0);
  CHECK(slurp(dir / "a" / "stroboscopic.csv") == slurp(dir / "b" / "stroboscopic.csv"));
  auto ma = nlohmann::json::parse(slurp(dir / "a" / "manifest.json"));
  auto mb = nlohmann::json::parse(slurp(dir / "b" / "manifest.json"));
  ma.erase("timestamp");
  mb.erase("timestamp");
  CHECK(ma == mb);
}

TEST_CASE("quantum runs replay bit identically and record metadata") {
  const auto dir = scratch("quantum");
  for (const std::string cmd : {"mps-evolve", "ed-evolve"}) {
    const auto r = dtc_run({cmd, "--set", "N=4", "--set", "M=4", "--set", "JT=0.5", "--set",
                            "epsilonT=0.05", "--set", "lambdaT=0.05", "--set", "n_periods=3",
                            "--set", "dt_over_T=0.01", "--out", (dir / cmd).string()});
    REQUIRE(r.code == 0);
    const auto meta = nlohmann::json::parse(slurp(dir / cmd / "metadata.json"));
    CHECK(meta.at("dt") == 0.01);
    CHECK(meta.contains("wall_time_seconds"));
    const auto again = dtc_run({"replay", (dir / cmd / "manifest.json").string(), "--out",
                                (dir / (cmd + "_again")).string()});
    REQUIRE(again.code == 0);
    CHECK(slurp(dir / cmd / "evolution.csv") == slurp(dir / (cmd + "_again") / "evolution.csv"));
  }
  const auto meta = nlohmann::json::parse(slurp(dir / "mps-evolve" / "metadata.json"));
  CHECK(meta.at("coefficient_set") == "ruth3");
  CHECK(meta.at("M") == 4);
}

TEST_CASE("spectrum of a constant series") {
  const auto dir = scratch("constant");
  std::string csv = "n,value\n";
  for (int n = 1; n <= 32; ++n) {
    csv += std::to_string(n) + ",1\n";
  }
  io::write_atomic(dir / "constant.csv", csv);
  const auto r = dtc_run({"spectrum", "--input", (dir / "constant.csv").string(), "--out",
                          (dir / "out").string()});
  REQUIRE(r.code == 0);
  std::istringstream rows(slurp(dir / "out" / "spectrum.csv"));
  std::string line;
  std::getline(rows, line);
  CHECK(line == "omega_over_omega_drive,magnitude_sq");
  std::vector<std::pair<double, double>> bins;
  while (std::getline(rows, line)) {
    const auto comma = line.find(',');
    bins.emplace_back(std::stod(line.substr(0, comma)), std::stod(line.substr(comma + 1)));
  }
  REQUIRE(bins.size() == 32);
  CHECK(bins[0].second == doctest::Approx(1.0));
  CHECK(bins[16].first == doctest::Approx(0.5));
  CHECK(bins[16].second < 1e-28);
  const auto again = dtc_run({"replay", (dir / "out" / "manifest.json").string(), "--out",
                              (dir / "again").string()});
  REQUIRE(again.code == 0);
  CHECK(slurp(dir / "out" / "spectrum.csv") == slurp(dir / "again" / "spectrum.csv"));
}

TEST_CASE("config file, unknown keys and exit codes") {
  const auto dir = scratch("errors");
  io::write_atomic(dir / "fig1b.toml", "JT = 1\nlambdaT = 0.05\nepsilonT = 0.05\nn_periods = 3\n"
                                       "seeds_per_axis = 3\n");
  const auto ok = dtc_run({"psos", "--config", (dir / "fig1b.toml").string(), "--out",
                           (dir / "psos").string()});
  CHECK(ok.code == 0);
  CHECK(fs::exists(dir / "psos" / "psos.csv"));
  CHECK(fs::exists(dir / "psos" / "manifest.json"));

  io::write_atomic(dir / "typo.toml", "JT = 1\nlamdaT = 0.05\n");
  const auto typo = dtc_run({"psos", "--config", (dir / "typo.toml").string(), "--out",
                             (dir / "typo").string()});
  CHECK(typo.code == 2);
  CHECK(typo.err.find("lamdaT") != std::string::npos);
  CHECK(typo.err.find("config") != std::string::npos);
  CHECK_FALSE(fs::exists(dir / "typo" / "psos.csv"));

  const auto missing = dtc_run({"psos", "--config", (dir / "nope.toml").string()});
  CHECK(missing.code == 2);

  const auto figure = dtc_run({"reproduce", "fig9", "--out", (dir / "f").string()});
  CHECK(figure.code == 2);
  CHECK(figure.err.find("fig9") != std::string::npos);

  const auto usage = dtc_run({"frobnicate"});
  CHECK(usage.code == 2);

  const auto engine = dtc_run({"mps-evolve", "--set", "N=4", "--set", "dt_over_T=0.3",
                               "--set", "n_periods=1", "--out", (dir / "e").string()});
  CHECK(engine.code == 3);
  CHECK(engine.err.find("mps") != std::string::npos);
}

TEST_CASE("output root from the environment") {
  const auto dir = scratch("env");
  ::setenv(cli::kOutputRootEnv, dir.string().c_str(), 1);
  const auto r = dtc_run({"mf-evolve", "--set", "n_periods=2"});
  ::unsetenv(cli::kOutputRootEnv);
  REQUIRE(r.code == 0);
  CHECK(fs::exists(dir / "mf-evolve" / "stroboscopic.csv"));
}

TEST_CASE("reproduce bundles outputs with a manifest") {
  const auto dir = scratch("reproduce");
  const auto r = dtc_run({"reproduce", "fig4", "--sites", "4", "--bond", "4", "--periods", "4",
                          "--dt", "0.01", "--out", (dir / "fig4").string()});
  REQUIRE(r.code == 0);
  const auto manifest = nlohmann::json::parse(slurp(dir / "fig4" / "manifest.json"));
  CHECK(manifest.at("details").at("jobs").size() == 3);
  CHECK_FALSE(manifest.at("details").at("feeds").empty());
  int evolutions = 0, spectra = 0;
  for (const auto& o : manifest.at("outputs")) {
    const std::string name = o;
    evolutions += name.ends_with("evolution.csv");
    spectra += name.ends_with("spectrum.csv");
    CHECK(fs::exists(dir / "fig4" / name));
  }
  CHECK(evolutions == 3);
  CHECK(spectra == 3);
}
