#include "dtc/reproduce.hpp"

#include "dtc/error.hpp"
#include "dtc/output.hpp"

namespace dtc::cli {

namespace {

using io::format_real;

// Quantum captions: N = 30, M = 30, dt/T = 0.001.
constexpr int kQuantumSites = 30;
constexpr int kQuantumBond = 30;
constexpr double kQuantumStep = 0.001;

KeyValueMap model(double coupling_t, double epsilon_t, double lambda_t) {
  return {{"T", "1"},
          {"JT", format_real(coupling_t)},
          {"epsilonT", format_real(epsilon_t)},
          {"lambdaT", format_real(lambda_t)},
          {"phi", "0"}};
}

FigureJob psos_job(const std::string& name, double coupling_t, double delta, int periods) {
  FigureJob job{name, "psos", "meanfield", model(coupling_t, delta, delta), false};
  job.config["N"] = "1";
  job.config["n_periods"] = std::to_string(periods);
  job.config["seeds_per_axis"] = "24";
  return job;
}

FigureJob orbit_job(const std::string& name, double coupling_t, double delta, int periods,
                    bool spectrum) {
  FigureJob job{name, "mf-evolve", "meanfield", model(coupling_t, delta, delta), spectrum};
  job.config["N"] = "1";
  job.config["n_periods"] = std::to_string(periods);
  return job;
}

FigureJob quantum_job(const std::string& name, double coupling_t, double epsilon_t,
                      double lambda_t, int sites, int periods, const ReproduceOverrides& o) {
  const std::string engine = o.engine.value_or("mps");
  FigureJob job{name, engine == "ed" ? "ed-evolve" : "mps-evolve", engine,
                model(coupling_t, epsilon_t, lambda_t), true};
  job.config["N"] = std::to_string(o.sites.value_or(sites));
  job.config["M"] = std::to_string(o.bond.value_or(kQuantumBond));
  job.config["dt_over_T"] = format_real(o.dt_over_T.value_or(kQuantumStep));
  job.config["n_periods"] = std::to_string(o.periods.value_or(periods));
  return job;
}

FigureJob scan_job(const std::string& name, double coupling_t, const ReproduceOverrides& o) {
  const std::string engine = o.engine.value_or("meanfield");
  FigureJob job{name, "scan-delta", engine, model(coupling_t, 0.0, 0.0), false};
  job.config["delta_min"] = "0";
  job.config["delta_max"] = "0.3";
  job.config["delta_step"] = "0.005";
  job.config["n_periods"] = std::to_string(o.periods.value_or(1200));
  if (engine != "meanfield") {
    job.config["N"] = std::to_string(o.sites.value_or(kQuantumSites));
    job.config["M"] = std::to_string(o.bond.value_or(kQuantumBond));
    job.config["dt_over_T"] = format_real(o.dt_over_T.value_or(kQuantumStep));
  } else {
    job.config["N"] = "1";
  }
  return job;
}

}  // namespace

const std::vector<std::string>& figure_ids() {
  static const std::vector<std::string> ids{"fig1a", "fig1b", "fig1c", "fig1d", "fig1e", "fig1f",
                                            "fig2",  "fig3a", "fig3b", "fig3c", "fig3d", "fig4",
                                            "fig5",  "fig6",  "fig7"};
  return ids;
}

FigureRecipe figure_recipe(const std::string& id, const ReproduceOverrides& o) {
  FigureRecipe r;
  r.id = id;

  if (id.size() == 5 && id.starts_with("fig1") && id[4] >= 'a' && id[4] <= 'f') {
    // (JT, epsilon T = lambda T) per panel
    static const std::pair<double, double> panels[] = {{1.0, 0.0},  {1.0, 0.05}, {1.0, 0.5},
                                                       {2.0, 0.05}, {3.0, 0.05}, {4.0, 0.05}};
    const auto [coupling, delta] = panels[id[4] - 'a'];
    const int periods = o.periods.value_or(200);
    r.description = "Poincare surface of section with the orbit of (P,Q) = (pi/2, 0)";
    r.feeds = "qualitative: period-doubling islands near (+-pi/2, 0)";
    r.jobs.push_back(psos_job("psos", coupling, delta, periods));
    r.jobs.push_back(orbit_job("orbit", coupling, delta, periods, false));
    return r;
  }
  if (id == "fig2") {
    r.description = "mean-field <sigma_y>(nT) and spectra at epsilon T = lambda T = 0.05";
    r.feeds = "criteria 4 (JT=1) and 5 (JT=4)";
    const int periods = o.periods.value_or(1200);
    for (double coupling : {1.0, 3.0, 4.0}) {
      r.jobs.push_back(orbit_job("JT" + format_real(coupling), coupling, 0.05, periods, true));
    }
    return r;
  }
  if (id.size() == 5 && id.starts_with("fig3") && id[4] >= 'a' && id[4] <= 'd') {
    static const double couplings[] = {1.0, 2.0, 0.0, 5.0};
    const double coupling = couplings[id[4] - 'a'];
    r.description = "subharmonic peak versus delta = epsilon T = lambda T";
    r.feeds = (id == "fig3a" || id == "fig3c") ? "criterion 6" : "qualitative";
    r.jobs.push_back(scan_job("scan", coupling, o));
    return r;
  }
  if (id == "fig4") {
    r.description = "quantum magnetization: ideal, noninteracting detuned, interacting detuned";
    r.feeds = "criteria 1 and 7";
    r.jobs.push_back(quantum_job("ideal", 0.0, 0.0, 0.0, kQuantumSites, 100, o));
    r.jobs.push_back(quantum_job("free_detuned", 0.0, 0.05, 0.05, kQuantumSites, 100, o));
    r.jobs.push_back(quantum_job("interacting", 0.5, 0.05, 0.05, kQuantumSites, 100, o));
    return r;
  }
  if (id == "fig5") {
    r.description = "quantum spectra at JT = 1 for increasing delta";
    r.feeds = "criterion 8";
    for (double delta : {0.05, 0.09, 0.13, 0.15, 0.17, 0.19}) {
      r.jobs.push_back(quantum_job("delta" + format_real(delta), 1.0, delta, delta,
                                   kQuantumSites, 100, o));
    }
    return r;
  }
  if (id == "fig6") {
    r.description = "quantum spectra at delta = 0.05 for increasing coupling";
    r.feeds = "qualitative: subharmonic peak shrinks with JT";
    for (double coupling : {0.1, 0.9, 1.5, 2.0}) {
      r.jobs.push_back(quantum_job("JT" + format_real(coupling), coupling, 0.05, 0.05,
                                   kQuantumSites, 100, o));
    }
    return r;
  }
  if (id == "fig7") {
    r.description = "system-size study at JT = 1, delta = 0.05";
    r.feeds = "criterion 9";
    ReproduceOverrides inner = o;
    inner.sites.reset();
    const std::vector<int> sizes = o.sites ? std::vector<int>{*o.sites} : std::vector<int>{30, 50, 80};
    for (int sites : sizes) {
      r.jobs.push_back(
          quantum_job("N" + std::to_string(sites), 1.0, 0.05, 0.05, sites, 200, inner));
    }
    return r;
  }
  throw DomainError("unknown figure id '" + id + "'");
}

}  // namespace dtc::cli
