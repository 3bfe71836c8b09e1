#pragma once

#include <optional>
#include <string>
#include <vector>

#include "dtc/model.hpp"

namespace dtc::cli {

/// One run inside a figure bundle: a subcommand plus its resolved config.
struct FigureJob {
  std::string name;        // output stem inside the bundle directory
  std::string subcommand;  // psos, mf-evolve, mps-evolve, ed-evolve, scan-delta
  std::string engine;      // for scan-delta and quantum runs
  KeyValueMap config;
  bool with_spectrum = false;
};

struct FigureRecipe {
  std::string id;
  std::string description;
  std::string feeds;  // acceptance criterion (or "qualitative") the bundle supports
  std::vector<FigureJob> jobs;
};

struct ReproduceOverrides {
  std::optional<int> sites;
  std::optional<int> bond;
  std::optional<int> periods;
  std::optional<double> dt_over_T;
  std::optional<std::string> engine;
};

const std::vector<std::string>& figure_ids();

/// Captioned parameters of a figure with any desk-scale overrides applied.
/// Throws DomainError for an unknown id.
FigureRecipe figure_recipe(const std::string& id, const ReproduceOverrides& overrides = {});

}  // namespace dtc::cli
