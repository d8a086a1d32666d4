#pragma once

#include <json.hpp>
#include <string>
#include <vector>

#include "wdens/density.hpp"
#include "wdens/model.hpp"
#include "wdens/oracle.hpp"
#include "wdens/selection.hpp"

namespace wdens {

/// Full description of a batch experiment.
struct ExperimentConfig {
  // run
  std::vector<int> n_values = {500};
  int B = 20;
  int n_eval = 1000;  // evaluation paths per replicate scored against the oracle
  std::uint64_t seed = 1;
  std::string out_dir = "out";
  int threads = 0;  // 0 = library default

  // model
  std::vector<Setting> settings = {Setting::I};
  ModelSpec custom_model;  // used by entries equal to Setting::Custom
  int grid_T = 101;

  // oracle
  int oracle_R = 100000;

  // basis
  int basis_M = 20;

  // cv
  int cv_m_max = 6;
  int cv_K_max = 10;
  std::size_t cv_paths = 10000;
  std::vector<int> dn_K_grid = {1, 2, 3, 4, 5};

  // density
  WeightRule weight = WeightRule::SoftLinear;
  FallbackPolicy fallback = FallbackPolicy::JointDecrement;
  std::uint64_t index_cap = kDefaultIndexCap;

  void validate() const;
  ModelSpec resolve_model(Setting s) const;
};

nlohmann::json config_to_json(const ExperimentConfig& config);
ExperimentConfig config_from_json(const nlohmann::json& j);

struct ResultRow {
  std::string setting;
  std::string method;  // "DM" or "DN"
  int n;
  double median_se_x1e4;
  double q1_se_x1e4;
  double q3_se_x1e4;
  std::size_t n_se;                                  // aggregated squared errors
  std::vector<std::pair<std::string, int>> chosen;   // "(m,K)" or "K" -> count
  double mean_seconds;                               // reported, no acceptance bounds
};

struct ResultTable {
  std::vector<ResultRow> rows;
  int replicates_requested = 0;
  int replicates_succeeded = 0;
};

/// Runs the batch protocol: per replicate simulate, estimate the basis,
/// cross-validate, fit both estimators, score against the oracle on fresh
/// reference paths; writes results.csv, details.csv, replicates.csv and
/// timing.csv under config.out_dir. Fails if more than 20% of the replicates
/// error out.
ResultTable run_reproduce(const ExperimentConfig& config);

}  // namespace wdens
