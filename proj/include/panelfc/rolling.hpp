#pragma once

#include <cstdint>
#include <map>
#include <string>
#include <vector>

#include "panelfc/evaluation.hpp"
#include "panelfc/methods.hpp"
#include "panelfc/panel.hpp"

namespace panelfc {

struct RollingConfig {
  int window = 60;
  std::vector<std::string> methods = {"individual", "pooled"};
  std::string benchmark = "individual";
  int hac_lags = -1;  // -1: floor(4 (n/100)^(2/9))
  double conditioning_c = 0.1;
  GibbsConfig gibbs;  // consumed by "hb"; chain seed derived per origin
  std::uint64_t seed = 1;
};

struct RollingResult {
  std::vector<ForecastRecord> records;       // sorted by (origin, unit, method)
  std::vector<ConditioningStat> d_stats;     // per (unit, origin)
  std::map<std::string, EvaluationReport> reports;  // all / near_mean / one_sd
  std::vector<DmResult> dm_panel;            // per non-benchmark method
  std::vector<DmResult> dm_units;            // per (method, unit)
  std::vector<long> failed_origins;
};

// Rolling-window backtest: for each origin t the methods are fit on periods
// (t-w+1..t) and forecast t+1. Conditioning subsets select forecasts whose
// d_{i,t+1} = theta_i'w_{i,t+1} lies near the window mean of d_it (kappa = 0)
// or one window standard deviation away (kappa = +-1). Window statistics never
// use test observations.
RollingResult run_rolling(const PanelDataset& panel, const RollingConfig& config);

}  // namespace panelfc
